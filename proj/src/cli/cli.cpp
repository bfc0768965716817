#include "powertrend/cli.hpp"

#include "powertrend/backtest.hpp"
#include "powertrend/errors.hpp"
#include "powertrend/market_data.hpp"
#include "powertrend/power.hpp"
#include "powertrend/stats.hpp"
#include "powertrend/table.hpp"
#include "powertrend/volsys.hpp"
#include "powertrend/wilder.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

namespace powertrend::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Common {
    std::string csv;
    std::string dir;
    std::string synth;
    std::size_t period = 14;
    std::string out_dir;
    std::string format;
    bool no_timestamp = false;
};

std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Collects named documents and writes them to --out (one file each) or stdout.
class Emitter {
public:
    Emitter(const Common& common, std::string default_format, std::ostream& out)
        : common_(common), out_(out)
    {
        format_ = common.format.empty() ? std::move(default_format) : common.format;
        if (format_ != "csv" && format_ != "json") {
            throw ConfigError("--format must be csv or json");
        }
    }

    void table(const std::string& name, const Table& t)
    {
        if (format_ == "csv") {
            std::ostringstream body;
            if (!common_.no_timestamp) {
                body << "# generated " << utc_timestamp() << '\n';
            }
            write_csv(body, t);
            docs_.push_back({name, body.str()});
        } else {
            json doc = json::object();
            if (!common_.no_timestamp) {
                doc["generated"] = utc_timestamp();
            }
            doc["name"] = name;
            doc["rows"] = to_json(t);
            docs_.push_back({name, doc.dump(2) + "\n"});
        }
    }

    void object(const std::string& name, json doc)
    {
        if (!common_.no_timestamp) {
            doc["generated"] = utc_timestamp();
        }
        docs_.push_back({name, doc.dump(2) + "\n"});
    }

    const std::string& format() const noexcept { return format_; }

    void flush()
    {
        if (!common_.out_dir.empty()) {
            fs::create_directories(common_.out_dir);
            for (const auto& [name, body] : docs_) {
                const auto path = fs::path(common_.out_dir) / (name + "." + format_);
                std::ofstream file(path, std::ios::binary);
                if (!file) {
                    throw DataError("cannot write " + path.string());
                }
                file << body;
            }
            return;
        }
        for (const auto& [name, body] : docs_) {
            if (docs_.size() > 1 && format_ == "csv") {
                out_ << "# " << name << '\n';
            }
            out_ << body;
        }
    }

private:
    const Common& common_;
    std::ostream& out_;
    std::string format_;
    std::vector<std::pair<std::string, std::string>> docs_;
};

void add_common(CLI::App* cmd, Common& c, bool with_dir)
{
    cmd->add_option("--csv", c.csv, "OHLC CSV file (date,open,high,low,close[,volume])");
    if (with_dir) {
        cmd->add_option("--dir", c.dir, "directory of OHLC CSV files, one symbol per file");
    }
    cmd->add_option("--synth", c.synth, "synthetic series, e.g. zigzag:100:2:1:33 or constant:100:300");
    cmd->add_option("--period", c.period, "Wilder smoothing period for ATR and directional movement")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", c.out_dir, "output directory (stdout when omitted)");
    cmd->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("--no-timestamp", c.no_timestamp, "omit the generated-at line");
}

BarSeries load_single(const Common& c)
{
    const int sources = !c.csv.empty() + !c.synth.empty() + !c.dir.empty();
    if (sources != 1 || !c.dir.empty()) {
        throw ConfigError("exactly one of --csv or --synth is required");
    }
    if (!c.csv.empty()) {
        return load_csv(fs::path(c.csv));
    }
    return generate(parse_synthetic(c.synth));
}

std::string symbol_tag(const BarSeries& s)
{
    std::string out = s.symbol();
    std::replace_if(out.begin(), out.end(), [](char ch) { return ch == '/' || ch == ':' || ch == ' '; }, '_');
    return out;
}

double parse_number(std::string_view text)
{
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError("bad number '" + std::string(text) + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, sep)) {
        out.push_back(part);
    }
    return out;
}

// Quote-aware CSV field splitter for reading our own output back.
std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    out.push_back(std::move(field));
    return out;
}

VolSysParams volsys_params(const Common& c, double multiplier, const std::string& direction)
{
    VolSysParams p;
    p.multiplier = multiplier;
    p.atr_params.smoothing_period = c.period;
    p.initial_direction = parse_initial_direction(direction);
    return p;
}

// --- indicators -----------------------------------------------------------

int cmd_indicators(const Common& c, std::ostream& out)
{
    const auto series = load_single(c);
    const WilderParams wp{c.period};
    const auto tr = true_range(series);
    const auto a = atr(series, wp);
    const auto dm = directional(series, wp);

    Table table;
    table.columns = {"index", "date", "open", "high", "low", "close", "tr", "atr",
                     "plus_di", "minus_di", "dx", "adx", "adxr", "warmup"};
    for (std::size_t t = 0; t < series.size(); ++t) {
        const auto& b = series[t];
        table.rows.push_back({Table::integer(static_cast<std::int64_t>(t)), Table::text(series.stamp_label(t)),
                              Table::number(b.open), Table::number(b.high), Table::number(b.low),
                              Table::number(b.close), Table::number(tr[t]), Table::number(a[t]),
                              Table::number(dm.plus_di[t]), Table::number(dm.minus_di[t]), Table::number(dm.dx[t]),
                              Table::number(dm.adx[t]), Table::number(dm.adxr[t]),
                              Table::integer(a.defined(t) ? 0 : 1)});
    }
    Emitter emit(c, "csv", out);
    emit.table("indicators_" + symbol_tag(series), table);
    emit.flush();
    return exit_ok;
}

// --- power ----------------------------------------------------------------

struct PowerOpts {
    std::string windows = "30,50,100";
    std::size_t ma_window = 0;
    double multiplier = 3.0;
    std::string direction = "auto";
};

int cmd_power(const Common& c, const PowerOpts& o, std::ostream& out)
{
    const auto series = load_single(c);
    const auto vp = volsys_params(c, o.multiplier, o.direction);
    const auto atr_series = atr(series, vp.atr_params);
    const auto result = run_volsys(series, atr_series, vp);
    Emitter emit(c, "csv", out);
    for (const auto w : parse_int_grid(o.windows)) {
        const auto report = power_report(series, PowerParams{w, o.ma_window}, atr_series, result);
        emit.table("power_" + symbol_tag(series) + "_N" + std::to_string(w), power_table(series, report));
    }
    emit.flush();
    return exit_ok;
}

// --- backtest -------------------------------------------------------------

struct BacktestOpts {
    double multiplier = 3.0;
    std::string direction = "auto";
    std::size_t window = 30;
    double gate_level = 4.0;
    std::string gate_mode = "off";
};

int cmd_backtest(const Common& c, const BacktestOpts& o, std::ostream& out)
{
    const auto series = load_single(c);
    const auto vp = volsys_params(c, o.multiplier, o.direction);
    const auto mode = parse_gate_mode(o.gate_mode);
    const auto result = mode == GateMode::off
        ? run_volsys(series, vp)
        : run_gated(series, PowerParams{o.window, 0}, vp, o.gate_level, mode).result;

    Table summary;
    summary.columns = {"symbol", "multiplier", "gate_mode", "total_pnl", "realized_pnl", "unrealized_pnl",
                       "total_pnl_norm", "positions", "open_direction"};
    summary.rows.push_back(
        {Table::text(series.symbol()), Table::number(o.multiplier), Table::text(std::string(to_string(mode))),
         Table::number(result.total_pnl_points), Table::number(result.realized_pnl_points),
         Table::number(result.total_pnl_points - result.realized_pnl_points),
         Table::number(result.total_pnl_normalized()),
         Table::integer(static_cast<std::int64_t>(result.positions_opened())),
         result.open_trade ? Table::text(std::string(to_string(result.open_trade->direction))) : Table::Cell{}});

    Emitter emit(c, "csv", out);
    emit.table("summary_" + symbol_tag(series), summary);
    emit.table("trades_" + symbol_tag(series), trades_table(result));
    emit.flush();
    return exit_ok;
}

// --- sweep / ma-range -----------------------------------------------------

struct SweepOpts {
    std::string grid = "0.1:8.0:0.1";
    std::string windows = "30,50,100";
    std::string direction = "auto";
    double gate_level = 4.0;
    std::string gate_mode = "off";
    std::size_t workers = 1;
};

int cmd_sweep(const Common& c, const SweepOpts& o, std::ostream& out)
{
    const auto series = load_single(c);
    SweepSpec spec;
    spec.multipliers = parse_grid(o.grid);
    spec.power_windows = parse_int_grid(o.windows);
    spec.gate_level = o.gate_level;
    spec.gate_mode = parse_gate_mode(o.gate_mode);
    spec.validate();
    const auto base = volsys_params(c, 1.0, o.direction);

    Table table;
    if (spec.gate_mode == GateMode::off) {
        table = sweep_table(std::nullopt, sweep_multiplier(series, spec, PowerParams{}, base, o.workers));
    } else {
        for (const auto w : spec.power_windows) {
            const auto part = sweep_table(w, sweep_multiplier(series, spec, PowerParams{w, 0}, base, o.workers));
            table.columns = part.columns;
            table.rows.insert(table.rows.end(), part.rows.begin(), part.rows.end());
        }
    }
    Emitter emit(c, "csv", out);
    emit.table("sweep_" + symbol_tag(series), table);
    emit.flush();
    return exit_ok;
}

struct RangeOpts {
    std::string ranges = "2:400:1";
    double multiplier = 3.0;
    std::string direction = "auto";
};

int cmd_ma_range(const Common& c, const RangeOpts& o, std::ostream& out)
{
    const auto series = load_single(c);
    const auto points = sweep_ma_range(series, parse_int_grid(o.ranges), volsys_params(c, o.multiplier, o.direction));
    Emitter emit(c, "csv", out);
    emit.table("ma_range_" + symbol_tag(series), range_table(points));
    emit.flush();
    return exit_ok;
}

// --- universe -------------------------------------------------------------

struct UniverseOpts {
    std::string windows = "30,50,100";
    double multiplier = 4.0;
    std::string direction = "auto";
    double gate_level = 4.0;
    std::string gate_mode = "arm-once";
    std::string snapshot = "final";
    std::size_t workers = 0;
};

int cmd_universe(const Common& c, const UniverseOpts& o, std::ostream& out)
{
    if (c.dir.empty() || !c.csv.empty() || !c.synth.empty()) {
        throw ConfigError("universe takes exactly one input: --dir");
    }
    if (!fs::is_directory(c.dir)) {
        throw DataError("not a directory: " + c.dir);
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(c.dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        throw DataError("no .csv files in " + c.dir);
    }

    std::vector<BarSeries> universe;
    std::vector<Exclusion> unreadable;
    for (const auto& f : files) {
        try {
            universe.push_back(load_csv(f));
        } catch (const DataError& e) {
            unreadable.push_back({f.stem().string(), e.what()});
        }
    }

    UniverseOptions options;
    options.gate_level = o.gate_level;
    options.gate_mode = parse_gate_mode(o.gate_mode);
    if (o.snapshot == "final") {
        options.snapshot = Snapshot::final_bar;
    } else if (o.snapshot == "mean") {
        options.snapshot = Snapshot::time_mean;
    } else {
        throw ConfigError("--snapshot must be final or mean");
    }
    options.workers = o.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : o.workers;
    const auto vp = volsys_params(c, o.multiplier, o.direction);

    Emitter emit(c, "csv", out);
    for (const auto w : parse_int_grid(o.windows)) {
        UniverseResult result;
        if (!universe.empty()) {
            result = run_universe(universe, PowerParams{w, 0}, vp, options);
        }
        result.exclusions.insert(result.exclusions.end(), unreadable.begin(), unreadable.end());
        std::stable_sort(result.exclusions.begin(), result.exclusions.end(),
                         [](const auto& a, const auto& b) { return a.symbol < b.symbol; });
        emit.table("universe_N" + std::to_string(w), universe_table(result));
        emit.table("exclusions_N" + std::to_string(w), exclusions_table(result));
    }
    emit.flush();
    return exit_ok;
}

// --- regress --------------------------------------------------------------

struct RegressOpts {
    std::string in;
    std::string x;
    std::string y;
};

int cmd_regress(const Common& c, const RegressOpts& o, std::ostream& out)
{
    std::ifstream file(o.in);
    if (!file) {
        throw DataError("cannot open " + o.in);
    }
    std::string line;
    std::vector<std::string> header;
    std::vector<std::optional<double>> xs;
    std::vector<std::optional<double>> ys;
    std::size_t excluded = 0;
    auto column = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw DataError("column '" + name + "' not found in " + o.in);
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    std::size_t cx = 0;
    std::size_t cy = 0;
    std::optional<std::size_t> cex;
    auto value = [](const std::vector<std::string>& f, std::size_t i) -> std::optional<double> {
        if (i >= f.size() || f[i].empty()) {
            return std::nullopt;
        }
        try {
            return parse_number(f[i]);
        } catch (const ConfigError&) {
            throw DataError("non-numeric value '" + f[i] + "'");
        }
    };
    while (std::getline(file, line)) {
        if (line.empty() || line.front() == '#') {
            continue;
        }
        auto fields = split_csv_line(line);
        if (header.empty()) {
            header = std::move(fields);
            cx = column(o.x);
            cy = column(o.y);
            if (std::find(header.begin(), header.end(), "excluded") != header.end()) {
                cex = column("excluded");
            }
            continue;
        }
        if (cex && *cex < fields.size() && fields[*cex] == "1") {
            ++excluded;
            continue;
        }
        xs.push_back(value(fields, cx));
        ys.push_back(value(fields, cy));
    }
    if (header.empty()) {
        throw DataError("empty input " + o.in);
    }
    auto r = ols_pairwise(xs, ys);
    r.dropped += excluded;

    Emitter emit(c, "json", out);
    if (emit.format() == "json") {
        json doc = json::object();
        doc["x"] = o.x;
        doc["y"] = o.y;
        doc["slope"] = r.slope;
        doc["intercept"] = r.intercept;
        doc["r_squared"] = r.r_squared;
        doc["n"] = r.n;
        doc["dropped"] = r.dropped;
        emit.object("regression_" + o.x + "_" + o.y, std::move(doc));
    } else {
        Table t;
        t.columns = {"x", "y", "slope", "intercept", "r_squared", "n", "dropped"};
        t.rows.push_back({Table::text(o.x), Table::text(o.y), Table::number(r.slope), Table::number(r.intercept),
                          Table::number(r.r_squared), Table::integer(static_cast<std::int64_t>(r.n)),
                          Table::integer(static_cast<std::int64_t>(r.dropped))});
        emit.table("regression_" + o.x + "_" + o.y, t);
    }
    emit.flush();
    return exit_ok;
}

} // namespace

std::vector<double> parse_grid(const std::string& text)
{
    std::vector<double> grid;
    const auto range = split(text, ':');
    if (range.size() == 3) {
        const double lo = parse_number(range[0]);
        const double hi = parse_number(range[1]);
        const double step = parse_number(range[2]);
        if (!(step > 0.0) || hi < lo) {
            throw ConfigError("grid range must be lo:hi:step with step > 0 and hi >= lo");
        }
        const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
        for (std::size_t k = 0; k < count; ++k) {
            grid.push_back(std::round((lo + static_cast<double>(k) * step) * 1e12) / 1e12);
        }
    } else if (range.size() == 1) {
        for (const auto& part : split(text, ',')) {
            grid.push_back(parse_number(part));
        }
    } else {
        throw ConfigError("grid must be lo:hi:step or a comma list, got '" + text + "'");
    }
    if (grid.empty()) {
        throw ConfigError("empty grid");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
            throw ConfigError("grid must be positive and strictly increasing: '" + text + "'");
        }
    }
    return grid;
}

std::vector<std::size_t> parse_int_grid(const std::string& text)
{
    std::vector<std::size_t> out;
    for (const double v : parse_grid(text)) {
        if (v != std::floor(v)) {
            throw ConfigError("expected whole numbers in '" + text + "'");
        }
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Volatility-system trend following with power-ratio indicators", "powertrend"};
    app.require_subcommand(1);

    Common common;
    PowerOpts power_opts;
    BacktestOpts bt_opts;
    SweepOpts sweep_opts;
    RangeOpts range_opts;
    UniverseOpts uni_opts;
    RegressOpts reg_opts;

    auto* indicators = app.add_subcommand("indicators", "TR, ATR, DI, DX, ADX, ADXR per bar");
    add_common(indicators, common, false);

    auto* power = app.add_subcommand("power", "signal/noise power ratios per window");
    add_common(power, common, false);
    power->add_option("--window,--windows", power_opts.windows, "power windows, e.g. 30,50,100");
    power->add_option("--ma-window", power_opts.ma_window, "moving-average window (default: same as power window)");
    power->add_option("--mult", power_opts.multiplier, "ATR multiplier of the volatility system");
    power->add_option("--direction", power_opts.direction, "initial position: long, short or auto");

    auto* backtest = app.add_subcommand("backtest", "one volatility-system run: summary and trade ledger");
    add_common(backtest, common, false);
    backtest->add_option("--mult", bt_opts.multiplier, "ATR multiplier");
    backtest->add_option("--direction", bt_opts.direction, "initial position: long, short or auto");
    backtest->add_option("--window", bt_opts.window, "power window used by the gate");
    backtest->add_option("--gate", bt_opts.gate_level, "r_signal level that opens the gate");
    backtest->add_option("--gate-mode", bt_opts.gate_mode, "off, arm-once or while-above");

    auto* sweep = app.add_subcommand("sweep", "P&L versus ATR multiplier");
    add_common(sweep, common, false);
    sweep->add_option("--mult", sweep_opts.grid, "multiplier grid: lo:hi:step or a,b,c");
    sweep->add_option("--window,--windows", sweep_opts.windows, "power windows for gating");
    sweep->add_option("--direction", sweep_opts.direction, "initial position: long, short or auto");
    sweep->add_option("--gate", sweep_opts.gate_level, "r_signal level that opens the gate");
    sweep->add_option("--gate-mode", sweep_opts.gate_mode, "off, arm-once or while-above");
    sweep->add_option("--workers", sweep_opts.workers, "worker threads")->check(CLI::PositiveNumber);

    auto* ma_range = app.add_subcommand("ma-range", "final-bar power ratios versus MA/power range");
    add_common(ma_range, common, false);
    ma_range->add_option("--ranges", range_opts.ranges, "range grid: lo:hi:step or a,b,c");
    ma_range->add_option("--mult", range_opts.multiplier, "ATR multiplier");
    ma_range->add_option("--direction", range_opts.direction, "initial position: long, short or auto");

    auto* universe = app.add_subcommand("universe", "per-symbol final P&L and indicator snapshots");
    add_common(universe, common, true);
    universe->add_option("--window,--windows", uni_opts.windows, "power windows");
    universe->add_option("--mult", uni_opts.multiplier, "ATR multiplier");
    universe->add_option("--direction", uni_opts.direction, "initial position: long, short or auto");
    universe->add_option("--gate", uni_opts.gate_level, "r_signal level that opens the gate");
    universe->add_option("--gate-mode", uni_opts.gate_mode, "off, arm-once or while-above");
    universe->add_option("--snapshot", uni_opts.snapshot, "final or mean");
    universe->add_option("--workers", uni_opts.workers, "worker threads (default: hardware)");

    auto* regress = app.add_subcommand("regress", "OLS of one universe column against another");
    regress->add_option("--in", reg_opts.in, "universe CSV")->required();
    regress->add_option("--x", reg_opts.x, "regressor column")->required();
    regress->add_option("--y", reg_opts.y, "response column")->required();
    regress->add_option("--out", common.out_dir, "output directory (stdout when omitted)");
    regress->add_option("--format", common.format, "json or csv")->check(CLI::IsMember({"csv", "json"}));
    regress->add_flag("--no-timestamp", common.no_timestamp, "omit the generated-at field");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*indicators) {
            return cmd_indicators(common, out);
        }
        if (*power) {
            return cmd_power(common, power_opts, out);
        }
        if (*backtest) {
            return cmd_backtest(common, bt_opts, out);
        }
        if (*sweep) {
            return cmd_sweep(common, sweep_opts, out);
        }
        if (*ma_range) {
            return cmd_ma_range(common, range_opts, out);
        }
        if (*universe) {
            return cmd_universe(common, uni_opts, out);
        }
        if (*regress) {
            return cmd_regress(common, reg_opts, out);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const DegenerateError& e) {
        err << "error: " << e.what() << '\n';
        return exit_degenerate;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_data;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_data;
    }
    err << app.help();
    return exit_usage;
}

} // namespace powertrend::cli
