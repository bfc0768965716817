#include "powertrend/stats.hpp"

#include "powertrend/errors.hpp"

#include <cmath>

namespace powertrend {

RegressionResult ols(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size()) {
        throw DataError("ols: x and y differ in length");
    }
    const std::size_t n = x.size();
    if (n < 2) {
        throw DataError("ols: need at least 2 points, got " + std::to_string(n));
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (!(sxx > 0.0)) {
        throw DegenerateError("ols: x has zero variance");
    }
    if (!(syy > 0.0)) {
        throw DegenerateError("ols: y has zero variance");
    }

    RegressionResult r;
    r.n = n;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    r.r_squared = std::min(1.0, (sxy * sxy) / (sxx * syy));
    return r;
}

RegressionResult ols_pairwise(std::span<const std::optional<double>> x, std::span<const std::optional<double>> y)
{
    if (x.size() != y.size()) {
        throw DataError("ols: x and y differ in length");
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] && y[i] && std::isfinite(*x[i]) && std::isfinite(*y[i])) {
            xs.push_back(*x[i]);
            ys.push_back(*y[i]);
        }
    }
    auto r = ols(xs, ys);
    r.dropped = x.size() - xs.size();
    return r;
}

} // namespace powertrend
