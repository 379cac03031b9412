#include "hoi/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "hoi/errors.hpp"

namespace hoi {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / 1.4142135623730951); }

double chi_squared_sf(double x, double dof) {
    if (dof <= 0.0) throw InvalidArgument("chi_squared_sf: dof must be positive");
    if (x <= 0.0) return 1.0;
    boost::math::chi_squared dist(dof);
    return boost::math::cdf(boost::math::complement(dist, x));
}

double correlation_p_value(double r, double dof) {
    if (dof <= 0.0) return 1.0;
    const double r2 = std::min(r * r, 1.0 - 1e-15);
    const double t = std::abs(r) * std::sqrt(dof / (1.0 - r2));
    boost::math::students_t dist(dof);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, t));
}

namespace {

double pearson_r(std::span<const int> x, std::span<const int> y) {
    const std::size_t m = x.size();
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / static_cast<double>(m);
    const double my = sy / static_cast<double>(m);
    double cxy = 0, cxx = 0, cyy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        cxy += dx * dy;
        cxx += dx * dx;
        cyy += dy * dy;
    }
    if (cxx <= 0.0 || cyy <= 0.0) return 0.0;
    return cxy / std::sqrt(cxx * cyy);
}

}  // namespace

Correlation pearson(std::span<const int> x, std::span<const int> y) {
    if (x.size() != y.size() || x.size() < 3)
        throw InvalidArgument("pearson: need two equal columns of length >= 3");
    Correlation c;
    c.r = pearson_r(x, y);
    c.p = correlation_p_value(c.r, static_cast<double>(x.size()) - 2.0);
    return c;
}

Correlation partial_correlation(std::span<const int> x, std::span<const int> y,
                                std::span<const int> z) {
    if (x.size() != y.size() || y.size() != z.size() || x.size() < 4)
        throw InvalidArgument("partial_correlation: need three equal columns of length >= 4");
    const double rxy = pearson_r(x, y);
    const double rxz = pearson_r(x, z);
    const double ryz = pearson_r(y, z);
    const double denom = std::sqrt((1.0 - rxz * rxz) * (1.0 - ryz * ryz));
    Correlation c;
    c.r = denom > 0.0 ? (rxy - rxz * ryz) / denom : 0.0;
    c.p = correlation_p_value(c.r, static_cast<double>(x.size()) - 3.0);
    return c;
}

}  // namespace hoi
