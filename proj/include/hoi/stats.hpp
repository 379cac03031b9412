#pragma once

#include <cstddef>
#include <span>

namespace hoi {

/// Standard normal CDF.
double normal_cdf(double x);

/// Survival function of the chi-squared distribution (1 - CDF).
double chi_squared_sf(double x, double dof);

/// Two-sided p-value of a correlation r on m samples via the t transform
/// with the given degrees of freedom.
double correlation_p_value(double r, double dof);

struct Correlation {
    double r = 0.0;
    double p = 1.0;
};

/// Pearson correlation of two columns with its two-sided p-value (df = m-2).
Correlation pearson(std::span<const int> x, std::span<const int> y);

/// Partial correlation of x and y controlling for z (df = m-3).
Correlation partial_correlation(std::span<const int> x, std::span<const int> y,
                                std::span<const int> z);

}  // namespace hoi
