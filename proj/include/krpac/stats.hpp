#pragma once

#include <functional>
#include <span>

namespace krpac::stats {

double mean(std::span<const double> xs);
/// Unbiased sample variance; 0 for fewer than two values.
double variance(std::span<const double> xs);
double standard_error(std::span<const double> xs);

/// One-sample Kolmogorov-Smirnov statistic sup |F_n - F|.
double ks_statistic(std::span<const double> samples,
                    const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_n - G_m|.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// Asymptotic critical value of the two-sided test at level alpha.
double ks_critical_value(double alpha, std::size_t n);
double ks_critical_value(double alpha, std::size_t n, std::size_t m);

}  // namespace krpac::stats
