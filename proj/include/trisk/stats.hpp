#pragma once

#include <span>
#include <vector>

namespace trisk::stats {

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile function. Requires p in (0, 1).
double normal_quantile(double p);

double mean(std::span<const double> x);

/// Pearson correlation coefficient. Returns 0 when either series is constant.
double pearson_r(std::span<const double> x, std::span<const double> y);

/// Adjusted Fisher-Pearson sample skewness, sqrt(n(n-1))/(n-2) * m3/m2^1.5.
/// Returns 0 for n < 3 or a constant series.
double sample_skewness(std::span<const double> x);

/// Linear-interpolated percentile (order statistics at h = (n-1)p) over an
/// ascending-sorted series. p in [0, 1].
double percentile_sorted(std::span<const double> sorted_ascending, double p);

} // namespace trisk::stats
