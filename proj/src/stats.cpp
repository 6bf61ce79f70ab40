#include "trisk/stats.hpp"

#include "trisk/errors.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>

namespace trisk::stats {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * M_SQRT1_2);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("normal_quantile: p must be in (0,1), got " + std::to_string(p));
    }
    static const boost::math::normal_distribution<double> unit;
    return boost::math::quantile(unit, p);
}

double mean(std::span<const double> x) {
    if (x.empty()) {
        throw EmptySample("mean of empty series");
    }
    double s = 0.0;
    for (double v : x) {
        s += v;
    }
    return s / static_cast<double>(x.size());
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw InsufficientData("pearson_r needs two equally sized series of n >= 2");
    }
    const double mx = mean(x);
    const double my = mean(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) {
        return 0.0;
    }
    return sxy / std::sqrt(sxx * syy);
}

double sample_skewness(std::span<const double> x) {
    const auto n = static_cast<double>(x.size());
    if (x.size() < 3) {
        return 0.0;
    }
    const double m = mean(x);
    double m2 = 0.0, m3 = 0.0;
    for (double v : x) {
        const double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    if (m2 <= 0.0) {
        return 0.0;
    }
    const double g1 = m3 / std::pow(m2, 1.5);
    return g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
}

double percentile_sorted(std::span<const double> sorted_ascending, double p) {
    if (sorted_ascending.empty()) {
        throw EmptySample("percentile of empty series");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("percentile: p must be in [0,1]");
    }
    const std::size_t n = sorted_ascending.size();
    const double h = static_cast<double>(n - 1) * p;
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n) {
        return sorted_ascending[n - 1];
    }
    const double frac = h - static_cast<double>(lo);
    return sorted_ascending[lo] + frac * (sorted_ascending[lo + 1] - sorted_ascending[lo]);
}

} // namespace trisk::stats
