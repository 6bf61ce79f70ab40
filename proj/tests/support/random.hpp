#pragma once

#include "trisk/stats.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace trisk::testing {

/// Deterministic draws built on the standardized mt19937_64 bit stream, so
/// fixtures and oracle values do not depend on library distribution details.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in (0, 1), never exactly 0 or 1.
    double uniform() {
        const std::uint64_t bits = engine_() >> 11; // 53 random bits
        return (static_cast<double>(bits) + 0.5) * 0x1p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() { return stats::normal_quantile(uniform()); }

    double lognormal(double mu, double sigma) { return std::exp(mu + sigma * normal()); }

    std::uint64_t integer(std::uint64_t bound) { return engine_() % bound; }

    std::vector<double> lognormal_sample(double mu, double sigma, std::size_t n) {
        std::vector<double> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            out.push_back(lognormal(mu, sigma));
        }
        return out;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace trisk::testing
