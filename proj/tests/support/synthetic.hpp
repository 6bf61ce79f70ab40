#pragma once

#include "trisk/model.hpp"

#include <cstdint>
#include <filesystem>

namespace trisk::testing {

struct SynthConfig {
    std::uint64_t seed = 42;
    std::size_t fund_count = 200;
    std::size_t mean_positions_per_fund = 16;
    /// Share of funds tagged "sustainable" (low-carbon tilted portfolios).
    double sustainable_share = 0.15;
};

/// Deterministic synthetic universe covering every asset class, the parent
/// backfill chain, missing-data paths and listed/unlisted sovereigns.
Universe generate_universe(const SynthConfig& config);

/// Write positions.csv / instruments.csv / counterparties.csv / funds.csv.
void write_universe_files(const Universe& universe, const std::filesystem::path& dir);

} // namespace trisk::testing
