#pragma once

#include "trisk/aggregate.hpp"
#include "trisk/model.hpp"
#include "trisk/risk.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace trisk::report {

/// Write via a temp file in the target directory plus rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

// ---------------------------------------------------------------------------
// Assessment outputs
// ---------------------------------------------------------------------------

void write_position_results_csv(const std::filesystem::path& path,
                                std::span<const PositionResult> results);

void write_fund_results_csv(const std::filesystem::path& path,
                            std::span<const aggregate::FundResult> funds);

/// Echo of the semantic run inputs, for reproducible re-runs.
struct ConfigEcho {
    std::vector<std::pair<std::string, std::string>> strings;
    std::vector<std::pair<std::string, bool>> flags;
};

struct SectorReportInputs {
    ConfigEcho config;
    std::string scenario_name;
    const ValidationReport* validation = nullptr;
    const Universe* universe = nullptr;
    aggregate::PortfolioStats sector;
    risk::ClassAverages class_averages;
    aggregate::DistributionStats distribution;
    std::vector<std::string> warnings;
    std::optional<double> scale_factor; // optional loss extrapolation factor
};

std::string sector_report_json(const SectorReportInputs& inputs);

// ---------------------------------------------------------------------------
// Reading assessment outputs back (report subcommand)
// ---------------------------------------------------------------------------

std::vector<PositionResult> read_position_results_csv(const std::filesystem::path& path);
std::vector<aggregate::FundResult> read_fund_results_csv(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Human-readable report tables
// ---------------------------------------------------------------------------

struct ReportOptions {
    std::optional<std::string> label; // fund subset selector
    double tail_pct = 1.0;
    double bin_width_pct = 0.5;
    double bin_lo_pct = -25.0;
    double bin_hi_pct = 0.0;
};

/// Worst/best/all characterization per asset class (instrument level).
std::string characterization_csv(std::span<const PositionResult> results, double tail_pct);

/// Distribution statistics for the whole universe and, when selected, the
/// labeled subset.
std::string distribution_csv(std::span<const aggregate::FundResult> funds,
                             const ReportOptions& options);

/// Per-asset-class comparison of the labeled subset against the universe,
/// including the comparable-allocation counterfactual.
std::string comparison_csv(std::span<const PositionResult> results,
                           std::span<const aggregate::FundResult> funds,
                           const std::string& label);

/// Fund-loss histogram with fixed-width bins; out-of-range losses are clamped
/// into the edge bins so counts always sum to the fund count.
std::string histogram_csv(std::span<const aggregate::FundResult> funds,
                          const ReportOptions& options);

/// Portfolio greenness per holder (universe and labels), rebuilt from the
/// per-fund coefficients.
std::string tec_tac_csv(std::span<const aggregate::FundResult> funds,
                        const ReportOptions& options);

} // namespace trisk::report
