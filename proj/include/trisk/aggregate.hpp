#pragma once

#include "trisk/model.hpp"
#include "trisk/stats.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace trisk::aggregate {

// ---------------------------------------------------------------------------
// Fund-level results
// ---------------------------------------------------------------------------

struct FundResult {
    std::string fund_id;
    double aum = 0.0; // EUR, sum of position market values
    double loss_fraction = 0.0;
    double loss_eur = 0.0;
    /// AuM-weighted carbon intensity, renormalized over CI-covered AuM.
    std::optional<double> weighted_ci;
    double ci_coverage = 0.0; // share of AuM with a carbon intensity
    std::map<AssetClass, double> class_weights;
    std::optional<double> cprs_share;
    std::optional<double> eligible_share, tec, tac, adj_tec, adj_tac;
    std::vector<std::string> labels;
    bool zero_aum = false;
};

/// Roll one fund's repriced positions up to a FundResult.
FundResult aggregate_fund(std::span<const PositionResult> fund_positions, const Fund& fund,
                          const Universe& universe, const Scenario& scenario);

/// All funds of the universe, in fund-id order. `results` must follow the
/// universe's position ordering.
std::vector<FundResult> aggregate_funds(const Universe& universe,
                                        std::span<const PositionResult> results,
                                        const Scenario& scenario);

// ---------------------------------------------------------------------------
// Distribution statistics
// ---------------------------------------------------------------------------

struct DistributionStats {
    std::size_t count = 0;
    double mean = 0.0;
    double median = 0.0;
    double skewness = 0.0;
    double p1 = 0.0, p5 = 0.0, p10 = 0.0, p50 = 0.0;
    double worst1_mean = 0.0; // mean over the ceil(1% n) worst observations
    double worst5_mean = 0.0;
    double best1_mean = 0.0;
};

/// Distribution of fund losses. Tail means average the ceil(x% n) worst
/// entries; percentiles interpolate linearly on the empirical CDF.
DistributionStats sector_distribution(std::span<const double> fund_losses);

/// Mean over the ceil(pct% n) worst (most negative) or best entries.
double tail_mean(std::span<const double> values, double pct, bool worst);

// ---------------------------------------------------------------------------
// Tail characterization
// ---------------------------------------------------------------------------

struct InstrumentObservation {
    std::string isin;
    AssetClass asset_class = AssetClass::Unclassified;
    double loss_fraction = 0.0;
    std::optional<double> carbon_intensity;
    std::optional<double> cqs;
    std::optional<double> duration;
    std::optional<double> volatility_pct;
    std::optional<Segment> segment;
    std::optional<std::string> country;
    std::optional<InvestmentStyle> style;
};

enum class TailDirection { Worst, Best };

struct CharacterizationRow {
    std::size_t count = 0;
    double mean_loss = 0.0;
    std::optional<double> mean_ci;
    std::optional<double> mean_cqs;
    std::optional<double> mean_duration;
    std::optional<double> mean_volatility;
    /// Most frequent attributes in the subset, by count then name.
    std::vector<std::pair<std::string, std::size_t>> top_segments;
    std::vector<std::pair<std::string, std::size_t>> top_countries;
    std::vector<std::pair<std::string, std::size_t>> top_styles;
};

/// Equal-weighted characterization of the worst/best `percentile`% of the
/// subset (percentile = 100 characterizes the whole subset).
CharacterizationRow characterize_tail(std::span<const InstrumentObservation> subset,
                                      double percentile, TailDirection direction);

/// One observation per unique ISIN of the given asset class.
std::vector<InstrumentObservation>
unique_instrument_observations(std::span<const PositionResult> results, AssetClass asset_class);

// ---------------------------------------------------------------------------
// Greenness and sector metrics
// ---------------------------------------------------------------------------

/// AuM share of positions whose NACE bucket carries a CPRS flag.
/// nullopt when the scenario ships no CPRS map.
std::optional<double> cprs_share(std::span<const PositionResult> positions,
                                 const Scenario& scenario);

/// Portfolio loss under a target asset-class allocation. Weights must sum
/// to 1 (1e-9); classes missing from `class_losses` contribute zero.
double counterfactual_loss(const std::map<AssetClass, double>& class_losses,
                           const std::map<AssetClass, double>& target_weights);

struct TecTacResult {
    double tec = 0.0;
    double tac = 0.0;
    double eligible_share = 0.0;
    std::optional<double> adj_tec;
    std::optional<double> adj_tac;
};

/// Transition-exposure and taxonomy-alignment coefficients over the full
/// portfolio AuM; only equity/corporate positions with a NACE code are
/// eligible, everything else counts as zero.
TecTacResult tec_tac(std::span<const PositionResult> positions, const Universe& universe,
                     const std::map<std::string, TecTacCoefficients>& table);

// ---------------------------------------------------------------------------
// Portfolio-level rollup (whole sector or an arbitrary subset)
// ---------------------------------------------------------------------------

struct ClassStats {
    double aum = 0.0;
    double weight = 0.0;
    double loss_fraction = 0.0; // AuM-weighted
    std::optional<double> weighted_ci;
};

struct PortfolioStats {
    double aum = 0.0;
    double loss_eur = 0.0;
    double loss_fraction = 0.0;
    std::optional<double> weighted_ci;
    double ci_coverage = 0.0;
    std::map<AssetClass, ClassStats> by_class;
    std::optional<double> cprs;
    std::optional<TecTacResult> greenness;
};

PortfolioStats portfolio_stats(std::span<const PositionResult> positions,
                               const Universe& universe, const Scenario& scenario);

} // namespace trisk::aggregate
