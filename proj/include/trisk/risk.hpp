#pragma once

#include "trisk/calib.hpp"
#include "trisk/model.hpp"

#include <map>
#include <optional>
#include <vector>

namespace trisk::risk {

struct Options {
    /// Reproduce the source convention where the convexity term adds to the
    /// bond loss instead of mitigating it.
    bool strict_paper_sign = false;
    /// Quantile carbon intensities against the segment's empirical sample
    /// instead of the fitted lognormal CDF (sensitivity runs).
    bool empirical_cdf = false;
    /// Weight the asset-class average losses by market value instead of
    /// equally across unique instruments.
    bool aum_weighted_class_averages = false;
};

struct BondSensitivities {
    double duration = 0.0;  // years
    double convexity = 0.0; // years^2, capped at 40x duration
};

/// Approximate spread/yield sensitivities from maturity and coupon:
/// duration = T / (1+c)^(T/2), convexity = min(T(T+1)/(1+c)^2, 40*duration).
/// Requires T >= 0 and c > -1.
BondSensitivities bond_sensitivities(double maturity_years, double coupon);

/// Yield shock in basis points at an arbitrary maturity: linear between the
/// integer tenors 1..10, flat below 1y and beyond the 10+ bucket.
double interpolate_tenor(const SovereignCurve& curve, double maturity_years);

/// Mean loss per repriced asset class, used for fund-vehicle look-through.
struct ClassAverages {
    double equity = 0.0;
    double corporate = 0.0;
    double sovereign = 0.0;
    std::size_t equity_n = 0;
    std::size_t corporate_n = 0;
    std::size_t sovereign_n = 0;
};

/// Immutable per-run inputs shared by all repricing calls.
class Context {
public:
    Context(const Universe& universe, const Scenario& scenario,
            const CalibrationSet& calibration, Options options);

    const Universe& universe() const { return universe_; }
    const Scenario& scenario() const { return scenario_; }
    const Options& options() const { return options_; }

    /// Calibration for a segment, falling back to the Other bucket.
    const SectorCalibration* calibration_for(Segment s) const;

    /// Universe averages first, shipped calibration means second.
    std::optional<double> mean_volatility(Segment s) const;
    std::optional<double> mean_cqs(Segment s) const;
    std::optional<double> mean_duration(Segment s) const;

private:
    const Universe& universe_;
    const Scenario& scenario_;
    const CalibrationSet& calibration_;
    Options options_;
    std::map<Segment, calib::SegmentAverages> universe_averages_;
};

/// Carbon-intensity multiplier 2q(ci). Missing values yield a flagged neutral
/// 1; nonpositive values are assigned the bottom quantile.
double ci_multiplier(const std::optional<double>& ci, const SectorCalibration* cal,
                     const Options& options, BackfillFlags& flags);

PositionResult reprice_equity(const Position& p, const Context& ctx);
PositionResult reprice_corporate_bond(const Position& p, const Context& ctx);
PositionResult reprice_sovereign(const Position& p, const Context& ctx);
PositionResult reprice_fund_vehicle(const Position& p, const Context& ctx,
                                    const ClassAverages& averages);
PositionResult reprice_cash(const Position& p);

struct AssessmentResult {
    std::vector<PositionResult> position_results; // same order as universe positions
    ClassAverages class_averages;
    std::vector<std::string> warnings;
};

/// Two-phase portfolio repricing: equities, bonds, sovereigns and cash first,
/// fund vehicles second (they consume the phase-one class averages).
/// Results are independent of the parallelism degree.
AssessmentResult run_assessment(const Universe& universe, const Scenario& scenario,
                                const CalibrationSet& calibration, const Options& options,
                                int threads = 1);

/// Sanity checks over scenario shock sizes: flags shocks large enough for the
/// second-order repricing term to overtake the first-order term.
std::vector<std::string> scenario_lint(const Scenario& scenario);

} // namespace trisk::risk
