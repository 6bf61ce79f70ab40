#pragma once

#include "trisk/model.hpp"

#include <filesystem>
#include <map>
#include <span>
#include <vector>

namespace trisk::calib {

struct LognormalParams {
    double mu;
    double sigma;
};

/// Method-of-moments lognormal fit: mu = ln(m^2 / sqrt(v + m^2)),
/// sigma = sqrt(ln(v / m^2 + 1)). Requires m > 0 and v >= 0.
LognormalParams fit_lognormal(double mean, double variance);

/// Raw moments implied by lognormal parameters (inverse of fit_lognormal).
double lognormal_mean(double mu, double sigma);
double lognormal_variance(double mu, double sigma);

struct SampleSet {
    Segment segment = Segment::Other;
    std::vector<double> values; // strictly positive carbon intensities
};

/// Fit one segment from its sample: raw mean/variance (population), lognormal
/// parameters, Filliben R^2 (1 by convention below n = 3), sorted sample kept
/// for the empirical-CDF mode.
SectorCalibration calibrate_segment(const SampleSet& samples);

/// Squared probability-plot correlation between sorted ln(values) and the
/// standard normal quantiles at the Filliben order-statistic medians.
/// Requires n >= 3.
double filliben_r2(std::span<const double> values);

/// Quantile of `ci` under the fitted lognormal CDF. For a degenerate fit
/// (sigma = 0) returns 0.5 at the point mass and 0 or 1 by side.
/// Requires ci > 0.
double quantile_of(double ci, const SectorCalibration& cal);

/// Quantile of `ci` under the sample's empirical CDF (Hazen plotting
/// positions, linearly interpolated). Requires a nonempty ascending sample.
double empirical_quantile(double ci, std::span<const double> sorted_sample);

struct SegmentAverages {
    std::optional<double> volatility; // % annualized
    std::optional<double> cqs;
    std::optional<double> duration; // years
};

/// Arithmetic means over unique ISINs with available data, grouped by the
/// issuer's segment (sovereign instruments pool under Segment::Sov). Segments
/// with no data are absent; callers fall back to the default calibration.
std::map<Segment, SegmentAverages>
segment_averages(const std::map<std::string, Instrument>& instruments,
                 const std::map<std::string, Counterparty>& counterparties);

/// Group unique counterparties with positive carbon intensity by segment
/// (countries pool under Segment::Sov). Nonpositive intensities are excluded.
std::vector<SampleSet>
sample_sets_from_counterparties(const std::map<std::string, Counterparty>& counterparties);

/// Published per-segment calibration shipped with the engine, so assessments
/// run with zero sample data.
const CalibrationSet& default_calibration();

CalibrationSet read_calibration_csv(const std::filesystem::path& path);
void write_calibration_csv(const std::filesystem::path& path, const CalibrationSet& set);

} // namespace trisk::calib
