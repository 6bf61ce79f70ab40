#include "trisk/calib.hpp"

#include "trisk/errors.hpp"
#include "trisk/stats.hpp"
#include "trisk/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace trisk::calib {

LognormalParams fit_lognormal(double mean, double variance) {
    if (!(mean > 0.0)) {
        throw DomainError("fit_lognormal: mean must be positive");
    }
    if (variance < 0.0) {
        throw DomainError("fit_lognormal: variance must be nonnegative");
    }
    const double m2 = mean * mean;
    const double mu = std::log(m2 / std::sqrt(variance + m2));
    const double sigma = std::sqrt(std::log1p(variance / m2));
    return {mu, sigma};
}

double lognormal_mean(double mu, double sigma) {
    return std::exp(mu + 0.5 * sigma * sigma);
}

double lognormal_variance(double mu, double sigma) {
    const double m = lognormal_mean(mu, sigma);
    return std::expm1(sigma * sigma) * m * m;
}

double filliben_r2(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 3) {
        throw InsufficientData("filliben_r2 requires n >= 3");
    }
    std::vector<double> logs;
    logs.reserve(n);
    for (double v : values) {
        if (!(v > 0.0)) {
            throw DomainError("filliben_r2: values must be strictly positive");
        }
        logs.push_back(std::log(v));
    }
    std::sort(logs.begin(), logs.end());

    std::vector<double> theoretical(n);
    const double nn = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        double median;
        if (i == 0) {
            median = 1.0 - std::pow(0.5, 1.0 / nn);
        } else if (i == n - 1) {
            median = std::pow(0.5, 1.0 / nn);
        } else {
            median = (static_cast<double>(i + 1) - 0.3175) / (nn + 0.365);
        }
        theoretical[i] = stats::normal_quantile(median);
    }
    const double r = stats::pearson_r(logs, theoretical);
    return r * r;
}

SectorCalibration calibrate_segment(const SampleSet& samples) {
    if (samples.values.empty()) {
        throw EmptySample("calibrate_segment: no observations for segment " +
                          std::string(to_string(samples.segment)));
    }
    for (double v : samples.values) {
        if (!(v > 0.0)) {
            throw DomainError("calibrate_segment: sample values must be strictly positive");
        }
    }
    const std::size_t n = samples.values.size();
    const double m = stats::mean(samples.values);
    double v = 0.0;
    for (double x : samples.values) {
        const double d = x - m;
        v += d * d;
    }
    v /= static_cast<double>(n); // population variance; exact for n = 1

    SectorCalibration cal;
    cal.segment = samples.segment;
    cal.n = static_cast<long>(n);
    cal.mean = m;
    cal.stddev = std::sqrt(v);
    const LognormalParams p = fit_lognormal(m, v);
    cal.ln_mean = p.mu;
    cal.ln_std = p.sigma;
    cal.r2 = n >= 3 ? filliben_r2(samples.values) : 1.0;
    cal.sample = samples.values;
    std::sort(cal.sample.begin(), cal.sample.end());
    return cal;
}

double quantile_of(double ci, const SectorCalibration& cal) {
    if (!(ci > 0.0)) {
        throw DomainError("quantile_of: carbon intensity must be strictly positive");
    }
    if (cal.ln_std < 0.0) {
        throw DomainError("quantile_of: calibration has negative ln_std");
    }
    if (cal.ln_std == 0.0) {
        const double point = cal.ln_mean;
        const double l = std::log(ci);
        if (l == point) return 0.5;
        return l < point ? 0.0 : 1.0;
    }
    return stats::normal_cdf((std::log(ci) - cal.ln_mean) / cal.ln_std);
}

double empirical_quantile(double ci, std::span<const double> sorted_sample) {
    if (sorted_sample.empty()) {
        throw EmptySample("empirical_quantile: empty sample");
    }
    if (!(ci > 0.0)) {
        throw DomainError("empirical_quantile: carbon intensity must be strictly positive");
    }
    const std::size_t n = sorted_sample.size();
    const double half = 0.5 / static_cast<double>(n);
    if (ci <= sorted_sample.front()) {
        return half;
    }
    if (ci >= sorted_sample.back()) {
        return 1.0 - half;
    }
    const auto it = std::upper_bound(sorted_sample.begin(), sorted_sample.end(), ci);
    const std::size_t hi = static_cast<std::size_t>(it - sorted_sample.begin());
    const std::size_t lo = hi - 1;
    const double p_lo = (static_cast<double>(lo) + 0.5) / static_cast<double>(n);
    const double p_hi = (static_cast<double>(hi) + 0.5) / static_cast<double>(n);
    const double x_lo = sorted_sample[lo];
    const double x_hi = sorted_sample[hi];
    if (x_hi == x_lo) {
        return 0.5 * (p_lo + p_hi);
    }
    return p_lo + (ci - x_lo) / (x_hi - x_lo) * (p_hi - p_lo);
}

std::map<Segment, SegmentAverages>
segment_averages(const std::map<std::string, Instrument>& instruments,
                 const std::map<std::string, Counterparty>& counterparties) {
    struct Acc {
        double vol_sum = 0.0;
        std::size_t vol_n = 0;
        double cqs_sum = 0.0;
        std::size_t cqs_n = 0;
        double dur_sum = 0.0;
        std::size_t dur_n = 0;
    };
    std::map<Segment, Acc> acc;

    for (const auto& [isin, inst] : instruments) {
        Segment seg;
        if (inst.country) {
            seg = Segment::Sov;
        } else if (inst.fund_style) {
            seg = Segment::Fund;
        } else {
            seg = Segment::Other;
            auto cp = counterparties.find(inst.counterparty_id);
            if (cp != counterparties.end()) {
                if (cp->second.country) {
                    seg = Segment::Sov;
                } else if (cp->second.segment) {
                    seg = *cp->second.segment;
                }
            }
        }
        Acc& a = acc[seg];
        if (inst.volatility_pct) {
            a.vol_sum += *inst.volatility_pct;
            ++a.vol_n;
        }
        if (inst.cqs) {
            a.cqs_sum += static_cast<double>(*inst.cqs);
            ++a.cqs_n;
        }
        if (inst.maturity_years) {
            // spread-duration proxy from the instrument's own terms
            const double c = inst.coupon.value_or(0.0);
            if (c > -1.0) {
                a.dur_sum += *inst.maturity_years / std::pow(1.0 + c, *inst.maturity_years / 2.0);
                ++a.dur_n;
            }
        }
    }

    std::map<Segment, SegmentAverages> out;
    for (const auto& [seg, a] : acc) {
        SegmentAverages s;
        if (a.vol_n > 0) s.volatility = a.vol_sum / static_cast<double>(a.vol_n);
        if (a.cqs_n > 0) s.cqs = a.cqs_sum / static_cast<double>(a.cqs_n);
        if (a.dur_n > 0) s.duration = a.dur_sum / static_cast<double>(a.dur_n);
        out[seg] = s;
    }
    return out;
}

std::vector<SampleSet>
sample_sets_from_counterparties(const std::map<std::string, Counterparty>& counterparties) {
    std::map<Segment, SampleSet> by_segment;
    for (const auto& [id, cp] : counterparties) {
        if (!cp.carbon_intensity || !(*cp.carbon_intensity > 0.0)) {
            continue;
        }
        Segment seg;
        if (cp.country) {
            seg = Segment::Sov;
        } else if (cp.segment) {
            seg = *cp.segment;
        } else {
            continue; // no segment information at all
        }
        SampleSet& set = by_segment[seg];
        set.segment = seg;
        set.values.push_back(*cp.carbon_intensity);
    }
    std::vector<SampleSet> out;
    out.reserve(by_segment.size());
    for (auto& [seg, set] : by_segment) {
        out.push_back(std::move(set));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Shipped default calibration
// ---------------------------------------------------------------------------

namespace {

struct DefaultRow {
    Segment segment;
    long n;
    double mean;
    double stddev;
    double ln_mean;
    double ln_std;
    double r2;
    double mean_volatility; // < 0 means unavailable
    double mean_cqs;        // < 0 means unavailable
    double mean_duration;   // < 0 means unavailable
};

constexpr DefaultRow kDefaultRows[] = {
    {Segment::A01, 10, 806.6, 1066.1, 6.19, 1.01, 0.7542, 31.9, 2.50, 2.51},
    {Segment::A02_A03, 3, 431.0, 539.5, 5.59, 0.97, 0.6651, 36.7, 2.50, 2.43},
    {Segment::B05_B09, 141, 804.2, 1063.4, 6.18, 1.01, 0.9720, 48.1, 2.53, 4.48},
    {Segment::C10_C12, 107, 98.5, 122.4, 4.12, 0.97, 0.9800, 25.7, 2.40, 5.17},
    {Segment::C13_C18, 70, 237.3, 344.4, 4.90, 1.06, 0.9713, 33.1, 2.51, 4.04},
    {Segment::C19, 29, 581.6, 421.0, 6.16, 0.65, 0.9741, 32.4, 2.33, 6.75},
    {Segment::C20, 96, 478.2, 743.7, 5.56, 1.11, 0.9859, 41.9, 2.35, 5.78},
    {Segment::C21_C22, 91, 88.7, 135.9, 3.88, 1.10, 0.9878, 40.6, 2.39, 5.66},
    {Segment::C23, 32, 1943.8, 2128.5, 7.18, 0.89, 0.8684, 33.7, 2.59, 3.08},
    {Segment::C24_C25, 65, 1023.0, 1301.9, 6.45, 0.98, 0.9376, 37.3, 2.39, 2.39},
    {Segment::C26_C28, 304, 108.1, 423.6, 3.28, 1.67, 0.9420, 41.3, 2.36, 4.12},
    {Segment::C29_C30, 98, 51.7, 70.2, 3.42, 1.02, 0.9665, 36.6, 2.47, 3.71},
    {Segment::C31_C33, 5, 33.4, 22.2, 3.32, 0.61, 0.7622, 32.3, 3.00, 2.13},
    {Segment::D35, 126, 1431.7, 2405.5, 6.60, 1.16, 0.9856, 29.8, 2.31, 7.04},
    {Segment::E36_E39, 21, 519.6, 480.3, 5.94, 0.79, 0.7509, 27.4, 2.42, 3.35},
    {Segment::F41_F43, 84, 88.1, 264.6, 3.33, 1.52, 0.9330, 30.5, 2.45, 2.40},
    {Segment::G45_G47, 164, 53.4, 135.9, 2.97, 1.42, 0.9228, 36.5, 2.42, 3.85},
    {Segment::H49, 35, 673.8, 1013.3, 5.92, 1.09, 0.9718, 29.2, 2.43, 4.29},
    {Segment::H50, 24, 2000.8, 1445.6, 7.39, 0.65, 0.9496, 48.3, 2.76, 3.48},
    {Segment::H51, 14, 1096.1, 253.6, 6.97, 0.23, 0.9237, 43.0, 2.98, 4.29},
    {Segment::H52_H53, 42, 177.8, 410.8, 4.26, 1.36, 0.9278, 31.8, 2.61, 4.42},
    {Segment::L68, 124, 85.9, 135.3, 3.83, 1.12, 0.9673, 28.0, 2.39, 5.62},
    {Segment::Other, 819, 101.4, 454.5, 3.10, 1.70, 0.9774, 38.3, 2.33, 5.14},
    {Segment::Sov, 30, 351.0, 456.9, 5.40, 1.00, 0.9253, -1.0, 1.92, 5.56},
    {Segment::Fund, 2087, 193.8, 268.3, 4.70, 1.03, 0.9946, -1.0, -1.0, -1.0},
};

CalibrationSet build_default_calibration() {
    CalibrationSet set;
    for (const DefaultRow& row : kDefaultRows) {
        SectorCalibration cal;
        cal.segment = row.segment;
        cal.n = row.n;
        cal.mean = row.mean;
        cal.stddev = row.stddev;
        cal.ln_mean = row.ln_mean;
        cal.ln_std = row.ln_std;
        cal.r2 = row.r2;
        if (row.mean_volatility >= 0.0) cal.mean_volatility = row.mean_volatility;
        if (row.mean_cqs >= 0.0) cal.mean_cqs = row.mean_cqs;
        if (row.mean_duration >= 0.0) cal.mean_duration = row.mean_duration;
        set.by_segment[row.segment] = std::move(cal);
    }
    return set;
}

} // namespace

const CalibrationSet& default_calibration() {
    static const CalibrationSet set = build_default_calibration();
    return set;
}

// ---------------------------------------------------------------------------
// Calibration CSV
// ---------------------------------------------------------------------------

namespace {

constexpr std::string_view kCalibrationHeader =
    "segment,n,mean,std,ln_mean,ln_std,r2,mean_volatility,mean_cqs,mean_duration";

} // namespace

CalibrationSet read_calibration_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open calibration file " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw SchemaError("calibration file is empty: " + path.string());
    }
    if (line.ends_with('\r')) {
        line.pop_back();
    }
    if (line != kCalibrationHeader) {
        throw SchemaError("unexpected calibration header in " + path.string());
    }
    CalibrationSet set;
    while (std::getline(in, line)) {
        if (line.ends_with('\r')) {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        cells.resize(10);
        const auto seg = segment_from_label(cells[0]);
        if (!seg) {
            throw SchemaError("unknown segment label '" + cells[0] + "' in " + path.string());
        }
        SectorCalibration cal;
        cal.segment = *seg;
        cal.n = std::stol(cells[1]);
        cal.mean = std::stod(cells[2]);
        cal.stddev = std::stod(cells[3]);
        cal.ln_mean = std::stod(cells[4]);
        cal.ln_std = std::stod(cells[5]);
        cal.r2 = std::stod(cells[6]);
        if (!cells[7].empty()) cal.mean_volatility = std::stod(cells[7]);
        if (!cells[8].empty()) cal.mean_cqs = std::stod(cells[8]);
        if (!cells[9].empty()) cal.mean_duration = std::stod(cells[9]);
        if (set.by_segment.count(*seg) != 0) {
            throw SchemaError("duplicate segment '" + cells[0] + "' in " + path.string());
        }
        set.by_segment[*seg] = std::move(cal);
    }
    return set;
}

void write_calibration_csv(const std::filesystem::path& path, const CalibrationSet& set) {
    std::ostringstream os;
    os << kCalibrationHeader << '\n';
    for (const auto& [seg, cal] : set.by_segment) {
        os << to_string(seg) << ',' << cal.n << ',' << text::format_double(cal.mean) << ','
           << text::format_double(cal.stddev) << ',' << text::format_double(cal.ln_mean) << ','
           << text::format_double(cal.ln_std) << ',' << text::format_double(cal.r2) << ','
           << text::format_opt(cal.mean_volatility) << ',' << text::format_opt(cal.mean_cqs)
           << ',' << text::format_opt(cal.mean_duration) << '\n';
    }
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write calibration file " + path.string());
    }
    out << os.str();
}

} // namespace trisk::calib
