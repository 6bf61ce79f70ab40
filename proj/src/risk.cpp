#include "trisk/risk.hpp"

#include "trisk/errors.hpp"
#include "trisk/ingest.hpp"
#include "trisk/text.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <set>
#include <thread>

namespace trisk::risk {

namespace {

constexpr double kBpToDecimal = 1e-4;

double normalize_zero(double v) {
    return v == 0.0 ? 0.0 : v; // maps -0.0 onto +0.0
}

} // namespace

// ---------------------------------------------------------------------------
// Sensitivities and tenor interpolation
// ---------------------------------------------------------------------------

BondSensitivities bond_sensitivities(double maturity_years, double coupon) {
    if (!(coupon > -1.0)) {
        throw DomainError("bond_sensitivities: coupon must be greater than -1");
    }
    if (maturity_years < 0.0) {
        throw DomainError("bond_sensitivities: maturity must be nonnegative");
    }
    BondSensitivities s;
    s.duration = maturity_years / std::pow(1.0 + coupon, maturity_years / 2.0);
    const double raw = maturity_years * (maturity_years + 1.0) / ((1.0 + coupon) * (1.0 + coupon));
    s.convexity = std::min(raw, 40.0 * s.duration);
    return s;
}

double interpolate_tenor(const SovereignCurve& curve, double maturity_years) {
    if (maturity_years <= 1.0) {
        return curve.shocks_bp[0];
    }
    if (maturity_years >= static_cast<double>(kTenorCount)) {
        return curve.shocks_bp[kTenorCount - 1];
    }
    const auto lo = static_cast<std::size_t>(maturity_years); // 1..9
    const double frac = maturity_years - static_cast<double>(lo);
    return curve.shocks_bp[lo - 1] + frac * (curve.shocks_bp[lo] - curve.shocks_bp[lo - 1]);
}

// ---------------------------------------------------------------------------
// Context
// ---------------------------------------------------------------------------

Context::Context(const Universe& universe, const Scenario& scenario,
                 const CalibrationSet& calibration, Options options)
    : universe_(universe), scenario_(scenario), calibration_(calibration), options_(options),
      universe_averages_(calib::segment_averages(universe.instruments, universe.counterparties)) {}

const SectorCalibration* Context::calibration_for(Segment s) const {
    if (const SectorCalibration* cal = calibration_.find(s)) {
        return cal;
    }
    return calibration_.find(Segment::Other);
}

std::optional<double> Context::mean_volatility(Segment s) const {
    if (auto it = universe_averages_.find(s);
        it != universe_averages_.end() && it->second.volatility) {
        return it->second.volatility;
    }
    if (const SectorCalibration* cal = calibration_.find(s); cal != nullptr) {
        return cal->mean_volatility;
    }
    return std::nullopt;
}

std::optional<double> Context::mean_cqs(Segment s) const {
    if (auto it = universe_averages_.find(s); it != universe_averages_.end() && it->second.cqs) {
        return it->second.cqs;
    }
    if (const SectorCalibration* cal = calibration_.find(s); cal != nullptr) {
        return cal->mean_cqs;
    }
    return std::nullopt;
}

std::optional<double> Context::mean_duration(Segment s) const {
    if (auto it = universe_averages_.find(s);
        it != universe_averages_.end() && it->second.duration) {
        return it->second.duration;
    }
    if (const SectorCalibration* cal = calibration_.find(s); cal != nullptr) {
        return cal->mean_duration;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Multipliers
// ---------------------------------------------------------------------------

double ci_multiplier(const std::optional<double>& ci, const SectorCalibration* cal,
                     const Options& options, BackfillFlags& flags) {
    if (!ci || cal == nullptr) {
        flags.ci = true;
        return 1.0;
    }
    if (!(*ci > 0.0)) {
        flags.nonpositive_ci = true;
        return 0.0; // bottom quantile by convention
    }
    double q;
    if (options.empirical_cdf && !cal->sample.empty()) {
        q = calib::empirical_quantile(*ci, cal->sample);
    } else {
        q = calib::quantile_of(*ci, *cal);
    }
    return 2.0 * q;
}

// ---------------------------------------------------------------------------
// Per-position repricing
// ---------------------------------------------------------------------------

namespace {

struct IssuerInfo {
    const Counterparty* counterparty = nullptr;
    std::optional<double> carbon_intensity;
    Segment segment = Segment::Other;
    bool segment_fallback = true;
};

IssuerInfo issuer_info(const Instrument* inst, const Universe& universe) {
    IssuerInfo info;
    if (inst == nullptr || inst->counterparty_id.empty()) {
        return info;
    }
    info.counterparty = universe.find_counterparty(inst->counterparty_id);
    if (info.counterparty == nullptr) {
        return info;
    }
    const auto resolved = ingest::resolve_carbon_intensity(*info.counterparty,
                                                           universe.counterparties);
    info.carbon_intensity = resolved.value;
    if (info.counterparty->segment) {
        info.segment = *info.counterparty->segment;
        info.segment_fallback = false;
    }
    return info;
}

PositionResult base_result(const Position& p) {
    PositionResult r;
    r.fund_id = p.fund_id;
    r.isin = p.isin;
    r.asset_class = p.asset_class;
    r.market_value = p.market_value;
    return r;
}

void finish(PositionResult& r) {
    r.loss_fraction = normalize_zero(r.loss_fraction);
    r.loss_eur = normalize_zero(r.loss_fraction * r.market_value);
}

/// Duration/convexity from the instrument's own terms, or from the segment
/// mean duration when the maturity is missing.
BondSensitivities resolve_sensitivities(const Instrument* inst, Segment segment,
                                        const Context& ctx, BackfillFlags& flags) {
    if (inst != nullptr && inst->maturity_years) {
        return bond_sensitivities(*inst->maturity_years, inst->coupon.value_or(0.0));
    }
    flags.duration = true;
    const auto mean_dur = ctx.mean_duration(segment);
    if (!mean_dur) {
        return {0.0, 0.0};
    }
    return bond_sensitivities(*mean_dur, 0.0);
}

} // namespace

PositionResult reprice_equity(const Position& p, const Context& ctx) {
    PositionResult r = base_result(p);
    const Instrument* inst = ctx.universe().find_instrument(p.isin);
    const IssuerInfo issuer = issuer_info(inst, ctx.universe());

    r.segment = issuer.segment;
    r.flags.segment = issuer.segment_fallback;
    r.carbon_intensity = issuer.carbon_intensity;

    const SectorCalibration* cal = ctx.calibration_for(issuer.segment);
    r.multipliers.ci_m = ci_multiplier(issuer.carbon_intensity, cal, ctx.options(), r.flags);

    double vol_m = 1.0;
    const auto sigma_bar = ctx.mean_volatility(issuer.segment);
    if (inst != nullptr && inst->volatility_pct && sigma_bar && *sigma_bar > 0.0) {
        vol_m = *inst->volatility_pct / *sigma_bar;
        r.volatility_pct = inst->volatility_pct;
    } else {
        r.flags.volatility = true;
        if (inst != nullptr) {
            r.volatility_pct = inst->volatility_pct;
        }
    }
    r.multipliers.vol_m = vol_m;

    const double shock = ctx.scenario().equity_shock_for(issuer.segment);
    r.loss_fraction = std::max(-1.0, r.multipliers.ci_m * vol_m * shock);
    finish(r);
    return r;
}

PositionResult reprice_corporate_bond(const Position& p, const Context& ctx) {
    PositionResult r = base_result(p);
    const Instrument* inst = ctx.universe().find_instrument(p.isin);
    const IssuerInfo issuer = issuer_info(inst, ctx.universe());

    r.segment = issuer.segment;
    r.flags.segment = issuer.segment_fallback;
    r.carbon_intensity = issuer.carbon_intensity;

    const SectorCalibration* cal = ctx.calibration_for(issuer.segment);
    r.multipliers.ci_m = ci_multiplier(issuer.carbon_intensity, cal, ctx.options(), r.flags);

    double cqs_m = 1.0;
    const auto cqs_bar = ctx.mean_cqs(issuer.segment);
    if (inst != nullptr && inst->cqs && cqs_bar && *cqs_bar > 0.0) {
        cqs_m = static_cast<double>(*inst->cqs) / *cqs_bar;
        r.cqs = static_cast<double>(*inst->cqs);
    } else {
        r.flags.cqs = true;
        if (inst != nullptr && inst->cqs) {
            r.cqs = static_cast<double>(*inst->cqs);
        }
    }
    r.multipliers.cqs_m = cqs_m;

    const BondSensitivities sens = resolve_sensitivities(inst, issuer.segment, ctx, r.flags);
    r.duration = sens.duration;
    r.convexity = sens.convexity;

    const double shock_bp = ctx.scenario().spread_shock_bp_for(issuer.segment);
    const double dcs = r.multipliers.ci_m * cqs_m * shock_bp * kBpToDecimal;
    double raw;
    if (ctx.options().strict_paper_sign) {
        raw = dcs * sens.duration + 0.5 * dcs * dcs * sens.convexity;
    } else {
        raw = dcs * sens.duration - 0.5 * dcs * dcs * sens.convexity;
    }
    double loss = -raw;
    if (dcs > 0.0) {
        loss = std::min(loss, 0.0); // widening spreads cannot produce a gain
    }
    r.loss_fraction = std::max(-1.0, loss);
    finish(r);
    return r;
}

PositionResult reprice_sovereign(const Position& p, const Context& ctx) {
    PositionResult r = base_result(p);
    const Instrument* inst = ctx.universe().find_instrument(p.isin);
    if (inst == nullptr || !inst->country) {
        throw UnknownCountry("sovereign position " + p.fund_id + "/" + p.isin +
                             " has no country code");
    }
    r.country = inst->country;
    r.segment = Segment::Sov;
    r.flags.segment = false;
    const IssuerInfo issuer = issuer_info(inst, ctx.universe());
    r.carbon_intensity = issuer.carbon_intensity;
    if (inst->cqs) {
        r.cqs = static_cast<double>(*inst->cqs);
    }

    const BondSensitivities sens = resolve_sensitivities(inst, Segment::Sov, ctx, r.flags);
    r.duration = sens.duration;
    r.convexity = sens.convexity;
    const double tenor = inst->maturity_years ? *inst->maturity_years : sens.duration;

    double dy_bp;
    const auto curve = ctx.scenario().sovereign_curves.find(*inst->country);
    if (curve != ctx.scenario().sovereign_curves.end()) {
        // country explicitly in the transition pathway: direct curve shock
        dy_bp = interpolate_tenor(curve->second, tenor);
    } else {
        const SectorCalibration* cal = ctx.calibration_for(Segment::Sov);
        r.multipliers.ci_m = ci_multiplier(issuer.carbon_intensity, cal, ctx.options(), r.flags);

        double cqs_m = 1.0;
        const auto cqs_bar = ctx.mean_cqs(Segment::Sov);
        if (inst->cqs && cqs_bar && *cqs_bar > 0.0) {
            cqs_m = static_cast<double>(*inst->cqs) / *cqs_bar;
        } else {
            r.flags.cqs = true;
        }
        r.multipliers.cqs_m = cqs_m;

        const SovereignCurve average = ctx.scenario().average_curve();
        dy_bp = r.multipliers.ci_m * cqs_m * interpolate_tenor(average, tenor);
    }

    const double dy = dy_bp * kBpToDecimal;
    double raw;
    if (ctx.options().strict_paper_sign) {
        raw = dy * sens.duration + 0.5 * dy * dy * sens.convexity;
    } else {
        raw = dy * sens.duration - 0.5 * dy * dy * sens.convexity;
    }
    r.loss_fraction = -raw; // gains permitted under negative yield shocks
    finish(r);
    return r;
}

PositionResult reprice_fund_vehicle(const Position& p, const Context& ctx,
                                    const ClassAverages& averages) {
    PositionResult r = base_result(p);
    const Instrument* inst = ctx.universe().find_instrument(p.isin);
    const IssuerInfo issuer = issuer_info(inst, ctx.universe());

    r.segment = Segment::Fund;
    r.carbon_intensity = issuer.carbon_intensity;

    InvestmentStyle style = InvestmentStyle::Others;
    if (inst != nullptr && inst->fund_style) {
        style = *inst->fund_style;
    } else {
        r.flags.style = true;
    }
    r.style = style;

    const SectorCalibration* cal = ctx.calibration_for(Segment::Fund);
    r.multipliers.ci_m = ci_multiplier(issuer.carbon_intensity, cal, ctx.options(), r.flags);

    const StyleWeights w = style_weights(style);
    const double blended = w.equity * averages.equity + w.corporate * averages.corporate +
                           w.sovereign * averages.sovereign;
    r.loss_fraction = std::max(-1.0, r.multipliers.ci_m * blended);
    finish(r);
    return r;
}

PositionResult reprice_cash(const Position& p) {
    PositionResult r = base_result(p);
    r.flags.unclassified = p.asset_class == AssetClass::Unclassified;
    r.loss_fraction = 0.0;
    r.loss_eur = 0.0;
    return r;
}

// ---------------------------------------------------------------------------
// Two-phase engine
// ---------------------------------------------------------------------------

namespace {

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    const auto worker_count = static_cast<std::size_t>(
        std::min<long>(threads, static_cast<long>(n)));
    std::vector<std::thread> workers;
    workers.reserve(worker_count);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (std::size_t w = 0; w < worker_count; ++w) {
        workers.emplace_back([&, w]() {
            try {
                for (std::size_t i = w; i < n; i += worker_count) {
                    body(i);
                }
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : workers) {
        t.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

ClassAverages compute_class_averages(const std::vector<PositionResult>& results,
                                     bool aum_weighted) {
    ClassAverages avg;
    if (aum_weighted) {
        double eq_l = 0, eq_w = 0, cb_l = 0, cb_w = 0, gb_l = 0, gb_w = 0;
        for (const PositionResult& r : results) {
            switch (r.asset_class) {
            case AssetClass::Equity:
                eq_l += r.loss_fraction * r.market_value;
                eq_w += r.market_value;
                ++avg.equity_n;
                break;
            case AssetClass::CorporateBond:
                cb_l += r.loss_fraction * r.market_value;
                cb_w += r.market_value;
                ++avg.corporate_n;
                break;
            case AssetClass::SovereignBond:
                gb_l += r.loss_fraction * r.market_value;
                gb_w += r.market_value;
                ++avg.sovereign_n;
                break;
            default:
                break;
            }
        }
        if (eq_w > 0) avg.equity = eq_l / eq_w;
        if (cb_w > 0) avg.corporate = cb_l / cb_w;
        if (gb_w > 0) avg.sovereign = gb_l / gb_w;
        return avg;
    }

    // equal weight across unique instruments
    std::set<std::string> seen_eq, seen_cb, seen_gb;
    double eq_sum = 0, cb_sum = 0, gb_sum = 0;
    for (const PositionResult& r : results) {
        switch (r.asset_class) {
        case AssetClass::Equity:
            if (seen_eq.insert(r.isin).second) {
                eq_sum += r.loss_fraction;
            }
            break;
        case AssetClass::CorporateBond:
            if (seen_cb.insert(r.isin).second) {
                cb_sum += r.loss_fraction;
            }
            break;
        case AssetClass::SovereignBond:
            if (seen_gb.insert(r.isin).second) {
                gb_sum += r.loss_fraction;
            }
            break;
        default:
            break;
        }
    }
    avg.equity_n = seen_eq.size();
    avg.corporate_n = seen_cb.size();
    avg.sovereign_n = seen_gb.size();
    if (!seen_eq.empty()) avg.equity = eq_sum / static_cast<double>(seen_eq.size());
    if (!seen_cb.empty()) avg.corporate = cb_sum / static_cast<double>(seen_cb.size());
    if (!seen_gb.empty()) avg.sovereign = gb_sum / static_cast<double>(seen_gb.size());
    return avg;
}

} // namespace

AssessmentResult run_assessment(const Universe& universe, const Scenario& scenario,
                                const CalibrationSet& calibration, const Options& options,
                                int threads) {
    const Context ctx(universe, scenario, calibration, options);
    AssessmentResult out;
    out.position_results.resize(universe.positions.size());

    // phase one: everything except fund vehicles
    parallel_for(universe.positions.size(), threads, [&](std::size_t i) {
        const Position& p = universe.positions[i];
        switch (p.asset_class) {
        case AssetClass::Equity:
            out.position_results[i] = reprice_equity(p, ctx);
            break;
        case AssetClass::CorporateBond:
            out.position_results[i] = reprice_corporate_bond(p, ctx);
            break;
        case AssetClass::SovereignBond:
            out.position_results[i] = reprice_sovereign(p, ctx);
            break;
        case AssetClass::Cash:
        case AssetClass::Unclassified:
            out.position_results[i] = reprice_cash(p);
            break;
        case AssetClass::FundVehicle:
            break; // phase two
        }
    });

    out.class_averages =
        compute_class_averages(out.position_results, options.aum_weighted_class_averages);

    // phase two: fund vehicles against the phase-one class averages
    parallel_for(universe.positions.size(), threads, [&](std::size_t i) {
        const Position& p = universe.positions[i];
        if (p.asset_class == AssetClass::FundVehicle) {
            out.position_results[i] = reprice_fund_vehicle(p, ctx, out.class_averages);
        }
    });

    out.warnings = scenario_lint(scenario);
    return out;
}

std::vector<std::string> scenario_lint(const Scenario& scenario) {
    // With convexity capped at 40x duration, the second-order term stays below
    // the first-order term whenever the shock is under 500bp.
    constexpr double kSecondOrderBoundBp = 500.0;
    std::vector<std::string> warnings;
    for (const auto& [seg, bp] : scenario.spread_shock_bp) {
        if (std::abs(bp) >= kSecondOrderBoundBp) {
            warnings.push_back("spread shock for " + std::string(to_string(seg)) + " (" +
                               text::format_double(bp) +
                               "bp) can let the convexity term dominate the duration term");
        }
    }
    for (const auto& [country, curve] : scenario.sovereign_curves) {
        for (std::size_t i = 0; i < kTenorCount; ++i) {
            if (std::abs(curve.shocks_bp[i]) >= kSecondOrderBoundBp) {
                warnings.push_back("sovereign shock for " + country + " tenor " +
                                   std::to_string(i + 1) + " (" +
                                   text::format_double(curve.shocks_bp[i]) +
                                   "bp) can let the convexity term dominate the duration term");
                break;
            }
        }
    }
    for (const auto& [seg, shock] : scenario.equity_shock) {
        if (shock < -1.0) {
            warnings.push_back("equity shock for " + std::string(to_string(seg)) +
                               " exceeds a full loss of value");
        }
    }
    return warnings;
}

} // namespace trisk::risk
