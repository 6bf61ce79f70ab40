#include "trisk/aggregate.hpp"

#include "trisk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace trisk::aggregate {

namespace {

double normalize_zero(double v) {
    return v == 0.0 ? 0.0 : v;
}

} // namespace

// ---------------------------------------------------------------------------
// Fund-level rollup
// ---------------------------------------------------------------------------

FundResult aggregate_fund(std::span<const PositionResult> fund_positions, const Fund& fund,
                          const Universe& universe, const Scenario& scenario) {
    FundResult out;
    out.fund_id = fund.id;
    out.labels = fund.labels;

    double aum = 0.0;
    double loss_eur = 0.0;
    double ci_weighted = 0.0;
    double ci_aum = 0.0;
    std::map<AssetClass, double> class_aum;
    for (const PositionResult& r : fund_positions) {
        aum += r.market_value;
        loss_eur += r.loss_eur;
        class_aum[r.asset_class] += r.market_value;
        if (r.carbon_intensity) {
            ci_weighted += r.market_value * *r.carbon_intensity;
            ci_aum += r.market_value;
        }
    }
    out.aum = aum;
    out.loss_eur = normalize_zero(loss_eur);
    if (aum > 0.0) {
        out.loss_fraction = normalize_zero(loss_eur / aum);
        for (const auto& [cls, mv] : class_aum) {
            out.class_weights[cls] = mv / aum;
        }
        out.ci_coverage = ci_aum / aum;
    } else {
        out.zero_aum = true;
        out.loss_fraction = 0.0;
    }
    if (ci_aum > 0.0) {
        out.weighted_ci = ci_weighted / ci_aum;
    }
    out.cprs_share = cprs_share(fund_positions, scenario);
    if (!scenario.tec_tac_table.empty()) {
        const TecTacResult g = tec_tac(fund_positions, universe, scenario.tec_tac_table);
        out.tec = g.tec;
        out.tac = g.tac;
        out.eligible_share = g.eligible_share;
        out.adj_tec = g.adj_tec;
        out.adj_tac = g.adj_tac;
    }
    return out;
}

std::vector<FundResult> aggregate_funds(const Universe& universe,
                                        std::span<const PositionResult> results,
                                        const Scenario& scenario) {
    std::vector<FundResult> out;
    out.reserve(universe.funds.size());
    std::size_t i = 0;
    for (const Fund& fund : universe.funds) {
        const std::size_t begin = i;
        while (i < results.size() && results[i].fund_id == fund.id) {
            ++i;
        }
        out.push_back(
            aggregate_fund(results.subspan(begin, i - begin), fund, universe, scenario));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Distribution statistics
// ---------------------------------------------------------------------------

double tail_mean(std::span<const double> values, double pct, bool worst) {
    if (values.empty()) {
        throw EmptySample("tail_mean of empty series");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const auto k = static_cast<std::size_t>(
        std::ceil(pct / 100.0 * static_cast<double>(sorted.size())));
    const std::size_t count = std::max<std::size_t>(1, std::min(k, sorted.size()));
    double sum = 0.0;
    if (worst) {
        for (std::size_t i = 0; i < count; ++i) {
            sum += sorted[i];
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            sum += sorted[sorted.size() - 1 - i];
        }
    }
    return sum / static_cast<double>(count);
}

DistributionStats sector_distribution(std::span<const double> fund_losses) {
    if (fund_losses.empty()) {
        throw EmptySample("sector_distribution over an empty fund set");
    }
    std::vector<double> sorted(fund_losses.begin(), fund_losses.end());
    std::sort(sorted.begin(), sorted.end());

    DistributionStats s;
    s.count = sorted.size();
    s.mean = stats::mean(sorted);
    s.median = stats::percentile_sorted(sorted, 0.5);
    s.skewness = stats::sample_skewness(sorted);
    s.p1 = stats::percentile_sorted(sorted, 0.01);
    s.p5 = stats::percentile_sorted(sorted, 0.05);
    s.p10 = stats::percentile_sorted(sorted, 0.10);
    s.p50 = s.median;
    s.worst1_mean = tail_mean(sorted, 1.0, true);
    s.worst5_mean = tail_mean(sorted, 5.0, true);
    s.best1_mean = tail_mean(sorted, 1.0, false);
    return s;
}

// ---------------------------------------------------------------------------
// Tail characterization
// ---------------------------------------------------------------------------

std::vector<InstrumentObservation>
unique_instrument_observations(std::span<const PositionResult> results, AssetClass asset_class) {
    std::set<std::string> seen;
    std::vector<InstrumentObservation> out;
    for (const PositionResult& r : results) {
        if (r.asset_class != asset_class || !seen.insert(r.isin).second) {
            continue;
        }
        InstrumentObservation o;
        o.isin = r.isin;
        o.asset_class = r.asset_class;
        o.loss_fraction = r.loss_fraction;
        o.carbon_intensity = r.carbon_intensity;
        o.cqs = r.cqs;
        o.duration = r.duration;
        o.volatility_pct = r.volatility_pct;
        o.segment = r.segment;
        o.country = r.country;
        o.style = r.style;
        out.push_back(std::move(o));
    }
    return out;
}

namespace {

std::vector<std::pair<std::string, std::size_t>>
top_counts(const std::map<std::string, std::size_t>& counts, std::size_t limit) {
    std::vector<std::pair<std::string, std::size_t>> out(counts.begin(), counts.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (out.size() > limit) {
        out.resize(limit);
    }
    return out;
}

} // namespace

CharacterizationRow characterize_tail(std::span<const InstrumentObservation> subset,
                                      double percentile, TailDirection direction) {
    if (subset.empty()) {
        throw EmptySample("characterize_tail over an empty subset");
    }
    std::vector<InstrumentObservation> sorted(subset.begin(), subset.end());
    std::sort(sorted.begin(), sorted.end(),
              [direction](const InstrumentObservation& a, const InstrumentObservation& b) {
                  if (a.loss_fraction != b.loss_fraction) {
                      return direction == TailDirection::Worst ? a.loss_fraction < b.loss_fraction
                                                               : a.loss_fraction > b.loss_fraction;
                  }
                  return a.isin < b.isin;
              });
    const auto k = static_cast<std::size_t>(
        std::ceil(percentile / 100.0 * static_cast<double>(sorted.size())));
    const std::size_t count = std::max<std::size_t>(1, std::min(k, sorted.size()));

    CharacterizationRow row;
    row.count = count;
    double loss_sum = 0.0, ci_sum = 0.0, cqs_sum = 0.0, dur_sum = 0.0, vol_sum = 0.0;
    std::size_t ci_n = 0, cqs_n = 0, dur_n = 0, vol_n = 0;
    std::map<std::string, std::size_t> segments, countries, styles;
    for (std::size_t i = 0; i < count; ++i) {
        const InstrumentObservation& o = sorted[i];
        loss_sum += o.loss_fraction;
        if (o.carbon_intensity) {
            ci_sum += *o.carbon_intensity;
            ++ci_n;
        }
        if (o.cqs) {
            cqs_sum += *o.cqs;
            ++cqs_n;
        }
        if (o.duration) {
            dur_sum += *o.duration;
            ++dur_n;
        }
        if (o.volatility_pct) {
            vol_sum += *o.volatility_pct;
            ++vol_n;
        }
        if (o.segment && *o.segment != Segment::Sov && *o.segment != Segment::Fund) {
            ++segments[std::string(to_string(*o.segment))];
        }
        if (o.country) {
            ++countries[*o.country];
        }
        if (o.style) {
            ++styles[std::string(to_string(*o.style))];
        }
    }
    row.mean_loss = loss_sum / static_cast<double>(count);
    if (ci_n > 0) row.mean_ci = ci_sum / static_cast<double>(ci_n);
    if (cqs_n > 0) row.mean_cqs = cqs_sum / static_cast<double>(cqs_n);
    if (dur_n > 0) row.mean_duration = dur_sum / static_cast<double>(dur_n);
    if (vol_n > 0) row.mean_volatility = vol_sum / static_cast<double>(vol_n);
    row.top_segments = top_counts(segments, 3);
    row.top_countries = top_counts(countries, 4);
    row.top_styles = top_counts(styles, 2);
    return row;
}

// ---------------------------------------------------------------------------
// Greenness and sector metrics
// ---------------------------------------------------------------------------

std::optional<double> cprs_share(std::span<const PositionResult> positions,
                                 const Scenario& scenario) {
    if (!scenario.has_cprs_map) {
        return std::nullopt;
    }
    double total = 0.0;
    double flagged = 0.0;
    for (const PositionResult& r : positions) {
        total += r.market_value;
        if (r.segment && scenario.cprs_groups.count(*r.segment) != 0) {
            flagged += r.market_value;
        }
    }
    if (total <= 0.0) {
        return 0.0;
    }
    return flagged / total;
}

double counterfactual_loss(const std::map<AssetClass, double>& class_losses,
                           const std::map<AssetClass, double>& target_weights) {
    double weight_sum = 0.0;
    for (const auto& [cls, w] : target_weights) {
        weight_sum += w;
    }
    if (std::abs(weight_sum - 1.0) > 1e-9) {
        throw WeightSumError("target weights sum to " + std::to_string(weight_sum) +
                             ", expected 1");
    }
    double loss = 0.0;
    for (const auto& [cls, w] : target_weights) {
        auto it = class_losses.find(cls);
        if (it != class_losses.end()) {
            loss += w * it->second;
        }
    }
    return loss;
}

TecTacResult tec_tac(std::span<const PositionResult> positions, const Universe& universe,
                     const std::map<std::string, TecTacCoefficients>& table) {
    if (table.empty()) {
        throw EmptyTable("TEC/TAC coefficient table is empty");
    }
    TecTacResult out;
    double total = 0.0;
    double eligible = 0.0;
    double tec_sum = 0.0;
    double tac_sum = 0.0;
    for (const PositionResult& r : positions) {
        total += r.market_value;
        if (r.asset_class != AssetClass::Equity && r.asset_class != AssetClass::CorporateBond) {
            continue;
        }
        const Instrument* inst = universe.find_instrument(r.isin);
        if (inst == nullptr) {
            continue;
        }
        const Counterparty* cp = universe.find_counterparty(inst->counterparty_id);
        if (cp == nullptr || cp->raw_nace.empty()) {
            continue; // no NACE code, not eligible
        }
        eligible += r.market_value;
        if (auto code = nace_class_code(cp->raw_nace)) {
            if (auto it = table.find(*code); it != table.end()) {
                tec_sum += r.market_value * it->second.tec;
                tac_sum += r.market_value * it->second.tac;
            }
        }
    }
    if (total <= 0.0) {
        return out;
    }
    out.tec = tec_sum / total;
    out.tac = tac_sum / total;
    out.eligible_share = eligible / total;
    if (out.eligible_share > 0.0) {
        out.adj_tec = out.tec / out.eligible_share;
        out.adj_tac = out.tac / out.eligible_share;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Portfolio rollup
// ---------------------------------------------------------------------------

PortfolioStats portfolio_stats(std::span<const PositionResult> positions,
                               const Universe& universe, const Scenario& scenario) {
    PortfolioStats s;
    struct ClassAcc {
        double aum = 0.0;
        double loss = 0.0;
        double ci_weighted = 0.0;
        double ci_aum = 0.0;
    };
    std::map<AssetClass, ClassAcc> acc;
    double ci_weighted = 0.0;
    double ci_aum = 0.0;
    for (const PositionResult& r : positions) {
        s.aum += r.market_value;
        s.loss_eur += r.loss_eur;
        ClassAcc& a = acc[r.asset_class];
        a.aum += r.market_value;
        a.loss += r.loss_eur;
        if (r.carbon_intensity) {
            ci_weighted += r.market_value * *r.carbon_intensity;
            ci_aum += r.market_value;
            a.ci_weighted += r.market_value * *r.carbon_intensity;
            a.ci_aum += r.market_value;
        }
    }
    s.loss_eur = normalize_zero(s.loss_eur);
    if (s.aum > 0.0) {
        s.loss_fraction = normalize_zero(s.loss_eur / s.aum);
        s.ci_coverage = ci_aum / s.aum;
    }
    if (ci_aum > 0.0) {
        s.weighted_ci = ci_weighted / ci_aum;
    }
    for (const auto& [cls, a] : acc) {
        ClassStats cs;
        cs.aum = a.aum;
        cs.weight = s.aum > 0.0 ? a.aum / s.aum : 0.0;
        cs.loss_fraction = a.aum > 0.0 ? normalize_zero(a.loss / a.aum) : 0.0;
        if (a.ci_aum > 0.0) {
            cs.weighted_ci = a.ci_weighted / a.ci_aum;
        }
        s.by_class[cls] = cs;
    }
    s.cprs = cprs_share(positions, scenario);
    if (!scenario.tec_tac_table.empty()) {
        s.greenness = tec_tac(positions, universe, scenario.tec_tac_table);
    }
    return s;
}

} // namespace trisk::aggregate
