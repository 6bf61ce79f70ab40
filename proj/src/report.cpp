#include "trisk/report.hpp"

#include "trisk/errors.hpp"
#include "trisk/ingest.hpp"
#include "trisk/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace trisk::report {

using nlohmann::ordered_json;

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot write " + tmp.string());
        }
        out << content;
        if (!out) {
            throw IoError("short write to " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                      ec.message());
    }
}

// ---------------------------------------------------------------------------
// Assessment outputs
// ---------------------------------------------------------------------------

namespace {

constexpr std::string_view kPositionHeader =
    "fund_id,isin,asset_class,market_value,loss_fraction,loss_eur,ci_m,vol_m,cqs_m,"
    "carbon_intensity,segment,country,style,cqs,duration,convexity,volatility_pct,flags";

constexpr std::string_view kFundHeader =
    "fund_id,aum,loss_fraction,loss_eur,weighted_ci,ci_coverage,w_equity,w_corporate_bond,"
    "w_sovereign_bond,w_fund_vehicle,w_cash,w_unclassified,cprs_share,eligible_share,tec,tac,"
    "adj_tec,adj_tac,labels";

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') {
            out += "\"\"";
        } else {
            out.push_back(ch);
        }
    }
    out += '"';
    return out;
}

double class_weight(const std::map<AssetClass, double>& weights, AssetClass cls) {
    auto it = weights.find(cls);
    return it == weights.end() ? 0.0 : it->second;
}

} // namespace

void write_position_results_csv(const std::filesystem::path& path,
                                std::span<const PositionResult> results) {
    std::ostringstream os;
    os << kPositionHeader << '\n';
    for (const PositionResult& r : results) {
        os << csv_escape(r.fund_id) << ',' << csv_escape(r.isin) << ',' << to_string(r.asset_class)
           << ',' << text::format_double(r.market_value) << ','
           << text::format_double(r.loss_fraction) << ',' << text::format_double(r.loss_eur) << ','
           << text::format_double(r.multipliers.ci_m) << ','
           << text::format_opt(r.multipliers.vol_m) << ',' << text::format_opt(r.multipliers.cqs_m)
           << ',' << text::format_opt(r.carbon_intensity) << ','
           << (r.segment ? std::string(to_string(*r.segment)) : std::string()) << ','
           << (r.country ? *r.country : std::string()) << ','
           << (r.style ? std::string(to_string(*r.style)) : std::string()) << ','
           << text::format_opt(r.cqs) << ',' << text::format_opt(r.duration) << ','
           << text::format_opt(r.convexity) << ',' << text::format_opt(r.volatility_pct) << ','
           << r.flags.to_csv_field() << '\n';
    }
    write_atomic(path, os.str());
}

void write_fund_results_csv(const std::filesystem::path& path,
                            std::span<const aggregate::FundResult> funds) {
    std::ostringstream os;
    os << kFundHeader << '\n';
    for (const aggregate::FundResult& f : funds) {
        std::string labels;
        for (const std::string& label : f.labels) {
            if (!labels.empty()) {
                labels += '|';
            }
            labels += label;
        }
        os << csv_escape(f.fund_id) << ',' << text::format_double(f.aum) << ','
           << text::format_double(f.loss_fraction) << ',' << text::format_double(f.loss_eur) << ','
           << text::format_opt(f.weighted_ci) << ',' << text::format_double(f.ci_coverage) << ','
           << text::format_double(class_weight(f.class_weights, AssetClass::Equity)) << ','
           << text::format_double(class_weight(f.class_weights, AssetClass::CorporateBond)) << ','
           << text::format_double(class_weight(f.class_weights, AssetClass::SovereignBond)) << ','
           << text::format_double(class_weight(f.class_weights, AssetClass::FundVehicle)) << ','
           << text::format_double(class_weight(f.class_weights, AssetClass::Cash)) << ','
           << text::format_double(class_weight(f.class_weights, AssetClass::Unclassified)) << ','
           << text::format_opt(f.cprs_share) << ',' << text::format_opt(f.eligible_share) << ','
           << text::format_opt(f.tec) << ',' << text::format_opt(f.tac) << ','
           << text::format_opt(f.adj_tec) << ',' << text::format_opt(f.adj_tac) << ','
           << csv_escape(labels) << '\n';
    }
    write_atomic(path, os.str());
}

std::string sector_report_json(const SectorReportInputs& in) {
    ordered_json doc;
    ordered_json config;
    for (const auto& [key, value] : in.config.strings) {
        config[key] = value;
    }
    for (const auto& [key, value] : in.config.flags) {
        config[key] = value;
    }
    doc["config"] = config;
    doc["scenario"] = in.scenario_name;

    if (in.universe != nullptr) {
        doc["universe"] = {
            {"funds", in.universe->funds.size()},
            {"positions", in.universe->positions.size()},
            {"instruments", in.universe->instruments.size()},
            {"counterparties", in.universe->counterparties.size()},
        };
    }
    if (in.validation != nullptr) {
        ordered_json findings = ordered_json::array();
        for (const Finding& f : in.validation->findings) {
            findings.push_back({{"severity", f.severity == Severity::Fatal ? "fatal" : "warning"},
                                {"code", f.code},
                                {"subject", f.subject},
                                {"message", f.message}});
        }
        doc["validation"] = {{"accepted", in.validation->accepted()},
                             {"fatal", in.validation->fatal_count()},
                             {"findings", findings}};
    }

    ordered_json sector;
    sector["aum_eur"] = in.sector.aum;
    sector["loss_eur"] = in.sector.loss_eur;
    sector["loss_fraction"] = in.sector.loss_fraction;
    if (in.sector.weighted_ci) {
        sector["weighted_carbon_intensity"] = *in.sector.weighted_ci;
    }
    sector["carbon_intensity_coverage"] = in.sector.ci_coverage;
    if (in.sector.cprs) {
        sector["cprs_share"] = *in.sector.cprs;
    }
    ordered_json by_class;
    for (const auto& [cls, stats] : in.sector.by_class) {
        ordered_json c;
        c["aum_eur"] = stats.aum;
        c["weight"] = stats.weight;
        c["loss_fraction"] = stats.loss_fraction;
        if (stats.weighted_ci) {
            c["weighted_carbon_intensity"] = *stats.weighted_ci;
        }
        by_class[std::string(to_string(cls))] = c;
    }
    sector["by_class"] = by_class;
    if (in.sector.greenness) {
        ordered_json g;
        g["tec"] = in.sector.greenness->tec;
        g["tac"] = in.sector.greenness->tac;
        g["eligible_share"] = in.sector.greenness->eligible_share;
        if (in.sector.greenness->adj_tec) {
            g["adj_tec"] = *in.sector.greenness->adj_tec;
        }
        if (in.sector.greenness->adj_tac) {
            g["adj_tac"] = *in.sector.greenness->adj_tac;
        }
        sector["greenness"] = g;
    }
    doc["sector"] = sector;

    doc["class_averages"] = {
        {"equity", in.class_averages.equity},
        {"corporate_bond", in.class_averages.corporate},
        {"sovereign_bond", in.class_averages.sovereign},
        {"equity_instruments", in.class_averages.equity_n},
        {"corporate_bond_instruments", in.class_averages.corporate_n},
        {"sovereign_bond_instruments", in.class_averages.sovereign_n},
    };

    doc["distribution"] = {
        {"count", in.distribution.count},
        {"mean", in.distribution.mean},
        {"median", in.distribution.median},
        {"skewness", in.distribution.skewness},
        {"p1", in.distribution.p1},
        {"p5", in.distribution.p5},
        {"p10", in.distribution.p10},
        {"worst1_mean", in.distribution.worst1_mean},
        {"worst5_mean", in.distribution.worst5_mean},
        {"best1_mean", in.distribution.best1_mean},
    };

    if (in.scale_factor) {
        doc["scaled_loss_eur"] = in.sector.loss_eur * *in.scale_factor;
        doc["scale_factor"] = *in.scale_factor;
    }

    doc["warnings"] = in.warnings;
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Reading results back
// ---------------------------------------------------------------------------

namespace {

std::optional<double> opt_cell(const std::string& cell, const std::string& ctx) {
    if (cell.empty()) {
        return std::nullopt;
    }
    return text::parse_double(cell, ctx);
}

} // namespace

std::vector<PositionResult> read_position_results_csv(const std::filesystem::path& path) {
    const ingest::CsvTable t = ingest::read_csv(path);
    const std::string ctx = path.string();
    auto col = [&](std::string_view name) { return t.column(name, ctx); };
    const std::size_t c_fund = col("fund_id"), c_isin = col("isin"), c_class = col("asset_class"),
                      c_mv = col("market_value"), c_lf = col("loss_fraction"),
                      c_le = col("loss_eur"), c_cim = col("ci_m"), c_volm = col("vol_m"),
                      c_cqsm = col("cqs_m"), c_ci = col("carbon_intensity"),
                      c_seg = col("segment"), c_country = col("country"), c_style = col("style"),
                      c_cqs = col("cqs"), c_dur = col("duration"), c_conv = col("convexity"),
                      c_vol = col("volatility_pct"), c_flags = col("flags");
    std::vector<PositionResult> out;
    out.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        PositionResult r;
        r.fund_id = row[c_fund];
        r.isin = row[c_isin];
        const auto cls = asset_class_from_string(row[c_class]);
        if (!cls) {
            throw SchemaError("unknown asset class '" + row[c_class] + "' in " + ctx);
        }
        r.asset_class = *cls;
        r.market_value = text::parse_double(row[c_mv], ctx);
        r.loss_fraction = text::parse_double(row[c_lf], ctx);
        r.loss_eur = text::parse_double(row[c_le], ctx);
        r.multipliers.ci_m = text::parse_double(row[c_cim], ctx);
        r.multipliers.vol_m = opt_cell(row[c_volm], ctx);
        r.multipliers.cqs_m = opt_cell(row[c_cqsm], ctx);
        r.carbon_intensity = opt_cell(row[c_ci], ctx);
        if (!row[c_seg].empty()) {
            r.segment = segment_from_label(row[c_seg]);
        }
        if (!row[c_country].empty()) {
            r.country = row[c_country];
        }
        if (!row[c_style].empty()) {
            r.style = style_from_string(row[c_style]);
        }
        r.cqs = opt_cell(row[c_cqs], ctx);
        r.duration = opt_cell(row[c_dur], ctx);
        r.convexity = opt_cell(row[c_conv], ctx);
        r.volatility_pct = opt_cell(row[c_vol], ctx);
        r.flags = BackfillFlags::from_csv_field(row[c_flags]);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<aggregate::FundResult> read_fund_results_csv(const std::filesystem::path& path) {
    const ingest::CsvTable t = ingest::read_csv(path);
    const std::string ctx = path.string();
    auto col = [&](std::string_view name) { return t.column(name, ctx); };
    const std::size_t c_fund = col("fund_id"), c_aum = col("aum"), c_lf = col("loss_fraction"),
                      c_le = col("loss_eur"), c_ci = col("weighted_ci"),
                      c_cov = col("ci_coverage"), c_weq = col("w_equity"),
                      c_wcb = col("w_corporate_bond"), c_wgb = col("w_sovereign_bond"),
                      c_wfv = col("w_fund_vehicle"), c_wcash = col("w_cash"),
                      c_wun = col("w_unclassified"), c_cprs = col("cprs_share"),
                      c_elig = col("eligible_share"), c_tec = col("tec"), c_tac = col("tac"),
                      c_atec = col("adj_tec"), c_atac = col("adj_tac"), c_labels = col("labels");
    std::vector<aggregate::FundResult> out;
    out.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        aggregate::FundResult f;
        f.fund_id = row[c_fund];
        f.aum = text::parse_double(row[c_aum], ctx);
        f.loss_fraction = text::parse_double(row[c_lf], ctx);
        f.loss_eur = text::parse_double(row[c_le], ctx);
        f.weighted_ci = opt_cell(row[c_ci], ctx);
        f.ci_coverage = text::parse_double(row[c_cov], ctx);
        f.class_weights[AssetClass::Equity] = text::parse_double(row[c_weq], ctx);
        f.class_weights[AssetClass::CorporateBond] = text::parse_double(row[c_wcb], ctx);
        f.class_weights[AssetClass::SovereignBond] = text::parse_double(row[c_wgb], ctx);
        f.class_weights[AssetClass::FundVehicle] = text::parse_double(row[c_wfv], ctx);
        f.class_weights[AssetClass::Cash] = text::parse_double(row[c_wcash], ctx);
        f.class_weights[AssetClass::Unclassified] = text::parse_double(row[c_wun], ctx);
        f.cprs_share = opt_cell(row[c_cprs], ctx);
        f.eligible_share = opt_cell(row[c_elig], ctx);
        f.tec = opt_cell(row[c_tec], ctx);
        f.tac = opt_cell(row[c_tac], ctx);
        f.adj_tec = opt_cell(row[c_atec], ctx);
        f.adj_tac = opt_cell(row[c_atac], ctx);
        const std::string& labels = row[c_labels];
        std::size_t start = 0;
        while (start <= labels.size() && !labels.empty()) {
            std::size_t end = labels.find('|', start);
            if (end == std::string::npos) {
                end = labels.size();
            }
            if (end > start) {
                f.labels.push_back(labels.substr(start, end - start));
            }
            if (end == labels.size()) {
                break;
            }
            start = end + 1;
        }
        f.zero_aum = f.aum <= 0.0;
        out.push_back(std::move(f));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Human-readable tables
// ---------------------------------------------------------------------------

namespace {

std::string pct2(double fraction) {
    return text::format_fixed2(fraction * 100.0);
}

std::string opt_fixed2(const std::optional<double>& v) {
    return v ? text::format_fixed2(*v) : std::string("-");
}


std::string join_top(const std::vector<std::pair<std::string, std::size_t>>& top) {
    std::string out;
    for (const auto& [name, count] : top) {
        if (!out.empty()) {
            out += "; ";
        }
        out += name;
    }
    return out.empty() ? std::string("-") : out;
}

void characterization_row(std::ostringstream& os, std::string_view subset, AssetClass cls,
                          const aggregate::CharacterizationRow& row) {
    const bool is_equity = cls == AssetClass::Equity;
    const bool is_bond = cls == AssetClass::CorporateBond || cls == AssetClass::SovereignBond;
    const bool is_fund = cls == AssetClass::FundVehicle;
    os << subset << ',' << to_string(cls) << ',' << row.count << ',' << pct2(row.mean_loss) << ','
       << opt_fixed2(row.mean_ci) << ','
       << (cls == AssetClass::SovereignBond ? join_top(row.top_countries)
                                            : join_top(row.top_segments))
       << ',' << (is_bond ? opt_fixed2(row.mean_cqs) : std::string("-")) << ','
       << (is_bond ? opt_fixed2(row.mean_duration) : std::string("-")) << ','
       << (is_equity ? opt_fixed2(row.mean_volatility) : std::string("-")) << ','
       << (is_fund ? join_top(row.top_styles) : std::string("-")) << '\n';
}

} // namespace

std::string characterization_csv(std::span<const PositionResult> results, double tail_pct) {
    std::ostringstream os;
    os << "subset,asset_class,count,mtm_loss_pct,carbon_intensity,nace_or_country,cqs,"
          "duration_years,volatility_pct,investment_style\n";
    const std::array<AssetClass, 4> classes = {AssetClass::Equity, AssetClass::CorporateBond,
                                               AssetClass::SovereignBond, AssetClass::FundVehicle};
    char subset_label[64];
    for (AssetClass cls : classes) {
        const auto observations = aggregate::unique_instrument_observations(results, cls);
        if (observations.empty()) {
            continue;
        }
        std::snprintf(subset_label, sizeof(subset_label), "worst_%g_pct", tail_pct);
        characterization_row(os, subset_label, cls,
                             aggregate::characterize_tail(observations, tail_pct,
                                                          aggregate::TailDirection::Worst));
        std::snprintf(subset_label, sizeof(subset_label), "best_%g_pct", tail_pct);
        characterization_row(os, subset_label, cls,
                             aggregate::characterize_tail(observations, tail_pct,
                                                          aggregate::TailDirection::Best));
        characterization_row(os, "all", cls,
                             aggregate::characterize_tail(observations, 100.0,
                                                          aggregate::TailDirection::Worst));
    }
    return os.str();
}

namespace {

void distribution_row(std::ostringstream& os, std::string_view scope,
                      const aggregate::DistributionStats& d) {
    os << scope << ',' << d.count << ',' << pct2(d.mean) << ',' << pct2(d.median) << ','
       << text::format_fixed2(d.skewness) << ',' << pct2(d.p1) << ',' << pct2(d.p5) << ','
       << pct2(d.p10) << ',' << pct2(d.worst1_mean) << ',' << pct2(d.worst5_mean) << ','
       << pct2(d.best1_mean) << '\n';
}

std::vector<double> fund_losses(std::span<const aggregate::FundResult> funds,
                                const std::optional<std::string>& label) {
    std::vector<double> out;
    for (const aggregate::FundResult& f : funds) {
        if (label && std::find(f.labels.begin(), f.labels.end(), *label) == f.labels.end()) {
            continue;
        }
        out.push_back(f.loss_fraction);
    }
    return out;
}

} // namespace

std::string distribution_csv(std::span<const aggregate::FundResult> funds,
                             const ReportOptions& options) {
    std::ostringstream os;
    os << "scope,funds,mean_pct,median_pct,skewness,p1_pct,p5_pct,p10_pct,worst1_mean_pct,"
          "worst5_mean_pct,best1_mean_pct\n";
    const std::vector<double> all = fund_losses(funds, std::nullopt);
    if (!all.empty()) {
        distribution_row(os, "all", aggregate::sector_distribution(all));
    }
    if (options.label) {
        const std::vector<double> subset = fund_losses(funds, options.label);
        if (!subset.empty()) {
            distribution_row(os, *options.label, aggregate::sector_distribution(subset));
        }
    }
    return os.str();
}

std::string comparison_csv(std::span<const PositionResult> results,
                           std::span<const aggregate::FundResult> funds,
                           const std::string& label) {
    // split positions by fund membership in the labeled subset
    std::set<std::string> subset_funds;
    for (const aggregate::FundResult& f : funds) {
        if (std::find(f.labels.begin(), f.labels.end(), label) != f.labels.end()) {
            subset_funds.insert(f.fund_id);
        }
    }

    struct Acc {
        double aum = 0.0;
        double loss = 0.0;
        double ci_weighted = 0.0;
        double ci_aum = 0.0;
    };
    std::map<AssetClass, Acc> subset_acc, universe_acc;
    double subset_aum = 0.0, subset_loss = 0.0, universe_aum = 0.0, universe_loss = 0.0;
    for (const PositionResult& r : results) {
        const bool in_subset = subset_funds.count(r.fund_id) != 0;
        universe_aum += r.market_value;
        universe_loss += r.loss_eur;
        Acc& ua = universe_acc[r.asset_class];
        ua.aum += r.market_value;
        ua.loss += r.loss_eur;
        if (r.carbon_intensity) {
            ua.ci_weighted += r.market_value * *r.carbon_intensity;
            ua.ci_aum += r.market_value;
        }
        if (in_subset) {
            subset_aum += r.market_value;
            subset_loss += r.loss_eur;
            Acc& sa = subset_acc[r.asset_class];
            sa.aum += r.market_value;
            sa.loss += r.loss_eur;
            if (r.carbon_intensity) {
                sa.ci_weighted += r.market_value * *r.carbon_intensity;
                sa.ci_aum += r.market_value;
            }
        }
    }

    std::ostringstream os;
    os << "asset_class,subset_share_pct,subset_loss_pct,subset_ci,universe_share_pct,"
          "universe_loss_pct,universe_ci\n";
    auto row = [&os](std::string_view name, const Acc* sub, double sub_total, const Acc* uni,
                     double uni_total) {
        auto share = [](const Acc* a, double total) {
            return (a != nullptr && total > 0.0) ? a->aum / total : 0.0;
        };
        auto loss = [](const Acc* a) {
            return (a != nullptr && a->aum > 0.0) ? a->loss / a->aum : 0.0;
        };
        auto ci = [](const Acc* a) -> std::optional<double> {
            if (a == nullptr || a->ci_aum <= 0.0) {
                return std::nullopt;
            }
            return a->ci_weighted / a->ci_aum;
        };
        os << name << ',' << pct2(share(sub, sub_total)) << ',' << pct2(loss(sub)) << ','
           << opt_fixed2(ci(sub)) << ',' << pct2(share(uni, uni_total)) << ',' << pct2(loss(uni))
           << ',' << opt_fixed2(ci(uni)) << '\n';
    };
    for (AssetClass cls : kAllAssetClasses) {
        const auto si = subset_acc.find(cls);
        const auto ui = universe_acc.find(cls);
        if (si == subset_acc.end() && ui == universe_acc.end()) {
            continue;
        }
        row(to_string(cls), si == subset_acc.end() ? nullptr : &si->second, subset_aum,
            ui == universe_acc.end() ? nullptr : &ui->second, universe_aum);
    }

    const double subset_total_loss = subset_aum > 0.0 ? subset_loss / subset_aum : 0.0;
    const double universe_total_loss = universe_aum > 0.0 ? universe_loss / universe_aum : 0.0;
    os << "EntirePortfolio,100.00," << pct2(subset_total_loss) << ",-,100.00,"
       << pct2(universe_total_loss) << ",-\n";

    // universe portfolio re-weighted to the subset's asset-class allocation
    if (subset_aum > 0.0 && universe_aum > 0.0) {
        std::map<AssetClass, double> weights, losses;
        for (const auto& [cls, a] : subset_acc) {
            weights[cls] = a.aum / subset_aum;
        }
        for (const auto& [cls, a] : universe_acc) {
            losses[cls] = a.aum > 0.0 ? a.loss / a.aum : 0.0;
        }
        const double counterfactual = aggregate::counterfactual_loss(losses, weights);
        os << "ComparableAllocation,-,-,-,100.00," << pct2(counterfactual) << ",-\n";
    }

    // worst-1% funds of each universe, by AuM-weighted fund loss
    std::vector<double> subset_fund_losses, universe_fund_losses;
    for (const aggregate::FundResult& f : funds) {
        universe_fund_losses.push_back(f.loss_fraction);
        if (subset_funds.count(f.fund_id) != 0) {
            subset_fund_losses.push_back(f.loss_fraction);
        }
    }
    if (!universe_fund_losses.empty()) {
        const double uni_tail = aggregate::tail_mean(universe_fund_losses, 1.0, true);
        const std::string sub_tail =
            subset_fund_losses.empty()
                ? std::string("-")
                : pct2(aggregate::tail_mean(subset_fund_losses, 1.0, true));
        os << "Worst1pctFunds,-," << sub_tail << ",-,-," << pct2(uni_tail) << ",-\n";
    }
    return os.str();
}

std::string histogram_csv(std::span<const aggregate::FundResult> funds,
                          const ReportOptions& options) {
    const double lo = options.bin_lo_pct / 100.0;
    const double hi = options.bin_hi_pct / 100.0;
    const double width = options.bin_width_pct / 100.0;
    if (!(width > 0.0) || !(hi > lo)) {
        throw DomainError("histogram requires a positive bin width and hi > lo");
    }
    const auto bin_count = static_cast<std::size_t>(std::ceil((hi - lo) / width - 1e-12));
    std::vector<std::size_t> counts(bin_count, 0);
    std::size_t total = 0;
    for (const aggregate::FundResult& f : funds) {
        if (options.label &&
            std::find(f.labels.begin(), f.labels.end(), *options.label) == f.labels.end()) {
            continue;
        }
        double idx_f = (f.loss_fraction - lo) / width;
        auto idx = static_cast<long>(std::floor(idx_f));
        // clamp out-of-range losses into the edge bins so counts conserve
        idx = std::clamp<long>(idx, 0, static_cast<long>(bin_count) - 1);
        ++counts[static_cast<std::size_t>(idx)];
        ++total;
    }
    std::ostringstream os;
    os << "bin_lo_pct,bin_hi_pct,count\n";
    for (std::size_t i = 0; i < bin_count; ++i) {
        const double bin_lo = options.bin_lo_pct + static_cast<double>(i) * options.bin_width_pct;
        const double bin_hi = bin_lo + options.bin_width_pct;
        os << text::format_fixed2(bin_lo) << ',' << text::format_fixed2(bin_hi) << ',' << counts[i]
           << '\n';
    }
    os << "total,," << total << '\n';
    return os.str();
}

namespace {

void tec_tac_row(std::ostringstream& os, std::string_view holder,
                 std::span<const aggregate::FundResult> funds,
                 const std::optional<std::string>& label) {
    double aum = 0.0, tec = 0.0, tac = 0.0, eligible = 0.0;
    bool any = false;
    for (const aggregate::FundResult& f : funds) {
        if (label && std::find(f.labels.begin(), f.labels.end(), *label) == f.labels.end()) {
            continue;
        }
        if (!f.tec || !f.tac || !f.eligible_share) {
            continue;
        }
        any = true;
        aum += f.aum;
        tec += f.aum * *f.tec;
        tac += f.aum * *f.tac;
        eligible += f.aum * *f.eligible_share;
    }
    if (!any || aum <= 0.0) {
        return;
    }
    const double tec_p = tec / aum;
    const double tac_p = tac / aum;
    const double elig_p = eligible / aum;
    os << holder << ',' << pct2(tec_p) << ',' << pct2(tac_p) << ',' << pct2(elig_p) << ','
       << (elig_p > 0.0 ? pct2(tec_p / elig_p) : std::string("-")) << ','
       << (elig_p > 0.0 ? pct2(tac_p / elig_p) : std::string("-")) << '\n';
}

} // namespace

std::string tec_tac_csv(std::span<const aggregate::FundResult> funds,
                        const ReportOptions& options) {
    std::ostringstream os;
    os << "holder,tec_pct,tac_pct,eligible_pct,adj_tec_pct,adj_tac_pct\n";
    tec_tac_row(os, "all", funds, std::nullopt);
    if (options.label) {
        tec_tac_row(os, *options.label, funds, options.label);
    }
    return os.str();
}

} // namespace trisk::report
