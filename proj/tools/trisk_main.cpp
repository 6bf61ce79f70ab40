// trisk: transition-risk portfolio assessment CLI
//
// Subcommands:
//   calibrate  fit per-segment lognormal carbon-intensity distributions
//   assess     reprice a universe under a scenario and write results
//   report     render characterization/distribution/histogram tables

#include "trisk/aggregate.hpp"
#include "trisk/calib.hpp"
#include "trisk/errors.hpp"
#include "trisk/ingest.hpp"
#include "trisk/model.hpp"
#include "trisk/report.hpp"
#include "trisk/risk.hpp"
#include "trisk/text.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct CalibrateArgs {
    std::string counterparties;
    std::string out;
};

struct AssessArgs {
    std::string positions;
    std::string instruments;
    std::string counterparties;
    std::string funds;
    std::string scenario_sectors;
    std::string scenario_sovereigns;
    std::string scenario_json;
    std::string calibration;
    std::string cprs;
    std::string tec_tac;
    std::string out;
    bool strict_paper_sign = false;
    bool empirical_cdf = false;
    bool aum_weighted_class_averages = false;
    int threads = 1;
    double scale_factor = 0.0; // > 0 enables the extrapolated-loss report field
};

struct ReportArgs {
    std::string results;
    std::string out;
    std::string label;
    double tail_pct = 1.0;
    double bin_width_pct = 0.5;
    double bin_lo_pct = -25.0;
    double bin_hi_pct = 0.0;
};

// Fill options the user did not pass from a JSON config file.
void apply_config(const std::string& config_path, CLI::App* sub,
                  const std::map<std::string, std::string*>& strings,
                  const std::map<std::string, bool*>& bools) {
    if (config_path.empty()) {
        return;
    }
    std::ifstream in(config_path);
    if (!in) {
        throw trisk::IoError("cannot open config file " + config_path);
    }
    ordered_json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw trisk::SchemaError("invalid JSON config " + config_path + ": " + e.what());
    }
    for (const auto& [key, target] : strings) {
        if (doc.contains(key) && sub->get_option("--" + key)->count() == 0) {
            *target = doc.at(key).get<std::string>();
        }
    }
    for (const auto& [key, target] : bools) {
        if (doc.contains(key) && sub->get_option("--" + key)->count() == 0) {
            *target = doc.at(key).get<bool>();
        }
    }
}

int cmd_calibrate(const CalibrateArgs& args) {
    const auto counterparties = trisk::ingest::load_counterparties(args.counterparties);
    const auto samples = trisk::calib::sample_sets_from_counterparties(counterparties);
    if (samples.empty()) {
        std::cerr << "error: no counterparties with positive carbon intensity and a segment\n";
        return kExitValidation;
    }
    trisk::CalibrationSet set;
    for (const auto& sample : samples) {
        const auto cal = trisk::calib::calibrate_segment(sample);
        if (cal.n < 5) {
            std::cerr << "warning: segment " << trisk::to_string(cal.segment)
                      << " calibrated from only " << cal.n << " observation(s)\n";
        }
        set.by_segment[cal.segment] = cal;
    }
    trisk::calib::write_calibration_csv(args.out, set);
    std::cout << "calibrated " << set.by_segment.size() << " segment(s) -> " << args.out << "\n";
    return kExitOk;
}

trisk::report::ConfigEcho config_echo(const AssessArgs& args) {
    trisk::report::ConfigEcho echo;
    echo.strings = {
        {"positions", args.positions},
        {"instruments", args.instruments},
        {"counterparties", args.counterparties},
        {"funds", args.funds},
        {"scenario-sectors", args.scenario_sectors},
        {"scenario-sovereigns", args.scenario_sovereigns},
        {"scenario-json", args.scenario_json},
        {"calibration", args.calibration},
        {"cprs", args.cprs},
        {"tec-tac", args.tec_tac},
    };
    if (args.scale_factor > 0.0) {
        echo.strings.emplace_back("scale-factor", trisk::text::format_double(args.scale_factor));
    }
    echo.flags = {
        {"strict-paper-sign", args.strict_paper_sign},
        {"empirical-cdf", args.empirical_cdf},
        {"aum-weighted-class-averages", args.aum_weighted_class_averages},
    };
    return echo;
}

int cmd_assess(const AssessArgs& args) {
    std::vector<std::string> warnings;

    trisk::Universe universe = trisk::ingest::load_universe(
        args.positions, args.instruments, args.counterparties,
        args.funds.empty() ? std::nullopt : std::make_optional<fs::path>(args.funds));

    trisk::Scenario scenario;
    if (!args.scenario_json.empty()) {
        scenario = trisk::ingest::load_scenario_json(args.scenario_json, &warnings);
    } else {
        scenario =
            trisk::ingest::load_scenario(args.scenario_sectors, args.scenario_sovereigns,
                                         &warnings);
    }
    if (!args.cprs.empty()) {
        trisk::ingest::load_cprs_map(args.cprs, scenario);
    }
    if (!args.tec_tac.empty()) {
        trisk::ingest::load_tec_tac_table(args.tec_tac, scenario);
    }

    const trisk::ValidationReport validation = trisk::validate_universe(universe);
    if (!validation.accepted()) {
        std::cerr << "validation failed: " << validation.summary() << "\n";
        return kExitValidation;
    }

    trisk::CalibrationSet calibration = trisk::calib::default_calibration();
    if (!args.calibration.empty()) {
        calibration = calibration.overridden_by(trisk::calib::read_calibration_csv(args.calibration));
    }
    if (args.empirical_cdf) {
        for (const auto& sample :
             trisk::calib::sample_sets_from_counterparties(universe.counterparties)) {
            auto it = calibration.by_segment.find(sample.segment);
            if (it != calibration.by_segment.end()) {
                it->second.sample = sample.values;
                std::sort(it->second.sample.begin(), it->second.sample.end());
            } else {
                calibration.by_segment[sample.segment] = trisk::calib::calibrate_segment(sample);
            }
        }
    }

    trisk::risk::Options options;
    options.strict_paper_sign = args.strict_paper_sign;
    options.empirical_cdf = args.empirical_cdf;
    options.aum_weighted_class_averages = args.aum_weighted_class_averages;

    const trisk::risk::AssessmentResult assessment = trisk::risk::run_assessment(
        universe, scenario, calibration, options, args.threads);
    for (const std::string& w : assessment.warnings) {
        warnings.push_back(w);
    }

    const auto fund_results =
        trisk::aggregate::aggregate_funds(universe, assessment.position_results, scenario);
    std::vector<double> losses;
    losses.reserve(fund_results.size());
    for (const auto& f : fund_results) {
        losses.push_back(f.loss_fraction);
        if (f.zero_aum) {
            warnings.push_back("fund " + f.fund_id + " has zero AuM; loss reported as 0");
        }
    }

    trisk::report::SectorReportInputs inputs;
    inputs.config = config_echo(args);
    inputs.scenario_name = scenario.name;
    inputs.validation = &validation;
    inputs.universe = &universe;
    inputs.sector =
        trisk::aggregate::portfolio_stats(assessment.position_results, universe, scenario);
    inputs.class_averages = assessment.class_averages;
    inputs.distribution = trisk::aggregate::sector_distribution(losses);
    inputs.warnings = warnings;
    if (args.scale_factor > 0.0) {
        inputs.scale_factor = args.scale_factor;
    }

    fs::create_directories(args.out);
    const fs::path out(args.out);
    trisk::report::write_position_results_csv(out / "position_results.csv",
                                              assessment.position_results);
    trisk::report::write_fund_results_csv(out / "fund_results.csv", fund_results);
    trisk::report::write_atomic(out / "sector_report.json",
                                trisk::report::sector_report_json(inputs));

    ordered_json config;
    for (const auto& [key, value] : inputs.config.strings) {
        config[key] = value;
    }
    for (const auto& [key, value] : inputs.config.flags) {
        config[key] = value;
    }
    trisk::report::write_atomic(out / "run_config.json", config.dump(2) + "\n");

    std::cout << "assessed " << universe.positions.size() << " positions across "
              << universe.funds.size() << " funds; sector loss "
              << trisk::text::format_fixed2(inputs.sector.loss_fraction * 100.0) << "% -> "
              << args.out << "\n";
    return kExitOk;
}

int cmd_report(const ReportArgs& args) {
    const fs::path results(args.results);
    const fs::path positions_csv = results / "position_results.csv";
    const fs::path funds_csv = results / "fund_results.csv";
    if (!fs::exists(positions_csv) || !fs::exists(funds_csv)) {
        throw trisk::IoError("results directory " + args.results +
                             " lacks position_results.csv/fund_results.csv (run assess first)");
    }
    const auto position_results = trisk::report::read_position_results_csv(positions_csv);
    const auto fund_results = trisk::report::read_fund_results_csv(funds_csv);

    trisk::report::ReportOptions options;
    options.tail_pct = args.tail_pct;
    options.bin_width_pct = args.bin_width_pct;
    options.bin_lo_pct = args.bin_lo_pct;
    options.bin_hi_pct = args.bin_hi_pct;
    if (!args.label.empty()) {
        options.label = args.label;
    }

    const fs::path out = args.out.empty() ? results : fs::path(args.out);
    fs::create_directories(out);

    trisk::report::write_atomic(
        out / "characterization.csv",
        trisk::report::characterization_csv(position_results, options.tail_pct));
    trisk::report::write_atomic(out / "distribution.csv",
                                trisk::report::distribution_csv(fund_results, options));
    trisk::report::write_atomic(out / "histogram.csv",
                                trisk::report::histogram_csv(fund_results, options));
    trisk::report::write_atomic(out / "tec_tac.csv",
                                trisk::report::tec_tac_csv(fund_results, options));

    if (options.label) {
        std::size_t subset_count = 0;
        for (const auto& f : fund_results) {
            if (std::find(f.labels.begin(), f.labels.end(), *options.label) != f.labels.end()) {
                ++subset_count;
            }
        }
        if (subset_count == 0) {
            std::cout << "no funds carry label '" << *options.label
                      << "'; comparison table skipped\n";
        } else {
            trisk::report::write_atomic(
                out / ("comparison_" + *options.label + ".csv"),
                trisk::report::comparison_csv(position_results, fund_results, *options.label));
        }
    }

    std::cout << "report tables written to " << out.string() << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"transition-risk analytics for ISIN-level investment portfolios"};
    app.require_subcommand(1);

    CalibrateArgs cal_args;
    AssessArgs assess_args;
    ReportArgs report_args;
    std::string config_path;

    CLI::App* cal = app.add_subcommand("calibrate", "fit per-segment carbon-intensity models");
    cal->add_option("--counterparties", cal_args.counterparties, "counterparty CSV")->required();
    cal->add_option("--out", cal_args.out, "output calibration CSV")->required();

    CLI::App* assess = app.add_subcommand("assess", "reprice a universe under a scenario");
    assess->add_option("--config", config_path, "JSON config with option defaults")
        ->envname("TRISK_CONFIG");
    assess->add_option("--positions", assess_args.positions, "positions CSV");
    assess->add_option("--instruments", assess_args.instruments, "instruments CSV");
    assess->add_option("--counterparties", assess_args.counterparties, "counterparties CSV");
    assess->add_option("--funds", assess_args.funds, "optional funds CSV (AuM, labels)");
    assess->add_option("--scenario-sectors", assess_args.scenario_sectors,
                       "sector shock CSV (bucket, equity %, spread bp)");
    assess->add_option("--scenario-sovereigns", assess_args.scenario_sovereigns,
                       "sovereign yield-shock CSV");
    assess->add_option("--scenario-json", assess_args.scenario_json,
                       "JSON scenario bundle (alternative to the two CSVs)");
    assess->add_option("--calibration", assess_args.calibration,
                       "calibration CSV overriding the shipped defaults");
    assess->add_option("--cprs", assess_args.cprs, "CPRS bucket map CSV");
    assess->add_option("--tec-tac", assess_args.tec_tac, "TEC/TAC coefficient CSV");
    assess->add_option("--out", assess_args.out, "output directory")->required();
    assess->add_flag("--strict-paper-sign", assess_args.strict_paper_sign,
                     "convexity adds to bond losses instead of mitigating them");
    assess->add_flag("--empirical-cdf", assess_args.empirical_cdf,
                     "quantile carbon intensities against the sample CDF");
    assess->add_flag("--aum-weighted-class-averages", assess_args.aum_weighted_class_averages,
                     "market-value-weighted class averages for fund vehicles");
    assess->add_option("--threads", assess_args.threads, "parallelism degree")
        ->check(CLI::PositiveNumber);
    assess->add_option("--scale-factor", assess_args.scale_factor,
                       "extrapolation factor for the scaled-loss report field");

    CLI::App* rep = app.add_subcommand("report", "render tables from assess outputs");
    rep->add_option("--results", report_args.results, "assess output directory")->required();
    rep->add_option("--out", report_args.out, "table output directory (defaults to --results)");
    rep->add_option("--label", report_args.label, "fund label selecting a subset");
    rep->add_option("--tail-pct", report_args.tail_pct, "tail size for characterizations")
        ->check(CLI::PositiveNumber);
    rep->add_option("--bin-width-pct", report_args.bin_width_pct, "histogram bin width");
    rep->add_option("--bin-lo-pct", report_args.bin_lo_pct, "histogram lower bound");
    rep->add_option("--bin-hi-pct", report_args.bin_hi_pct, "histogram upper bound");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitIo;
    }

    try {
        if (cal->parsed()) {
            return cmd_calibrate(cal_args);
        }
        if (assess->parsed()) {
            apply_config(config_path, assess,
                         {{"positions", &assess_args.positions},
                          {"instruments", &assess_args.instruments},
                          {"counterparties", &assess_args.counterparties},
                          {"funds", &assess_args.funds},
                          {"scenario-sectors", &assess_args.scenario_sectors},
                          {"scenario-sovereigns", &assess_args.scenario_sovereigns},
                          {"scenario-json", &assess_args.scenario_json},
                          {"calibration", &assess_args.calibration},
                          {"cprs", &assess_args.cprs},
                          {"tec-tac", &assess_args.tec_tac}},
                         {{"strict-paper-sign", &assess_args.strict_paper_sign},
                          {"empirical-cdf", &assess_args.empirical_cdf},
                          {"aum-weighted-class-averages",
                           &assess_args.aum_weighted_class_averages}});
            if (assess_args.positions.empty() || assess_args.instruments.empty() ||
                assess_args.counterparties.empty()) {
                std::cerr << "error: --positions, --instruments and --counterparties are "
                             "required (directly or via --config)\n";
                return kExitIo;
            }
            if (assess_args.scenario_json.empty() && (assess_args.scenario_sectors.empty() ||
                                                      assess_args.scenario_sovereigns.empty())) {
                std::cerr << "error: provide --scenario-json or both --scenario-sectors and "
                             "--scenario-sovereigns\n";
                return kExitIo;
            }
            return cmd_assess(assess_args);
        }
        if (rep->parsed()) {
            return cmd_report(report_args);
        }
    } catch (const trisk::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const trisk::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
