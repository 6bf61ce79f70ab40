#include "trisk/model.hpp"

#include "trisk/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace trisk {

// ---------------------------------------------------------------------------
// AssetClass
// ---------------------------------------------------------------------------

std::string_view to_string(AssetClass c) {
    switch (c) {
    case AssetClass::Equity: return "Equity";
    case AssetClass::CorporateBond: return "CorporateBond";
    case AssetClass::SovereignBond: return "SovereignBond";
    case AssetClass::FundVehicle: return "FundVehicle";
    case AssetClass::Cash: return "Cash";
    case AssetClass::Unclassified: return "Unclassified";
    }
    return "Unclassified";
}

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return out;
}

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    return out;
}

} // namespace

std::optional<AssetClass> asset_class_from_string(std::string_view s) {
    const std::string k = lower(s);
    if (k == "equity" || k == "equities") return AssetClass::Equity;
    if (k == "corporatebond" || k == "corporate_bond" || k == "corporate bonds" ||
        k == "corporate bond")
        return AssetClass::CorporateBond;
    if (k == "sovereignbond" || k == "sovereign_bond" || k == "sovereign debt" ||
        k == "sovereign bond")
        return AssetClass::SovereignBond;
    if (k == "fundvehicle" || k == "fund_vehicle" || k == "other fund vehicles" ||
        k == "fund vehicle")
        return AssetClass::FundVehicle;
    if (k == "cash") return AssetClass::Cash;
    if (k == "unclassified" || k == "not classified") return AssetClass::Unclassified;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// InvestmentStyle
// ---------------------------------------------------------------------------

StyleWeights style_weights(InvestmentStyle s) {
    switch (s) {
    case InvestmentStyle::Equities: return {0.85, 0.05, 0.05, 0.05};
    case InvestmentStyle::MixedEquities: return {0.65, 0.15, 0.15, 0.05};
    case InvestmentStyle::MixedBonds: return {0.25, 0.35, 0.35, 0.05};
    case InvestmentStyle::Bonds: return {0.00, 0.75, 0.20, 0.05};
    case InvestmentStyle::GovernmentDebt: return {0.00, 0.20, 0.75, 0.05};
    case InvestmentStyle::Others: return {0.25, 0.35, 0.35, 0.05};
    }
    return {0.25, 0.35, 0.35, 0.05};
}

std::string_view to_string(InvestmentStyle s) {
    switch (s) {
    case InvestmentStyle::Equities: return "Equities";
    case InvestmentStyle::MixedEquities: return "MixedEquities";
    case InvestmentStyle::MixedBonds: return "MixedBonds";
    case InvestmentStyle::Bonds: return "Bonds";
    case InvestmentStyle::GovernmentDebt: return "GovernmentDebt";
    case InvestmentStyle::Others: return "Others";
    }
    return "Others";
}

std::optional<InvestmentStyle> style_from_string(std::string_view s) {
    const std::string k = lower(s);
    if (k == "equities") return InvestmentStyle::Equities;
    if (k == "mixedequities" || k == "mixed equities") return InvestmentStyle::MixedEquities;
    if (k == "mixedbonds" || k == "mixed bonds") return InvestmentStyle::MixedBonds;
    if (k == "bonds") return InvestmentStyle::Bonds;
    if (k == "governmentdebt" || k == "government debt") return InvestmentStyle::GovernmentDebt;
    if (k == "others" || k == "other") return InvestmentStyle::Others;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Segment
// ---------------------------------------------------------------------------

namespace {

constexpr std::array<Segment, kSegmentCount> kSegments = {
    Segment::A01,     Segment::A02_A03, Segment::B05_B09, Segment::C10_C12, Segment::C13_C18,
    Segment::C19,     Segment::C20,     Segment::C21_C22, Segment::C23,     Segment::C24_C25,
    Segment::C26_C28, Segment::C29_C30, Segment::C31_C33, Segment::D35,     Segment::E36_E39,
    Segment::F41_F43, Segment::G45_G47, Segment::H49,     Segment::H50,     Segment::H51,
    Segment::H52_H53, Segment::L68,     Segment::Other,   Segment::Sov,     Segment::Fund,
};

} // namespace

std::string_view to_string(Segment s) {
    switch (s) {
    case Segment::A01: return "A01";
    case Segment::A02_A03: return "A02-A03";
    case Segment::B05_B09: return "B05-B09";
    case Segment::C10_C12: return "C10-C12";
    case Segment::C13_C18: return "C13-C18";
    case Segment::C19: return "C19";
    case Segment::C20: return "C20";
    case Segment::C21_C22: return "C21-C22";
    case Segment::C23: return "C23";
    case Segment::C24_C25: return "C24-C25";
    case Segment::C26_C28: return "C26-C28";
    case Segment::C29_C30: return "C29-C30";
    case Segment::C31_C33: return "C31-C33";
    case Segment::D35: return "D35";
    case Segment::E36_E39: return "E36-E39";
    case Segment::F41_F43: return "F41-F43";
    case Segment::G45_G47: return "G45-G47";
    case Segment::H49: return "H49";
    case Segment::H50: return "H50";
    case Segment::H51: return "H51";
    case Segment::H52_H53: return "H52-H53";
    case Segment::L68: return "L68";
    case Segment::Other: return "Other";
    case Segment::Sov: return "SOV";
    case Segment::Fund: return "FUND";
    }
    return "Other";
}

std::span<const Segment> all_segments() {
    return {kSegments.data(), kSegments.size()};
}

std::span<const Segment> sector_buckets() {
    return {kSegments.data(), kSectorBucketCount};
}

std::optional<Segment> segment_from_label(std::string_view label) {
    const std::string k = upper(label);
    for (Segment s : kSegments) {
        if (k == upper(to_string(s))) {
            return s;
        }
    }
    if (k == "OTHER NACE") return Segment::Other;
    if (k == "SOVEREIGN DEBT") return Segment::Sov;
    if (k == "OTHER FUND VEHICLES") return Segment::Fund;
    return std::nullopt;
}

namespace {

Segment bucket_for_division(char section, int division) {
    switch (section) {
    case 'A':
        if (division == 1) return Segment::A01;
        if (division == 2 || division == 3) return Segment::A02_A03;
        return Segment::Other;
    case 'B':
        if (division >= 5 && division <= 9) return Segment::B05_B09;
        return Segment::Other;
    case 'C':
        if (division >= 10 && division <= 12) return Segment::C10_C12;
        if (division >= 13 && division <= 18) return Segment::C13_C18;
        if (division == 19) return Segment::C19;
        if (division == 20) return Segment::C20;
        if (division == 21 || division == 22) return Segment::C21_C22;
        if (division == 23) return Segment::C23;
        if (division == 24 || division == 25) return Segment::C24_C25;
        if (division >= 26 && division <= 28) return Segment::C26_C28;
        if (division == 29 || division == 30) return Segment::C29_C30;
        if (division >= 31 && division <= 33) return Segment::C31_C33;
        return Segment::Other;
    case 'D':
        return division == 35 ? Segment::D35 : Segment::Other;
    case 'E':
        return (division >= 36 && division <= 39) ? Segment::E36_E39 : Segment::Other;
    case 'F':
        return (division >= 41 && division <= 43) ? Segment::F41_F43 : Segment::Other;
    case 'G':
        return (division >= 45 && division <= 47) ? Segment::G45_G47 : Segment::Other;
    case 'H':
        if (division == 49) return Segment::H49;
        if (division == 50) return Segment::H50;
        if (division == 51) return Segment::H51;
        if (division == 52 || division == 53) return Segment::H52_H53;
        return Segment::Other;
    case 'L':
        return division == 68 ? Segment::L68 : Segment::Other;
    default:
        return Segment::Other;
    }
}

// Sections inferred from the division number alone when no letter is given.
char section_for_division(int division) {
    if (division >= 1 && division <= 3) return 'A';
    if (division >= 5 && division <= 9) return 'B';
    if (division >= 10 && division <= 33) return 'C';
    if (division == 35) return 'D';
    if (division >= 36 && division <= 39) return 'E';
    if (division >= 41 && division <= 43) return 'F';
    if (division >= 45 && division <= 47) return 'G';
    if (division >= 49 && division <= 53) return 'H';
    if (division == 68) return 'L';
    return '\0';
}

} // namespace

Segment resolve_segment(std::string_view raw_nace) {
    if (auto exact = segment_from_label(raw_nace)) {
        return *exact;
    }
    std::string code = upper(raw_nace);
    std::size_t i = 0;
    while (i < code.size() && std::isspace(static_cast<unsigned char>(code[i]))) {
        ++i;
    }
    char section = '\0';
    if (i < code.size() && std::isalpha(static_cast<unsigned char>(code[i]))) {
        section = code[i];
        ++i;
    }
    // first run of digits is the two-digit division
    std::string digits;
    for (; i < code.size(); ++i) {
        if (std::isdigit(static_cast<unsigned char>(code[i]))) {
            digits.push_back(code[i]);
            if (digits.size() == 2) {
                break;
            }
        } else if (!digits.empty() || (code[i] != '.' && code[i] != ' ')) {
            break;
        }
    }
    if (digits.empty()) {
        return Segment::Other;
    }
    int division = 0;
    std::from_chars(digits.data(), digits.data() + digits.size(), division);
    if (section == '\0') {
        section = section_for_division(division);
        if (section == '\0') {
            return Segment::Other;
        }
    }
    return bucket_for_division(section, division);
}

std::optional<std::string> nace_class_code(std::string_view raw_nace) {
    std::string digits;
    for (char ch : raw_nace) {
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            digits.push_back(ch);
        }
    }
    if (digits.size() < 4) {
        return std::nullopt;
    }
    return digits.substr(0, 2) + "." + digits.substr(2, 2);
}

// ---------------------------------------------------------------------------
// Fund
// ---------------------------------------------------------------------------

bool Fund::has_label(std::string_view label) const {
    return std::find(labels.begin(), labels.end(), label) != labels.end();
}

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

double Scenario::equity_shock_for(Segment s) const {
    if (auto it = equity_shock.find(s); it != equity_shock.end()) {
        return it->second;
    }
    if (auto it = equity_shock.find(Segment::Other); it != equity_shock.end()) {
        return it->second;
    }
    return 0.0;
}

double Scenario::spread_shock_bp_for(Segment s) const {
    if (auto it = spread_shock_bp.find(s); it != spread_shock_bp.end()) {
        return it->second;
    }
    if (auto it = spread_shock_bp.find(Segment::Other); it != spread_shock_bp.end()) {
        return it->second;
    }
    return 0.0;
}

SovereignCurve Scenario::average_curve() const {
    SovereignCurve avg{};
    if (sovereign_curves.empty()) {
        return avg;
    }
    for (const auto& [country, curve] : sovereign_curves) {
        for (std::size_t t = 0; t < kTenorCount; ++t) {
            avg.shocks_bp[t] += curve.shocks_bp[t];
        }
    }
    for (double& v : avg.shocks_bp) {
        v /= static_cast<double>(sovereign_curves.size());
    }
    return avg;
}

// ---------------------------------------------------------------------------
// CalibrationSet
// ---------------------------------------------------------------------------

const SectorCalibration* CalibrationSet::find(Segment s) const {
    auto it = by_segment.find(s);
    return it == by_segment.end() ? nullptr : &it->second;
}

CalibrationSet CalibrationSet::overridden_by(const CalibrationSet& other) const {
    CalibrationSet merged = *this;
    for (const auto& [seg, cal] : other.by_segment) {
        auto it = merged.by_segment.find(seg);
        if (it == merged.by_segment.end()) {
            merged.by_segment[seg] = cal;
            continue;
        }
        // keep base segment means when the override does not carry them
        SectorCalibration combined = cal;
        if (!combined.mean_volatility) combined.mean_volatility = it->second.mean_volatility;
        if (!combined.mean_cqs) combined.mean_cqs = it->second.mean_cqs;
        if (!combined.mean_duration) combined.mean_duration = it->second.mean_duration;
        it->second = std::move(combined);
    }
    return merged;
}

// ---------------------------------------------------------------------------
// BackfillFlags
// ---------------------------------------------------------------------------

bool BackfillFlags::any() const {
    return ci || volatility || cqs || duration || style || segment || nonpositive_ci ||
           unclassified;
}

std::string BackfillFlags::to_csv_field() const {
    std::string out;
    auto add = [&out](std::string_view tag) {
        if (!out.empty()) {
            out += '|';
        }
        out += tag;
    };
    if (ci) add("ci");
    if (volatility) add("vol");
    if (cqs) add("cqs");
    if (duration) add("dur");
    if (style) add("style");
    if (segment) add("segment");
    if (nonpositive_ci) add("nonpositive-ci");
    if (unclassified) add("unclassified");
    return out;
}

BackfillFlags BackfillFlags::from_csv_field(std::string_view s) {
    BackfillFlags f;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t end = s.find('|', start);
        if (end == std::string_view::npos) {
            end = s.size();
        }
        const std::string_view tag = s.substr(start, end - start);
        if (tag == "ci") f.ci = true;
        else if (tag == "vol") f.volatility = true;
        else if (tag == "cqs") f.cqs = true;
        else if (tag == "dur") f.duration = true;
        else if (tag == "style") f.style = true;
        else if (tag == "segment") f.segment = true;
        else if (tag == "nonpositive-ci") f.nonpositive_ci = true;
        else if (tag == "unclassified") f.unclassified = true;
        if (end == s.size()) {
            break;
        }
        start = end + 1;
    }
    return f;
}

// ---------------------------------------------------------------------------
// Universe
// ---------------------------------------------------------------------------

const Instrument* Universe::find_instrument(const std::string& isin) const {
    auto it = instruments.find(isin);
    return it == instruments.end() ? nullptr : &it->second;
}

const Counterparty* Universe::find_counterparty(const std::string& id) const {
    auto it = counterparties.find(id);
    return it == counterparties.end() ? nullptr : &it->second;
}

const Fund* Universe::find_fund(const std::string& id) const {
    auto it = std::lower_bound(funds.begin(), funds.end(), id,
                               [](const Fund& f, const std::string& k) { return f.id < k; });
    if (it != funds.end() && it->id == id) {
        return &*it;
    }
    return nullptr;
}

void Universe::finalize() {
    std::sort(positions.begin(), positions.end(), [](const Position& a, const Position& b) {
        if (a.fund_id != b.fund_id) return a.fund_id < b.fund_id;
        return a.isin < b.isin;
    });
    std::sort(funds.begin(), funds.end(),
              [](const Fund& a, const Fund& b) { return a.id < b.id; });
    for (const Position& p : positions) {
        if (!find_fund(p.fund_id)) {
            Fund f;
            f.id = p.fund_id;
            auto it = std::lower_bound(funds.begin(), funds.end(), f,
                                       [](const Fund& a, const Fund& b) { return a.id < b.id; });
            funds.insert(it, std::move(f));
        }
    }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

bool ValidationReport::accepted() const {
    return fatal_count() == 0;
}

std::size_t ValidationReport::fatal_count() const {
    return static_cast<std::size_t>(
        std::count_if(findings.begin(), findings.end(),
                      [](const Finding& f) { return f.severity == Severity::Fatal; }));
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    os << findings.size() << " finding(s), " << fatal_count() << " fatal";
    for (const Finding& f : findings) {
        os << "\n  [" << (f.severity == Severity::Fatal ? "fatal" : "warn") << "] " << f.code
           << " (" << f.subject << "): " << f.message;
    }
    return os.str();
}

namespace {

bool requires_instrument(AssetClass c) {
    return c == AssetClass::Equity || c == AssetClass::CorporateBond ||
           c == AssetClass::SovereignBond || c == AssetClass::FundVehicle;
}

} // namespace

ValidationReport validate_universe(const Universe& u) {
    ValidationReport report;
    auto add = [&report](Severity sev, std::string code, std::string subject,
                         std::string message) {
        report.findings.push_back(
            {sev, std::move(code), std::move(subject), std::move(message)});
    };

    for (const Position& p : u.positions) {
        if (p.market_value < 0.0) {
            add(Severity::Fatal, "negative-market-value", p.fund_id + "/" + p.isin,
                "position market value is negative");
        }
        if (requires_instrument(p.asset_class)) {
            const Instrument* inst = u.find_instrument(p.isin);
            if (inst == nullptr) {
                add(Severity::Fatal, "dangling-instrument", p.fund_id + "/" + p.isin,
                    "position references an unknown ISIN");
                continue;
            }
            if (p.asset_class == AssetClass::SovereignBond && !inst->country.has_value()) {
                add(Severity::Fatal, "sovereign-missing-country", p.isin,
                    "sovereign position has no country code");
            }
        }
    }

    for (const auto& [isin, inst] : u.instruments) {
        if (!inst.counterparty_id.empty() && u.find_counterparty(inst.counterparty_id) == nullptr) {
            add(Severity::Fatal, "dangling-counterparty", isin,
                "instrument references unknown counterparty '" + inst.counterparty_id + "'");
        }
        if (inst.cqs && (*inst.cqs < 1 || *inst.cqs > 6)) {
            add(Severity::Fatal, "cqs-out-of-range", isin,
                "CQS " + std::to_string(*inst.cqs) + " outside [1,6]");
        }
        if (inst.maturity_years && *inst.maturity_years < 0.0) {
            add(Severity::Fatal, "negative-maturity", isin, "maturity is negative");
        }
    }

    for (const auto& [id, cp] : u.counterparties) {
        if (cp.carbon_intensity && *cp.carbon_intensity < 0.0) {
            add(Severity::Warning, "negative-carbon-intensity", id,
                "carbon intensity below zero; treated as bottom quantile");
        }
        // cycles within the bounded walk self -> parent -> ultimate parent
        bool cycle = false;
        if (cp.parent_id && *cp.parent_id == id) cycle = true;
        if (cp.ultimate_parent_id && *cp.ultimate_parent_id == id) cycle = true;
        if (cp.parent_id && !cycle) {
            if (const Counterparty* parent = u.find_counterparty(*cp.parent_id)) {
                if (parent->parent_id && *parent->parent_id == id) cycle = true;
                if (parent->ultimate_parent_id && *parent->ultimate_parent_id == id) cycle = true;
            } else {
                add(Severity::Warning, "dangling-parent", id,
                    "parent id '" + *cp.parent_id + "' not in universe");
            }
        }
        if (cp.ultimate_parent_id && !cycle && *cp.ultimate_parent_id != id &&
            u.find_counterparty(*cp.ultimate_parent_id) == nullptr) {
            add(Severity::Warning, "dangling-parent", id,
                "ultimate parent id '" + *cp.ultimate_parent_id + "' not in universe");
        }
        if (cycle) {
            add(Severity::Fatal, "parent-cycle", id, "parent chain loops back to the counterparty");
        }
    }

    std::map<std::string, double> fund_totals;
    for (const Position& p : u.positions) {
        fund_totals[p.fund_id] += p.market_value;
    }
    for (const Fund& f : u.funds) {
        if (!f.declared_aum) {
            continue;
        }
        auto it = fund_totals.find(f.id);
        const double total = it == fund_totals.end() ? 0.0 : it->second;
        const double denom = std::max(std::abs(*f.declared_aum), 1.0);
        if (std::abs(total - *f.declared_aum) / denom > 1e-6) {
            add(Severity::Warning, "aum-mismatch", f.id,
                "declared AuM differs from the sum of position market values");
        }
    }

    return report;
}

} // namespace trisk
