#include "trisk/ingest.hpp"

#include "trisk/errors.hpp"
#include "trisk/text.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace trisk::ingest {

namespace {

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    return out;
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::optional<double> parse_opt_double(const std::string& cell, const std::string& context) {
    if (trim(cell).empty()) {
        return std::nullopt;
    }
    return text::parse_double(trim(cell), context);
}

std::optional<std::string> nonempty(const std::string& cell) {
    std::string t = trim(cell);
    if (t.empty()) {
        return std::nullopt;
    }
    return t;
}

} // namespace

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

std::size_t CsvTable::column(std::string_view name, const std::string& context) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    throw SchemaError("missing column '" + std::string(name) + "' in " + context);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line, const std::string& context) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            cells.push_back(cell);
            cell.clear();
        } else {
            cell.push_back(ch);
        }
    }
    if (quoted) {
        throw SchemaError("unterminated quote in " + context);
    }
    cells.push_back(cell);
    return cells;
}

} // namespace

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    CsvTable table;
    std::string line;
    bool first = true;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.ends_with('\r')) {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        auto cells = split_csv_line(line, path.string() + ":" + std::to_string(line_no));
        if (first) {
            for (auto& c : cells) {
                table.header.push_back(trim(c));
            }
            first = false;
        } else {
            if (cells.size() != table.header.size()) {
                throw SchemaError("row " + std::to_string(line_no) + " of " + path.string() +
                                  " has " + std::to_string(cells.size()) + " cells, expected " +
                                  std::to_string(table.header.size()));
            }
            table.rows.push_back(std::move(cells));
        }
    }
    if (first) {
        throw SchemaError("missing header row in " + path.string());
    }
    return table;
}

namespace {

std::string csv_escape(std::string_view field) {
    const bool needs_quotes = field.find_first_of(",\"\n") != std::string_view::npos;
    if (!needs_quotes) {
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

} // namespace

// ---------------------------------------------------------------------------
// Ratings
// ---------------------------------------------------------------------------

namespace {

// Long-term scales, best to worst. Anything at or below the first step-6
// symbol maps to 6.
constexpr std::string_view kFitchScale[] = {
    "AAA", "AA+", "AA", "AA-", "A+", "A", "A-", "BBB+", "BBB", "BBB-", "BB+", "BB", "BB-",
    "B+",  "B",   "B-", "CCC+", "CCC", "CCC-", "CC", "C", "RD", "D",
};
constexpr std::string_view kSpScale[] = {
    "AAA", "AA+", "AA", "AA-", "A+", "A", "A-", "BBB+", "BBB", "BBB-", "BB+", "BB", "BB-",
    "B+",  "B",   "B-", "CCC+", "CCC", "CCC-", "CC", "C", "SD", "D",
};
constexpr std::string_view kMoodysScale[] = {
    "AAA", "AA1", "AA2", "AA3", "A1", "A2", "A3", "BAA1", "BAA2", "BAA3", "BA1", "BA2", "BA3",
    "B1",  "B2",  "B3",  "CAA1", "CAA2", "CAA3", "CA", "C",
};

int step_for_index(std::size_t idx) {
    // 16 notched symbols cover steps 1..5 (three notches each, AAA/Aaa has no
    // notch peers beyond the top bucket); everything beyond maps to 6
    if (idx <= 3) return 1;  // AAA .. AA-
    if (idx <= 6) return 2;  // A+ .. A-
    if (idx <= 9) return 3;  // BBB+ .. BBB-
    if (idx <= 12) return 4; // BB+ .. BB-
    if (idx <= 15) return 5; // B+ .. B-
    return 6;
}

std::span<const std::string_view> scale_for(Agency agency) {
    switch (agency) {
    case Agency::Fitch: return kFitchScale;
    case Agency::SP: return kSpScale;
    case Agency::Moodys: return kMoodysScale;
    }
    return kFitchScale;
}

} // namespace

int rating_to_cqs(std::string_view rating, Agency agency) {
    const std::string key = upper(trim(rating));
    const auto scale = scale_for(agency);
    for (std::size_t i = 0; i < scale.size(); ++i) {
        if (key == scale[i]) {
            return step_for_index(i);
        }
    }
    throw UnknownRating("unrecognized rating '" + std::string(rating) + "'");
}

std::vector<std::string_view> rating_scale(Agency agency) {
    const auto scale = scale_for(agency);
    return {scale.begin(), scale.end()};
}

std::optional<int> parse_rating_cell(std::string_view cell, std::string* note) {
    const std::string t = trim(cell);
    if (t.empty()) {
        return std::nullopt;
    }
    // direct integer CQS
    if (t.find_first_not_of("0123456789") == std::string::npos) {
        return std::stoi(t);
    }
    int worst = 0;
    std::size_t start = 0;
    std::size_t count = 0;
    while (start <= t.size()) {
        std::size_t end = t.find('|', start);
        if (end == std::string::npos) {
            end = t.size();
        }
        const std::string token = trim(t.substr(start, end - start));
        if (!token.empty()) {
            int step = -1;
            const std::string key = upper(token);
            // Moody's symbols are distinctive once upper-cased except the
            // shared top/bottom grades, which agree on the step anyway.
            for (Agency agency : {Agency::Fitch, Agency::SP, Agency::Moodys}) {
                const auto scale = scale_for(agency);
                for (std::size_t i = 0; i < scale.size(); ++i) {
                    if (key == scale[i]) {
                        step = step_for_index(i);
                        break;
                    }
                }
                if (step > 0) {
                    break;
                }
            }
            if (step < 0) {
                throw UnknownRating("unrecognized rating '" + token + "'");
            }
            worst = std::max(worst, step);
            ++count;
        }
        if (end == t.size()) {
            break;
        }
        start = end + 1;
    }
    if (count == 0) {
        return std::nullopt;
    }
    if (note != nullptr && count > 1) {
        *note = "worst-of-" + std::to_string(count) + "-ratings";
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Carbon-intensity backfill
// ---------------------------------------------------------------------------

std::string_view to_string(CiSource s) {
    switch (s) {
    case CiSource::Own: return "own";
    case CiSource::Parent: return "parent";
    case CiSource::UltimateParent: return "ultimate-parent";
    case CiSource::Missing: return "missing";
    }
    return "missing";
}

CiResolution resolve_carbon_intensity(const Counterparty& cp,
                                      const std::map<std::string, Counterparty>& universe) {
    if (cp.carbon_intensity) {
        return {cp.carbon_intensity, CiSource::Own};
    }
    if (cp.parent_id) {
        auto it = universe.find(*cp.parent_id);
        if (it != universe.end() && it->second.carbon_intensity) {
            return {it->second.carbon_intensity, CiSource::Parent};
        }
    }
    if (cp.ultimate_parent_id) {
        auto it = universe.find(*cp.ultimate_parent_id);
        if (it != universe.end() && it->second.carbon_intensity) {
            return {it->second.carbon_intensity, CiSource::UltimateParent};
        }
    }
    return {std::nullopt, CiSource::Missing};
}

// ---------------------------------------------------------------------------
// Countries
// ---------------------------------------------------------------------------

namespace {

const std::map<std::string, std::string>& country_aliases() {
    static const std::map<std::string, std::string> aliases = {
        {"AUSTRIA", "AT"},        {"BELGIUM", "BE"},
        {"BULGARIA", "BG"},       {"CHINA", "CN"},
        {"CROATIA", "HR"},        {"CYPRUS", "CY"},
        {"CZECH REPUBLIC", "CZ"}, {"CZECHIA", "CZ"},
        {"DENMARK", "DK"},        {"ESTONIA", "EE"},
        {"FINLAND", "FI"},        {"FRANCE", "FR"},
        {"GERMANY", "DE"},        {"GREECE", "GR"},
        {"HUNGARY", "HU"},        {"ICELAND", "IS"},
        {"IRELAND", "IE"},        {"ITALY", "IT"},
        {"JAPAN", "JP"},          {"LATVIA", "LV"},
        {"LIECHTENSTEIN", "LI"},  {"LITHUANIA", "LT"},
        {"LUXEMBOURG", "LU"},     {"MALTA", "MT"},
        {"NETHERLANDS", "NL"},    {"NORWAY", "NO"},
        {"POLAND", "PL"},         {"PORTUGAL", "PT"},
        {"ROMANIA", "RO"},        {"SLOVAKIA", "SK"},
        {"SLOVENIA", "SI"},       {"SPAIN", "ES"},
        {"SWEDEN", "SE"},         {"SWITZERLAND", "CH"},
        {"UNITED KINGDOM", "GB"}, {"UNITED STATES", "US"},
        {"AUSTRALIA", "AU"},      {"CANADA", "CA"},
        {"SOUTH KOREA", "KR"},    {"KOREA", "KR"},
        {"MEXICO", "MX"},         {"BRAZIL", "BR"},
        {"INDIA", "IN"},          {"TURKEY", "TR"},
        {"SOUTH AFRICA", "ZA"},   {"NEW ZEALAND", "NZ"},
    };
    return aliases;
}

bool is_iso2(const std::string& s) {
    return s.size() == 2 && std::isalpha(static_cast<unsigned char>(s[0])) &&
           std::isalpha(static_cast<unsigned char>(s[1]));
}

} // namespace

std::optional<std::string> normalize_country(std::string_view raw) {
    const std::string key = upper(trim(raw));
    if (key.empty()) {
        return std::nullopt;
    }
    if (auto it = country_aliases().find(key); it != country_aliases().end()) {
        return it->second;
    }
    if (is_iso2(key)) {
        return key;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Universe files
// ---------------------------------------------------------------------------

std::vector<Position> load_positions(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    const std::string ctx = path.string();
    const std::size_t c_fund = t.column("fund_id", ctx);
    const std::size_t c_isin = t.column("isin", ctx);
    const std::size_t c_class = t.column("asset_class", ctx);
    const std::size_t c_mv = t.column("market_value", ctx);

    std::vector<Position> out;
    out.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        Position p;
        p.fund_id = trim(row[c_fund]);
        p.isin = trim(row[c_isin]);
        const auto cls = asset_class_from_string(trim(row[c_class]));
        if (!cls) {
            throw SchemaError("unknown asset class '" + row[c_class] + "' in " + ctx);
        }
        p.asset_class = *cls;
        p.market_value = text::parse_double(trim(row[c_mv]), ctx);
        if (p.fund_id.empty()) {
            throw SchemaError("empty fund_id in " + ctx);
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::map<std::string, Instrument> load_instruments(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    const std::string ctx = path.string();
    const std::size_t c_isin = t.column("isin", ctx);
    const std::size_t c_cp = t.column("counterparty_id", ctx);
    const std::size_t c_rating = t.column("rating_or_cqs", ctx);
    const std::size_t c_mat = t.column("maturity_years", ctx);
    const std::size_t c_coupon = t.column("coupon", ctx);
    const std::size_t c_vol = t.column("volatility_pct", ctx);
    const std::size_t c_style = t.column("fund_style", ctx);
    const std::size_t c_country = t.column("country", ctx);

    std::map<std::string, Instrument> out;
    for (const auto& row : t.rows) {
        Instrument inst;
        inst.isin = trim(row[c_isin]);
        if (inst.isin.empty()) {
            throw SchemaError("empty isin in " + ctx);
        }
        inst.counterparty_id = trim(row[c_cp]);
        inst.cqs = parse_rating_cell(row[c_rating], &inst.rating_note);
        inst.maturity_years = parse_opt_double(row[c_mat], ctx);
        inst.coupon = parse_opt_double(row[c_coupon], ctx);
        inst.volatility_pct = parse_opt_double(row[c_vol], ctx);
        if (auto style = nonempty(row[c_style])) {
            const auto parsed = style_from_string(*style);
            if (!parsed) {
                throw SchemaError("unknown fund style '" + *style + "' in " + ctx);
            }
            inst.fund_style = parsed;
        }
        if (auto country = nonempty(row[c_country])) {
            const auto iso = normalize_country(*country);
            if (!iso) {
                throw SchemaError("unrecognized country '" + *country + "' in " + ctx);
            }
            inst.country = iso;
        }
        if (!out.emplace(inst.isin, std::move(inst)).second) {
            throw SchemaError("duplicate isin '" + trim(row[c_isin]) + "' in " + ctx);
        }
    }
    return out;
}

std::map<std::string, Counterparty> load_counterparties(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    const std::string ctx = path.string();
    const std::size_t c_id = t.column("id", ctx);
    const std::size_t c_name = t.column("name", ctx);
    const std::size_t c_ci = t.column("carbon_intensity", ctx);
    const std::size_t c_seg = t.column("nace_code_or_country", ctx);
    const std::size_t c_parent = t.column("parent_id", ctx);
    const std::size_t c_ult = t.column("ultimate_parent_id", ctx);

    std::map<std::string, Counterparty> out;
    for (const auto& row : t.rows) {
        Counterparty cp;
        cp.id = trim(row[c_id]);
        if (cp.id.empty()) {
            throw SchemaError("empty counterparty id in " + ctx);
        }
        cp.name = trim(row[c_name]);
        cp.carbon_intensity = parse_opt_double(row[c_ci], ctx);
        if (auto seg = nonempty(row[c_seg])) {
            if (auto iso = normalize_country(*seg)) {
                cp.country = iso;
            } else {
                cp.raw_nace = *seg;
                cp.segment = resolve_segment(*seg);
            }
        }
        cp.parent_id = nonempty(row[c_parent]);
        cp.ultimate_parent_id = nonempty(row[c_ult]);
        if (!out.emplace(cp.id, std::move(cp)).second) {
            throw SchemaError("duplicate counterparty id '" + trim(row[c_id]) + "' in " + ctx);
        }
    }
    return out;
}

std::vector<Fund> load_funds(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    const std::string ctx = path.string();
    const std::size_t c_id = t.column("fund_id", ctx);
    const std::size_t c_aum = t.column("aum", ctx);
    const std::size_t c_labels = t.column("labels", ctx);

    std::vector<Fund> out;
    std::map<std::string, bool> seen;
    for (const auto& row : t.rows) {
        Fund f;
        f.id = trim(row[c_id]);
        if (f.id.empty()) {
            throw SchemaError("empty fund_id in " + ctx);
        }
        if (seen.count(f.id) != 0) {
            throw SchemaError("duplicate fund_id '" + f.id + "' in " + ctx);
        }
        seen[f.id] = true;
        f.declared_aum = parse_opt_double(row[c_aum], ctx);
        const std::string labels = trim(row[c_labels]);
        std::size_t start = 0;
        while (start <= labels.size() && !labels.empty()) {
            std::size_t end = labels.find('|', start);
            if (end == std::string::npos) {
                end = labels.size();
            }
            const std::string label = trim(labels.substr(start, end - start));
            if (!label.empty()) {
                f.labels.push_back(label);
            }
            if (end == labels.size()) {
                break;
            }
            start = end + 1;
        }
        std::sort(f.labels.begin(), f.labels.end());
        out.push_back(std::move(f));
    }
    return out;
}

Universe load_universe(const std::filesystem::path& positions,
                       const std::filesystem::path& instruments,
                       const std::filesystem::path& counterparties,
                       const std::optional<std::filesystem::path>& funds) {
    Universe u;
    u.positions = load_positions(positions);
    u.instruments = load_instruments(instruments);
    u.counterparties = load_counterparties(counterparties);
    if (funds) {
        u.funds = load_funds(*funds);
    }
    u.finalize();
    return u;
}

void write_positions(const std::filesystem::path& path, std::span<const Position> positions) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << "fund_id,isin,asset_class,market_value\n";
    for (const Position& p : positions) {
        out << csv_escape(p.fund_id) << ',' << csv_escape(p.isin) << ',' << to_string(p.asset_class)
            << ',' << text::format_double(p.market_value) << '\n';
    }
}

void write_instruments(const std::filesystem::path& path,
                       const std::map<std::string, Instrument>& instruments) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << "isin,counterparty_id,rating_or_cqs,maturity_years,coupon,volatility_pct,fund_style,"
           "country\n";
    for (const auto& [isin, inst] : instruments) {
        out << csv_escape(isin) << ',' << csv_escape(inst.counterparty_id) << ','
            << (inst.cqs ? std::to_string(*inst.cqs) : std::string()) << ','
            << text::format_opt(inst.maturity_years) << ',' << text::format_opt(inst.coupon) << ','
            << text::format_opt(inst.volatility_pct) << ','
            << (inst.fund_style ? std::string(to_string(*inst.fund_style)) : std::string()) << ','
            << (inst.country ? *inst.country : std::string()) << '\n';
    }
}

void write_counterparties(const std::filesystem::path& path,
                          const std::map<std::string, Counterparty>& counterparties) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << "id,name,carbon_intensity,nace_code_or_country,parent_id,ultimate_parent_id\n";
    for (const auto& [id, cp] : counterparties) {
        std::string segment_field;
        if (cp.country) {
            segment_field = *cp.country;
        } else if (!cp.raw_nace.empty()) {
            segment_field = cp.raw_nace;
        }
        out << csv_escape(id) << ',' << csv_escape(cp.name) << ','
            << text::format_opt(cp.carbon_intensity) << ',' << csv_escape(segment_field) << ','
            << (cp.parent_id ? csv_escape(*cp.parent_id) : std::string()) << ','
            << (cp.ultimate_parent_id ? csv_escape(*cp.ultimate_parent_id) : std::string())
            << '\n';
    }
}

void write_funds(const std::filesystem::path& path, std::span<const Fund> funds) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << "fund_id,aum,labels\n";
    for (const Fund& f : funds) {
        std::string labels;
        for (const std::string& label : f.labels) {
            if (!labels.empty()) {
                labels += '|';
            }
            labels += label;
        }
        out << csv_escape(f.id) << ',' << text::format_opt(f.declared_aum) << ','
            << csv_escape(labels) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Scenario files
// ---------------------------------------------------------------------------

namespace {

void check_scenario_invariants(const Scenario& s, const std::string& context,
                               std::vector<std::string>* warnings) {
    if (s.equity_shock.find(Segment::Other) == s.equity_shock.end() ||
        s.spread_shock_bp.find(Segment::Other) == s.spread_shock_bp.end()) {
        throw DomainError("scenario in " + context + " lacks the 'Other' fallback bucket");
    }
    if (warnings != nullptr) {
        for (const auto& [seg, shock] : s.equity_shock) {
            if (shock > 0.0) {
                warnings->push_back("equity shock for " + std::string(to_string(seg)) +
                                    " is positive (" + text::format_double(shock) + ")");
            }
        }
    }
}

} // namespace

Scenario load_scenario(const std::filesystem::path& sector_file,
                       const std::filesystem::path& sovereign_file,
                       std::vector<std::string>* warnings) {
    Scenario s;
    s.name = sector_file.stem().string();

    {
        const CsvTable t = read_csv(sector_file);
        const std::string ctx = sector_file.string();
        const std::size_t c_bucket = t.column("nace_bucket", ctx);
        const std::size_t c_eq = t.column("equity_pct", ctx);
        const std::size_t c_cs = t.column("spread_bp", ctx);
        for (const auto& row : t.rows) {
            const auto seg = segment_from_label(trim(row[c_bucket]));
            if (!seg) {
                throw SchemaError("unknown NACE bucket '" + row[c_bucket] + "' in " + ctx);
            }
            if (s.equity_shock.count(*seg) != 0) {
                throw DomainError("duplicate bucket '" + row[c_bucket] + "' in " + ctx);
            }
            s.equity_shock[*seg] = text::parse_double(trim(row[c_eq]), ctx) / 100.0;
            s.spread_shock_bp[*seg] = text::parse_double(trim(row[c_cs]), ctx);
        }
    }

    {
        const CsvTable t = read_csv(sovereign_file);
        const std::string ctx = sovereign_file.string();
        const std::size_t c_country = t.column("country", ctx);
        std::array<std::size_t, kTenorCount> tenor_cols{};
        for (std::size_t i = 0; i < 9; ++i) {
            tenor_cols[i] = t.column("y" + std::to_string(i + 1), ctx);
        }
        tenor_cols[9] = t.column("y10plus", ctx);
        for (const auto& row : t.rows) {
            const auto iso = normalize_country(trim(row[c_country]));
            if (!iso) {
                throw SchemaError("unrecognized country '" + row[c_country] + "' in " + ctx);
            }
            if (s.sovereign_curves.count(*iso) != 0) {
                throw DomainError("duplicate country '" + *iso + "' in " + ctx);
            }
            SovereignCurve curve;
            for (std::size_t i = 0; i < kTenorCount; ++i) {
                curve.shocks_bp[i] = text::parse_double(trim(row[tenor_cols[i]]), ctx);
            }
            s.sovereign_curves[*iso] = curve;
        }
    }

    check_scenario_invariants(s, sector_file.string(), warnings);
    return s;
}

Scenario load_scenario_json(const std::filesystem::path& path,
                            std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("invalid JSON in " + path.string() + ": " + e.what());
    }
    const std::string ctx = path.string();

    Scenario s;
    s.name = doc.value("name", path.stem().string());
    if (!doc.contains("equity_shock") || !doc.contains("spread_shock_bp")) {
        throw SchemaError("scenario JSON must contain equity_shock and spread_shock_bp: " + ctx);
    }
    for (const auto& [key, value] : doc.at("equity_shock").items()) {
        const auto seg = segment_from_label(key);
        if (!seg) {
            throw SchemaError("unknown NACE bucket '" + key + "' in " + ctx);
        }
        s.equity_shock[*seg] = value.get<double>();
    }
    for (const auto& [key, value] : doc.at("spread_shock_bp").items()) {
        const auto seg = segment_from_label(key);
        if (!seg) {
            throw SchemaError("unknown NACE bucket '" + key + "' in " + ctx);
        }
        s.spread_shock_bp[*seg] = value.get<double>();
    }
    for (const auto& [key, value] : doc.value("sovereign_curves_bp", nlohmann::json::object()).items()) {
        const auto iso = normalize_country(key);
        if (!iso) {
            throw SchemaError("unrecognized country '" + key + "' in " + ctx);
        }
        if (value.size() != kTenorCount) {
            throw DomainError("sovereign curve for " + key + " must have exactly 10 tenors");
        }
        SovereignCurve curve;
        for (std::size_t i = 0; i < kTenorCount; ++i) {
            curve.shocks_bp[i] = value.at(i).get<double>();
        }
        s.sovereign_curves[*iso] = curve;
    }
    if (doc.contains("cprs_groups")) {
        s.has_cprs_map = true;
        for (const auto& [key, value] : doc.at("cprs_groups").items()) {
            const auto seg = segment_from_label(key);
            if (!seg) {
                throw SchemaError("unknown NACE bucket '" + key + "' in " + ctx);
            }
            s.cprs_groups[*seg] = value.get<std::string>();
        }
    }
    if (doc.contains("tec_tac")) {
        for (const auto& [key, value] : doc.at("tec_tac").items()) {
            s.tec_tac_table[key] = {value.at("tec").get<double>(), value.at("tac").get<double>()};
        }
    }
    check_scenario_invariants(s, ctx, warnings);
    return s;
}

void load_cprs_map(const std::filesystem::path& path, Scenario& scenario) {
    const CsvTable t = read_csv(path);
    const std::string ctx = path.string();
    const std::size_t c_bucket = t.column("nace_bucket", ctx);
    const std::size_t c_group = t.column("cprs_group", ctx);
    scenario.has_cprs_map = true;
    for (const auto& row : t.rows) {
        const auto seg = segment_from_label(trim(row[c_bucket]));
        if (!seg) {
            throw SchemaError("unknown NACE bucket '" + row[c_bucket] + "' in " + ctx);
        }
        const std::string group = trim(row[c_group]);
        if (!group.empty()) {
            scenario.cprs_groups[*seg] = group;
        }
    }
}

void load_tec_tac_table(const std::filesystem::path& path, Scenario& scenario) {
    const CsvTable t = read_csv(path);
    const std::string ctx = path.string();
    const std::size_t c_nace = t.column("nace_class", ctx);
    const std::size_t c_tec = t.column("tec", ctx);
    const std::size_t c_tac = t.column("tac", ctx);
    for (const auto& row : t.rows) {
        const auto code = nace_class_code(trim(row[c_nace]));
        if (!code) {
            throw SchemaError("'" + row[c_nace] + "' is not a 4-digit NACE class in " + ctx);
        }
        scenario.tec_tac_table[*code] = {text::parse_double(trim(row[c_tec]), ctx),
                                         text::parse_double(trim(row[c_tac]), ctx)};
    }
}

} // namespace trisk::ingest
