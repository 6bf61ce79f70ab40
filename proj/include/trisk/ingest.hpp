#pragma once

#include "trisk/model.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace trisk::ingest {

// ---------------------------------------------------------------------------
// Delimited text
// ---------------------------------------------------------------------------

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name; throws SchemaError when absent.
    std::size_t column(std::string_view name, const std::string& context) const;
};

/// Comma-separated UTF-8 text with a mandatory header row. Supports quoted
/// fields with doubled quotes; fields may not span lines.
CsvTable read_csv(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Ratings
// ---------------------------------------------------------------------------

enum class Agency { Fitch, Moodys, SP };

/// Map a long-term agency rating to its credit quality step in [1,6].
/// Throws UnknownRating for symbols not on the agency's scale.
int rating_to_cqs(std::string_view rating, Agency agency);

/// Symbols of an agency's long-term scale, best to worst.
std::vector<std::string_view> rating_scale(Agency agency);

/// Parse an instruments-file rating cell: either a direct integer CQS or one
/// or more agency ratings separated by '|' (worst step wins). Empty -> nullopt.
std::optional<int> parse_rating_cell(std::string_view cell, std::string* note);

// ---------------------------------------------------------------------------
// Carbon-intensity backfill
// ---------------------------------------------------------------------------

enum class CiSource { Own, Parent, UltimateParent, Missing };

std::string_view to_string(CiSource s);

struct CiResolution {
    std::optional<double> value;
    CiSource source = CiSource::Missing;
};

/// First available carbon intensity along self -> parent -> ultimate parent.
CiResolution resolve_carbon_intensity(const Counterparty& cp,
                                      const std::map<std::string, Counterparty>& universe);

// ---------------------------------------------------------------------------
// Countries
// ---------------------------------------------------------------------------

/// ISO 3166-1 alpha-2 normalization with an alias table for country names
/// ("United Kingdom" -> "GB"). Unrecognized names pass through upper-cased
/// two-letter codes; otherwise nullopt.
std::optional<std::string> normalize_country(std::string_view raw);

// ---------------------------------------------------------------------------
// Universe files
// ---------------------------------------------------------------------------

std::vector<Position> load_positions(const std::filesystem::path& path);
std::map<std::string, Instrument> load_instruments(const std::filesystem::path& path);
std::map<std::string, Counterparty> load_counterparties(const std::filesystem::path& path);
std::vector<Fund> load_funds(const std::filesystem::path& path);

Universe load_universe(const std::filesystem::path& positions,
                       const std::filesystem::path& instruments,
                       const std::filesystem::path& counterparties,
                       const std::optional<std::filesystem::path>& funds = std::nullopt);

void write_positions(const std::filesystem::path& path, std::span<const Position> positions);
void write_instruments(const std::filesystem::path& path,
                       const std::map<std::string, Instrument>& instruments);
void write_counterparties(const std::filesystem::path& path,
                          const std::map<std::string, Counterparty>& counterparties);
void write_funds(const std::filesystem::path& path, std::span<const Fund> funds);

// ---------------------------------------------------------------------------
// Scenario files
// ---------------------------------------------------------------------------

/// Sector shocks (bucket, equity %, spread bp) and per-country sovereign
/// curves. Non-fatal oddities (positive equity shocks) land in `warnings`.
Scenario load_scenario(const std::filesystem::path& sector_file,
                       const std::filesystem::path& sovereign_file,
                       std::vector<std::string>* warnings = nullptr);

/// Single-file JSON equivalent of the two scenario CSVs, optionally carrying
/// the CPRS map and TEC/TAC table.
Scenario load_scenario_json(const std::filesystem::path& path,
                            std::vector<std::string>* warnings = nullptr);

void load_cprs_map(const std::filesystem::path& path, Scenario& scenario);
void load_tec_tac_table(const std::filesystem::path& path, Scenario& scenario);

} // namespace trisk::ingest
