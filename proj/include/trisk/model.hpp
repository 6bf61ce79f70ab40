#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace trisk {

// ---------------------------------------------------------------------------
// Asset classes
// ---------------------------------------------------------------------------

enum class AssetClass : std::uint8_t {
    Equity,
    CorporateBond,
    SovereignBond,
    FundVehicle,
    Cash,
    Unclassified,
};

std::string_view to_string(AssetClass c);
std::optional<AssetClass> asset_class_from_string(std::string_view s);

inline constexpr std::array<AssetClass, 6> kAllAssetClasses = {
    AssetClass::Equity,     AssetClass::CorporateBond, AssetClass::SovereignBond,
    AssetClass::FundVehicle, AssetClass::Cash,         AssetClass::Unclassified,
};

// ---------------------------------------------------------------------------
// Investment styles and their representative portfolio weights
// ---------------------------------------------------------------------------

enum class InvestmentStyle : std::uint8_t {
    Equities,
    MixedEquities,
    MixedBonds,
    Bonds,
    GovernmentDebt,
    Others,
};

struct StyleWeights {
    double equity;
    double corporate;
    double sovereign;
    double cash;
};

/// Representative portfolio weights per style. Each row sums to exactly 1.0.
StyleWeights style_weights(InvestmentStyle s);

std::string_view to_string(InvestmentStyle s);
std::optional<InvestmentStyle> style_from_string(std::string_view s);

inline constexpr std::array<InvestmentStyle, 6> kAllStyles = {
    InvestmentStyle::Equities, InvestmentStyle::MixedEquities, InvestmentStyle::MixedBonds,
    InvestmentStyle::Bonds,    InvestmentStyle::GovernmentDebt, InvestmentStyle::Others,
};

// ---------------------------------------------------------------------------
// Economic segments
// ---------------------------------------------------------------------------

/// Canonical economic segments: the 23 NACE buckets of the sector shock table
/// plus the sovereign and fund pools.
enum class Segment : std::uint8_t {
    A01,
    A02_A03,
    B05_B09,
    C10_C12,
    C13_C18,
    C19,
    C20,
    C21_C22,
    C23,
    C24_C25,
    C26_C28,
    C29_C30,
    C31_C33,
    D35,
    E36_E39,
    F41_F43,
    G45_G47,
    H49,
    H50,
    H51,
    H52_H53,
    L68,
    Other,
    Sov,
    Fund,
};

inline constexpr std::size_t kSegmentCount = 25;
inline constexpr std::size_t kSectorBucketCount = 23; // excludes Sov and Fund

std::string_view to_string(Segment s);

/// All 25 segments in canonical order.
std::span<const Segment> all_segments();

/// The 23 sector buckets (NACE buckets plus Other).
std::span<const Segment> sector_buckets();

/// Exact match against canonical bucket labels ("B05-B09", "Other", "SOV", ...).
std::optional<Segment> segment_from_label(std::string_view label);

/// Resolve a raw NACE code ("C20", "H52", "20.14", "3511") to its bucket.
/// Deterministic and idempotent; unresolvable codes map to Segment::Other.
Segment resolve_segment(std::string_view raw_nace);

/// Normalize a raw NACE code to its 4-digit class form "dd.dd" when the code
/// carries class-level detail; nullopt otherwise.
std::optional<std::string> nace_class_code(std::string_view raw_nace);

// ---------------------------------------------------------------------------
// Reference data records
// ---------------------------------------------------------------------------

struct Counterparty {
    std::string id;
    std::string name;
    /// tCO2e per million USD revenue (sovereigns mapped onto the same scale).
    std::optional<double> carbon_intensity;
    /// NACE bucket when the raw segment field held a NACE code.
    std::optional<Segment> segment;
    /// The raw NACE code as reported, for class-level (4-digit) lookups.
    std::string raw_nace;
    /// ISO 3166-1 alpha-2 code when the raw segment field held a country.
    std::optional<std::string> country;
    std::optional<std::string> parent_id;
    std::optional<std::string> ultimate_parent_id;
};

struct Instrument {
    std::string isin;
    std::string counterparty_id;
    std::optional<int> cqs; // 1..6
    std::optional<double> maturity_years;
    std::optional<double> coupon; // decimal per annum
    std::optional<double> volatility_pct; // % annualized
    std::optional<InvestmentStyle> fund_style;
    std::optional<std::string> country; // ISO2, sovereigns
    /// How the CQS was derived when several agency ratings were supplied.
    std::string rating_note;
};

struct Position {
    std::string fund_id;
    std::string isin; // empty for cash and unclassified book entries
    AssetClass asset_class = AssetClass::Unclassified;
    double market_value = 0.0; // EUR
};

struct Fund {
    std::string id;
    std::optional<double> declared_aum;
    std::vector<std::string> labels;

    bool has_label(std::string_view label) const;
};

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

inline constexpr std::size_t kTenorCount = 10; // tenors 1..9 and 10+

struct SovereignCurve {
    std::array<double, kTenorCount> shocks_bp{};
};

struct TecTacCoefficients {
    double tec = 0.0;
    double tac = 0.0;
};

struct Scenario {
    std::string name;
    /// Equity price shock as a signed fraction (negative = loss).
    std::map<Segment, double> equity_shock;
    /// Corporate spread shock in basis points.
    std::map<Segment, double> spread_shock_bp;
    /// Per-country yield shock curves, keyed by ISO2 code.
    std::map<std::string, SovereignCurve> sovereign_curves;
    /// NACE buckets flagged as climate-policy-relevant, with their group name.
    std::map<Segment, std::string> cprs_groups;
    bool has_cprs_map = false;
    /// 4-digit NACE class ("35.11") to greenness/transition coefficients.
    std::map<std::string, TecTacCoefficients> tec_tac_table;

    double equity_shock_for(Segment s) const;    // falls back to Other
    double spread_shock_bp_for(Segment s) const; // falls back to Other
    /// Equal-weighted average of the listed country shocks at each tenor;
    /// all-zero when no countries are listed.
    SovereignCurve average_curve() const;
};

// ---------------------------------------------------------------------------
// Calibration
// ---------------------------------------------------------------------------

struct SectorCalibration {
    Segment segment = Segment::Other;
    long n = 0;
    double mean = 0.0; // raw carbon-intensity mean
    double stddev = 0.0;
    double ln_mean = 0.0;
    double ln_std = 0.0;
    double r2 = 1.0;
    std::optional<double> mean_volatility; // % annualized
    std::optional<double> mean_cqs;
    std::optional<double> mean_duration; // years
    /// Ascending sample of carbon intensities, kept for the empirical-CDF mode.
    std::vector<double> sample;
};

struct CalibrationSet {
    std::map<Segment, SectorCalibration> by_segment;

    const SectorCalibration* find(Segment s) const;
    /// Entries of `other` override entries of this set, segment by segment.
    CalibrationSet overridden_by(const CalibrationSet& other) const;
};

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

struct Multipliers {
    double ci_m = 1.0;
    std::optional<double> vol_m;
    std::optional<double> cqs_m;
};

/// Per-field diagnostics; a set bit means a neutral substitute was used.
struct BackfillFlags {
    bool ci = false;
    bool volatility = false;
    bool cqs = false;
    bool duration = false;
    bool style = false;
    bool segment = false;        // no NACE bucket, fell back to Other
    bool nonpositive_ci = false; // CI <= 0, assigned quantile 0
    bool unclassified = false;

    bool any() const;
    std::string to_csv_field() const; // stable "ci|vol|..." encoding
    static BackfillFlags from_csv_field(std::string_view s);
};

struct PositionResult {
    std::string fund_id;
    std::string isin;
    AssetClass asset_class = AssetClass::Unclassified;
    double market_value = 0.0;
    /// MtM change as a fraction of market value; <= 0 is a loss.
    double loss_fraction = 0.0;
    double loss_eur = 0.0;
    Multipliers multipliers;
    BackfillFlags flags;

    // carried along for reporting
    std::optional<double> carbon_intensity;
    std::optional<Segment> segment;
    std::optional<std::string> country;
    std::optional<InvestmentStyle> style;
    std::optional<double> cqs;
    std::optional<double> duration;
    std::optional<double> convexity;
    std::optional<double> volatility_pct;
};

// ---------------------------------------------------------------------------
// Universe
// ---------------------------------------------------------------------------

struct Universe {
    std::vector<Fund> funds;         // sorted by id
    std::vector<Position> positions; // sorted by (fund_id, isin)
    std::map<std::string, Instrument> instruments;
    std::map<std::string, Counterparty> counterparties;

    const Instrument* find_instrument(const std::string& isin) const;
    const Counterparty* find_counterparty(const std::string& id) const;
    const Fund* find_fund(const std::string& id) const;

    /// Re-establish canonical ordering and derive fund records for fund ids
    /// that appear in positions but carry no explicit record.
    void finalize();
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class Severity : std::uint8_t { Warning, Fatal };

struct Finding {
    Severity severity = Severity::Warning;
    std::string code;    // stable identifier, e.g. "dangling-instrument"
    std::string subject; // offending id
    std::string message;
};

struct ValidationReport {
    std::vector<Finding> findings;

    bool accepted() const;
    std::size_t fatal_count() const;
    std::string summary() const;
};

/// Referential-integrity and range checks over a loaded universe.
ValidationReport validate_universe(const Universe& u);

} // namespace trisk
