#include "synthetic.hpp"

#include "random.hpp"
#include "trisk/calib.hpp"
#include "trisk/ingest.hpp"

#include <array>
#include <string>
#include <vector>

namespace trisk::testing {

namespace {

constexpr std::array<const char*, 10> kListedCountries = {
    "ES", "DE", "FR", "IT", "PL", "RO", "US", "GB", "JP", "CN",
};
constexpr std::array<const char*, 4> kUnlistedCountries = {"AU", "CA", "KR", "MX"};

std::string id(const char* prefix, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%05zu", prefix, i);
    return buf;
}

struct InstrumentPool {
    std::vector<std::string> equities;
    std::vector<std::string> low_carbon_equities;
    std::vector<std::string> corporate_bonds;
    std::vector<std::string> low_carbon_bonds;
    std::vector<std::string> sovereigns;
    std::vector<std::string> fund_vehicles;
};

} // namespace

Universe generate_universe(const SynthConfig& config) {
    Rng rng(config.seed);
    Universe u;
    InstrumentPool pool;

    const CalibrationSet& cal = calib::default_calibration();
    const auto buckets = sector_buckets();

    // corporate counterparties, carbon intensities drawn from the shipped
    // per-segment lognormal models
    const std::size_t corporate_count = std::max<std::size_t>(60, config.fund_count);
    for (std::size_t i = 0; i < corporate_count; ++i) {
        Counterparty cp;
        cp.id = id("CORP", i);
        cp.name = "Synthetic Corp " + std::to_string(i);
        const Segment seg = buckets[rng.integer(buckets.size())];
        cp.segment = seg;
        if (seg == Segment::Other) {
            cp.raw_nace = "J62"; // off-map service sector
        } else if (seg == Segment::D35) {
            cp.raw_nace = rng.uniform() < 0.5 ? "35.11" : "D35";
        } else {
            cp.raw_nace = std::string(to_string(seg)).substr(0, 3);
        }
        const SectorCalibration* c = cal.find(seg);
        const double mode = rng.uniform();
        if (mode < 0.80) {
            cp.carbon_intensity = std::exp(c->ln_mean + c->ln_std * rng.normal());
        } else if (mode < 0.90) {
            // no own figure, the parent carries it
            Counterparty parent;
            parent.id = cp.id + "-P";
            parent.name = cp.name + " Holding";
            parent.segment = seg;
            parent.raw_nace = cp.raw_nace;
            parent.carbon_intensity = std::exp(c->ln_mean + c->ln_std * rng.normal());
            cp.parent_id = parent.id;
            u.counterparties[parent.id] = parent;
        } else if (mode < 0.95) {
            // only the ultimate parent reports
            Counterparty ultimate;
            ultimate.id = cp.id + "-U";
            ultimate.name = cp.name + " Group";
            ultimate.segment = seg;
            ultimate.raw_nace = cp.raw_nace;
            ultimate.carbon_intensity = std::exp(c->ln_mean + c->ln_std * rng.normal());
            cp.ultimate_parent_id = ultimate.id;
            u.counterparties[ultimate.id] = ultimate;
        } // else: carbon intensity missing everywhere

        u.counterparties[cp.id] = cp;

        // each corporate issues one equity and usually one bond
        {
            Instrument inst;
            inst.isin = id("EQ", i);
            inst.counterparty_id = cp.id;
            if (rng.uniform() < 0.9) {
                const double vol_mean = cal.find(seg)->mean_volatility.value_or(35.0);
                inst.volatility_pct = vol_mean * std::exp(0.35 * rng.normal());
            }
            u.instruments[inst.isin] = inst;
            pool.equities.push_back(inst.isin);
            if (cp.carbon_intensity && *cp.carbon_intensity < cal.find(seg)->mean) {
                pool.low_carbon_equities.push_back(inst.isin);
            }
        }
        if (rng.uniform() < 0.8) {
            Instrument inst;
            inst.isin = id("CB", i);
            inst.counterparty_id = cp.id;
            if (rng.uniform() < 0.93) {
                inst.cqs = 1 + static_cast<int>(rng.integer(6) * rng.uniform());
            }
            if (rng.uniform() < 0.95) {
                inst.maturity_years = rng.uniform(0.25, 20.0);
                inst.coupon = rng.uniform(0.0, 0.07);
            }
            u.instruments[inst.isin] = inst;
            pool.corporate_bonds.push_back(inst.isin);
            if (cp.carbon_intensity && *cp.carbon_intensity < cal.find(seg)->mean) {
                pool.low_carbon_bonds.push_back(inst.isin);
            }
        }
    }

    // sovereign issuers and bonds, listed and unlisted countries
    std::size_t sov_index = 0;
    auto add_sovereign = [&](const std::string& country) {
        Counterparty cp;
        cp.id = "SOV-" + country;
        cp.name = "Sovereign " + country;
        cp.country = country;
        cp.carbon_intensity = std::exp(5.40 + 1.00 * rng.normal()); // sovereign pool scale
        u.counterparties[cp.id] = cp;
        for (int k = 0; k < 3; ++k) {
            Instrument inst;
            inst.isin = id("GB", sov_index++);
            inst.counterparty_id = cp.id;
            inst.country = country;
            inst.cqs = 1 + static_cast<int>(rng.integer(3));
            inst.maturity_years = rng.uniform(0.5, 15.0);
            inst.coupon = rng.uniform(0.0, 0.04);
            u.instruments[inst.isin] = inst;
            pool.sovereigns.push_back(inst.isin);
        }
    };
    for (const char* country : kListedCountries) {
        add_sovereign(country);
    }
    for (const char* country : kUnlistedCountries) {
        add_sovereign(country);
    }

    // other fund vehicles
    const std::size_t vehicle_count = 40;
    for (std::size_t i = 0; i < vehicle_count; ++i) {
        Counterparty cp;
        cp.id = id("FCP", i);
        cp.name = "Vehicle issuer " + std::to_string(i);
        cp.segment = Segment::Fund;
        cp.raw_nace = "FUND";
        if (rng.uniform() < 0.9) {
            cp.carbon_intensity = std::exp(4.70 + 1.03 * rng.normal());
        }
        u.counterparties[cp.id] = cp;
        Instrument inst;
        inst.isin = id("IF", i);
        inst.counterparty_id = cp.id;
        if (rng.uniform() < 0.9) {
            inst.fund_style = kAllStyles[rng.integer(kAllStyles.size())];
        }
        u.instruments[inst.isin] = inst;
        pool.fund_vehicles.push_back(inst.isin);
    }

    // funds
    auto pick = [&rng](const std::vector<std::string>& from) -> const std::string& {
        return from[rng.integer(from.size())];
    };
    for (std::size_t f = 0; f < config.fund_count; ++f) {
        Fund fund;
        fund.id = id("FUND", f);
        const bool sustainable = rng.uniform() < config.sustainable_share;
        if (sustainable) {
            fund.labels.push_back("sustainable");
        }
        const std::size_t archetype = f % 6;
        const std::size_t target = std::max<std::size_t>(
            3, static_cast<std::size_t>(
                   static_cast<double>(config.mean_positions_per_fund) *
                   (0.5 + rng.uniform())));

        if (archetype == 5 && f + 6 >= config.fund_count) {
            // a freshly formed vehicle holding nothing but cash
            u.positions.push_back({fund.id, "", AssetClass::Cash, rng.uniform(1e5, 1e6)});
            u.funds.push_back(fund);
            continue;
        }

        for (std::size_t k = 0; k < target; ++k) {
            const double mv = rng.uniform(1e4, 2e6);
            const double roll = rng.uniform();
            Position p;
            p.fund_id = fund.id;
            p.market_value = mv;
            auto pick_eq = [&]() -> const std::string& {
                if (sustainable && !pool.low_carbon_equities.empty() && rng.uniform() < 0.7) {
                    return pick(pool.low_carbon_equities);
                }
                return pick(pool.equities);
            };
            auto pick_cb = [&]() -> const std::string& {
                if (sustainable && !pool.low_carbon_bonds.empty() && rng.uniform() < 0.7) {
                    return pick(pool.low_carbon_bonds);
                }
                return pick(pool.corporate_bonds);
            };
            switch (archetype) {
            case 0: // equity fund
                if (roll < 0.8) {
                    p.asset_class = AssetClass::Equity;
                    p.isin = pick_eq();
                } else if (roll < 0.9) {
                    p.asset_class = AssetClass::CorporateBond;
                    p.isin = pick_cb();
                } else {
                    p.asset_class = AssetClass::Cash;
                }
                break;
            case 1: // corporate bond fund
                if (roll < 0.75) {
                    p.asset_class = AssetClass::CorporateBond;
                    p.isin = pick_cb();
                } else if (roll < 0.9) {
                    p.asset_class = AssetClass::SovereignBond;
                    p.isin = pick(pool.sovereigns);
                } else {
                    p.asset_class = AssetClass::Cash;
                }
                break;
            case 2: // government debt fund
                if (roll < 0.8) {
                    p.asset_class = AssetClass::SovereignBond;
                    p.isin = pick(pool.sovereigns);
                } else {
                    p.asset_class = AssetClass::Cash;
                }
                break;
            case 3: // mixed
                if (roll < 0.35) {
                    p.asset_class = AssetClass::Equity;
                    p.isin = pick_eq();
                } else if (roll < 0.65) {
                    p.asset_class = AssetClass::CorporateBond;
                    p.isin = pick_cb();
                } else if (roll < 0.85) {
                    p.asset_class = AssetClass::SovereignBond;
                    p.isin = pick(pool.sovereigns);
                } else if (roll < 0.95) {
                    p.asset_class = AssetClass::FundVehicle;
                    p.isin = pick(pool.fund_vehicles);
                } else {
                    p.asset_class = AssetClass::Cash;
                }
                break;
            case 4: // fund of funds
                if (roll < 0.8) {
                    p.asset_class = AssetClass::FundVehicle;
                    p.isin = pick(pool.fund_vehicles);
                } else if (roll < 0.9) {
                    p.asset_class = AssetClass::Cash;
                } else {
                    p.asset_class = AssetClass::Unclassified;
                }
                break;
            default: // cash heavy
                if (roll < 0.7) {
                    p.asset_class = AssetClass::Cash;
                } else if (roll < 0.85) {
                    p.asset_class = AssetClass::SovereignBond;
                    p.isin = pick(pool.sovereigns);
                } else {
                    p.asset_class = AssetClass::Equity;
                    p.isin = pick_eq();
                }
                break;
            }
            u.positions.push_back(std::move(p));
        }
        u.funds.push_back(fund);
    }

    u.finalize();
    // declare AuM as the exact sum of position values
    std::map<std::string, double> totals;
    for (const Position& p : u.positions) {
        totals[p.fund_id] += p.market_value;
    }
    for (Fund& fund : u.funds) {
        fund.declared_aum = totals[fund.id];
    }
    return u;
}

void write_universe_files(const Universe& universe, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    ingest::write_positions(dir / "positions.csv", universe.positions);
    ingest::write_instruments(dir / "instruments.csv", universe.instruments);
    ingest::write_counterparties(dir / "counterparties.csv", universe.counterparties);
    ingest::write_funds(dir / "funds.csv", universe.funds);
}

} // namespace trisk::testing
