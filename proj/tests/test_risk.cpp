#include "trisk/risk.hpp"

#include "support/random.hpp"
#include "trisk/calib.hpp"
#include "trisk/errors.hpp"

#include <doctest.h>

#include <cmath>

using namespace trisk;
using namespace trisk::risk;
using trisk::testing::Rng;

TEST_SUITE_BEGIN("risk");

TEST_CASE("bond sensitivities match the approximation formulas") {
    SUBCASE("matured bond") {
        const BondSensitivities s = bond_sensitivities(0.0, 0.05);
        CHECK(s.duration == 0.0);
        CHECK(s.convexity == 0.0);
    }
    SUBCASE("ten-year five-percent coupon") {
        const BondSensitivities s = bond_sensitivities(10.0, 0.05);
        CHECK(s.duration == doctest::Approx(7.8353).epsilon(1e-4));
        CHECK(s.convexity == doctest::Approx(99.773).epsilon(1e-4));
        CHECK(s.convexity < 40.0 * s.duration); // cap not binding
    }
    SUBCASE("very long zero-coupon bond hits the cap") {
        const BondSensitivities s = bond_sensitivities(50.0, 0.0);
        CHECK(s.duration == doctest::Approx(50.0));
        CHECK(s.convexity == doctest::Approx(2000.0)); // raw 2550 capped at 40x50
    }
}

TEST_CASE("bond sensitivities obey the convexity cap everywhere") {
    Rng rng(314);
    for (int i = 0; i < 1000; ++i) {
        const double t = rng.uniform(0.0, 60.0);
        const double c = rng.uniform(-0.5, 0.12);
        const BondSensitivities s = bond_sensitivities(t, c);
        CHECK(s.convexity <= 40.0 * s.duration + 1e-12);
        if (t > 0.0) {
            CHECK(s.duration > 0.0);
        }
    }
}

TEST_CASE("coupons at or below minus one are rejected") {
    CHECK_THROWS_AS(bond_sensitivities(5.0, -1.0), DomainError);
    CHECK_THROWS_AS(bond_sensitivities(5.0, -1.5), DomainError);
}

TEST_CASE("tenor interpolation is linear inside and flat outside the grid") {
    SovereignCurve spain;
    spain.shocks_bp = {92.7, 95.8, 99.0, 102.1, 105.3, 108.5, 111.6, 114.8, 117.9, 121.1};
    CHECK(interpolate_tenor(spain, 1.0) == 92.7);
    CHECK(interpolate_tenor(spain, 1.5) == doctest::Approx(94.25));
    CHECK(interpolate_tenor(spain, 25.0) == 121.1);
    CHECK(interpolate_tenor(spain, 0.25) == 92.7);
    CHECK(interpolate_tenor(spain, 10.0) == 121.1);
    CHECK(interpolate_tenor(spain, 9.5) == doctest::Approx(0.5 * (117.9 + 121.1)));
    CHECK(interpolate_tenor(spain, 4.0) == 102.1);
}

// ---------------------------------------------------------------------------
// Repricing fixtures
// ---------------------------------------------------------------------------

namespace {

struct Fixture {
    Universe universe;
    Scenario scenario;

    Fixture() {
        scenario.name = "test";
        scenario.equity_shock[Segment::D35] = -0.23;
        scenario.equity_shock[Segment::B05_B09] = -0.378;
        scenario.equity_shock[Segment::Other] = -0.143;
        scenario.spread_shock_bp[Segment::D35] = 284.0;
        scenario.spread_shock_bp[Segment::B05_B09] = 467.0;
        scenario.spread_shock_bp[Segment::Other] = 177.0;
        SovereignCurve spain;
        spain.shocks_bp = {92.7, 95.8, 99.0, 102.1, 105.3, 108.5, 111.6, 114.8, 117.9, 121.1};
        SovereignCurve poland;
        poland.shocks_bp = {-24.9, -33.2, -41.6, -49.9, -58.3, -66.6, -75.0, -83.3, -91.6, -100.0};
        scenario.sovereign_curves["ES"] = spain;
        scenario.sovereign_curves["PL"] = poland;
    }

    void add_counterparty(const std::string& id, std::optional<double> ci,
                          std::optional<Segment> segment,
                          std::optional<std::string> country = std::nullopt) {
        Counterparty cp;
        cp.id = id;
        cp.carbon_intensity = ci;
        cp.segment = segment;
        if (segment) {
            cp.raw_nace = std::string(to_string(*segment));
        }
        cp.country = std::move(country);
        universe.counterparties[id] = cp;
    }

    Instrument& add_instrument(const std::string& isin, const std::string& cp_id) {
        Instrument inst;
        inst.isin = isin;
        inst.counterparty_id = cp_id;
        return universe.instruments[isin] = inst;
    }

    Position& add_position(const std::string& fund, const std::string& isin, AssetClass cls,
                           double mv) {
        universe.positions.push_back({fund, isin, cls, mv});
        return universe.positions.back();
    }

    PositionResult run_single(AssetClass cls) {
        universe.finalize();
        const Context ctx(universe, scenario, calib::default_calibration(), options);
        const Position& p = universe.positions.front();
        switch (cls) {
        case AssetClass::Equity: return reprice_equity(p, ctx);
        case AssetClass::CorporateBond: return reprice_corporate_bond(p, ctx);
        case AssetClass::SovereignBond: return reprice_sovereign(p, ctx);
        default: return reprice_cash(p);
        }
    }

    Options options;
};

} // namespace

TEST_CASE("neutral equity in the electricity segment loses the sector shock exactly") {
    Fixture f;
    f.add_counterparty("CP", std::nullopt, Segment::D35);
    f.add_instrument("EQ", "CP");
    f.add_position("F", "EQ", AssetClass::Equity, 1000.0);
    const PositionResult r = f.run_single(AssetClass::Equity);
    CHECK(r.loss_fraction == -0.23);
    CHECK(r.loss_eur == -230.0);
    CHECK(r.multipliers.ci_m == 1.0);
    CHECK(*r.multipliers.vol_m == 1.0);
    CHECK(r.flags.ci);
    CHECK(r.flags.volatility);
}

TEST_CASE("median carbon intensity and sector-average volatility stay neutral") {
    Fixture f;
    const auto* cal = calib::default_calibration().find(Segment::D35);
    f.add_counterparty("CP", std::exp(cal->ln_mean), Segment::D35);
    f.add_instrument("EQ", "CP").volatility_pct = *cal->mean_volatility;
    f.add_position("F", "EQ", AssetClass::Equity, 100.0);
    const PositionResult r = f.run_single(AssetClass::Equity);
    CHECK(r.loss_fraction == doctest::Approx(-0.23).epsilon(1e-12));
    CHECK_FALSE(r.flags.ci);
    CHECK_FALSE(r.flags.volatility);
}

TEST_CASE("equity losses are floored at a full write-off") {
    Fixture f;
    const auto* cal = calib::default_calibration().find(Segment::B05_B09);
    // top-of-distribution carbon intensity and 1.5x the sector volatility
    f.add_counterparty("CP", std::exp(cal->ln_mean + 10.0 * cal->ln_std), Segment::B05_B09);
    f.add_instrument("EQ", "CP").volatility_pct = 1.5 * *cal->mean_volatility;
    f.add_position("F", "EQ", AssetClass::Equity, 100.0);
    const PositionResult r = f.run_single(AssetClass::Equity);
    // unfloored: ~2 * 1.5 * -0.378 = -1.134
    CHECK(r.loss_fraction == -1.0);
    CHECK(r.loss_eur == -100.0);
}

TEST_CASE("missing everything in an unmapped sector loses the Other shock") {
    Fixture f;
    f.add_counterparty("CP", std::nullopt, std::nullopt);
    f.add_instrument("EQ", "CP");
    f.add_position("F", "EQ", AssetClass::Equity, 100.0);
    const PositionResult r = f.run_single(AssetClass::Equity);
    CHECK(r.loss_fraction == -0.143);
    CHECK(r.flags.segment);
}

TEST_CASE("high carbon intensity scales the equity loss by twice its quantile") {
    Fixture f;
    f.add_counterparty("CP", 3696.8, Segment::D35);
    f.add_instrument("EQ", "CP");
    f.add_position("F", "EQ", AssetClass::Equity, 100.0);
    const PositionResult r = f.run_single(AssetClass::Equity);
    CHECK(r.multipliers.ci_m == doctest::Approx(1.836).epsilon(0.001));
    CHECK(std::abs(r.multipliers.ci_m - 1.80) < 0.04);
    CHECK(r.loss_fraction == doctest::Approx(1.836 * -0.23).epsilon(0.001));
}

TEST_CASE("corporate bond repricing follows the spread Taylor expansion") {
    Fixture f;
    const auto* cal = calib::default_calibration().find(Segment::D35);
    f.add_counterparty("CP", std::exp(cal->ln_mean), Segment::D35);
    Instrument& inst = f.add_instrument("CB", "CP");
    inst.cqs = 2; // sector mean CQS is 2.31 -> cqs_m = 2/2.31
    inst.maturity_years = 6.0;
    inst.coupon = 0.03;
    f.add_position("F", "CB", AssetClass::CorporateBond, 100.0);
    const PositionResult r = f.run_single(AssetClass::CorporateBond);

    const BondSensitivities s = bond_sensitivities(6.0, 0.03);
    const double dcs = 1.0 * (2.0 / 2.31) * 284.0 * 1e-4;
    const double expected = -(dcs * s.duration - 0.5 * dcs * dcs * s.convexity);
    CHECK(r.loss_fraction == doctest::Approx(expected).epsilon(1e-12));
    CHECK(r.loss_fraction < 0.0);
}

TEST_CASE("neutral-multiplier spread move reproduces the worked figure") {
    // dcs = 284bp, SD = 5, C = 30 -> -(0.0284*5 - 0.5*0.0284^2*30) = -0.129902
    const double dcs = 0.0284;
    const double loss = -(dcs * 5.0 - 0.5 * dcs * dcs * 30.0);
    CHECK(loss == doctest::Approx(-0.1299016).epsilon(1e-7));
}

TEST_CASE("zero spread shock prices corporate bonds flat") {
    Fixture f;
    f.scenario.spread_shock_bp[Segment::D35] = 0.0;
    f.add_counterparty("CP", 5000.0, Segment::D35);
    Instrument& inst = f.add_instrument("CB", "CP");
    inst.cqs = 6;
    inst.maturity_years = 10.0;
    inst.coupon = 0.05;
    f.add_position("F", "CB", AssetClass::CorporateBond, 100.0);
    const PositionResult r = f.run_single(AssetClass::CorporateBond);
    CHECK(r.loss_fraction == 0.0);
    CHECK(!std::signbit(r.loss_fraction));
}

TEST_CASE("matured corporate bonds carry no spread risk") {
    Fixture f;
    f.add_counterparty("CP", std::nullopt, Segment::D35);
    Instrument& inst = f.add_instrument("CB", "CP");
    inst.maturity_years = 0.0;
    inst.coupon = 0.05;
    f.add_position("F", "CB", AssetClass::CorporateBond, 100.0);
    const PositionResult r = f.run_single(AssetClass::CorporateBond);
    CHECK(r.loss_fraction == 0.0);
}

TEST_CASE("missing bond data backfills neutrally and is flagged") {
    Fixture f;
    f.add_counterparty("CP", std::nullopt, Segment::D35);
    f.add_instrument("CB", "CP"); // no cqs, no maturity
    f.add_position("F", "CB", AssetClass::CorporateBond, 100.0);
    const PositionResult r = f.run_single(AssetClass::CorporateBond);
    CHECK(r.flags.ci);
    CHECK(r.flags.cqs);
    CHECK(r.flags.duration);
    CHECK(*r.multipliers.cqs_m == 1.0);
    // duration backfilled from the segment mean (7.04y for electricity)
    const BondSensitivities s = bond_sensitivities(7.04, 0.0);
    const double dcs = 284.0 * 1e-4;
    const double expected = -(dcs * s.duration - 0.5 * dcs * dcs * s.convexity);
    CHECK(r.loss_fraction == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("widening spreads cannot produce a convexity windfall") {
    Fixture f;
    const auto* cal = calib::default_calibration().find(Segment::B05_B09);
    f.add_counterparty("CP", std::exp(cal->ln_mean + 10.0 * cal->ln_std), Segment::B05_B09);
    Instrument& inst = f.add_instrument("CB", "CP");
    inst.cqs = 6;
    inst.maturity_years = 40.0;
    inst.coupon = 0.0;
    f.add_position("F", "CB", AssetClass::CorporateBond, 100.0);
    const PositionResult r = f.run_single(AssetClass::CorporateBond);
    CHECK(r.loss_fraction <= 0.0);
    CHECK(r.loss_fraction >= -1.0);
}

TEST_CASE("strict source-sign mode adds the convexity term to the loss") {
    Fixture f;
    f.add_counterparty("CP", std::nullopt, Segment::D35);
    Instrument& inst = f.add_instrument("CB", "CP");
    inst.maturity_years = 6.0;
    inst.coupon = 0.03;
    f.options.strict_paper_sign = true;
    f.add_position("F", "CB", AssetClass::CorporateBond, 100.0);
    const PositionResult r = f.run_single(AssetClass::CorporateBond);
    const BondSensitivities s = bond_sensitivities(6.0, 0.03);
    const double dcs = 284.0 * 1e-4;
    CHECK(r.loss_fraction ==
          doctest::Approx(-(dcs * s.duration + 0.5 * dcs * dcs * s.convexity)).epsilon(1e-12));
}

TEST_CASE("listed sovereign repricing uses the country curve without multipliers") {
    Fixture f;
    f.add_counterparty("GOV", 120.0, std::nullopt, "ES");
    Instrument& inst = f.add_instrument("GB", "GOV");
    inst.country = "ES";
    inst.maturity_years = 10.0;
    inst.coupon = 0.0112; // tuned so D is close to 8 for the worked check
    f.add_position("F", "GB", AssetClass::SovereignBond, 100.0);
    const PositionResult r = f.run_single(AssetClass::SovereignBond);
    const BondSensitivities s = bond_sensitivities(10.0, 0.0112);
    const double dy = 121.1e-4;
    CHECK(r.loss_fraction ==
          doctest::Approx(-(dy * s.duration - 0.5 * dy * dy * s.convexity)).epsilon(1e-12));
    CHECK_FALSE(r.multipliers.vol_m.has_value());
}

TEST_CASE("the worked sovereign figure evaluates to -9.10 percent") {
    const double dy = 121.1e-4;
    CHECK(-(dy * 8.0 - 0.5 * dy * dy * 80.0) == doctest::Approx(-0.0910139).epsilon(1e-5));
}

TEST_CASE("negative yield shocks produce sovereign gains") {
    Fixture f;
    f.add_counterparty("GOV", 120.0, std::nullopt, "PL");
    Instrument& inst = f.add_instrument("GB", "GOV");
    inst.country = "PL";
    inst.maturity_years = 12.0; // 10+ bucket, -100bp
    inst.coupon = 0.02;
    f.add_position("F", "GB", AssetClass::SovereignBond, 100.0);
    const PositionResult r = f.run_single(AssetClass::SovereignBond);
    CHECK(r.loss_fraction > 0.0);
}

TEST_CASE("unlisted sovereigns go through the multiplier path") {
    Fixture f;
    const auto* cal = calib::default_calibration().find(Segment::Sov);
    f.add_counterparty("GOV", std::exp(cal->ln_mean), std::nullopt, "AU");
    Instrument& inst = f.add_instrument("GB", "GOV");
    inst.country = "AU";
    inst.cqs = 2;
    inst.maturity_years = 10.0;
    inst.coupon = 0.0;
    f.add_position("F", "GB", AssetClass::SovereignBond, 100.0);
    const PositionResult r = f.run_single(AssetClass::SovereignBond);

    // median CI -> ci_m = 1; cqs_m = 2/1.92; average 10y shock = (121.1-100)/2
    const double avg10 = 0.5 * (121.1 - 100.0);
    const double dy = 1.0 * (2.0 / 1.92) * avg10 * 1e-4;
    const BondSensitivities s = bond_sensitivities(10.0, 0.0);
    CHECK(r.multipliers.ci_m == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*r.multipliers.cqs_m == doctest::Approx(2.0 / 1.92).epsilon(1e-12));
    CHECK(r.loss_fraction ==
          doctest::Approx(-(dy * s.duration - 0.5 * dy * dy * s.convexity)).epsilon(1e-12));
}

TEST_CASE("sovereigns without a country code throw") {
    Fixture f;
    f.add_counterparty("GOV", 120.0, std::nullopt);
    f.add_instrument("GB", "GOV");
    f.add_position("F", "GB", AssetClass::SovereignBond, 100.0);
    CHECK_THROWS_AS(f.run_single(AssetClass::SovereignBond), UnknownCountry);
}

TEST_CASE("zero-duration sovereigns lose nothing") {
    Fixture f;
    f.add_counterparty("GOV", 120.0, std::nullopt, "ES");
    Instrument& inst = f.add_instrument("GB", "GOV");
    inst.country = "ES";
    inst.maturity_years = 0.0;
    f.add_position("F", "GB", AssetClass::SovereignBond, 100.0);
    const PositionResult r = f.run_single(AssetClass::SovereignBond);
    CHECK(r.loss_fraction == 0.0);
}

TEST_CASE("fund vehicles blend class averages by style weights") {
    Fixture f;
    const auto* cal = calib::default_calibration().find(Segment::Fund);
    f.add_counterparty("FCP", std::exp(cal->ln_mean), Segment::Fund);
    f.add_instrument("IF", "FCP").fund_style = InvestmentStyle::Bonds;
    f.add_position("F", "IF", AssetClass::FundVehicle, 100.0);
    f.universe.finalize();
    const Context ctx(f.universe, f.scenario, calib::default_calibration(), f.options);
    ClassAverages averages;
    averages.equity = -0.1271;
    averages.corporate = -0.0561;
    averages.sovereign = -0.0477;
    const PositionResult r = reprice_fund_vehicle(f.universe.positions.front(), ctx, averages);
    // bonds style: 0.75 corporate + 0.20 sovereign
    CHECK(r.loss_fraction ==
          doctest::Approx(1.0 * (0.75 * -0.0561 + 0.20 * -0.0477)).epsilon(1e-9));
    CHECK(r.loss_fraction == doctest::Approx(-0.051615).epsilon(1e-9));
}

TEST_CASE("top-quantile equities-style vehicle doubles the blended loss") {
    Fixture f;
    const auto* cal = calib::default_calibration().find(Segment::Fund);
    f.add_counterparty("FCP", std::exp(cal->ln_mean + 12.0 * cal->ln_std), Segment::Fund);
    f.add_instrument("IF", "FCP").fund_style = InvestmentStyle::Equities;
    f.add_position("F", "IF", AssetClass::FundVehicle, 100.0);
    f.universe.finalize();
    const Context ctx(f.universe, f.scenario, calib::default_calibration(), f.options);
    ClassAverages averages;
    averages.equity = -0.1271;
    averages.corporate = -0.0561;
    averages.sovereign = -0.0477;
    const PositionResult r = reprice_fund_vehicle(f.universe.positions.front(), ctx, averages);
    CHECK(r.loss_fraction == doctest::Approx(-0.22645).epsilon(1e-4));
}

TEST_CASE("a near-zero quantile sends the vehicle loss to zero") {
    Fixture f;
    const auto* cal = calib::default_calibration().find(Segment::Fund);
    f.add_counterparty("FCP", std::exp(cal->ln_mean - 12.0 * cal->ln_std), Segment::Fund);
    f.add_instrument("IF", "FCP").fund_style = InvestmentStyle::Equities;
    f.add_position("F", "IF", AssetClass::FundVehicle, 100.0);
    f.universe.finalize();
    const Context ctx(f.universe, f.scenario, calib::default_calibration(), f.options);
    ClassAverages averages;
    averages.equity = -0.1271;
    const PositionResult r = reprice_fund_vehicle(f.universe.positions.front(), ctx, averages);
    CHECK(std::abs(r.loss_fraction) < 1e-9);
}

TEST_CASE("vehicles without a style fall back to Others, flagged") {
    Fixture f;
    f.add_counterparty("FCP", std::nullopt, Segment::Fund);
    f.add_instrument("IF", "FCP");
    f.add_position("F", "IF", AssetClass::FundVehicle, 100.0);
    f.universe.finalize();
    const Context ctx(f.universe, f.scenario, calib::default_calibration(), f.options);
    ClassAverages averages;
    averages.equity = -0.10;
    averages.corporate = -0.04;
    averages.sovereign = -0.02;
    const PositionResult r = reprice_fund_vehicle(f.universe.positions.front(), ctx, averages);
    CHECK(r.flags.style);
    CHECK(r.style == InvestmentStyle::Others);
    CHECK(r.loss_fraction ==
          doctest::Approx(0.25 * -0.10 + 0.35 * -0.04 + 0.35 * -0.02).epsilon(1e-12));
}

TEST_CASE("cash and unclassified positions never lose value") {
    Fixture f;
    f.add_position("F", "", AssetClass::Cash, 500.0);
    const PositionResult cash = reprice_cash(f.universe.positions.front());
    CHECK(cash.loss_fraction == 0.0);
    CHECK(cash.loss_eur == 0.0);
    CHECK_FALSE(cash.flags.unclassified);

    Position unclassified{"F", "", AssetClass::Unclassified, 100.0};
    const PositionResult r = reprice_cash(unclassified);
    CHECK(r.loss_fraction == 0.0);
    CHECK(r.flags.unclassified);

    Position zero{"F", "", AssetClass::Cash, 0.0};
    CHECK(reprice_cash(zero).loss_eur == 0.0);
}

TEST_CASE("nonpositive carbon intensity pins the multiplier at zero") {
    Fixture f;
    f.add_counterparty("CP", -5.0, Segment::D35);
    f.add_instrument("EQ", "CP");
    f.add_position("F", "EQ", AssetClass::Equity, 100.0);
    const PositionResult r = f.run_single(AssetClass::Equity);
    CHECK(r.multipliers.ci_m == 0.0);
    CHECK(r.flags.nonpositive_ci);
    CHECK(r.loss_fraction == 0.0);
}

TEST_CASE("loss in euros scales linearly with market value") {
    Fixture f;
    f.add_counterparty("CP", 900.0, Segment::D35);
    f.add_instrument("EQ", "CP").volatility_pct = 35.0;
    f.add_position("F", "EQ", AssetClass::Equity, 100.0);
    f.add_position("F2", "EQ", AssetClass::Equity, 1000.0);
    f.universe.finalize();
    const Context ctx(f.universe, f.scenario, calib::default_calibration(), f.options);
    const PositionResult a = reprice_equity(f.universe.positions[0], ctx);
    const PositionResult b = reprice_equity(f.universe.positions[1], ctx);
    CHECK(a.loss_fraction == b.loss_fraction);
    CHECK(b.loss_eur == doctest::Approx(10.0 * a.loss_eur).epsilon(1e-12));
}

TEST_CASE("loss magnitude grows strictly with carbon intensity") {
    const auto* d35 = calib::default_calibration().find(Segment::D35);
    Rng rng(271828);
    for (int i = 0; i < 1000; ++i) {
        Fixture g;
        const double ci_lo = std::exp(d35->ln_mean + d35->ln_std * rng.uniform(-3.0, 2.9));
        const double ci_hi = ci_lo * (1.0 + rng.uniform(0.01, 1.0));
        g.add_counterparty("LO", ci_lo, Segment::D35);
        g.add_counterparty("HI", ci_hi, Segment::D35);
        const double vol = rng.uniform(10.0, 60.0);
        g.add_instrument("EQLO", "LO").volatility_pct = vol;
        g.add_instrument("EQHI", "HI").volatility_pct = vol;
        g.add_position("F", "EQLO", AssetClass::Equity, 100.0);
        g.add_position("F", "EQHI", AssetClass::Equity, 100.0);
        g.universe.finalize();
        const Context gctx(g.universe, g.scenario, calib::default_calibration(), g.options);
        const PositionResult lo = reprice_equity(g.universe.positions[0], gctx);
        const PositionResult hi = reprice_equity(g.universe.positions[1], gctx);
        if (lo.loss_fraction > -1.0 && hi.loss_fraction > -1.0) {
            CHECK(hi.loss_fraction < lo.loss_fraction);
        } else {
            CHECK(hi.loss_fraction <= lo.loss_fraction);
        }
    }
}

TEST_CASE("zero-shock scenario prices every class flat") {
    Fixture f;
    for (auto& [seg, shock] : f.scenario.equity_shock) {
        shock = 0.0;
    }
    for (auto& [seg, shock] : f.scenario.spread_shock_bp) {
        shock = 0.0;
    }
    for (auto& [country, curve] : f.scenario.sovereign_curves) {
        curve.shocks_bp.fill(0.0);
    }
    f.add_counterparty("CP", 2000.0, Segment::D35);
    f.add_counterparty("GOV", 300.0, std::nullopt, "ES");
    f.add_counterparty("FCP", 400.0, Segment::Fund);
    f.add_instrument("EQ", "CP").volatility_pct = 50.0;
    Instrument& cb = f.add_instrument("CB", "CP");
    cb.cqs = 5;
    cb.maturity_years = 12.0;
    cb.coupon = 0.04;
    Instrument& gb = f.add_instrument("GB", "GOV");
    gb.country = "ES";
    gb.maturity_years = 9.0;
    gb.coupon = 0.01;
    f.add_instrument("IF", "FCP").fund_style = InvestmentStyle::MixedEquities;
    f.add_position("F", "EQ", AssetClass::Equity, 100.0);
    f.add_position("F", "CB", AssetClass::CorporateBond, 100.0);
    f.add_position("F", "GB", AssetClass::SovereignBond, 100.0);
    f.add_position("F", "IF", AssetClass::FundVehicle, 100.0);
    f.add_position("F", "", AssetClass::Cash, 100.0);
    f.universe.finalize();
    const AssessmentResult result = run_assessment(f.universe, f.scenario,
                                                   calib::default_calibration(), f.options, 1);
    for (const PositionResult& r : result.position_results) {
        CHECK(r.loss_fraction == 0.0);
        CHECK(r.loss_eur == 0.0);
        CHECK_FALSE(std::signbit(r.loss_fraction));
    }
}

TEST_CASE("two-phase engine feeds class averages into fund vehicles") {
    Fixture f;
    f.add_counterparty("CP", std::nullopt, Segment::D35);
    f.add_counterparty("FCP", std::nullopt, Segment::Fund);
    f.add_instrument("EQ", "CP");
    f.add_instrument("IF", "FCP").fund_style = InvestmentStyle::Equities;
    f.add_position("FA", "EQ", AssetClass::Equity, 100.0);
    f.add_position("FB", "IF", AssetClass::FundVehicle, 100.0);
    f.universe.finalize();
    const AssessmentResult result = run_assessment(f.universe, f.scenario,
                                                   calib::default_calibration(), f.options, 1);
    CHECK(result.class_averages.equity == doctest::Approx(-0.23));
    CHECK(result.class_averages.equity_n == 1);
    // equities-style vehicle with neutral CI: 0.85 * -0.23
    const PositionResult& vehicle = result.position_results[1];
    REQUIRE(vehicle.asset_class == AssetClass::FundVehicle);
    CHECK(vehicle.loss_fraction == doctest::Approx(0.85 * -0.23).epsilon(1e-12));
}

TEST_CASE("class averages count each instrument once across funds") {
    Fixture f;
    f.add_counterparty("CP", std::nullopt, Segment::D35);
    f.add_counterparty("CP2", std::nullopt, Segment::B05_B09);
    f.add_instrument("EQ", "CP");
    f.add_instrument("EQ2", "CP2");
    f.add_position("FA", "EQ", AssetClass::Equity, 100.0);
    f.add_position("FB", "EQ", AssetClass::Equity, 900.0); // same instrument again
    f.add_position("FC", "EQ2", AssetClass::Equity, 50.0);
    f.universe.finalize();
    const AssessmentResult result = run_assessment(f.universe, f.scenario,
                                                   calib::default_calibration(), f.options, 1);
    CHECK(result.class_averages.equity_n == 2);
    CHECK(result.class_averages.equity == doctest::Approx(0.5 * (-0.23 - 0.378)));

    Options aum;
    aum.aum_weighted_class_averages = true;
    const AssessmentResult weighted =
        run_assessment(f.universe, f.scenario, calib::default_calibration(), aum, 1);
    const double expected = (100.0 * -0.23 + 900.0 * -0.23 + 50.0 * -0.378) / 1050.0;
    CHECK(weighted.class_averages.equity == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("scenario lint flags shocks that let convexity dominate") {
    Fixture f;
    CHECK(scenario_lint(f.scenario).empty());
    f.scenario.spread_shock_bp[Segment::C19] = 600.0;
    CHECK(scenario_lint(f.scenario).size() == 1);
    SovereignCurve wild;
    wild.shocks_bp.fill(-700.0);
    f.scenario.sovereign_curves["XX"] = wild;
    CHECK(scenario_lint(f.scenario).size() == 2);
}

TEST_CASE("empirical quantile mode uses the attached sample") {
    Fixture f;
    f.add_counterparty("CP", 400.0, Segment::D35);
    f.add_instrument("EQ", "CP");
    f.add_position("F", "EQ", AssetClass::Equity, 100.0);
    f.universe.finalize();

    CalibrationSet cal = calib::default_calibration();
    cal.by_segment[Segment::D35].sample = {100.0, 200.0, 300.0, 400.0, 500.0};
    f.options.empirical_cdf = true;
    const Context ctx(f.universe, f.scenario, cal, f.options);
    const PositionResult r = reprice_equity(f.universe.positions.front(), ctx);
    CHECK(r.multipliers.ci_m == doctest::Approx(2.0 * 0.7)); // Hazen position of 400 in n=5
}

TEST_SUITE_END();
