#include <doctest.h>

#include <cmath>
#include <random>

#include "dcx/engine.hpp"
#include "dcx/mechanism.hpp"
#include "oracles.hpp"

using namespace dcx;

namespace {
const PriceDomain d14{1.0, 4.0};
}

TEST_CASE("mint deposits") {
    Pool at_top(d14, 4.0);
    const Holdings h = at_top.mint("a", DemandCurve::inv_sqrt(d14, 1.0));
    CHECK(h.risky == doctest::Approx(0.5));
    CHECK(h.numeraire == doctest::Approx(oracle::stieltjes(DemandCurve::inv_sqrt(d14, 1.0), 1.0, 4.0)));
    CHECK(h.numeraire == doctest::Approx(1.0));

    Pool at_bottom(d14, 1.0);
    const Holdings h1 = at_bottom.mint("a", DemandCurve::inv_sqrt(d14, 1.0));
    CHECK(h1.risky == doctest::Approx(1.0));
    CHECK(h1.numeraire == 0.0);

    Pool order(d14, 3.0);
    const Holdings h2 = order.mint("bid", DemandCurve::step(d14, 2.0, 1.0));
    CHECK(h2.risky == 0.0);
    CHECK(h2.numeraire == doctest::Approx(2.0));

    CHECK_THROWS(order.mint("bid", DemandCurve::zero(d14)));
    CHECK_THROWS(order.mint("x", DemandCurve::zero(PriceDomain(1.0, 5.0))));
}

TEST_CASE("burn returns the position's holdings at the current price") {
    Pool pool(d14, 2.0);
    const Holdings in = pool.mint("a", DemandCurve::inv_sqrt(d14, 1.0));
    const Holdings out = pool.burn("a");
    CHECK(out.risky == in.risky);
    CHECK(out.numeraire == in.numeraire);

    Pool moved(d14, 1.0);
    moved.mint("a", DemandCurve::inv_sqrt(d14, 1.0));
    moved.trade_to_price(4.0);
    const Holdings h = moved.burn("a");
    CHECK(h.risky == doctest::Approx(0.5));
    CHECK(h.numeraire == doctest::Approx(1.0));

    Pool empty(d14, 2.0);
    empty.mint("z", DemandCurve::zero(d14));
    const Holdings z = empty.burn("z");
    CHECK(z.risky == 0.0);
    CHECK(z.numeraire == 0.0);
    CHECK_THROWS(empty.burn("nobody"));
}

TEST_CASE("trades against a CPMM curve") {
    Pool pool(d14, 1.0);
    pool.mint("a", DemandCurve::inv_sqrt(d14, 1.0));
    const TradeReceipt up = pool.trade_to_price(4.0);
    CHECK(up.risky_to_trader == doctest::Approx(0.5));
    CHECK(up.numeraire_from_trader == doctest::Approx(1.0));
    const TradeReceipt same = pool.trade_to_price(4.0);
    CHECK(same.risky_to_trader == 0.0);
    CHECK(same.numeraire_from_trader == 0.0);
    const TradeReceipt down = pool.trade_to_price(1.0);
    CHECK(down.risky_to_trader == doctest::Approx(-up.risky_to_trader));
    CHECK(down.numeraire_from_trader == doctest::Approx(-up.numeraire_from_trader));
    CHECK_THROWS(pool.trade_to_price(5.0));
}

TEST_CASE("exact-quantity trades") {
    Pool pool(d14, 1.0);
    pool.mint("a", DemandCurve::inv_sqrt(d14, 1.0));
    const TradeReceipt r = pool.trade_exact_risky(0.5);
    CHECK(r.p_after == doctest::Approx(4.0));
    CHECK(r.numeraire_from_trader == doctest::Approx(1.0));
    const TradeReceipt z = pool.trade_exact_risky(0.0);
    CHECK(z.numeraire_from_trader == 0.0);
    CHECK_THROWS(pool.trade_exact_risky(0.1));

    Pool book(PriceDomain(1.0, 2.0), 1.0);
    book.mint("lp", synthesize(lob_basis(PriceDomain(1.0, 2.0), {1.5, 1.75}), ConeCoefficients({1.0, 1.0})));
    CHECK(book.trade_exact_risky(1.0).p_after == 1.5);
}

TEST_CASE("arbitrage best response") {
    Pool pool(d14, 1.0);
    pool.mint("a", DemandCurve::inv_sqrt(d14, 1.0));
    const ArbitrageResponse r = pool.arbitrage_best_response(4.0);
    CHECK(r.target_price == doctest::Approx(4.0));
    CHECK(r.profit == doctest::Approx(1.0));
    double best_grid = 0.0;
    for (int i = 0; i <= 10000; ++i) {
        const double p1 = 1.0 + 3.0 * i / 10000.0;
        const auto g = pool.aggregate();
        best_grid = std::max(best_grid, 4.0 * (g(1.0) - g(p1)) - oracle::stieltjes(g, 1.0, p1));
    }
    CHECK(r.profit >= best_grid - 1e-12);
    CHECK(pool.arbitrage_best_response(1.0).profit == 0.0);
    CHECK(pool.arbitrage_best_response(1.0).target_price == 1.0);
    CHECK(pool.arbitrage_best_response(0.5).target_price == 1.0);
    CHECK_THROWS(pool.arbitrage_best_response(0.0));
}

TEST_CASE("arbitrage on a flat book reports a tie") {
    const PriceDomain d(1.0, 2.0);
    Pool pool(d, 1.0);
    pool.mint("lp", DemandCurve::step(d, 1.5, 1.0));
    const ArbitrageResponse r = pool.arbitrage_best_response(1.8);
    CHECK(r.profit == doctest::Approx(0.3));
    CHECK(r.target_price == 1.5);
    CHECK(r.tie);
}

TEST_CASE("trade sequences") {
    Pool empty(d14, 2.0);
    const SequenceResult none = run_trade_sequence(empty, {});
    CHECK(none.rows.size() == 1);
    CHECK(none.rows[0].op == "init");

    Pool pool(d14, 2.0);
    const std::vector<Event> events{MintEvent{"a", DemandCurve::inv_sqrt(d14, 2.0)}, TradePriceEvent{4.0},
                                    TradePriceEvent{1.0}, BurnEvent{"a"}};
    const SequenceResult res = run_trade_sequence(pool, events);
    REQUIRE_FALSE(res.failure);
    REQUIRE(res.rows.size() == 5);
    CHECK(std::abs(res.rows.back().risky_reserve) <= 1e-9);
    CHECK(std::abs(res.rows.back().numeraire_reserve) <= 1e-9);

    Pool bad(d14, 2.0);
    const std::vector<Event> broken{MintEvent{"a", DemandCurve::inv_sqrt(d14, 1.0)}, BurnEvent{"b"}};
    const SequenceResult r2 = run_trade_sequence(bad, broken);
    REQUIRE(r2.failure);
    CHECK(r2.failure->step == 2);
    CHECK_FALSE(r2.failure->solvency);
}

TEST_CASE("path independence and reserve consistency") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const PriceDomain d = oracle::random_domain(rng);
        std::uniform_real_distribution<double> u(d.pmin(), d.pmax());
        Pool direct(d, u(rng));
        direct.mint("a", oracle::random_curve(rng, d));
        direct.mint("b", oracle::random_curve(rng, d));
        Pool split = direct;
        const double mid = u(rng), end = u(rng);
        const TradeReceipt one = direct.trade_to_price(end);
        const TradeReceipt r1 = split.trade_to_price(mid);
        const TradeReceipt r2 = split.trade_to_price(end);
        CHECK(std::abs(one.risky_to_trader - r1.risky_to_trader - r2.risky_to_trader) <= 1e-10);
        CHECK(std::abs(one.numeraire_from_trader - r1.numeraire_from_trader - r2.numeraire_from_trader) <= 1e-10);
        const Holdings rec = split.recomputed_reserves();
        CHECK(rec.risky == doctest::Approx(split.risky_reserve()).epsilon(1e-10));
        CHECK(std::abs(rec.numeraire - split.numeraire_reserve()) <= 1e-10 * std::max(1.0, rec.numeraire));
        CHECK(split.solvent());
    }
}

TEST_CASE("CPMM invariant") {
    std::mt19937_64 rng(8);
    for (double c : {0.5, 1.0, 10.0}) {
        const PriceDomain d(0.5, 50.0);
        Pool pool(d, 2.0);
        pool.mint("a", DemandCurve::inv_sqrt(d, c));
        std::uniform_real_distribution<double> u(d.pmin(), d.pmax());
        for (int i = 0; i < 100; ++i) {
            pool.trade_to_price(u(rng));
            const double k = pool.risky_reserve() * c * std::sqrt(pool.price());
            CHECK(k == doctest::Approx(c * c).epsilon(1e-9));
        }
    }
}
