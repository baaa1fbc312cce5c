#include <doctest.h>

#include <cmath>
#include <random>

#include "dcx/approx.hpp"
#include "oracles.hpp"

using namespace dcx;

namespace {
const PriceDomain d12{1.0, 2.0};
const TargetClassBounds unit{0.0, 1.0};
}

TEST_CASE("distance examples") {
    const PriceDomain d(0.5, 3.0);
    for (const auto& w : {WeightFunction::uniform(d), WeightFunction::log_uniform(d)})
        for (double p : {1.0, 2.0, 3.0})
            CHECK(distance(DemandCurve::constant(d, 1.0), DemandCurve::zero(d), w, p) == doctest::Approx(1.0));

    const auto w = WeightFunction::uniform(d12);
    const auto f = DemandCurve::linear(d12, 1.0, 0.0);
    const auto ticks = equal_measure_lob_ticks(w, 4);
    const auto g = synthesize(lob_basis(d12, ticks), midpoint_lob_approximant(f, ticks));
    CHECK(oracle::trapezoid_distance(f, g, w, 1.0) == doctest::Approx(1.0 / 16.0).epsilon(1e-6));
    CHECK(distance(f, g, w, 1.0) == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
    CHECK_THROWS(distance(f, DemandCurve::zero(PriceDomain(1.0, 3.0)), w, 1.0));
}

TEST_CASE("distance agrees with the quadrature oracle") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        const PriceDomain d = oracle::random_domain(rng);
        const auto f = oracle::random_curve(rng, d), g = oracle::random_curve(rng, d);
        const auto w = trial % 2 ? WeightFunction::uniform(d) : WeightFunction::log_uniform(d);
        for (double p : {1.0, 2.0}) CHECK(distance(f, g, w, p) == doctest::Approx(oracle::distance(f, g, w, p)).epsilon(1e-9));
        CHECK(distance(f, g, w, 1.0) <= distance(f, g, w, 2.0) + 1e-12);
    }
}

TEST_CASE("midpoint approximant levels") {
    const auto w = WeightFunction::uniform(d12);
    const auto f = DemandCurve::linear(d12, 1.0, 0.0);
    const auto ticks = equal_measure_lob_ticks(w, 4);
    const auto g = synthesize(lob_basis(d12, ticks), midpoint_lob_approximant(f, ticks));
    CHECK(g(1.1) == doctest::Approx(0.875));
    CHECK(g(1.3) == doctest::Approx(0.625));
    CHECK(g(1.6) == doctest::Approx(0.375));
    CHECK(g(1.9) == doctest::Approx(0.125));

    const auto flat = midpoint_lob_approximant(DemandCurve::constant(d12, 2.0), ticks);
    for (std::size_t i = 0; i + 1 < ticks.size(); ++i) CHECK(flat.values()[i] == 0.0);
    CHECK(flat.values().back() == doctest::Approx(2.0));
}

TEST_CASE("v3 replication") {
    const PriceDomain d(1.0, 9.0);
    const std::vector<double> ticks{1.0, 2.0, 3.5, 6.0, 9.0};
    const auto w = WeightFunction::log_uniform(d);
    const auto flat = univ3_replicant(DemandCurve::constant(d, 3.0), ticks);
    for (std::size_t i = 0; i + 1 < flat.values().size(); ++i) CHECK(flat.values()[i] == 0.0);
    CHECK(flat.values().back() == doctest::Approx(3.0));

    const auto r = DemandCurve::inv_sqrt(d, 1.0);
    const auto rep = univ3_replicant(r, ticks);
    for (std::size_t i = 0; i + 1 < rep.values().size(); ++i) CHECK(rep.values()[i] == doctest::Approx(1.0));
    const Basis b = univ3_basis(d, ticks);
    CHECK(distance(r, synthesize(b, rep), w, 1.0) <= 1e-12);

    // v3 curves are continuous, so a drop at a tick is matched at every tick
    // and only the interval ending at the drop carries error.
    const auto drop = DemandCurve::step(d, 3.5, 2.0, 0.5);
    const auto g = synthesize(b, univ3_replicant(drop, ticks));
    for (double t : ticks) CHECK(g(t) == doctest::Approx(drop(t)).epsilon(1e-12));
    for (double p : {1.0, 1.5, 1.99, 3.5, 4.0, 8.0}) CHECK(g(p) == doctest::Approx(drop(p)).epsilon(1e-12));
    CHECK(distance(drop, g, w, 2.0) > 0.0);
    CHECK(distance(drop, g, w, 1.0) <= 1.5 * w.mass(2.0, 3.5));
}

TEST_CASE("best_in_cone recovers cone members") {
    const auto w = WeightFunction::uniform(d12);
    const Basis b = lob_basis(d12, {1.2, 1.5, 2.0});
    const auto target = b.curves()[1];
    const ConeFit fit = best_in_cone(target, b, w, ApproxConfig{});
    CHECK(fit.distance <= 1e-9);
    CHECK(fit.coefficients.values()[1] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("best_in_cone honours the midpoint bound") {
    const auto w = WeightFunction::uniform(d12);
    const auto f = DemandCurve::linear(d12, 1.0, 0.0);
    const Basis b = lob_basis(d12, equal_measure_lob_ticks(w, 4));
    const ConeFit fit = best_in_cone(f, b, w, ApproxConfig{});
    CHECK(fit.distance <= 1.0 / 16.0 + 1e-12);
    REQUIRE(fit.warm_start_distance);
    CHECK(*fit.warm_start_distance == doctest::Approx(1.0 / 16.0));
    CHECK(fit.distance == doctest::Approx(oracle::distance(f, synthesize(b, fit.coefficients), w, 1.0)).epsilon(1e-9));
}

TEST_CASE("best_in_cone outside the span matches a 1-D search") {
    const PriceDomain d(1.0, 4.0);
    const auto w = WeightFunction::uniform(d);
    const Basis b = univ3_basis(d, {1.0, 4.0}, false);
    const auto f = DemandCurve::constant(d, 1.0);
    for (double p : {1.0, 2.0}) {
        ApproxConfig cfg;
        cfg.p_exp = p;
        const ConeFit fit = best_in_cone(f, b, w, cfg);
        const auto [c, best] = oracle::golden_section(
            [&](double x) { return oracle::distance(f, synthesize(b, ConeCoefficients({x})), w, p); }, 0.0, 10.0);
        CHECK(best > 0.1);
        CHECK(fit.distance == doctest::Approx(best).epsilon(1e-5));
        CHECK(fit.distance >= best - 1e-9);
    }
}

TEST_CASE("best_in_cone rejects unsupported exponents and mismatched inputs") {
    const auto w = WeightFunction::uniform(d12);
    ApproxConfig cfg;
    cfg.p_exp = 3.0;
    CHECK_THROWS(best_in_cone(DemandCurve::zero(d12), cpmm_basis(d12), w, cfg));
    CHECK_THROWS(best_in_cone(DemandCurve::zero(d12), cpmm_basis(PriceDomain(1.0, 3.0)), w, ApproxConfig{}));
}

TEST_CASE("adversary grid and step family") {
    const auto w = WeightFunction::uniform(d12);
    const AdversaryGrid grid(w, 1);
    REQUIRE(grid.points().size() == 7);
    CHECK(grid.t(1) == 1.0);
    CHECK(grid.t(7) == 2.0);
    CHECK(grid.t(4) == doctest::Approx(1.0 + 3.0 / 6.0));
    const auto fam = adversarial_step_family(grid, d12, TargetClassBounds(0.2, 0.7));
    REQUIRE(fam.size() == 1);
    CHECK(fam[0](1.49) == 0.7);
    CHECK(fam[0](1.5) == 0.2);
    CHECK(adversarial_step_family(w, 5, unit).size() == 5);
}

TEST_CASE("at most one large drop on any monotone curve") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        const PriceDomain d = oracle::random_domain(rng);
        const std::size_t n = 1 + rng() % 10;
        const auto g = oracle::random_curve(rng, d);
        CHECK(large_drop_count(g, AdversaryGrid(WeightFunction::uniform(d), n)) <= 1);
    }
}

TEST_CASE("pigeonhole interval bounds every cone member") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const PriceDomain d(1.0, 5.0);
    const auto w = WeightFunction::uniform(d);
    const Basis b = univ3_basis(d, {1.0, 1.7, 2.9, 5.0});
    const AdversaryGrid grid(w, b.size() + 1);
    const auto l = pigeonhole_interval(b, grid);
    REQUIRE(l);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> c(b.size());
        for (auto& x : c) x = u01(rng);
        const auto g = synthesize(b, ConeCoefficients(c));
        const double local = g(grid.t(2 * *l + 1)) - g(grid.t(2 * *l + 3));
        const double total = g(grid.t(3)) - g(grid.t(2 * grid.n() + 3));
        CHECK(local <= 0.5 * total + 1e-12);
    }
}

TEST_CASE("lower-bound case values") {
    const TargetClassBounds b(0.0, 1.0);
    CHECK(lower_bound_case_value(LowerBoundCase::interior, 3, b, 1.0) == doctest::Approx(1.0 / 40.0));
    CHECK(lower_bound_case_value(LowerBoundCase::left_overshoot, 3, b, 1.0) == doctest::Approx(1.0 / 20.0));
    CHECK(lower_bound_case_value(LowerBoundCase::high_plateau, 3, b, 1.0) == doctest::Approx(1.0 / 40.0));
    CHECK(lower_bound_case_value(LowerBoundCase::interior, 2, b, 2.0) == doctest::Approx(1.0 / 16.0));
}

TEST_CASE("sampler and estimate are deterministic") {
    const auto w = WeightFunction::uniform(d12);
    const auto a = monotone_sampler(99, unit, 8, w), b = monotone_sampler(99, unit, 8, w);
    for (double p = 1.0; p <= 2.0; p += 0.05) CHECK(a(p) == b(p));
    CHECK(a.value_at_min() == doctest::Approx(1.0));
    CHECK(a(2.0) == doctest::Approx(0.0).epsilon(1e-12));

    const Basis basis = lob_basis(d12, equal_measure_lob_ticks(w, 5));
    const ErrEstimate e1 = err_estimate(basis, w, unit, ApproxConfig{}, 5, 12, 1);
    const ErrEstimate e2 = err_estimate(basis, w, unit, ApproxConfig{}, 5, 12, 3);
    CHECK(e1.distances == e2.distances);
    CHECK(e1.adversary_count == 6 + 12);
    CHECK(e1.estimate <= 0.1 + 1e-9);
}
