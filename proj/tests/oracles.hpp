#pragma once

// Independent reference computations for the test suites. Nothing here calls
// the closed-form integrals, distances or solvers of the library; curves are
// only evaluated pointwise through their segment formulas.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include "dcx/curve.hpp"
#include "dcx/measure.hpp"

namespace oracle {

inline double gk(const std::function<double(double)>& fn, double a, double b, unsigned depth = 6, double tol = 1e-11) {
    if (!(b > a)) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(fn, a, b, depth, tol);
}

/// Derivative of a segment formula a/sqrt(p) + b + m p.
inline double slope(const dcx::Segment& s, double p) { return -0.5 * s.a / (p * std::sqrt(p)) + s.m; }

/// -int_{(lo, hi]} p dg: quadrature of -p g'(p) on each smooth piece plus the
/// jump sum at breakpoints, using the piece formulas on each side.
inline double stieltjes(const dcx::DemandCurve& g, double lo, double hi) {
    if (hi < lo) return -stieltjes(g, hi, lo);
    const auto bp = g.breakpoints();
    const auto segs = g.segments();
    lo = std::clamp(lo, bp.front(), bp.back());
    hi = std::clamp(hi, bp.front(), bp.back());
    double total = 0.0;
    for (std::size_t j = 0; j < segs.size(); ++j) {
        const double u = std::max(lo, bp[j]);
        const double v = std::min(hi, bp[j + 1]);
        const dcx::Segment s = segs[j];
        if (v > u) total += gk([&](double p) { return -p * slope(s, p); }, u, v);
        if (j > 0 && bp[j] > lo && bp[j] <= hi) total += bp[j] * (segs[j - 1].value(bp[j]) - s.value(bp[j]));
    }
    return total;
}

/// Same quantity by parts: -[p g] + int g dp, with g evaluated pointwise.
inline double stieltjes_by_parts(const dcx::DemandCurve& g, double lo, double hi) {
    const auto bp = g.breakpoints();
    double area = 0.0;
    std::vector<double> cuts{lo};
    for (double b : bp)
        if (b > lo && b < hi) cuts.push_back(b);
    cuts.push_back(hi);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        const dcx::Segment s = g.segments()[g.segment_index(mid)];
        area += gk([&](double p) { return s.value(p); }, cuts[i], cuts[i + 1]);
    }
    return -(hi * g(hi) - lo * g(lo)) + area;
}

/// (int w |f - g|^p)^(1/p) by Gauss-Kronrod between all breakpoints of f, g, w.
inline double distance(const dcx::DemandCurve& f, const dcx::DemandCurve& g, const dcx::WeightFunction& w,
                       double p_exp) {
    std::vector<double> cuts;
    for (double b : f.breakpoints()) cuts.push_back(b);
    for (double b : g.breakpoints()) cuts.push_back(b);
    for (double b : w.breakpoints()) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        const dcx::Segment sf = f.segments()[f.segment_index(mid)];
        const dcx::Segment sg = g.segments()[g.segment_index(mid)];
        const double dens = w.piecewise_constant() ? w.density(mid) : 0.0;
        total += gk(
            [&](double p) {
                const double d = std::abs(sf.value(p) - sg.value(p));
                return (w.piecewise_constant() ? dens : w.density(p)) * std::pow(d, p_exp);
            },
            cuts[i], cuts[i + 1], 20, 1e-12);
    }
    return std::pow(total, 1.0 / p_exp);
}

/// Composite trapezoid rule on a fine uniform grid.
inline double trapezoid_distance(const dcx::DemandCurve& f, const dcx::DemandCurve& g, const dcx::WeightFunction& w,
                                 double p_exp, std::size_t cells = 200000) {
    const double a = f.domain().pmin(), b = f.domain().pmax();
    const double h = (b - a) / static_cast<double>(cells);
    auto term = [&](double p) { return w.density(p) * std::pow(std::abs(f(p) - g(p)), p_exp); };
    double total = 0.5 * (term(a) + term(std::nextafter(b, a)));
    for (std::size_t i = 1; i < cells; ++i) total += term(a + h * static_cast<double>(i));
    return std::pow(total * h, 1.0 / p_exp);
}

/// Golden-section minimum of a unimodal function on [lo, hi].
inline std::pair<double, double> golden_section(const std::function<double(double)>& fn, double lo, double hi) {
    const auto r = boost::math::tools::brent_find_minima(fn, lo, hi, 50);
    return {r.first, r.second};
}

// Random test material -------------------------------------------------------

/// Random non-increasing nonnegative piecewise curve mixing all segment kinds.
/// With `continuous` no jumps are inserted and every piece strictly decreases.
inline dcx::DemandCurve random_curve(std::mt19937_64& rng, const dcx::PriceDomain& d, bool continuous = false) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const std::size_t pieces = 1 + rng() % 6;
    std::vector<double> bp{d.pmin(), d.pmax()};
    for (std::size_t i = 1; i < pieces; ++i) bp.push_back(d.pmin() + (d.pmax() - d.pmin()) * (0.02 + 0.96 * u01(rng)));
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

    std::vector<dcx::Segment> segs(bp.size() - 1);
    double right = continuous ? 0.1 + u01(rng) : (u01(rng) < 0.3 ? 0.0 : u01(rng));
    for (std::size_t j = segs.size(); j-- > 0;) {
        const double v = bp[j + 1];
        const double level = right + (continuous || u01(rng) < 0.3 ? 0.0 : 2.0 * u01(rng));
        dcx::Segment s{};
        switch (rng() % (continuous ? 3 : 4)) {
            case 0: s.a = 2.0 * u01(rng) + (continuous ? 0.05 : 0.0); break;
            case 1: s.m = -(u01(rng) + (continuous ? 0.05 : 0.0)); break;
            case 2:
                s.a = u01(rng) + 0.01;
                s.m = -u01(rng);
                break;
            default: break;
        }
        s.b = level - s.a / std::sqrt(v) - s.m * v;
        segs[j] = s;
        right = s.value(bp[j]);
    }
    return dcx::DemandCurve(d, bp, segs);
}

inline dcx::PriceDomain random_domain(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> lo(0.2, 5.0), ratio(1.5, 20.0);
    const double a = lo(rng);
    return dcx::PriceDomain(a, a * ratio(rng));
}

}  // namespace oracle
