#include "dcx/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dcx {

std::string_view to_string(MechanismKind kind) {
    switch (kind) {
        case MechanismKind::cpmm: return "cpmm";
        case MechanismKind::lob: return "lob";
        case MechanismKind::univ3: return "univ3";
        case MechanismKind::custom: return "custom";
    }
    return "custom";
}

MechanismKind mechanism_kind_from_string(std::string_view name) {
    if (name == "cpmm") return MechanismKind::cpmm;
    if (name == "lob") return MechanismKind::lob;
    if (name == "univ3") return MechanismKind::univ3;
    if (name == "custom") return MechanismKind::custom;
    throw std::invalid_argument("unknown mechanism kind '" + std::string(name) + "'");
}

Basis::Basis(MechanismKind kind, PriceDomain domain, std::vector<double> ticks, bool include_ones,
             std::vector<DemandCurve> curves)
    : kind_(kind), domain_(domain), ticks_(std::move(ticks)), include_ones_(include_ones), curves_(std::move(curves)) {
    for (const auto& c : curves_)
        if (!(c.domain() == domain_)) throw std::invalid_argument("basis curves must share the basis domain");
}

ConeCoefficients::ConeCoefficients(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_)
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("cone coefficients must be nonnegative");
}

DemandCurve synthesize(const Basis& basis, const ConeCoefficients& coefs) {
    if (coefs.size() != basis.size()) throw std::invalid_argument("coefficient count does not match basis size");
    if (basis.size() == 0) return DemandCurve::zero(basis.domain());
    return linear_combination(basis.curves(), coefs.values());
}

Basis cpmm_basis(const PriceDomain& domain) {
    return Basis(MechanismKind::cpmm, domain, {}, false, {DemandCurve::inv_sqrt(domain, 1.0)});
}

Basis lob_basis(const PriceDomain& domain, std::vector<double> ticks) {
    std::vector<DemandCurve> curves;
    curves.reserve(ticks.size());
    for (std::size_t i = 0; i < ticks.size(); ++i) {
        if (!(ticks[i] > domain.pmin()) || ticks[i] > domain.pmax())
            throw std::invalid_argument("LOB ticks must lie in (pmin, pmax]");
        if (i > 0 && !(ticks[i] > ticks[i - 1])) throw std::invalid_argument("LOB ticks must be strictly increasing");
        curves.push_back(DemandCurve::step(domain, ticks[i], 1.0, 0.0));
    }
    return Basis(MechanismKind::lob, domain, std::move(ticks), false, std::move(curves));
}

DemandCurve univ3_interval_curve(const PriceDomain& domain, double lo, double hi) {
    if (!(lo >= domain.pmin()) || !(hi > lo) || hi > domain.pmax())
        throw std::invalid_argument("v3 interval must satisfy pmin <= lo < hi <= pmax");
    const double top = 1.0 / std::sqrt(hi);
    std::vector<double> bp;
    std::vector<Segment> segs;
    bp.push_back(domain.pmin());
    if (lo > domain.pmin()) {
        segs.push_back(Segment::constant(1.0 / std::sqrt(lo) - top));
        bp.push_back(lo);
    }
    segs.push_back(Segment::inv_sqrt_affine(1.0, -top));
    bp.push_back(hi);
    if (hi < domain.pmax()) {
        segs.push_back(Segment::constant(0.0));
        bp.push_back(domain.pmax());
    }
    return DemandCurve(domain, std::move(bp), std::move(segs));
}

Basis univ3_basis(const PriceDomain& domain, std::vector<double> ticks, bool include_ones) {
    if (ticks.size() < 2 || ticks.front() != domain.pmin() || ticks.back() != domain.pmax())
        throw std::invalid_argument("v3 ticks must start at pmin and end at pmax");
    std::vector<DemandCurve> curves;
    curves.reserve(ticks.size());
    for (std::size_t i = 0; i + 1 < ticks.size(); ++i) {
        if (!(ticks[i + 1] > ticks[i])) throw std::invalid_argument("v3 ticks must be strictly increasing");
        curves.push_back(univ3_interval_curve(domain, ticks[i], ticks[i + 1]));
    }
    if (include_ones) curves.push_back(DemandCurve::constant(domain, 1.0));
    return Basis(MechanismKind::univ3, domain, std::move(ticks), include_ones, std::move(curves));
}

Basis custom_basis(const PriceDomain& domain, std::vector<DemandCurve> curves) {
    return Basis(MechanismKind::custom, domain, {}, false, std::move(curves));
}

std::vector<double> equal_measure_ticks(const WeightFunction& w, std::size_t n) {
    if (n == 0) throw std::invalid_argument("equal-measure split needs n >= 1");
    std::vector<double> ticks;
    ticks.reserve(n - 1);
    for (std::size_t i = 1; i < n; ++i)
        ticks.push_back(w.quantile(static_cast<double>(i) / static_cast<double>(n)));
    return ticks;
}

std::vector<double> equal_measure_grid(const WeightFunction& w, std::size_t n) {
    std::vector<double> grid = equal_measure_ticks(w, n);
    grid.insert(grid.begin(), w.domain().pmin());
    grid.push_back(w.domain().pmax());
    return grid;
}

std::vector<double> equal_measure_lob_ticks(const WeightFunction& w, std::size_t n) {
    std::vector<double> ticks = equal_measure_ticks(w, n);
    ticks.push_back(w.domain().pmax());
    return ticks;
}

std::size_t geometric_interval_count(const PriceDomain& domain, double log_ratio) {
    if (!(log_ratio > 0.0)) throw std::invalid_argument("geometric tick ratio must exceed one");
    const double x = std::log(domain.pmax() / domain.pmin()) / log_ratio;
    const double n = std::ceil(x - 1e-9);
    if (!(n >= 1.0) || !std::isfinite(n)) throw std::invalid_argument("geometric ticks yield no interval");
    return static_cast<std::size_t>(n);
}

namespace {

std::vector<double> geometric_with_log_ratio(const PriceDomain& domain, double log_ratio) {
    const std::size_t n = geometric_interval_count(domain, log_ratio);
    std::vector<double> ticks(n + 1);
    for (std::size_t i = 0; i < n; ++i) ticks[i] = domain.pmin() * std::exp(static_cast<double>(i) * log_ratio);
    ticks[0] = domain.pmin();
    ticks[n] = domain.pmax();
    return ticks;
}

}  // namespace

std::vector<double> geometric_ticks(const PriceDomain& domain, double epsilon, double p_exp) {
    if (!(epsilon > 0.0) || !(p_exp >= 1.0)) throw std::invalid_argument("geometric ticks need eps > 0 and p >= 1");
    const double eps_p = std::pow(epsilon, p_exp);
    if (eps_p > 1.0) throw std::invalid_argument("geometric ticks need eps^p <= 1");
    return geometric_with_log_ratio(domain, eps_p * std::log(domain.pmax() / domain.pmin()));
}

std::vector<double> geometric_ticks_with_ratio(const PriceDomain& domain, double ratio) {
    if (!(ratio > 1.0)) throw std::invalid_argument("geometric tick ratio must exceed one");
    return geometric_with_log_ratio(domain, std::log(ratio));
}

}  // namespace dcx
