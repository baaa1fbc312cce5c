#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "dcx/curve.hpp"
#include "dcx/measure.hpp"

namespace dcx {

enum class MechanismKind { cpmm, lob, univ3, custom };

std::string_view to_string(MechanismKind kind);
MechanismKind mechanism_kind_from_string(std::string_view name);

/// Generating curves of an exchange mechanism on a common domain.
///
/// The exchange complexity reported here is the stored cardinality; the
/// constructors below produce conically independent families.
class Basis {
public:
    Basis(MechanismKind kind, PriceDomain domain, std::vector<double> ticks, bool include_ones,
          std::vector<DemandCurve> curves);

    MechanismKind kind() const { return kind_; }
    const PriceDomain& domain() const { return domain_; }
    /// Construction ticks: LOB order prices, or the full v3 tick list (pmin..pmax).
    std::span<const double> ticks() const { return ticks_; }
    /// Whether the last curve is the all-ones element (v3 only).
    bool include_ones() const { return include_ones_; }
    std::span<const DemandCurve> curves() const { return curves_; }
    const DemandCurve& operator[](std::size_t i) const { return curves_[i]; }

    std::size_t size() const { return curves_.size(); }
    std::size_t exchange_complexity() const { return curves_.size(); }

private:
    MechanismKind kind_;
    PriceDomain domain_;
    std::vector<double> ticks_;
    bool include_ones_;
    std::vector<DemandCurve> curves_;
};

/// Nonnegative coefficients, one per basis element.
class ConeCoefficients {
public:
    ConeCoefficients() = default;
    explicit ConeCoefficients(std::vector<double> values);

    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

private:
    std::vector<double> values_;
};

DemandCurve synthesize(const Basis& basis, const ConeCoefficients& coefs);

/// Single reference curve 1/sqrt(p).
Basis cpmm_basis(const PriceDomain& domain);

/// One unit step per tick: 1 below the tick, 0 from the tick on. Ticks lie in
/// (pmin, pmax]; a tick at pmax is an order resting at the upper boundary and
/// contributes the constant-one curve.
Basis lob_basis(const PriceDomain& domain, std::vector<double> ticks);

/// Concentrated-liquidity curves, one per consecutive tick pair, plus the
/// all-ones curve unless `include_ones` is false. Ticks must start at pmin
/// and end at pmax.
Basis univ3_basis(const PriceDomain& domain, std::vector<double> ticks, bool include_ones = true);

Basis custom_basis(const PriceDomain& domain, std::vector<DemandCurve> curves);

/// The v3 curve for [lo, hi]: constant below, 1/sqrt(p) - 1/sqrt(hi) inside, 0 above.
DemandCurve univ3_interval_curve(const PriceDomain& domain, double lo, double hi);

/// Interior quantiles i/n, i = 1..n-1, of the weight.
std::vector<double> equal_measure_ticks(const WeightFunction& w, std::size_t n);

/// Quantiles i/n, i = 0..n, endpoints included.
std::vector<double> equal_measure_grid(const WeightFunction& w, std::size_t n);

/// LOB tick set with n equal-measure intervals: the n-1 interior quantiles
/// plus the boundary order at pmax, so complexity is n.
std::vector<double> equal_measure_lob_ticks(const WeightFunction& w, std::size_t n);

/// Number of geometric intervals needed to cover the domain with ratio 1+delta
/// given log(1+delta).
std::size_t geometric_interval_count(const PriceDomain& domain, double log_ratio);

/// Geometric ticks pmin*(1+delta)^i with log(1+delta) = eps^p * log(pmax/pmin);
/// the last tick is clamped to pmax.
std::vector<double> geometric_ticks(const PriceDomain& domain, double epsilon, double p_exp);

/// Geometric ticks with a fixed ratio (e.g. 1.0001), last tick clamped to pmax.
std::vector<double> geometric_ticks_with_ratio(const PriceDomain& domain, double ratio);

}  // namespace dcx
