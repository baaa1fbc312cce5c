#pragma once

#include <span>
#include <vector>

namespace dcx {

/// Closed price interval [pmin, pmax] with 0 < pmin < pmax < inf.
class PriceDomain {
public:
    PriceDomain(double pmin, double pmax);

    double pmin() const { return pmin_; }
    double pmax() const { return pmax_; }
    double clamp(double p) const;
    bool contains(double p) const { return p >= pmin_ && p <= pmax_; }

    friend bool operator==(const PriceDomain&, const PriceDomain&) = default;

private:
    double pmin_;
    double pmax_;
};

enum class SegmentKind { constant, inv_sqrt_affine, linear, mixed };

/// One smooth piece of a demand curve: p -> a/sqrt(p) + b + m*p.
///
/// a >= 0 and m <= 0 keep the piece non-increasing. Constant pieces have
/// a == m == 0, the CPMM-style pieces have m == 0.
struct Segment {
    double a = 0.0;
    double b = 0.0;
    double m = 0.0;

    static Segment constant(double c) { return {0.0, c, 0.0}; }
    static Segment inv_sqrt_affine(double a, double b) { return {a, b, 0.0}; }
    static Segment linear(double slope, double intercept) { return {0.0, intercept, slope}; }

    SegmentKind kind() const;
    bool is_constant() const { return a == 0.0 && m == 0.0; }
    double value(double p) const;

    /// -integral_u^v p d(segment)(p), no jumps.
    double price_integral(double u, double v) const;

    friend bool operator==(const Segment&, const Segment&) = default;
};

/// Piecewise non-increasing, nonnegative demand curve on a bounded domain.
///
/// Breakpoints t_0 = pmin < t_1 < ... < t_m = pmax; segment j covers
/// [t_j, t_{j+1}). Values are right-continuous at breakpoints, the left limit
/// at t_j is segment j-1 evaluated at t_j. Outside the domain the curve is
/// extended by constants. Immutable once constructed.
class DemandCurve {
public:
    DemandCurve(PriceDomain domain, std::vector<double> breakpoints, std::vector<Segment> segments);

    static DemandCurve zero(const PriceDomain& domain);
    static DemandCurve constant(const PriceDomain& domain, double c);
    /// `high` on [pmin, at), `low` on [at, pmax].
    static DemandCurve step(const PriceDomain& domain, double at, double high, double low = 0.0);
    /// c / sqrt(p) on the whole domain.
    static DemandCurve inv_sqrt(const PriceDomain& domain, double c);
    /// Linear from `high` at pmin to `low` at pmax.
    static DemandCurve linear(const PriceDomain& domain, double high, double low);

    const PriceDomain& domain() const { return domain_; }
    std::span<const double> breakpoints() const { return breakpoints_; }
    std::span<const Segment> segments() const { return segments_; }
    std::size_t segment_count() const { return segments_.size(); }

    /// Right-continuous value; throws std::domain_error for p <= 0.
    double operator()(double p) const;
    double left_limit(double p) const;

    /// Index of the segment whose half-open interval contains the clamped price.
    std::size_t segment_index(double p) const;

    double value_at_min() const { return segments_.front().value(domain_.pmin()); }
    double value_at_max() const { return segments_.back().value(domain_.pmax()); }

private:
    PriceDomain domain_;
    std::vector<double> breakpoints_;
    std::vector<Segment> segments_;
};

/// Pointwise sum; domains must match.
DemandCurve add(const DemandCurve& lhs, const DemandCurve& rhs);

/// Pointwise c*g for c >= 0.
DemandCurve scale(const DemandCurve& curve, double c);

/// sum_i weights[i] * curves[i] with one merge over the union of breakpoints.
DemandCurve linear_combination(std::span<const DemandCurve> curves, std::span<const double> weights);

/// -integral_a^b p dg(p) in closed form, including jumps at breakpoints in (a, b].
/// Antisymmetric in (a, b).
double stieltjes_price_integral(const DemandCurve& curve, double a, double b);

/// Leftmost price p with g(p) <= q, i.e. the price at which the curve holds
/// quantity q (jump location when q falls inside a jump).
double invert_quantity(const DemandCurve& curve, double q);

/// Tolerance used when validating monotonicity and sign at a given magnitude.
double curve_tolerance(double magnitude);

}  // namespace dcx
