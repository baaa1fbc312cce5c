#include "dcx/curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dcx {

namespace {

bool finite(double x) { return std::isfinite(x); }

double magnitude(const Segment& s, double p) {
    return std::abs(s.a) / std::sqrt(p) + std::abs(s.b) + std::abs(s.m) * p;
}

std::vector<Segment> merge_equal(std::vector<double>& breakpoints, std::vector<Segment> segments) {
    std::vector<double> bp{breakpoints.front()};
    std::vector<Segment> out;
    for (std::size_t j = 0; j < segments.size(); ++j) {
        if (!out.empty() && out.back() == segments[j]) {
            bp.back() = breakpoints[j + 1];
            continue;
        }
        out.push_back(segments[j]);
        bp.push_back(breakpoints[j + 1]);
    }
    breakpoints = std::move(bp);
    return out;
}

}  // namespace

double curve_tolerance(double magnitude) { return 1e-12 * std::max(1.0, magnitude); }

PriceDomain::PriceDomain(double pmin, double pmax) : pmin_(pmin), pmax_(pmax) {
    if (!(pmin > 0.0) || !(pmax > pmin) || !finite(pmax))
        throw std::invalid_argument("price domain requires 0 < pmin < pmax < inf");
}

double PriceDomain::clamp(double p) const { return std::clamp(p, pmin_, pmax_); }

SegmentKind Segment::kind() const {
    if (a == 0.0 && m == 0.0) return SegmentKind::constant;
    if (m == 0.0) return SegmentKind::inv_sqrt_affine;
    if (a == 0.0) return SegmentKind::linear;
    return SegmentKind::mixed;
}

double Segment::value(double p) const {
    double v = b;
    if (a != 0.0) v += a / std::sqrt(p);
    if (m != 0.0) v += m * p;
    return v;
}

double Segment::price_integral(double u, double v) const {
    double r = 0.0;
    if (a != 0.0) r += a * (std::sqrt(v) - std::sqrt(u));
    if (m != 0.0) r -= 0.5 * m * (v - u) * (v + u);
    return r;
}

DemandCurve::DemandCurve(PriceDomain domain, std::vector<double> breakpoints, std::vector<Segment> segments)
    : domain_(domain), breakpoints_(std::move(breakpoints)), segments_(std::move(segments)) {
    if (segments_.empty() || breakpoints_.size() != segments_.size() + 1)
        throw std::invalid_argument("demand curve needs one more breakpoint than segments");
    if (breakpoints_.front() != domain_.pmin() || breakpoints_.back() != domain_.pmax())
        throw std::invalid_argument("demand curve breakpoints must span the domain exactly");
    for (std::size_t j = 0; j + 1 < breakpoints_.size(); ++j) {
        if (!(breakpoints_[j] < breakpoints_[j + 1]))
            throw std::invalid_argument("demand curve breakpoints must be strictly increasing");
    }
    for (std::size_t j = 0; j < segments_.size(); ++j) {
        const Segment& s = segments_[j];
        if (!finite(s.a) || !finite(s.b) || !finite(s.m))
            throw std::invalid_argument("segment " + std::to_string(j) + " has non-finite coefficients");
        if (s.a < 0.0 || s.m > 0.0)
            throw std::invalid_argument("segment " + std::to_string(j) + " is increasing");
        const double right = breakpoints_[j + 1];
        if (s.value(right) < -curve_tolerance(magnitude(s, right)))
            throw std::invalid_argument("segment " + std::to_string(j) + " is negative");
        if (j > 0) {
            const double t = breakpoints_[j];
            const double left = segments_[j - 1].value(t);
            const double here = s.value(t);
            const double mag = std::max(magnitude(segments_[j - 1], t), magnitude(s, t));
            if (here > left + curve_tolerance(mag))
                throw std::invalid_argument("demand curve increases at breakpoint " + std::to_string(t));
        }
    }
}

DemandCurve DemandCurve::zero(const PriceDomain& domain) { return constant(domain, 0.0); }

DemandCurve DemandCurve::constant(const PriceDomain& domain, double c) {
    return DemandCurve(domain, {domain.pmin(), domain.pmax()}, {Segment::constant(c)});
}

DemandCurve DemandCurve::step(const PriceDomain& domain, double at, double high, double low) {
    if (!(at > domain.pmin()) || at > domain.pmax())
        throw std::invalid_argument("step location must lie in (pmin, pmax]");
    // A step at pmax holds `high` on the whole domain.
    if (at == domain.pmax()) return constant(domain, high);
    return DemandCurve(domain, {domain.pmin(), at, domain.pmax()},
                       {Segment::constant(high), Segment::constant(low)});
}

DemandCurve DemandCurve::inv_sqrt(const PriceDomain& domain, double c) {
    return DemandCurve(domain, {domain.pmin(), domain.pmax()}, {Segment::inv_sqrt_affine(c, 0.0)});
}

DemandCurve DemandCurve::linear(const PriceDomain& domain, double high, double low) {
    const double slope = (low - high) / (domain.pmax() - domain.pmin());
    return DemandCurve(domain, {domain.pmin(), domain.pmax()},
                       {Segment::linear(slope, high - slope * domain.pmin())});
}

std::size_t DemandCurve::segment_index(double p) const {
    const double c = domain_.clamp(p);
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), c);
    std::size_t idx = static_cast<std::size_t>(it - breakpoints_.begin());
    idx = idx == 0 ? 0 : idx - 1;
    return std::min(idx, segments_.size() - 1);
}

double DemandCurve::operator()(double p) const {
    if (!(p > 0.0)) throw std::domain_error("demand curve evaluated at non-positive price");
    return segments_[segment_index(p)].value(domain_.clamp(p));
}

double DemandCurve::left_limit(double p) const {
    if (!(p > 0.0)) throw std::domain_error("demand curve evaluated at non-positive price");
    if (p <= domain_.pmin()) return value_at_min();
    if (p > domain_.pmax()) return value_at_max();
    const std::size_t idx = segment_index(p);
    if (idx > 0 && breakpoints_[idx] == p) return segments_[idx - 1].value(p);
    return segments_[idx].value(p);
}

DemandCurve add(const DemandCurve& lhs, const DemandCurve& rhs) {
    const DemandCurve curves[] = {lhs, rhs};
    const double weights[] = {1.0, 1.0};
    return linear_combination(curves, weights);
}

DemandCurve scale(const DemandCurve& curve, double c) {
    if (!(c >= 0.0) || !finite(c)) throw std::invalid_argument("scale factor must be a nonnegative number");
    return linear_combination(std::span(&curve, 1), std::span(&c, 1));
}

DemandCurve linear_combination(std::span<const DemandCurve> curves, std::span<const double> weights) {
    if (curves.empty()) throw std::invalid_argument("linear combination of no curves");
    if (curves.size() != weights.size()) throw std::invalid_argument("curve and weight counts differ");
    const PriceDomain& domain = curves.front().domain();

    std::vector<double> grid;
    for (std::size_t i = 0; i < curves.size(); ++i) {
        if (!(curves[i].domain() == domain)) throw std::invalid_argument("curves have mismatched domains");
        if (!(weights[i] >= 0.0) || !finite(weights[i]))
            throw std::invalid_argument("linear combination weights must be nonnegative");
        if (weights[i] == 0.0) continue;
        auto bp = curves[i].breakpoints();
        grid.insert(grid.end(), bp.begin(), bp.end());
    }
    if (grid.empty()) return DemandCurve::zero(domain);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<Segment> segments(grid.size() - 1);
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const double w = weights[i];
        if (w == 0.0) continue;
        auto bp = curves[i].breakpoints();
        auto segs = curves[i].segments();
        std::size_t k = 0;
        for (std::size_t j = 0; j < segments.size(); ++j) {
            while (k + 1 < segs.size() && bp[k + 1] <= grid[j]) ++k;
            segments[j].a += w * segs[k].a;
            segments[j].b += w * segs[k].b;
            segments[j].m += w * segs[k].m;
        }
    }
    segments = merge_equal(grid, std::move(segments));
    return DemandCurve(domain, std::move(grid), std::move(segments));
}

double stieltjes_price_integral(const DemandCurve& curve, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("price integral bounds must be positive");
    if (a == b) return 0.0;
    if (a > b) return -stieltjes_price_integral(curve, b, a);

    const PriceDomain& d = curve.domain();
    const double lo = d.clamp(a);
    const double hi = d.clamp(b);
    if (lo == hi) return 0.0;

    auto bp = curve.breakpoints();
    auto segs = curve.segments();
    double total = 0.0;
    for (std::size_t j = curve.segment_index(lo); j < segs.size() && bp[j] <= hi; ++j) {
        const double u = std::max(bp[j], lo);
        const double v = std::min(bp[j + 1], hi);
        if (v > u) total += segs[j].price_integral(u, v);
        // Jump at the segment's left end counts when it lies in (lo, hi].
        if (j > 0 && bp[j] > lo) total += bp[j] * (segs[j - 1].value(bp[j]) - segs[j].value(bp[j]));
    }
    return total;
}

double invert_quantity(const DemandCurve& curve, double q) {
    const double top = curve.value_at_min();
    const double bottom = curve.value_at_max();
    const double tol = curve_tolerance(std::max(std::abs(top), std::abs(q)));
    if (!finite(q) || q > top + tol || q < bottom - tol)
        throw std::invalid_argument("quantity outside the curve's range");

    auto bp = curve.breakpoints();
    auto segs = curve.segments();
    for (std::size_t j = 0; j < segs.size(); ++j) {
        const Segment& s = segs[j];
        const double u = bp[j];
        const double v = bp[j + 1];
        if (s.value(u) <= q) return u;
        if (s.value(v) > q) continue;
        // Strictly decreasing piece crossing q inside (u, v].
        double p;
        if (s.m == 0.0) {
            const double r = s.a / (q - s.b);
            p = r * r;
        } else if (s.a == 0.0) {
            p = (q - s.b) / s.m;
        } else {
            double lo = u, hi = v;
            for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                (s.value(mid) <= q ? hi : lo) = mid;
            }
            p = hi;
        }
        return std::clamp(p, u, v);
    }
    return curve.domain().pmax();
}

}  // namespace dcx
