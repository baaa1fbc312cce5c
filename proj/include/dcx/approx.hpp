#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dcx/curve.hpp"
#include "dcx/measure.hpp"
#include "dcx/mechanism.hpp"

namespace dcx {

/// Range [fmin, fmax] of the target class of non-increasing curves.
class TargetClassBounds {
public:
    TargetClassBounds(double fmin, double fmax);

    double fmin() const { return fmin_; }
    double fmax() const { return fmax_; }
    double width() const { return fmax_ - fmin_; }

private:
    double fmin_;
    double fmax_;
};

struct ApproxConfig {
    double p_exp = 1.0;
    /// Number of equal-measure cells used to discretize the objective.
    std::size_t grid_size = 256;
    /// Relative objective change at which reweighting stops (p = 1).
    double solver_tol = 1e-9;
    /// Active-set steps for p = 2, reweighting rounds for p = 1.
    std::size_t max_iters = 2000;
    /// Active-set steps per reweighting round (p = 1 only).
    std::size_t inner_iters = 300;

    void validate() const;
};

/// Weighted l_p distance (int w |f - g|^p)^(1/p) by composite quadrature over
/// the union of breakpoints; exact where the integrand is piecewise constant.
double distance(const DemandCurve& f, const DemandCurve& g, const WeightFunction& w, double p_exp);

/// Midpoint staircase over the LOB ticks, as coefficients of lob_basis(ticks).
/// On [t_i, t_{i+1}) the staircase equals (f(t_i) + f(t_{i+1}-)) / 2, with
/// t_0 = pmin. If the last tick is below pmax the trailing level is zero.
ConeCoefficients midpoint_lob_approximant(const DemandCurve& f, std::span<const double> lob_ticks);

/// Replicating combination over univ3_basis(ticks): f(pmax) on the all-ones
/// curve and (f(t_i) - f(t_{i+1})) / (1/sqrt(t_i) - 1/sqrt(t_{i+1})) on each
/// interval curve. Without the all-ones element its coefficient is dropped.
ConeCoefficients univ3_replicant(const DemandCurve& f, std::span<const double> ticks, bool include_ones = true);

/// The constructive approximant matching the basis kind, if there is one.
std::optional<ConeCoefficients> default_warm_start(const DemandCurve& f, const Basis& basis);

struct ConeFit {
    ConeCoefficients coefficients;
    double distance = 0.0;
    bool converged = false;
    /// Exact distance of the warm start, when one was used.
    std::optional<double> warm_start_distance;
    std::size_t iterations = 0;
};

/// Approximate inf over c >= 0 of distance(f, synthesize(basis, c)). The
/// result never exceeds the warm start's distance; optimality is not certified.
ConeFit best_in_cone(const DemandCurve& f, const Basis& basis, const WeightFunction& w, const ApproxConfig& cfg,
                     const std::optional<ConeCoefficients>& warm_start = std::nullopt);

/// Equal-measure grid t_1 = pmin < ... < t_{2n+5} = pmax with 2(n+2) cells.
class AdversaryGrid {
public:
    AdversaryGrid(const WeightFunction& w, std::size_t n);
    /// Arbitrary sorted grid with an even number (>= 6) of cells.
    explicit AdversaryGrid(std::vector<double> points);

    std::size_t n() const { return n_; }
    /// 1-based access matching t_1 .. t_{2n+5}.
    double t(std::size_t i) const { return points_.at(i - 1); }
    std::span<const double> points() const { return points_; }

private:
    std::vector<double> points_;
    std::size_t n_;
};

/// Step curves f_l, l = 1..n: fmax below t_{2l+2}, fmin from it on.
std::vector<DemandCurve> adversarial_step_family(const WeightFunction& w, std::size_t n,
                                                 const TargetClassBounds& bounds);
std::vector<DemandCurve> adversarial_step_family(const AdversaryGrid& grid, const PriceDomain& domain,
                                                 const TargetClassBounds& bounds);

/// Number of l in 1..n whose drop over [t_{2l+1}, t_{2l+3}] exceeds half the
/// drop over [t_3, t_{2n+3}]. At most one for any non-increasing curve.
std::size_t large_drop_count(const DemandCurve& g, const AdversaryGrid& grid);

/// Smallest l in 1..n on which no basis curve has a large drop.
std::optional<std::size_t> pigeonhole_interval(const Basis& basis, const AdversaryGrid& grid);

enum class LowerBoundCase { left_overshoot, right_undershoot, high_plateau, low_plateau, interior };

std::string_view to_string(LowerBoundCase c);

/// Which branch of the lower-bound case analysis applies to g against f_l.
LowerBoundCase classify_lower_bound_case(const DemandCurve& g, const AdversaryGrid& grid, std::size_t l,
                                         const TargetClassBounds& bounds);

/// Guaranteed distance for a case on an equal-measure grid with parameter n,
/// i.e. the per-case integral bound raised to 1/p.
double lower_bound_case_value(LowerBoundCase c, std::size_t n, const TargetClassBounds& bounds, double p_exp);

/// Random element of the target class: K drops at random quantiles of w with
/// stick-breaking sizes summing to fmax - fmin. Deterministic in the seed.
DemandCurve monotone_sampler(std::uint64_t seed, const TargetClassBounds& bounds, std::size_t jumps,
                             const WeightFunction& w);

struct ErrEstimate {
    /// Max best_in_cone distance over the adversary pool (a lower estimate of err).
    double estimate = 0.0;
    std::size_t worst_index = 0;
    std::size_t adversary_count = 0;
    std::vector<double> distances;
    bool converged = true;
};

/// Adversary pool: the step family for n = basis size + 1 followed by
/// `samples` random curves from monotone_sampler.
ErrEstimate err_estimate(const Basis& basis, const WeightFunction& w, const TargetClassBounds& bounds,
                         const ApproxConfig& cfg, std::uint64_t seed, std::size_t samples = 64, std::size_t jobs = 1);

}  // namespace dcx
