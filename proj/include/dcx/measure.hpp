#pragma once

#include <span>
#include <vector>

#include "dcx/curve.hpp"

namespace dcx {

enum class WeightKind { uniform, log_uniform, piecewise };

/// Normalized weight (probability density) on a price domain.
///
/// Supported families: uniform, log-uniform w(p) = 1/(p log(pmax/pmin)), and
/// piecewise-constant densities which are normalized on construction.
class WeightFunction {
public:
    static WeightFunction uniform(const PriceDomain& domain);
    static WeightFunction log_uniform(const PriceDomain& domain);
    static WeightFunction piecewise(std::vector<double> breakpoints, std::vector<double> densities);

    WeightKind kind() const { return kind_; }
    const PriceDomain& domain() const { return domain_; }

    /// Points where the density may be discontinuous (includes both ends).
    std::span<const double> breakpoints() const { return breakpoints_; }
    /// Normalized densities per piece (piecewise kind only).
    std::span<const double> densities() const { return densities_; }

    double density(double p) const;
    /// Density is constant between consecutive breakpoints.
    bool piecewise_constant() const { return kind_ != WeightKind::log_uniform; }

    double cdf(double p) const;
    double mass(double a, double b) const;
    double quantile(double q) const;

private:
    WeightFunction(WeightKind kind, PriceDomain domain, std::vector<double> breakpoints,
                   std::vector<double> densities);

    WeightKind kind_;
    PriceDomain domain_;
    std::vector<double> breakpoints_;
    std::vector<double> densities_;
    std::vector<double> cumulative_;
};

/// Largest mass assigned to any interval between consecutive ticks.
double max_interval_mass(const WeightFunction& w, std::span<const double> ticks);

/// Whether every tick interval carries mass at most C^p / n, n = #intervals.
bool satisfies_tick_mass_bound(const WeightFunction& w, std::span<const double> ticks, double c, double p_exp);

}  // namespace dcx
