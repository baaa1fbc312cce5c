#include "dcx/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dcx {

WeightFunction::WeightFunction(WeightKind kind, PriceDomain domain, std::vector<double> breakpoints,
                               std::vector<double> densities)
    : kind_(kind), domain_(domain), breakpoints_(std::move(breakpoints)), densities_(std::move(densities)) {
    if (kind_ == WeightKind::piecewise) {
        cumulative_.assign(1, 0.0);
        for (std::size_t j = 0; j < densities_.size(); ++j)
            cumulative_.push_back(cumulative_.back() + densities_[j] * (breakpoints_[j + 1] - breakpoints_[j]));
        // Pin the total to exactly one after normalization round-off.
        cumulative_.back() = 1.0;
    }
}

WeightFunction WeightFunction::uniform(const PriceDomain& domain) {
    return WeightFunction(WeightKind::uniform, domain, {domain.pmin(), domain.pmax()}, {});
}

WeightFunction WeightFunction::log_uniform(const PriceDomain& domain) {
    return WeightFunction(WeightKind::log_uniform, domain, {domain.pmin(), domain.pmax()}, {});
}

WeightFunction WeightFunction::piecewise(std::vector<double> breakpoints, std::vector<double> densities) {
    if (breakpoints.size() < 2 || densities.size() + 1 != breakpoints.size())
        throw std::invalid_argument("piecewise weight needs one more breakpoint than densities");
    for (std::size_t j = 0; j + 1 < breakpoints.size(); ++j)
        if (!(breakpoints[j] < breakpoints[j + 1]))
            throw std::invalid_argument("piecewise weight breakpoints must be strictly increasing");
    double total = 0.0;
    for (std::size_t j = 0; j < densities.size(); ++j) {
        if (!(densities[j] >= 0.0) || !std::isfinite(densities[j]))
            throw std::invalid_argument("piecewise weight densities must be nonnegative");
        total += densities[j] * (breakpoints[j + 1] - breakpoints[j]);
    }
    if (!(total > 0.0)) throw std::invalid_argument("piecewise weight has zero total mass");
    for (double& d : densities) d /= total;
    PriceDomain domain(breakpoints.front(), breakpoints.back());
    return WeightFunction(WeightKind::piecewise, domain, std::move(breakpoints), std::move(densities));
}

double WeightFunction::density(double p) const {
    if (!domain_.contains(p)) return 0.0;
    switch (kind_) {
        case WeightKind::uniform:
            return 1.0 / (domain_.pmax() - domain_.pmin());
        case WeightKind::log_uniform:
            return 1.0 / (p * std::log(domain_.pmax() / domain_.pmin()));
        case WeightKind::piecewise: {
            auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), p);
            std::size_t j = static_cast<std::size_t>(it - breakpoints_.begin());
            j = std::min(j == 0 ? 0 : j - 1, densities_.size() - 1);
            return densities_[j];
        }
    }
    return 0.0;
}

double WeightFunction::cdf(double p) const {
    const double lo = domain_.pmin();
    const double hi = domain_.pmax();
    if (p <= lo) return 0.0;
    if (p >= hi) return 1.0;
    switch (kind_) {
        case WeightKind::uniform:
            return (p - lo) / (hi - lo);
        case WeightKind::log_uniform:
            return std::log(p / lo) / std::log(hi / lo);
        case WeightKind::piecewise: {
            auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), p);
            const std::size_t j = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
            return std::min(1.0, cumulative_[j] + densities_[j] * (p - breakpoints_[j]));
        }
    }
    return 0.0;
}

double WeightFunction::mass(double a, double b) const {
    const double tol = 1e-12 * domain_.pmax();
    if (a > b || a < domain_.pmin() - tol || b > domain_.pmax() + tol)
        throw std::invalid_argument("mass bounds must satisfy pmin <= a <= b <= pmax");
    if (a == b) return 0.0;
    if (kind_ == WeightKind::log_uniform)
        return std::log(std::min(b, domain_.pmax()) / std::max(a, domain_.pmin())) /
               std::log(domain_.pmax() / domain_.pmin());
    return cdf(b) - cdf(a);
}

double WeightFunction::quantile(double q) const {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level must lie in [0, 1]");
    const double lo = domain_.pmin();
    const double hi = domain_.pmax();
    if (q == 0.0 && kind_ != WeightKind::piecewise) return lo;
    if (q == 1.0) return hi;
    switch (kind_) {
        case WeightKind::uniform:
            return lo + q * (hi - lo);
        case WeightKind::log_uniform:
            return lo * std::exp(q * std::log(hi / lo));
        case WeightKind::piecewise: {
            // Leftmost p reaching level q; zero-density stretches are skipped.
            auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), q);
            std::size_t j = static_cast<std::size_t>(it - cumulative_.begin());
            if (j == 0) return lo;
            --j;
            while (densities_[j] == 0.0 && j + 1 < densities_.size()) ++j;
            const double p = breakpoints_[j] + (q - cumulative_[j]) / densities_[j];
            return std::clamp(p, breakpoints_[j], breakpoints_[j + 1]);
        }
    }
    return lo;
}

double max_interval_mass(const WeightFunction& w, std::span<const double> ticks) {
    if (ticks.size() < 2) throw std::invalid_argument("need at least two ticks");
    double best = 0.0;
    for (std::size_t i = 0; i + 1 < ticks.size(); ++i) best = std::max(best, w.mass(ticks[i], ticks[i + 1]));
    return best;
}

bool satisfies_tick_mass_bound(const WeightFunction& w, std::span<const double> ticks, double c, double p_exp) {
    const double n = static_cast<double>(ticks.size() - 1);
    return max_interval_mass(w, ticks) <= std::pow(c, p_exp) / n * (1.0 + 1e-12);
}

}  // namespace dcx
