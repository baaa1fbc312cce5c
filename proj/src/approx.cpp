#include "dcx/approx.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "dcx/parallel.hpp"

namespace dcx {

namespace {

struct GaussRule {
    static constexpr std::size_t order = 64;
    std::array<double, order> nodes{};
    std::array<double, order> weights{};
};

// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_64.
const GaussRule& gauss_rule() {
    static const GaussRule rule = [] {
        GaussRule r;
        constexpr std::size_t n = GaussRule::order;
        for (std::size_t i = 0; i < n / 2; ++i) {
            double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p1 = 1.0, p2 = 0.0;
                for (std::size_t j = 1; j <= n; ++j) {
                    const double p3 = p2;
                    p2 = p1;
                    p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / static_cast<double>(j);
                }
                dp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
                const double dz = p1 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            r.nodes[i] = -z;
            r.nodes[n - 1 - i] = z;
            r.weights[i] = r.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
        return r;
    }();
    return rule;
}

double abs_pow(double x, double p) {
    const double a = std::abs(x);
    if (p == 1.0) return a;
    if (p == 2.0) return a * a;
    return std::pow(a, p);
}

std::vector<double> sorted_union(std::initializer_list<std::span<const double>> lists) {
    std::vector<double> out;
    for (auto l : lists) out.insert(out.end(), l.begin(), l.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// int_u^v w(s) |d(s)|^p ds for a smooth difference piece d.
double integrate_piece(const Segment& d, const WeightFunction& w, double u, double v, double p) {
    if (d.a == 0.0 && d.m == 0.0) return d.b == 0.0 ? 0.0 : abs_pow(d.b, p) * w.mass(u, v);

    // d has at most one critical point, so splitting there leaves monotone
    // pieces with at most one root each; cutting at the roots keeps every
    // Gauss panel free of the |.| kink.
    std::vector<double> mono{u};
    if (d.a != 0.0 && d.m != 0.0 && (d.a > 0.0) == (d.m > 0.0)) {
        const double crit = std::cbrt(std::pow(d.a / (2.0 * d.m), 2.0));
        if (crit > u && crit < v) mono.push_back(crit);
    }
    mono.push_back(v);
    std::vector<double> cuts{u};
    for (std::size_t i = 0; i + 1 < mono.size(); ++i) {
        double lo = mono[i], hi = mono[i + 1];
        const double flo = d.value(lo), fhi = d.value(hi);
        if ((flo < 0.0 && fhi > 0.0) || (flo > 0.0 && fhi < 0.0)) {
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                if ((d.value(mid) < 0.0) == (flo < 0.0)) lo = mid;
                else hi = mid;
            }
            cuts.push_back(0.5 * (lo + hi));
        }
        if (i + 2 < mono.size()) cuts.push_back(mono[i + 1]);
    }
    cuts.push_back(v);

    const GaussRule& g = gauss_rule();
    double total = 0.0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double lo = cuts[c], hi = cuts[c + 1];
        if (!(hi > lo)) continue;
        const double half = 0.5 * (hi - lo);
        const double mid = 0.5 * (hi + lo);
        double s = 0.0;
        for (std::size_t k = 0; k < GaussRule::order; ++k) {
            const double x = mid + half * g.nodes[k];
            s += g.weights[k] * w.density(x) * abs_pow(d.value(x), p);
        }
        total += half * s;
    }
    return total;
}

// Dense column-scaled least-squares data for the discretized objective.
struct Discretization {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;  // row-major, columns scaled to unit weighted norm
    std::vector<double> y;
    std::vector<double> col_scale;

    double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

Discretization discretize(const DemandCurve& f, const Basis& basis, const WeightFunction& w, std::size_t cells) {
    Discretization d;
    d.rows = cells;
    d.cols = basis.size();
    d.a.assign(d.rows * d.cols, 0.0);
    d.y.resize(d.rows);
    d.col_scale.assign(d.cols, 0.0);
    for (std::size_t r = 0; r < d.rows; ++r) {
        const double s = w.quantile((static_cast<double>(r) + 0.5) / static_cast<double>(cells));
        d.y[r] = f(s);
        for (std::size_t c = 0; c < d.cols; ++c) {
            const double v = basis[c](s);
            d.a[r * d.cols + c] = v;
            d.col_scale[c] += v * v;
        }
    }
    for (std::size_t c = 0; c < d.cols; ++c) {
        d.col_scale[c] = std::sqrt(d.col_scale[c] / static_cast<double>(cells));
        if (d.col_scale[c] == 0.0) continue;
        for (std::size_t r = 0; r < d.rows; ++r) d.a[r * d.cols + c] /= d.col_scale[c];
    }
    return d;
}

std::vector<double> residuals(const Discretization& d, std::span<const double> u) {
    std::vector<double> r(d.rows);
    for (std::size_t i = 0; i < d.rows; ++i) {
        double s = -d.y[i];
        for (std::size_t c = 0; c < d.cols; ++c) s += d.at(i, c) * u[c];
        r[i] = s;
    }
    return r;
}

double discrete_objective(const Discretization& d, std::span<const double> u, double p) {
    double s = 0.0;
    for (double r : residuals(d, u)) s += abs_pow(r, p);
    return s / static_cast<double>(d.rows);
}

// Quadratic 0.5 u'Gu - h'u over u >= 0.
struct Quadratic {
    std::size_t n = 0;
    std::vector<double> g;
    std::vector<double> h;

    double value(std::span<const double> u) const {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double gu = 0.0;
            for (std::size_t j = 0; j < n; ++j) gu += g[i * n + j] * u[j];
            s += u[i] * (0.5 * gu - h[i]);
        }
        return s;
    }
    void gradient(std::span<const double> u, std::span<double> out) const {
        for (std::size_t i = 0; i < n; ++i) {
            double gu = -h[i];
            for (std::size_t j = 0; j < n; ++j) gu += g[i * n + j] * u[j];
            out[i] = gu;
        }
    }
};

Quadratic weighted_normal_equations(const Discretization& d, std::span<const double> row_weights) {
    Quadratic q;
    q.n = d.cols;
    q.g.assign(q.n * q.n, 0.0);
    q.h.assign(q.n, 0.0);
    for (std::size_t r = 0; r < d.rows; ++r) {
        const double wr = row_weights[r];
        if (wr == 0.0) continue;
        const double* row = &d.a[r * d.cols];
        for (std::size_t i = 0; i < q.n; ++i) {
            const double ai = wr * row[i];
            if (ai == 0.0) continue;
            q.h[i] += ai * d.y[r];
            for (std::size_t j = i; j < q.n; ++j) q.g[i * q.n + j] += ai * row[j];
        }
    }
    for (std::size_t i = 0; i < q.n; ++i)
        for (std::size_t j = 0; j < i; ++j) q.g[i * q.n + j] = q.g[j * q.n + i];
    return q;
}

struct SolveStats {
    std::size_t iterations = 0;
    bool converged = false;
};

// Lawson-Hanson active set for min 0.5 u'Gu - h'u over u >= 0. Exact up to
// round-off in a finite number of steps; the passive-set systems go to LDLT.
SolveStats nonnegative_solve(const Quadratic& q, std::vector<double>& u, std::size_t max_iters) {
    const auto n = static_cast<Eigen::Index>(q.n);
    SolveStats stats;
    u.assign(q.n, 0.0);
    if (n == 0) {
        stats.converged = true;
        return stats;
    }
    const Eigen::Map<const Eigen::MatrixXd> g(q.g.data(), n, n);
    const Eigen::Map<const Eigen::VectorXd> h(q.h.data(), n);
    const double tol = 1e-13 * std::max(1.0, h.cwiseAbs().maxCoeff());

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    std::vector<bool> passive(q.n, false);
    auto solve_passive = [&]() {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index i = 0; i < n; ++i)
            if (passive[static_cast<std::size_t>(i)]) idx.push_back(i);
        const auto m = static_cast<Eigen::Index>(idx.size());
        Eigen::MatrixXd gp(m, m);
        Eigen::VectorXd hp(m);
        for (Eigen::Index a = 0; a < m; ++a) {
            hp(a) = h(idx[a]);
            for (Eigen::Index b = 0; b < m; ++b) gp(a, b) = g(idx[a], idx[b]);
        }
        const Eigen::VectorXd zp = gp.ldlt().solve(hp);
        Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
        for (Eigen::Index a = 0; a < m; ++a) z(idx[a]) = zp(a);
        return z;
    };

    const std::size_t cap = std::max<std::size_t>(max_iters, 3 * q.n);
    for (std::size_t it = 0; it < cap; ++it) {
        stats.iterations = it + 1;
        const Eigen::VectorXd w = h - g * x;
        Eigen::Index j = -1;
        double best = tol;
        for (Eigen::Index i = 0; i < n; ++i)
            if (!passive[static_cast<std::size_t>(i)] && w(i) > best) best = w(i), j = i;
        if (j < 0) {
            stats.converged = true;
            break;
        }
        passive[static_cast<std::size_t>(j)] = true;
        Eigen::VectorXd z = solve_passive();
        bool stalled = false;
        while (true) {
            double alpha = 1.0;
            bool blocked = false;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (!passive[static_cast<std::size_t>(i)] || z(i) > 0.0) continue;
                blocked = true;
                const double denom = x(i) - z(i);
                alpha = std::min(alpha, denom > 0.0 ? x(i) / denom : 0.0);
            }
            if (!blocked) break;
            x += alpha * (z - x);
            std::size_t dropped = 0;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (passive[static_cast<std::size_t>(i)] && x(i) <= 1e-15 * std::max(1.0, x.cwiseAbs().maxCoeff())) {
                    passive[static_cast<std::size_t>(i)] = false;
                    x(i) = 0.0;
                    ++dropped;
                }
            }
            if (dropped == 0) {
                stalled = true;
                break;
            }
            z = solve_passive();
        }
        if (stalled) break;
        // A column that cannot lower the objective (dependent on the passive
        // set) is left out so the outer loop cannot cycle on it.
        if (z(j) <= 0.0) {
            passive[static_cast<std::size_t>(j)] = false;
            stats.converged = true;
            break;
        }
        x = z;
    }
    for (Eigen::Index i = 0; i < n; ++i) u[static_cast<std::size_t>(i)] = std::max(0.0, x(i));
    return stats;
}

SolveStats solve_least_squares(const Discretization& d, std::vector<double>& u, const ApproxConfig& cfg) {
    const std::vector<double> w(d.rows, 1.0 / static_cast<double>(d.rows));
    return nonnegative_solve(weighted_normal_equations(d, w), u, cfg.max_iters);
}

// Projected subgradient on the l1 objective; keeps the best iterate.
void projected_subgradient(const Discretization& d, std::vector<double>& best, double& best_obj, std::size_t iters) {
    std::vector<double> u = best;
    std::vector<double> g(d.cols);
    const double step0 = std::max(best_obj, 1e-12);
    for (std::size_t k = 0; k < iters; ++k) {
        const auto r = residuals(d, u);
        std::fill(g.begin(), g.end(), 0.0);
        for (std::size_t i = 0; i < d.rows; ++i) {
            const double s = r[i] > 0.0 ? 1.0 : (r[i] < 0.0 ? -1.0 : 0.0);
            if (s == 0.0) continue;
            for (std::size_t c = 0; c < d.cols; ++c) g[c] += s * d.at(i, c);
        }
        double norm = 0.0;
        for (double& v : g) {
            v /= static_cast<double>(d.rows);
            norm += v * v;
        }
        if (norm == 0.0) break;
        const double step = step0 / (std::sqrt(norm) * std::sqrt(static_cast<double>(k) + 1.0));
        for (std::size_t c = 0; c < d.cols; ++c) u[c] = std::max(0.0, u[c] - step * g[c]);
        const double obj = discrete_objective(d, u, 1.0);
        if (obj < best_obj) {
            best_obj = obj;
            best = u;
        }
    }
}

SolveStats solve_l1(const Discretization& d, std::vector<double>& u, const ApproxConfig& cfg) {
    SolveStats stats;
    double y_scale = 0.0;
    for (double v : d.y) y_scale = std::max(y_scale, std::abs(v));
    y_scale = std::max(y_scale, 1e-12);
    const double eta_floor = 1e-10 * y_scale;
    double eta = 1e-2 * y_scale;

    std::vector<double> best = u;
    double best_obj = discrete_objective(d, u, 1.0);
    double prev_obj = best_obj;
    std::vector<double> weights(d.rows);
    for (std::size_t round = 0; round < cfg.max_iters; ++round) {
        stats.iterations = round + 1;
        const auto r = residuals(d, u);
        for (std::size_t i = 0; i < d.rows; ++i)
            weights[i] = 1.0 / (static_cast<double>(d.rows) * std::max(std::abs(r[i]), eta));
        nonnegative_solve(weighted_normal_equations(d, weights), u, cfg.inner_iters);
        const double obj = discrete_objective(d, u, 1.0);
        if (obj < best_obj) {
            best_obj = obj;
            best = u;
        }
        const bool settled = std::abs(prev_obj - obj) <= cfg.solver_tol * std::max(obj, 1e-300);
        if (settled && eta <= eta_floor) {
            stats.converged = true;
            break;
        }
        if (best_obj == 0.0) {
            stats.converged = true;
            break;
        }
        prev_obj = obj;
        eta = std::max(eta * 0.3, eta_floor);
    }
    if (!stats.converged) projected_subgradient(d, best, best_obj, cfg.inner_iters);
    u = best;
    return stats;
}

}  // namespace

TargetClassBounds::TargetClassBounds(double fmin, double fmax) : fmin_(fmin), fmax_(fmax) {
    if (!(fmin >= 0.0) || !(fmax > fmin) || !std::isfinite(fmax))
        throw std::invalid_argument("target bounds require 0 <= fmin < fmax < inf");
}

void ApproxConfig::validate() const {
    if (!(p_exp >= 1.0)) throw std::invalid_argument("norm exponent must be >= 1");
    if (grid_size < 2) throw std::invalid_argument("grid size must be >= 2");
    if (!(solver_tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
    if (max_iters == 0) throw std::invalid_argument("iteration cap must be positive");
}

double distance(const DemandCurve& f, const DemandCurve& g, const WeightFunction& w, double p_exp) {
    if (!(p_exp >= 1.0)) throw std::invalid_argument("norm exponent must be >= 1");
    if (!(f.domain() == g.domain()) || !(w.domain() == f.domain()))
        throw std::invalid_argument("distance requires a common domain");
    const auto pts = sorted_union({f.breakpoints(), g.breakpoints(), w.breakpoints()});
    auto fs = f.segments();
    auto gs = g.segments();
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const double u = pts[k], v = pts[k + 1];
        const Segment& a = fs[f.segment_index(u)];
        const Segment& b = gs[g.segment_index(u)];
        total += integrate_piece(Segment{a.a - b.a, a.b - b.b, a.m - b.m}, w, u, v, p_exp);
    }
    return p_exp == 1.0 ? total : std::pow(total, 1.0 / p_exp);
}

ConeCoefficients midpoint_lob_approximant(const DemandCurve& f, std::span<const double> lob_ticks) {
    const PriceDomain& dom = f.domain();
    if (lob_ticks.empty()) throw std::invalid_argument("midpoint approximant needs at least one tick");
    std::vector<double> levels(lob_ticks.size() + 1, 0.0);
    double left = dom.pmin();
    for (std::size_t i = 0; i < lob_ticks.size(); ++i) {
        const double right = lob_ticks[i];
        if (!(right > left) || right > dom.pmax()) throw std::invalid_argument("LOB ticks must increase within (pmin, pmax]");
        levels[i] = 0.5 * (f(left) + f.left_limit(right));
        left = right;
    }
    std::vector<double> coefs(lob_ticks.size());
    for (std::size_t i = 0; i < coefs.size(); ++i) coefs[i] = std::max(0.0, levels[i] - levels[i + 1]);
    return ConeCoefficients(std::move(coefs));
}

ConeCoefficients univ3_replicant(const DemandCurve& f, std::span<const double> ticks, bool include_ones) {
    const PriceDomain& dom = f.domain();
    if (ticks.size() < 2 || ticks.front() != dom.pmin() || ticks.back() != dom.pmax())
        throw std::invalid_argument("v3 ticks must start at pmin and end at pmax");
    std::vector<double> coefs;
    coefs.reserve(ticks.size());
    for (std::size_t i = 0; i + 1 < ticks.size(); ++i) {
        if (!(ticks[i + 1] > ticks[i])) throw std::invalid_argument("v3 ticks must be strictly increasing");
        const double span = 1.0 / std::sqrt(ticks[i]) - 1.0 / std::sqrt(ticks[i + 1]);
        coefs.push_back(std::max(0.0, (f(ticks[i]) - f(ticks[i + 1])) / span));
    }
    if (include_ones) coefs.push_back(std::max(0.0, f.value_at_max()));
    return ConeCoefficients(std::move(coefs));
}

std::optional<ConeCoefficients> default_warm_start(const DemandCurve& f, const Basis& basis) {
    switch (basis.kind()) {
        case MechanismKind::lob:
            if (basis.ticks().empty()) return std::nullopt;
            return midpoint_lob_approximant(f, basis.ticks());
        case MechanismKind::univ3:
            return univ3_replicant(f, basis.ticks(), basis.include_ones());
        default:
            return std::nullopt;
    }
}

ConeFit best_in_cone(const DemandCurve& f, const Basis& basis, const WeightFunction& w, const ApproxConfig& cfg,
                     const std::optional<ConeCoefficients>& warm_start) {
    cfg.validate();
    if (cfg.p_exp != 1.0 && cfg.p_exp != 2.0) throw std::invalid_argument("cone solver supports p = 1 or p = 2");
    if (!(f.domain() == basis.domain()) || !(w.domain() == f.domain()))
        throw std::invalid_argument("best_in_cone requires a common domain");

    ConeFit fit;
    if (basis.size() == 0) {
        fit.distance = distance(f, DemandCurve::zero(f.domain()), w, cfg.p_exp);
        fit.converged = true;
        return fit;
    }

    std::optional<ConeCoefficients> warm = warm_start ? warm_start : default_warm_start(f, basis);
    if (warm && warm->size() != basis.size()) throw std::invalid_argument("warm start has the wrong length");

    const Discretization d = discretize(f, basis, w, cfg.grid_size);
    std::vector<double> u(basis.size(), 0.0);
    if (warm)
        for (std::size_t c = 0; c < u.size(); ++c) u[c] = (*warm)[c] * d.col_scale[c];

    const SolveStats stats = cfg.p_exp == 2.0 ? solve_least_squares(d, u, cfg) : solve_l1(d, u, cfg);
    std::vector<double> x(basis.size(), 0.0);
    for (std::size_t c = 0; c < x.size(); ++c)
        if (d.col_scale[c] > 0.0) x[c] = std::max(0.0, u[c] / d.col_scale[c]);

    fit.coefficients = ConeCoefficients(std::move(x));
    fit.distance = distance(f, synthesize(basis, fit.coefficients), w, cfg.p_exp);
    fit.converged = stats.converged;
    fit.iterations = stats.iterations;
    if (warm) {
        fit.warm_start_distance = distance(f, synthesize(basis, *warm), w, cfg.p_exp);
        if (*fit.warm_start_distance < fit.distance) {
            fit.coefficients = *warm;
            fit.distance = *fit.warm_start_distance;
        }
    }
    return fit;
}

AdversaryGrid::AdversaryGrid(const WeightFunction& w, std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("adversary grid needs n >= 1");
    const std::size_t cells = 2 * (n + 2);
    points_.reserve(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i)
        points_.push_back(w.quantile(static_cast<double>(i) / static_cast<double>(cells)));
}

AdversaryGrid::AdversaryGrid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 7 || points_.size() % 2 == 0)
        throw std::invalid_argument("adversary grid needs an even number (>= 6) of cells");
    for (std::size_t i = 0; i + 1 < points_.size(); ++i)
        if (!(points_[i] < points_[i + 1])) throw std::invalid_argument("adversary grid must be strictly increasing");
    n_ = (points_.size() - 1) / 2 - 2;
}

std::vector<DemandCurve> adversarial_step_family(const AdversaryGrid& grid, const PriceDomain& domain,
                                                 const TargetClassBounds& bounds) {
    std::vector<DemandCurve> family;
    family.reserve(grid.n());
    for (std::size_t l = 1; l <= grid.n(); ++l)
        family.push_back(DemandCurve::step(domain, grid.t(2 * l + 2), bounds.fmax(), bounds.fmin()));
    return family;
}

std::vector<DemandCurve> adversarial_step_family(const WeightFunction& w, std::size_t n,
                                                 const TargetClassBounds& bounds) {
    return adversarial_step_family(AdversaryGrid(w, n), w.domain(), bounds);
}

std::size_t large_drop_count(const DemandCurve& g, const AdversaryGrid& grid) {
    const std::size_t n = grid.n();
    const double half_total = 0.5 * (g(grid.t(3)) - g(grid.t(2 * n + 3)));
    std::size_t count = 0;
    for (std::size_t l = 1; l <= n; ++l)
        if (g(grid.t(2 * l + 1)) - g(grid.t(2 * l + 3)) > half_total) ++count;
    return count;
}

std::optional<std::size_t> pigeonhole_interval(const Basis& basis, const AdversaryGrid& grid) {
    const std::size_t n = grid.n();
    for (std::size_t l = 1; l <= n; ++l) {
        bool small = true;
        for (const auto& g : basis.curves()) {
            const double half_total = 0.5 * (g(grid.t(3)) - g(grid.t(2 * n + 3)));
            if (g(grid.t(2 * l + 1)) - g(grid.t(2 * l + 3)) > half_total) {
                small = false;
                break;
            }
        }
        if (small) return l;
    }
    return std::nullopt;
}

std::string_view to_string(LowerBoundCase c) {
    switch (c) {
        case LowerBoundCase::left_overshoot: return "left_overshoot";
        case LowerBoundCase::right_undershoot: return "right_undershoot";
        case LowerBoundCase::high_plateau: return "high_plateau";
        case LowerBoundCase::low_plateau: return "low_plateau";
        case LowerBoundCase::interior: return "interior";
    }
    return "interior";
}

LowerBoundCase classify_lower_bound_case(const DemandCurve& g, const AdversaryGrid& grid, std::size_t l,
                                         const TargetClassBounds& bounds) {
    const std::size_t n = grid.n();
    if (l < 1 || l > n) throw std::invalid_argument("interval index outside 1..n");
    const double quarter = 0.25 * bounds.width();
    if (g(grid.t(3)) >= bounds.fmax() + quarter) return LowerBoundCase::left_overshoot;
    if (g(grid.t(2 * n + 3)) <= bounds.fmin() - quarter) return LowerBoundCase::right_undershoot;
    if (g(grid.t(2 * l + 1)) >= bounds.fmax()) return LowerBoundCase::high_plateau;
    if (g(grid.t(2 * l + 3)) <= bounds.fmin()) return LowerBoundCase::low_plateau;
    return LowerBoundCase::interior;
}

double lower_bound_case_value(LowerBoundCase c, std::size_t n, const TargetClassBounds& bounds, double p_exp) {
    const double cells = static_cast<double>(n + 2);
    double divisor = 0.0;  // integral bound is width^p / ((n+2) * divisor)
    switch (c) {
        case LowerBoundCase::left_overshoot:
        case LowerBoundCase::right_undershoot: divisor = std::pow(4.0, p_exp); break;
        case LowerBoundCase::high_plateau:
        case LowerBoundCase::low_plateau: divisor = std::pow(2.0, 1.0 + 2.0 * p_exp); break;
        case LowerBoundCase::interior: divisor = std::pow(8.0, p_exp); break;
    }
    return bounds.width() * std::pow(cells * divisor, -1.0 / p_exp);
}

DemandCurve monotone_sampler(std::uint64_t seed, const TargetClassBounds& bounds, std::size_t jumps,
                             const WeightFunction& w) {
    if (jumps == 0) throw std::invalid_argument("sampler needs at least one jump");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::pair<double, double>> drops(jumps);
    double stick_total = 0.0;
    for (auto& [loc, size] : drops) {
        double q = unit(rng);
        while (q <= 0.0) q = unit(rng);
        loc = w.quantile(q);
        size = unit(rng) + 1e-12;
        stick_total += size;
    }
    std::sort(drops.begin(), drops.end());

    const PriceDomain& dom = w.domain();
    std::vector<double> bp{dom.pmin()};
    std::vector<Segment> segs;
    double level = bounds.fmax();
    for (std::size_t i = 0; i < drops.size(); ++i) {
        const auto [loc, size] = drops[i];
        if (loc >= dom.pmax()) break;
        if (loc > bp.back()) {
            segs.push_back(Segment::constant(level));
            bp.push_back(loc);
        }
        level = (i + 1 == drops.size()) ? bounds.fmin()
                                        : std::max(bounds.fmin(), level - bounds.width() * size / stick_total);
    }
    segs.push_back(Segment::constant(level));
    bp.push_back(dom.pmax());
    return DemandCurve(dom, std::move(bp), std::move(segs));
}

ErrEstimate err_estimate(const Basis& basis, const WeightFunction& w, const TargetClassBounds& bounds,
                         const ApproxConfig& cfg, std::uint64_t seed, std::size_t samples, std::size_t jobs) {
    std::vector<DemandCurve> pool = adversarial_step_family(w, basis.size() + 1, bounds);
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < samples; ++i) {
        const std::size_t jumps = 1 + static_cast<std::size_t>(rng() % 16);
        pool.push_back(monotone_sampler(rng(), bounds, jumps, w));
    }

    ErrEstimate out;
    out.adversary_count = pool.size();
    out.distances.assign(pool.size(), 0.0);
    std::vector<char> converged(pool.size(), 1);
    parallel_for(pool.size(), jobs, [&](std::size_t i) {
        const ConeFit fit = best_in_cone(pool[i], basis, w, cfg);
        out.distances[i] = fit.distance;
        converged[i] = fit.converged ? 1 : 0;
    });
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (out.distances[i] > out.estimate) {
            out.estimate = out.distances[i];
            out.worst_index = i;
        }
        out.converged = out.converged && converged[i];
    }
    return out;
}

}  // namespace dcx
