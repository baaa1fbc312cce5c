#include "commands.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "dcx/engine.hpp"
#include "dcx/io.hpp"
#include "dcx/mechanism.hpp"
#include "dcx/parallel.hpp"

namespace dcx::cli {

using io::format_number;
using io::InputError;
using io::json;

namespace {

WeightFunction load_weight(const std::string& path, const PriceDomain& domain) {
    WeightFunction w = io::weight_from_json(io::read_json_file(path), domain);
    if (!(w.domain() == domain)) throw InputError("weight domain differs from the mechanism domain");
    return w;
}

double initial_price(const std::optional<double>& p0, const PriceDomain& domain) {
    const double p = p0.value_or(domain.pmin());
    if (!domain.contains(p)) throw InputError("initial price outside the mechanism domain");
    return p;
}

json number_array(std::span<const double> xs) { return json(std::vector<double>(xs.begin(), xs.end())); }

}  // namespace

int run_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
    const Basis basis = io::mechanism_from_json(io::read_json_file(opts.mechanism_path));
    const std::vector<Event> events =
        io::events_from_jsonl(io::read_text_file(opts.events_path), basis.domain(), &basis);
    Pool pool(basis.domain(), initial_price(opts.p0, basis.domain()));

    const SequenceResult result = run_trade_sequence(pool, events);
    io::write_ledger_csv(out, result.rows);
    if (result.failure) {
        err << "step " << result.failure->step << ": "
            << (result.failure->solvency ? "solvency breach: " : "rejected event: ") << result.failure->cause << '\n';
        return property_breach;
    }
    return ok;
}

int run_approx(const ApproxOptions& opts, std::ostream& out, std::ostream&) {
    const DemandCurve f = io::curve_from_json(io::read_json_file(opts.curve_path));
    const Basis basis = io::mechanism_from_json(io::read_json_file(opts.mechanism_path));
    if (!(f.domain() == basis.domain())) throw InputError("curve domain differs from the mechanism domain");
    const WeightFunction w = load_weight(opts.weight_path, basis.domain());

    ApproxConfig cfg;
    cfg.p_exp = opts.p_exp;
    cfg.grid_size = opts.grid_size;
    ConeFit fit;
    try {
        fit = best_in_cone(f, basis, w, cfg);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }

    json report = {{"mechanism", std::string(to_string(basis.kind()))},
                   {"p", opts.p_exp},
                   {"weight", std::string(io::to_string(w.kind()))},
                   {"coeffs", number_array(fit.coefficients.values())},
                   {"distance", fit.distance},
                   {"bound", fit.warm_start_distance ? json(*fit.warm_start_distance) : json(nullptr)},
                   {"converged", fit.converged}};
    out << report.dump(2) << '\n';
    return ok;
}

void ExperimentConfig::validate() const {
    if (epsilons.empty()) throw InputError("experiment needs at least one epsilon");
    for (double e : epsilons)
        if (!(e > 0.0 && e <= 1.0)) throw InputError("epsilon values must lie in (0, 1]");
    if (p_exp != 1.0 && p_exp != 2.0) throw InputError("p must be 1 or 2");
    if (grid_size < 2) throw InputError("grid_size must be >= 2");
}

ExperimentConfig experiment_config_from_json(const std::string& path) {
    const json j = io::read_json_file(path);
    try {
        ExperimentConfig cfg;
        cfg.domain = io::domain_from_json(j.at("domain"));
        if (j.contains("weight")) cfg.weight = io::weight_from_json(j.at("weight"), cfg.domain);
        if (j.contains("bounds"))
            cfg.bounds = TargetClassBounds(j.at("bounds").at("fmin").get<double>(), j.at("bounds").at("fmax").get<double>());
        cfg.epsilons = j.at("epsilons").get<std::vector<double>>();
        cfg.p_exp = j.value("p", 1.0);
        cfg.seed = j.value("seed", std::uint64_t{0});
        cfg.samples = j.value("samples", std::size_t{32});
        cfg.grid_size = j.value("grid_size", std::size_t{256});
        if (cfg.weight && !(cfg.weight->domain() == cfg.domain)) throw InputError("weight domain differs from config domain");
        cfg.validate();
        return cfg;
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError(std::string("experiment config: ") + e.what());
    }
}

int run_tradeoff(const ExperimentConfig& cfg, std::size_t jobs, std::ostream& out, std::ostream& err) {
    cfg.validate();
    const WeightFunction w = cfg.weight.value_or(WeightFunction::uniform(cfg.domain));
    ApproxConfig acfg;
    acfg.p_exp = cfg.p_exp;
    acfg.grid_size = cfg.grid_size;

    struct Row {
        double epsilon = 0.0;
        std::size_t complexity = 0;
        std::string mechanism;
        double estimate = 0.0;
        double bound = 0.0;
    };
    std::vector<Row> rows(2 * cfg.epsilons.size());
    const double width = cfg.bounds.width();

    parallel_for(rows.size(), jobs, [&](std::size_t r) {
        const double eps = cfg.epsilons[r / 2];
        Row& row = rows[r];
        row.epsilon = eps;
        if (r % 2 == 0) {
            const auto n = static_cast<std::size_t>(std::ceil(std::pow(eps, -cfg.p_exp) - 1e-9));
            const Basis basis = lob_basis(cfg.domain, equal_measure_lob_ticks(w, n));
            row.mechanism = "lob";
            row.complexity = basis.exchange_complexity();
            row.estimate = err_estimate(basis, w, cfg.bounds, acfg, cfg.seed, cfg.samples).estimate;
            row.bound = width / (2.0 * std::pow(static_cast<double>(n), 1.0 / cfg.p_exp));
        } else {
            const std::vector<double> ticks = geometric_ticks(cfg.domain, eps, cfg.p_exp);
            const double heaviest = max_interval_mass(w, ticks);
            const Basis basis = univ3_basis(cfg.domain, ticks, true);
            row.mechanism = "univ3";
            row.complexity = basis.exchange_complexity();
            row.estimate = err_estimate(basis, w, cfg.bounds, acfg, cfg.seed, cfg.samples).estimate;
            row.bound = std::pow(heaviest, 1.0 / cfg.p_exp) * width;
        }
    });

    out << "epsilon,complexity,mechanism,error_est,error_bound\n";
    int code = ok;
    for (const Row& row : rows) {
        out << format_number(row.epsilon) << ',' << row.complexity << ',' << row.mechanism << ','
            << format_number(row.estimate) << ',' << format_number(row.bound) << '\n';
        if (row.estimate > row.bound + 1e-9) {
            err << row.mechanism << " at epsilon " << format_number(row.epsilon) << ": estimate exceeds bound\n";
            code = property_breach;
        }
    }
    return code;
}

int run_tradeoff(const TradeoffOptions& opts, std::ostream& out, std::ostream& err) {
    ExperimentConfig cfg = experiment_config_from_json(opts.config_path);
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.p_exp) cfg.p_exp = *opts.p_exp;
    return run_tradeoff(cfg, opts.jobs, out, err);
}

int run_lowerbound(const LowerboundOptions& opts, std::ostream& out, std::ostream& err) {
    const Basis basis = io::mechanism_from_json(io::read_json_file(opts.mechanism_path));
    const WeightFunction w = load_weight(opts.weight_path, basis.domain());
    std::optional<TargetClassBounds> parsed;
    try {
        parsed.emplace(opts.fmin, opts.fmax);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    const TargetClassBounds bounds = *parsed;
    if (opts.p_exp != 1.0 && opts.p_exp != 2.0) throw InputError("p must be 1 or 2");

    const std::size_t k = basis.exchange_complexity();
    const std::size_t n = opts.n.value_or(k + 1);
    if (n == 0) throw InputError("n must be positive");
    const AdversaryGrid grid(w, n);
    const std::vector<DemandCurve> family = adversarial_step_family(grid, basis.domain(), bounds);

    ApproxConfig cfg;
    cfg.p_exp = opts.p_exp;
    cfg.grid_size = opts.grid_size;
    std::vector<ConeFit> fits;
    fits.reserve(family.size());
    for (const auto& f : family) fits.push_back(best_in_cone(f, basis, w, cfg));

    std::vector<double> distances;
    std::size_t worst = 0;
    bool converged = true;
    for (std::size_t i = 0; i < fits.size(); ++i) {
        distances.push_back(fits[i].distance);
        if (fits[i].distance > fits[worst].distance) worst = i;
        converged = converged && fits[i].converged;
    }
    const std::optional<std::size_t> pigeon = pigeonhole_interval(basis, grid);
    const std::size_t l = pigeon.value_or(worst + 1);
    const DemandCurve g = synthesize(basis, fits[l - 1].coefficients);
    const LowerBoundCase branch = classify_lower_bound_case(g, grid, l, bounds);
    const double reference = lower_bound_case_value(LowerBoundCase::interior, n, bounds, opts.p_exp);
    const double max_distance = fits[worst].distance;

    json report = {{"mechanism", std::string(to_string(basis.kind()))},
                   {"complexity", k},
                   {"n", n},
                   {"p", opts.p_exp},
                   {"weight", std::string(io::to_string(w.kind()))},
                   {"distances", distances},
                   {"max_distance", max_distance},
                   {"worst_l", worst + 1},
                   {"pigeonhole_l", pigeon ? json(*pigeon) : json(nullptr)},
                   {"case", std::string(to_string(branch))},
                   {"case_bound", lower_bound_case_value(branch, n, bounds, opts.p_exp)},
                   {"reference_bound", reference},
                   {"absorbed", max_distance <= 1e-9},
                   {"converged", converged}};
    out << report.dump(2) << '\n';

    if (pigeon && fits[*pigeon - 1].distance < reference * (1.0 - 1e-9)) {
        err << "adversary " << *pigeon << " approximated below the lower bound\n";
        return property_breach;
    }
    return ok;
}

int run_arbitrage(const ArbitrageOptions& opts, std::ostream& out, std::ostream& err) {
    const Basis basis = io::mechanism_from_json(io::read_json_file(opts.mechanism_path));
    const json path = io::read_json_file(opts.prices_path);
    if (!path.is_array()) throw InputError("price path must be a JSON array of numbers");
    std::vector<double> prices;
    for (const auto& v : path) {
        if (!v.is_number() || !(v.get<double>() > 0.0)) throw InputError("price path entries must be positive numbers");
        prices.push_back(v.get<double>());
    }

    Pool pool(basis.domain(), initial_price(opts.p0, basis.domain()));
    pool.mint("lp0", synthesize(basis, ConeCoefficients(std::vector<double>(basis.size(), 1.0))));

    out << "step,external_price,p0,profit,cumulative_profit,risky_reserve,numeraire_reserve,tie\n";
    out << "0,," << format_number(pool.price()) << ",0,0," << format_number(pool.risky_reserve()) << ','
        << format_number(pool.numeraire_reserve()) << ",0\n";
    double cumulative = 0.0;
    for (std::size_t i = 0; i < prices.size(); ++i) {
        const ArbitrageResponse best = pool.arbitrage_best_response(prices[i]);
        try {
            pool.trade_to_price(best.target_price);
        } catch (const SolvencyBreach& e) {
            err << "step " << i + 1 << ": solvency breach: " << e.what() << '\n';
            return property_breach;
        }
        cumulative += best.profit;
        out << i + 1 << ',' << format_number(prices[i]) << ',' << format_number(pool.price()) << ','
            << format_number(best.profit) << ',' << format_number(cumulative) << ','
            << format_number(pool.risky_reserve()) << ',' << format_number(pool.numeraire_reserve()) << ','
            << (best.tie ? 1 : 0) << '\n';
        if (best.profit < -1e-9 * std::max(1.0, pool.reserve_scale())) {
            err << "step " << i + 1 << ": negative arbitrage profit\n";
            return property_breach;
        }
    }
    return ok;
}

}  // namespace dcx::cli
