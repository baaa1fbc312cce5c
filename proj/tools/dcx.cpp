#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "commands.hpp"
#include "dcx/io.hpp"

int main(int argc, char** argv) {
    using namespace dcx::cli;
    CLI::App app{"dcx: demand-curve exchange simulator and approximation toolkit"};
    app.require_subcommand(1);

    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::size_t jobs = 1;
    std::optional<double> p_exp;
    app.add_option("--out", out_path, "write results to this file instead of stdout");
    app.add_option("--seed", seed, "override the RNG seed");
    app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--p", p_exp, "exponent of the weighted distance (1 or 2)");

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "replay a JSONL event file against a pool");
    simulate->add_option("events", sim.events_path)->required();
    simulate->add_option("--mechanism", sim.mechanism_path)->required();
    simulate->add_option("--p0", sim.p0);

    ApproxOptions apx;
    auto* approx = app.add_subcommand("approx", "best cone approximation of a curve");
    approx->add_option("--curve", apx.curve_path)->required();
    approx->add_option("--mechanism", apx.mechanism_path)->required();
    approx->add_option("--weight", apx.weight_path)->required();
    approx->add_option("--grid", apx.grid_size);

    TradeoffOptions trd;
    auto* tradeoff = app.add_subcommand("tradeoff", "complexity/error sweep for LOB and v3");
    tradeoff->add_option("--config", trd.config_path)->required();

    LowerboundOptions lbd;
    auto* lowerbound = app.add_subcommand("lowerbound", "adversarial lower-bound report");
    lowerbound->add_option("--mechanism", lbd.mechanism_path)->required();
    lowerbound->add_option("--weight", lbd.weight_path)->required();
    lowerbound->add_option("--fmin", lbd.fmin);
    lowerbound->add_option("--fmax", lbd.fmax);
    lowerbound->add_option("--n", lbd.n);
    lowerbound->add_option("--grid", lbd.grid_size);

    ArbitrageOptions arb;
    auto* arbitrage = app.add_subcommand("arbitrage", "arbitrage replay along an external price path");
    arbitrage->add_option("--mechanism", arb.mechanism_path)->required();
    arbitrage->add_option("--prices", arb.prices_path)->required();
    arbitrage->add_option("--p0", arb.p0);

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return input_error;
    }

    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) {
            std::cerr << "error: cannot write '" << out_path << "'\n";
            return input_error;
        }
    }
    std::ostream& out = out_path.empty() ? std::cout : file;

    try {
        if (*simulate) return run_simulate(sim, out, std::cerr);
        if (*approx) {
            if (p_exp) apx.p_exp = *p_exp;
            return run_approx(apx, out, std::cerr);
        }
        if (*tradeoff) {
            trd.seed = seed;
            trd.p_exp = p_exp;
            trd.jobs = jobs;
            return run_tradeoff(trd, out, std::cerr);
        }
        if (*lowerbound) {
            if (p_exp) lbd.p_exp = *p_exp;
            return run_lowerbound(lbd, out, std::cerr);
        }
        if (*arbitrage) return run_arbitrage(arb, out, std::cerr);
    } catch (const dcx::io::InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return input_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return input_error;
    } catch (const std::domain_error& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return input_error;
    }
    return input_error;
}
