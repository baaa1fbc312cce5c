#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dcx/approx.hpp"
#include "dcx/measure.hpp"

namespace dcx::cli {

/// Exit codes shared by all subcommands.
enum ExitCode : int { ok = 0, property_breach = 1, input_error = 2 };

struct SimulateOptions {
    std::string events_path;
    std::string mechanism_path;
    std::optional<double> p0;
};

struct ApproxOptions {
    std::string curve_path;
    std::string mechanism_path;
    std::string weight_path;
    double p_exp = 1.0;
    std::size_t grid_size = 256;
};

/// Sweep settings for the complexity/error trade-off table.
struct ExperimentConfig {
    PriceDomain domain{1.0, 2.0};
    std::optional<WeightFunction> weight;
    TargetClassBounds bounds{0.0, 1.0};
    std::vector<double> epsilons;
    double p_exp = 1.0;
    std::uint64_t seed = 0;
    std::size_t samples = 32;
    std::size_t grid_size = 256;

    void validate() const;
};

ExperimentConfig experiment_config_from_json(const std::string& path);

struct TradeoffOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<double> p_exp;
    std::size_t jobs = 1;
};

struct LowerboundOptions {
    std::string mechanism_path;
    std::string weight_path;
    double fmin = 0.0;
    double fmax = 1.0;
    double p_exp = 1.0;
    std::optional<std::size_t> n;
    std::size_t grid_size = 256;
};

struct ArbitrageOptions {
    std::string mechanism_path;
    std::string prices_path;
    std::optional<double> p0;
};

// Each command writes its CSV/JSON to `out`, diagnostics to `err`, and
// returns an ExitCode. Input problems surface as io::InputError.
int run_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);
int run_approx(const ApproxOptions& opts, std::ostream& out, std::ostream& err);
int run_tradeoff(const ExperimentConfig& cfg, std::size_t jobs, std::ostream& out, std::ostream& err);
int run_tradeoff(const TradeoffOptions& opts, std::ostream& out, std::ostream& err);
int run_lowerbound(const LowerboundOptions& opts, std::ostream& out, std::ostream& err);
int run_arbitrage(const ArbitrageOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace dcx::cli
