#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dcx/curve.hpp"

namespace dcx {

/// Raised when the numeraire reserve falls below the solvency tolerance.
class SolvencyBreach : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Risky quantity and numeraire amount moved by a mint or burn.
struct Holdings {
    double risky = 0.0;
    double numeraire = 0.0;
};

struct TradeReceipt {
    double p_before = 0.0;
    double p_after = 0.0;
    double risky_to_trader = 0.0;
    double numeraire_from_trader = 0.0;
};

struct ArbitrageResponse {
    double target_price = 0.0;
    double profit = 0.0;
    /// The maximizer set is an interval and the leftmost point was returned
    /// instead of the clamped external price.
    bool tie = false;
};

/// Pool over the aggregate of LP demand curves.
///
/// Reserves are maintained incrementally and can be re-derived from the
/// aggregate at any time: risky = g(p0), numeraire = -int_{pmin}^{p0} p dg.
/// Not thread-safe; one actor mutates a pool at a time.
class Pool {
public:
    Pool(PriceDomain domain, double p0);

    const PriceDomain& domain() const { return domain_; }
    double price() const { return p0_; }
    double risky_reserve() const { return risky_; }
    double numeraire_reserve() const { return numeraire_; }
    const DemandCurve& aggregate() const { return aggregate_; }
    const std::map<std::string, DemandCurve>& positions() const { return positions_; }

    /// Deposits required for a new position at the current price.
    Holdings mint(const std::string& lp_id, DemandCurve curve);
    /// Amounts returned when a position is withdrawn at the current price.
    Holdings burn(const std::string& lp_id);

    TradeReceipt trade_to_price(double p1);
    /// Buy `dq` units of risky (negative sells); the target price is the
    /// leftmost price at which the aggregate holds g(p0) - dq.
    TradeReceipt trade_exact_risky(double dq);

    /// Profit of moving the pool to p1 and unwinding at external price p.
    double arbitrage_profit(double external_price, double p1) const;
    ArbitrageResponse arbitrage_best_response(double external_price) const;

    /// Reserves recomputed from the aggregate curve.
    Holdings recomputed_reserves() const;
    /// Largest numeraire magnitude seen so far; solvency tolerance is 1e-9 times this.
    double reserve_scale() const { return scale_; }
    bool solvent() const;

private:
    void check_solvency() const;
    void note_scale(double amount);

    PriceDomain domain_;
    double p0_;
    std::map<std::string, DemandCurve> positions_;
    DemandCurve aggregate_;
    double risky_ = 0.0;
    double numeraire_ = 0.0;
    double scale_ = 0.0;
    double risky_scale_ = 0.0;
};

struct MintEvent {
    std::string lp;
    DemandCurve curve;
};
struct BurnEvent {
    std::string lp;
};
struct TradePriceEvent {
    double p1;
};
struct TradeQuantityEvent {
    double dq;
};
struct ArbitrageEvent {
    double p;
};

using Event = std::variant<MintEvent, BurnEvent, TradePriceEvent, TradeQuantityEvent, ArbitrageEvent>;

std::string_view event_name(const Event& event);

struct LedgerRow {
    std::size_t step = 0;
    std::string op;
    double p0 = 0.0;
    double risky_reserve = 0.0;
    double numeraire_reserve = 0.0;
    double risky_delta = 0.0;
    double numeraire_delta = 0.0;
};

struct SequenceFailure {
    std::size_t step = 0;
    std::string cause;
    bool solvency = false;
};

struct SequenceResult {
    std::vector<LedgerRow> rows;
    std::optional<SequenceFailure> failure;
    double min_numeraire = 0.0;
    double max_numeraire = 0.0;
};

/// Applies events in order, recording reserves after each. The first failing
/// event (invalid input or solvency breach) stops the run.
SequenceResult run_trade_sequence(Pool& pool, std::span<const Event> events);

}  // namespace dcx
