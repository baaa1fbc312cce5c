#include "dcx/engine.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

namespace dcx {

namespace {

bool has_jump(const DemandCurve& g, double t) {
    auto bp = g.breakpoints();
    auto segs = g.segments();
    const std::size_t idx = g.segment_index(t);
    return idx > 0 && bp[idx] == t && segs[idx - 1].value(t) > segs[idx].value(t);
}

}  // namespace

Pool::Pool(PriceDomain domain, double p0) : domain_(domain), p0_(p0), aggregate_(DemandCurve::zero(domain)) {
    if (!domain_.contains(p0)) throw std::invalid_argument("initial pool price outside the domain");
}

void Pool::note_scale(double amount) { scale_ = std::max(scale_, std::abs(amount)); }

bool Pool::solvent() const { return numeraire_ >= -1e-9 * scale_ && risky_ >= -1e-9 * risky_scale_; }

void Pool::check_solvency() const {
    if (!solvent())
        throw SolvencyBreach("pool insolvent: numeraire reserve " + std::to_string(numeraire_) + ", risky reserve " +
                             std::to_string(risky_));
}

Holdings Pool::mint(const std::string& lp_id, DemandCurve curve) {
    if (!(curve.domain() == domain_)) throw std::invalid_argument("position domain does not match the pool");
    if (positions_.contains(lp_id)) throw std::invalid_argument("position '" + lp_id + "' already exists");
    Holdings deposit{curve(p0_), stieltjes_price_integral(curve, domain_.pmin(), p0_)};
    aggregate_ = add(aggregate_, curve);
    positions_.emplace(lp_id, std::move(curve));
    risky_ += deposit.risky;
    numeraire_ += deposit.numeraire;
    risky_scale_ = std::max(risky_scale_, risky_);
    note_scale(deposit.numeraire);
    note_scale(numeraire_);
    check_solvency();
    return deposit;
}

Holdings Pool::burn(const std::string& lp_id) {
    auto it = positions_.find(lp_id);
    if (it == positions_.end()) throw std::invalid_argument("unknown position '" + lp_id + "'");
    const DemandCurve& curve = it->second;
    Holdings returned{curve(p0_), stieltjes_price_integral(curve, domain_.pmin(), p0_)};
    positions_.erase(it);

    // Rebuild from the remaining positions instead of subtracting.
    std::vector<DemandCurve> rest;
    rest.reserve(positions_.size());
    for (const auto& [id, c] : positions_) rest.push_back(c);
    const std::vector<double> ones(rest.size(), 1.0);
    aggregate_ = rest.empty() ? DemandCurve::zero(domain_) : linear_combination(rest, ones);

    risky_ -= returned.risky;
    numeraire_ -= returned.numeraire;
    note_scale(returned.numeraire);
    check_solvency();
    return returned;
}

TradeReceipt Pool::trade_to_price(double p1) {
    if (!domain_.contains(p1)) throw std::invalid_argument("target price outside the domain");
    TradeReceipt r{p0_, p1, aggregate_(p0_) - aggregate_(p1), stieltjes_price_integral(aggregate_, p0_, p1)};
    risky_ -= r.risky_to_trader;
    numeraire_ += r.numeraire_from_trader;
    p0_ = p1;
    note_scale(r.numeraire_from_trader);
    note_scale(numeraire_);
    check_solvency();
    return r;
}

TradeReceipt Pool::trade_exact_risky(double dq) {
    if (!std::isfinite(dq)) throw std::invalid_argument("trade quantity must be finite");
    if (dq == 0.0) return trade_to_price(p0_);
    const double top = aggregate_.value_at_min();
    const double bottom = aggregate_.value_at_max();
    const double target = aggregate_(p0_) - dq;
    const double tol = curve_tolerance(std::max(std::abs(top), std::abs(dq)));
    if (target > top + tol || target < bottom - tol)
        throw std::invalid_argument("trade quantity outside the reachable range");
    return trade_to_price(invert_quantity(aggregate_, std::clamp(target, bottom, top)));
}

double Pool::arbitrage_profit(double external_price, double p1) const {
    return external_price * (aggregate_(p0_) - aggregate_(p1)) - stieltjes_price_integral(aggregate_, p0_, p1);
}

ArbitrageResponse Pool::arbitrage_best_response(double external_price) const {
    if (!(external_price > 0.0)) throw std::invalid_argument("external price must be positive");
    // Profit(p1) = int_{p0}^{p1} (s - p) dg(s) is maximal at the clamped
    // external price. Walking left while g has no variation weighted by
    // |s - p| finds the leftmost maximizer exactly.
    const double c = domain_.clamp(external_price);
    const auto& g = aggregate_;
    auto bp = g.breakpoints();
    auto segs = g.segments();
    double x = c;
    // A jump at a clamped boundary carries positive weight and pins the maximizer.
    const bool pinned = c != external_price && has_jump(g, c);
    while (!pinned && x > domain_.pmin()) {
        const std::size_t idx = g.segment_index(x);
        const std::size_t j = (bp[idx] == x && idx > 0) ? idx - 1 : idx;
        if (!segs[j].is_constant()) break;
        x = bp[j];
        if (has_jump(g, x)) break;
    }
    return {x, arbitrage_profit(external_price, x), x != c};
}

Holdings Pool::recomputed_reserves() const {
    return {aggregate_(p0_), stieltjes_price_integral(aggregate_, domain_.pmin(), p0_)};
}

std::string_view event_name(const Event& event) {
    struct Visitor {
        std::string_view operator()(const MintEvent&) const { return "mint"; }
        std::string_view operator()(const BurnEvent&) const { return "burn"; }
        std::string_view operator()(const TradePriceEvent&) const { return "trade_price"; }
        std::string_view operator()(const TradeQuantityEvent&) const { return "trade_qty"; }
        std::string_view operator()(const ArbitrageEvent&) const { return "arb"; }
    };
    return std::visit(Visitor{}, event);
}

SequenceResult run_trade_sequence(Pool& pool, std::span<const Event> events) {
    SequenceResult result;
    auto record = [&](std::size_t step, std::string_view op, double dr, double dn) {
        result.rows.push_back(LedgerRow{step, std::string(op), pool.price(), pool.risky_reserve(),
                                        pool.numeraire_reserve(), dr, dn});
        result.min_numeraire = std::min(result.min_numeraire, pool.numeraire_reserve());
        result.max_numeraire = std::max(result.max_numeraire, pool.numeraire_reserve());
    };
    result.min_numeraire = pool.numeraire_reserve();
    result.max_numeraire = pool.numeraire_reserve();
    record(0, "init", 0.0, 0.0);

    for (std::size_t i = 0; i < events.size(); ++i) {
        const double risky_before = pool.risky_reserve();
        const double numeraire_before = pool.numeraire_reserve();
        try {
            std::visit(
                [&](const auto& ev) {
                    using T = std::decay_t<decltype(ev)>;
                    if constexpr (std::is_same_v<T, MintEvent>) {
                        pool.mint(ev.lp, ev.curve);
                    } else if constexpr (std::is_same_v<T, BurnEvent>) {
                        pool.burn(ev.lp);
                    } else if constexpr (std::is_same_v<T, TradePriceEvent>) {
                        pool.trade_to_price(ev.p1);
                    } else if constexpr (std::is_same_v<T, TradeQuantityEvent>) {
                        pool.trade_exact_risky(ev.dq);
                    } else {
                        pool.trade_to_price(pool.arbitrage_best_response(ev.p).target_price);
                    }
                },
                events[i]);
        } catch (const SolvencyBreach& e) {
            record(i + 1, event_name(events[i]), pool.risky_reserve() - risky_before,
                   pool.numeraire_reserve() - numeraire_before);
            result.failure = SequenceFailure{i + 1, e.what(), true};
            return result;
        } catch (const std::exception& e) {
            result.failure = SequenceFailure{i + 1, e.what(), false};
            return result;
        }
        record(i + 1, event_name(events[i]), pool.risky_reserve() - risky_before,
               pool.numeraire_reserve() - numeraire_before);
    }
    return result;
}

}  // namespace dcx
