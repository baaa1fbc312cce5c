#include "dcx/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dcx::io {

namespace {

double number(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw InputError(std::string("expected numeric field '") + key + "'");
    return j.at(key).get<double>();
}

std::vector<double> number_list(const json& j, const char* key) {
    if (!j.contains(key)) return {};
    if (!j.at(key).is_array()) throw InputError(std::string("expected array field '") + key + "'");
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) throw InputError(std::string("non-numeric entry in '") + key + "'");
        out.push_back(v.get<double>());
    }
    return out;
}

std::string string_field(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_string())
        throw InputError(std::string("expected string field '") + key + "'");
    return j.at(key).get<std::string>();
}

template <typename Fn>
auto wrap(Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const InputError&) {
        throw;
    } catch (const json::exception& e) {
        throw InputError(e.what());
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    } catch (const std::domain_error& e) {
        throw InputError(e.what());
    }
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json_file(const std::string& path) {
    const std::string text = read_text_file(path);
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw InputError("'" + path + "': " + e.what());
    }
}

PriceDomain domain_from_json(const json& j) {
    return wrap([&] { return PriceDomain(number(j, "pmin"), number(j, "pmax")); });
}

json to_json(const PriceDomain& d) { return {{"pmin", d.pmin()}, {"pmax", d.pmax()}}; }

DemandCurve curve_from_json(const json& j) {
    return wrap([&] {
        if (!j.is_object() || !j.contains("domain")) throw InputError("curve needs a 'domain'");
        const PriceDomain domain = domain_from_json(j.at("domain"));
        if (!j.contains("pieces") || !j.at("pieces").is_array() || j.at("pieces").empty())
            throw InputError("curve needs a non-empty 'pieces' array");
        std::vector<double> bp;
        std::vector<Segment> segs;
        for (const auto& piece : j.at("pieces")) {
            const double from = number(piece, "from");
            const double to = number(piece, "to");
            if (bp.empty()) bp.push_back(from);
            else if (from != bp.back()) throw InputError("curve pieces must be contiguous");
            bp.push_back(to);
            const std::string kind = string_field(piece, "kind");
            if (kind == "constant") segs.push_back(Segment::constant(number(piece, "c")));
            else if (kind == "inv_sqrt_affine") segs.push_back(Segment::inv_sqrt_affine(number(piece, "a"), number(piece, "b")));
            else if (kind == "linear") segs.push_back(Segment::linear(number(piece, "m"), number(piece, "b")));
            else if (kind == "mixed") segs.push_back(Segment{number(piece, "a"), number(piece, "b"), number(piece, "m")});
            else throw InputError("unknown piece kind '" + kind + "'");
        }
        return DemandCurve(domain, std::move(bp), std::move(segs));
    });
}

json to_json(const DemandCurve& g) {
    json pieces = json::array();
    auto bp = g.breakpoints();
    auto segs = g.segments();
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const Segment& s = segs[i];
        json piece = {{"from", bp[i]}, {"to", bp[i + 1]}};
        switch (s.kind()) {
            case SegmentKind::constant:
                piece["kind"] = "constant";
                piece["c"] = s.b;
                break;
            case SegmentKind::inv_sqrt_affine:
                piece["kind"] = "inv_sqrt_affine";
                piece["a"] = s.a;
                piece["b"] = s.b;
                break;
            case SegmentKind::linear:
                piece["kind"] = "linear";
                piece["m"] = s.m;
                piece["b"] = s.b;
                break;
            case SegmentKind::mixed:
                piece["kind"] = "mixed";
                piece["a"] = s.a;
                piece["b"] = s.b;
                piece["m"] = s.m;
                break;
        }
        pieces.push_back(std::move(piece));
    }
    return {{"domain", to_json(g.domain())}, {"pieces", std::move(pieces)}};
}

std::string_view to_string(WeightKind kind) {
    switch (kind) {
        case WeightKind::uniform: return "uniform";
        case WeightKind::log_uniform: return "log_uniform";
        case WeightKind::piecewise: return "piecewise";
    }
    return "uniform";
}

WeightFunction weight_from_json(const json& j, const std::optional<PriceDomain>& fallback) {
    return wrap([&] {
        const std::string kind = string_field(j, "kind");
        if (kind == "piecewise") return WeightFunction::piecewise(number_list(j, "breakpoints"), number_list(j, "densities"));
        std::optional<PriceDomain> domain = fallback;
        if (j.contains("domain")) domain = domain_from_json(j.at("domain"));
        if (!domain) throw InputError("weight needs a 'domain'");
        if (kind == "uniform") return WeightFunction::uniform(*domain);
        if (kind == "log_uniform") return WeightFunction::log_uniform(*domain);
        throw InputError("unknown weight kind '" + kind + "'");
    });
}

Basis mechanism_from_json(const json& j) {
    return wrap([&] {
        const MechanismKind kind = mechanism_kind_from_string(string_field(j, "kind"));
        if (!j.contains("domain")) throw InputError("mechanism needs a 'domain'");
        const PriceDomain domain = domain_from_json(j.at("domain"));
        std::vector<double> ticks = number_list(j, "ticks");
        switch (kind) {
            case MechanismKind::cpmm:
                return cpmm_basis(domain);
            case MechanismKind::lob: {
                // Only an explicit include_ones adds the boundary order at pmax.
                if (j.value("include_ones", false) && (ticks.empty() || ticks.back() != domain.pmax()))
                    ticks.push_back(domain.pmax());
                return lob_basis(domain, std::move(ticks));
            }
            case MechanismKind::univ3:
                return univ3_basis(domain, std::move(ticks), j.value("include_ones", true));
            case MechanismKind::custom: {
                std::vector<DemandCurve> curves;
                if (j.contains("curves"))
                    for (const auto& c : j.at("curves")) curves.push_back(curve_from_json(c));
                return custom_basis(domain, std::move(curves));
            }
        }
        throw InputError("unsupported mechanism");
    });
}

json to_json(const Basis& b) {
    json j = {{"kind", std::string(to_string(b.kind()))}, {"domain", to_json(b.domain())}};
    if (!b.ticks().empty()) j["ticks"] = std::vector<double>(b.ticks().begin(), b.ticks().end());
    if (b.kind() == MechanismKind::univ3) j["include_ones"] = b.include_ones();
    if (b.kind() == MechanismKind::custom) {
        json curves = json::array();
        for (const auto& c : b.curves()) curves.push_back(to_json(c));
        j["curves"] = std::move(curves);
    }
    return j;
}

std::vector<Event> events_from_jsonl(const std::string& text, const PriceDomain& domain, const Basis* basis) {
    std::vector<Event> events;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const json j = json::parse(line);
            const std::string op = string_field(j, "op");
            if (op == "mint") {
                const std::string lp = string_field(j, "lp");
                if (j.contains("curve")) {
                    DemandCurve curve = curve_from_json(j.at("curve"));
                    if (!(curve.domain() == domain)) throw InputError("mint curve domain differs from the mechanism");
                    events.emplace_back(MintEvent{lp, std::move(curve)});
                } else if (j.contains("coeffs") && basis != nullptr) {
                    const ConeCoefficients coefs(number_list(j, "coeffs"));
                    events.emplace_back(MintEvent{lp, synthesize(*basis, coefs)});
                } else {
                    throw InputError("mint needs a 'curve'");
                }
            } else if (op == "burn") {
                events.emplace_back(BurnEvent{string_field(j, "lp")});
            } else if (op == "trade_price") {
                events.emplace_back(TradePriceEvent{number(j, "p1")});
            } else if (op == "trade_qty") {
                events.emplace_back(TradeQuantityEvent{number(j, "dq")});
            } else if (op == "arb") {
                events.emplace_back(ArbitrageEvent{number(j, "p")});
            } else {
                throw InputError("unknown op '" + op + "'");
            }
        } catch (const std::exception& e) {
            throw InputError("events line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return events;
}

std::string format_number(double x) {
    if (x == 0.0) return "0";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

void write_ledger_csv(std::ostream& out, const std::vector<LedgerRow>& rows) {
    out << "step,op,p0,risky_reserve,numeraire_reserve,risky_delta,numeraire_delta\n";
    for (const auto& r : rows) {
        out << r.step << ',' << r.op << ',' << format_number(r.p0) << ',' << format_number(r.risky_reserve) << ','
            << format_number(r.numeraire_reserve) << ',' << format_number(r.risky_delta) << ','
            << format_number(r.numeraire_delta) << '\n';
    }
}

}  // namespace dcx::io
