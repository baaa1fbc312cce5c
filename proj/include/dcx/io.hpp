#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dcx/approx.hpp"
#include "dcx/curve.hpp"
#include "dcx/engine.hpp"
#include "dcx/measure.hpp"
#include "dcx/mechanism.hpp"

namespace dcx::io {

using json = nlohmann::json;

/// Malformed or inconsistent input document.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);

PriceDomain domain_from_json(const json& j);
json to_json(const PriceDomain& d);

/// {"domain":{...},"pieces":[{"from","to","kind":"constant","c"} | {"kind":"inv_sqrt_affine","a","b"}
/// | {"kind":"linear","m","b"}]}; adjacent pieces may disagree at shared endpoints.
DemandCurve curve_from_json(const json& j);
json to_json(const DemandCurve& g);

/// {"kind":"uniform"|"log_uniform","domain":{...}} or {"kind":"piecewise","breakpoints","densities"}.
/// A missing domain falls back to `fallback`.
WeightFunction weight_from_json(const json& j, const std::optional<PriceDomain>& fallback = std::nullopt);
std::string_view to_string(WeightKind kind);

/// {"kind":"cpmm"|"lob"|"univ3"|"custom","domain","ticks","include_ones","curves"}.
Basis mechanism_from_json(const json& j);
json to_json(const Basis& b);

/// One JSON object per non-empty line. Mint events carry a "curve", or
/// "coeffs" over `basis` when one is given.
std::vector<Event> events_from_jsonl(const std::string& text, const PriceDomain& domain,
                                     const Basis* basis = nullptr);

std::string format_number(double x);

void write_ledger_csv(std::ostream& out, const std::vector<LedgerRow>& rows);

}  // namespace dcx::io
