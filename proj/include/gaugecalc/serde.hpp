#ifndef GAUGECALC_SERDE_HPP
#define GAUGECALC_SERDE_HPP

#include <json.hpp>

#include <string>

#include "gaugecalc/checkers.hpp"
#include "gaugecalc/derivates.hpp"

namespace gaugecalc {

// Shortest round-trip decimal form, locale-independent.
std::string format_double(double v);

// Function specs:
//   {"kind":"pwl","breakpoints":[...],"values":[...]}
//   {"kind":"poly","coeffs":[...],"domain":[lo,hi]}
//   {"kind":"power","scale":c,"center":x0,"exponent":p,"odd":bool,"domain":[lo,hi]}
//   {"kind":"counterexample","depthCap":60,"breakpointDepth":10}
//   {"kind":"neg","inner":{...}}    {"kind":"reflect","inner":{...}}
// Numeric fields accept JSON numbers or exact "p/q" strings.  Unknown keys are
// rejected (spec_error).
FunctionModel parse_function_spec(const nlohmann::json& j);

// Reads inline JSON (text starting with '{') or a file path.
FunctionModel load_function_spec(const std::string& path_or_inline);

// Gauge specs: {"kind":"constant","value":v} or
// {"kind":"pwconst","breakpoints":[...],"values":[...]}.
Gauge parse_gauge_spec(const nlohmann::json& j);

// Partitions: [{"lo":..,"hi":..,"tag":..}, ...]
nlohmann::json partition_to_json(const TaggedPartition& p);
TaggedPartition partition_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const CheckReport& report);

std::string verdict_name(CheckVerdict v);
std::string verdict_name(Verdict v);

double parse_real(const nlohmann::json& j);

}  // namespace gaugecalc

#endif
