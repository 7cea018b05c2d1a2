#include "gaugecalc/serde.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "gaugecalc/errors.hpp"

namespace gaugecalc {

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_real(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return rat_to_double(rat_parse(j.get<std::string>()));
  throw spec_error("expected a number or a 'p/q' string");
}

namespace {

void require_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                  const std::string& where) {
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw spec_error(where + ": unknown key '" + item.key() + "'");
    }
  }
}

std::vector<double> parse_real_array(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array()) throw spec_error(where + ": expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(parse_real(v));
  return out;
}

Interval parse_domain(const nlohmann::json& j) {
  const std::vector<double> d = parse_real_array(j, "domain");
  if (d.size() != 2) throw spec_error("domain: expected [lo, hi]");
  if (!(d[0] < d[1])) throw spec_error("domain: requires lo < hi");
  return Interval(d[0], d[1]);
}

}  // namespace

FunctionModel parse_function_spec(const nlohmann::json& j) {
  if (!j.is_object()) throw spec_error("function spec: expected a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw spec_error("function spec: missing 'kind'");
  }
  const std::string kind = j["kind"].get<std::string>();
  try {
    if (kind == "pwl") {
      require_keys(j, {"kind", "breakpoints", "values"}, "pwl");
      if (!j.contains("breakpoints") || !j.contains("values")) {
        throw spec_error("pwl: needs 'breakpoints' and 'values'");
      }
      return FunctionModel::piecewise_linear(parse_real_array(j["breakpoints"], "breakpoints"),
                                             parse_real_array(j["values"], "values"));
    }
    if (kind == "poly") {
      require_keys(j, {"kind", "coeffs", "domain"}, "poly");
      if (!j.contains("coeffs") || !j.contains("domain")) {
        throw spec_error("poly: needs 'coeffs' and 'domain'");
      }
      return FunctionModel::polynomial(parse_domain(j["domain"]),
                                       parse_real_array(j["coeffs"], "coeffs"));
    }
    if (kind == "power") {
      require_keys(j, {"kind", "scale", "center", "exponent", "odd", "domain"}, "power");
      if (!j.contains("domain")) throw spec_error("power: needs 'domain'");
      const double scale = j.contains("scale") ? parse_real(j["scale"]) : 1.0;
      const double center = j.contains("center") ? parse_real(j["center"]) : 0.0;
      const double exponent = j.contains("exponent") ? parse_real(j["exponent"]) : 1.0;
      const bool odd = j.contains("odd") ? j["odd"].get<bool>() : false;
      return FunctionModel::scaled_power(parse_domain(j["domain"]), scale, center, exponent, odd);
    }
    if (kind == "counterexample") {
      require_keys(j, {"kind", "depthCap", "breakpointDepth", "domain"}, "counterexample");
      if (j.contains("domain")) {
        const Interval dom = parse_domain(j["domain"]);
        if (dom.lo != 0.0 || dom.hi != 1.0) {
          throw spec_error("counterexample: domain is fixed to [0,1]");
        }
      }
      const int cap = j.contains("depthCap") ? j["depthCap"].get<int>() : 60;
      const int bp = j.contains("breakpointDepth") ? j["breakpointDepth"].get<int>() : 10;
      return FunctionModel::counterexample(CantorScheme::fat(), cap, bp);
    }
    if (kind == "neg" || kind == "reflect") {
      require_keys(j, {"kind", "inner"}, kind);
      if (!j.contains("inner")) throw spec_error(kind + ": needs 'inner'");
      FunctionModel inner = parse_function_spec(j["inner"]);
      return kind == "neg" ? FunctionModel::negation(std::move(inner))
                           : FunctionModel::reflection(std::move(inner));
    }
  } catch (const spec_error&) {
    throw;
  } catch (const std::exception& e) {
    throw spec_error(std::string("function spec (") + kind + "): " + e.what());
  }
  throw spec_error("function spec: unknown kind '" + kind + "'");
}

FunctionModel load_function_spec(const std::string& path_or_inline) {
  nlohmann::json j;
  try {
    if (!path_or_inline.empty() && path_or_inline.front() == '{') {
      j = nlohmann::json::parse(path_or_inline);
    } else {
      std::ifstream in(path_or_inline);
      if (!in) throw spec_error("cannot open spec file '" + path_or_inline + "'");
      j = nlohmann::json::parse(in);
    }
  } catch (const nlohmann::json::parse_error& e) {
    throw spec_error(std::string("spec JSON parse error: ") + e.what());
  }
  return parse_function_spec(j);
}

Gauge parse_gauge_spec(const nlohmann::json& j) {
  if (j.is_number()) return Gauge::constant(j.get<double>());
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw spec_error("gauge spec: expected a number or an object with 'kind'");
  }
  const std::string kind = j["kind"].get<std::string>();
  try {
    if (kind == "constant") {
      require_keys(j, {"kind", "value"}, "constant gauge");
      if (!j.contains("value")) throw spec_error("constant gauge: needs 'value'");
      return Gauge::constant(parse_real(j["value"]));
    }
    if (kind == "pwconst") {
      require_keys(j, {"kind", "breakpoints", "values"}, "pwconst gauge");
      if (!j.contains("breakpoints") || !j.contains("values")) {
        throw spec_error("pwconst gauge: needs 'breakpoints' and 'values'");
      }
      return Gauge::piecewise_constant(parse_real_array(j["breakpoints"], "breakpoints"),
                                       parse_real_array(j["values"], "values"));
    }
  } catch (const spec_error&) {
    throw;
  } catch (const std::exception& e) {
    throw spec_error(std::string("gauge spec: ") + e.what());
  }
  throw spec_error("gauge spec: unknown kind '" + kind + "'");
}

nlohmann::json partition_to_json(const TaggedPartition& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& it : p.items()) {
    arr.push_back({{"lo", it.interval.lo}, {"hi", it.interval.hi}, {"tag", it.tag}});
  }
  return arr;
}

TaggedPartition partition_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw spec_error("partition: expected a JSON array");
  std::vector<TaggedInterval> items;
  items.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("lo") || !e.contains("hi") || !e.contains("tag")) {
      throw spec_error("partition: each item needs lo/hi/tag");
    }
    require_keys(e, {"lo", "hi", "tag"}, "partition item");
    try {
      items.emplace_back(Interval(parse_real(e["lo"]), parse_real(e["hi"])),
                         parse_real(e["tag"]));
    } catch (const std::invalid_argument& ex) {
      throw spec_error(std::string("partition item: ") + ex.what());
    }
  }
  return TaggedPartition(std::move(items));
}

std::string verdict_name(CheckVerdict v) {
  switch (v) {
    case CheckVerdict::Certificate:
      return "certificate";
    case CheckVerdict::WitnessViolation:
      return "witnessViolation";
    case CheckVerdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Converges:
      return "converges";
    case Verdict::Diverges:
      return "diverges";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

nlohmann::json report_to_json(const CheckReport& report) {
  nlohmann::json j;
  j["verdict"] = verdict_name(report.verdict);
  j["parameters"] = report.parameters;
  j["numericSummary"] = report.numeric_summary;
  if (report.witness_partition) {
    j["witnessPartition"] = partition_to_json(*report.witness_partition);
  }
  if (!report.witness_intervals.empty()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Interval& iv : report.witness_intervals) {
      arr.push_back({{"lo", iv.lo}, {"hi", iv.hi}});
    }
    j["witnessIntervals"] = arr;
  }
  if (!report.rows.empty()) {
    nlohmann::json rows = nlohmann::json::array();
    for (const VerifyRow& row : report.rows) {
      rows.push_back({{"n", row.n},
                      {"r", row.r},
                      {"h", row.h},
                      {"q", row.q},
                      {"bound", row.bound},
                      {"pass", row.pass},
                      {"inconclusive", row.inconclusive}});
    }
    j["rows"] = rows;
  }
  return j;
}

}  // namespace gaugecalc
