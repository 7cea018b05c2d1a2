#include "gaugecalc/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "gaugecalc/errors.hpp"
#include "gaugecalc/parallel.hpp"
#include "gaugecalc/serde.hpp"

namespace gaugecalc::cli {

namespace {

double parse_real_token(const std::string& s) {
  if (s.find('/') != std::string::npos) return rat_to_double(rat_parse(s));
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw spec_error("malformed number '" + s + "'");
  }
  if (pos != s.size()) throw spec_error("malformed number '" + s + "'");
  return v;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(parse_real_token(item));
  }
  return out;
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw spec_error("cannot open output file '" + out_path + "'");
  out << text;
}

std::vector<Gauge> parse_gauge_ladder(const std::string& text) {
  std::vector<Gauge> ladder;
  if (!text.empty() && (text.front() == '{' || text.front() == '[')) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (j.is_array()) {
      for (const auto& e : j) ladder.push_back(parse_gauge_spec(e));
    } else {
      ladder.push_back(parse_gauge_spec(j));
    }
    return ladder;
  }
  for (double v : parse_real_list(text)) ladder.push_back(Gauge::constant(v));
  if (ladder.empty()) throw spec_error("gauge: empty ladder");
  return ladder;
}

std::vector<double> level_endpoints(const CantorScheme& scheme, int level) {
  std::vector<double> out;
  for (const RatInterval& iv : cantor_level_intervals(scheme, level)) {
    out.push_back(rat_to_double(iv.lo));
    out.push_back(rat_to_double(iv.hi));
  }
  return out;
}

std::string infinity_aware(double v) {
  if (std::isfinite(v)) return format_double(v);
  return v > 0 ? "+infinity" : "-infinity";
}

nlohmann::json derivate_json(const DerivateEstimate& est) {
  nlohmann::json j;
  if (std::isfinite(est.value)) {
    j["value"] = est.value;
  } else {
    j["value"] = infinity_aware(est.value);
  }
  j["verdict"] = verdict_name(est.verdict);
  if (std::isfinite(est.trend_slope)) j["trendSlope"] = est.trend_slope;
  return j;
}

std::string report_csv(const CheckReport& report) {
  std::ostringstream os;
  if (!report.rows.empty()) {
    os << "n,r,h,q,bound,pass\n";
    for (const VerifyRow& row : report.rows) {
      os << row.n << ',' << format_double(row.r) << ',' << format_double(row.h) << ','
         << format_double(row.q) << ',' << format_double(row.bound) << ','
         << (row.inconclusive ? "inconclusive" : (row.pass ? "true" : "false")) << '\n';
    }
  } else {
    os << "key,value\n";
    os << "verdict," << verdict_name(report.verdict) << '\n';
    for (const auto& [k, v] : report.numeric_summary) os << k << ',' << format_double(v) << '\n';
  }
  return os.str();
}

void emit_report(const CheckReport& report, const std::string& out, const std::string& format) {
  if (format == "csv") {
    write_output(out, report_csv(report));
  } else {
    write_output(out, report_to_json(report).dump(2));
  }
}

int verdict_exit(CheckVerdict v) { return v == CheckVerdict::Certificate ? 0 : 1; }

struct CommonOpts {
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 12345;
};

void add_common(CLI::App* cmd, CommonOpts* common) {
  cmd->add_option("--out", common->out, "Output path (default: stdout)");
  cmd->add_option("--format", common->format, "Output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--seed", common->seed, "Deterministic seed");
}

int cmd_derivate(const std::string& spec, const std::string& points_text, double r, double h0,
                 double q, int count, const CommonOpts& common) {
  const FunctionModel F = load_function_spec(spec);
  const std::vector<double> points = parse_real_list(points_text);
  if (points.empty()) throw spec_error("derivate: no points given");

  // For the counterexample the natural ladder is the exact gap-midpoint
  // scales r_n/2, where the divergence is visible in closed form.
  HGrid grid = HGrid::geometric(h0, q, count);
  if (F.cantor_structure() != nullptr && h0 == 0.0) {
    const CantorScheme scheme = CantorScheme::fat();
    std::vector<double> scales;
    for (int n = 1; n <= std::min(count, 14); ++n) {
      scales.push_back(rat_to_double(scheme.level_length(n)) / 2);
    }
    grid = HGrid::from_scales(std::move(scales));
  }
  EstimatorOptions opts;

  struct PointResult {
    std::optional<DerivateEstimate> derivates[4];
    DerivativeEstimate derivative;
  };
  const DerivateKind kinds[4] = {DerivateKind::UpperRight, DerivateKind::LowerRight,
                                 DerivateKind::UpperLeft, DerivateKind::LowerLeft};
  std::vector<PointResult> results(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    for (int k = 0; k < 4; ++k) {
      try {
        results[i].derivates[k] = one_sided_derivate(F, points[i], r, kinds[k], grid, opts);
      } catch (const std::invalid_argument&) {
        // side unavailable at a domain endpoint
      }
    }
    results[i].derivative = lr_derivative(F, points[i], r, grid, opts);
  });

  bool all_inconclusive = true;
  for (const auto& res : results) {
    if (res.derivative.verdict != Verdict::Inconclusive) all_inconclusive = false;
  }

  if (common.format == "csv") {
    std::ostringstream os;
    os << "x,h,phi,ratio,alpha\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& d = results[i].derivative;
      for (std::size_t k = 0; k < d.residual_ratios.size(); ++k) {
        const auto [h, ratio] = d.residual_ratios[k];
        os << format_double(points[i]) << ',' << format_double(h) << ','
           << format_double(ratio * h) << ',' << format_double(ratio) << ','
           << format_double(d.alpha_trace[k]) << '\n';
      }
    }
    write_output(common.out, os.str());
  } else {
    nlohmann::json j;
    j["command"] = "derivate";
    j["r"] = r;
    nlohmann::json arr = nlohmann::json::array();
    const char* kind_names[4] = {"upperRight", "lowerRight", "upperLeft", "lowerLeft"};
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& res = results[i];
      nlohmann::json p;
      p["x"] = points[i];
      bool all_finite = true;
      double vmin = 0.0, vmax = 0.0;
      bool first = true;
      for (int k = 0; k < 4; ++k) {
        if (!res.derivates[k]) {
          p[kind_names[k]] = "unavailable";
          all_finite = false;
          continue;
        }
        p[kind_names[k]] = derivate_json(*res.derivates[k]);
        const double v = res.derivates[k]->value;
        if (!std::isfinite(v)) all_finite = false;
        vmin = first ? v : std::min(vmin, v);
        vmax = first ? v : std::max(vmax, v);
        first = false;
      }
      p["allEqual"] = all_finite && (vmax - vmin) <= 1e-5;
      nlohmann::json d;
      d["value"] = res.derivative.value;
      d["verdict"] = verdict_name(res.derivative.verdict);
      if (std::isfinite(res.derivative.trend_slope)) {
        d["trendSlope"] = res.derivative.trend_slope;
      }
      nlohmann::json diag = nlohmann::json::array();
      for (std::size_t k = 0; k < res.derivative.residual_ratios.size(); ++k) {
        diag.push_back({{"h", res.derivative.residual_ratios[k].first},
                        {"ratio", res.derivative.residual_ratios[k].second},
                        {"alpha", res.derivative.alpha_trace[k]}});
      }
      d["diagnostics"] = diag;
      p["derivative"] = d;
      arr.push_back(p);
    }
    j["points"] = arr;
    write_output(common.out, j.dump(2));
  }
  return all_inconclusive ? 1 : 0;
}

int cmd_counterexample_build(int n_min, int n_max, const CommonOpts& common) {
  if (n_min < 0 || n_max < n_min) throw spec_error("build: bad n range");
  const CantorScheme scheme = CantorScheme::fat();
  std::ostringstream csv;
  csv << "n,r_n,u_n,v_n,level_measure,identity\n";
  nlohmann::json rows = nlohmann::json::array();
  for (int n = n_min; n <= n_max; ++n) {
    const Rational rn = scheme.level_length(n);
    const Rational un = scheme.gap_length(n);
    const Rational vn = scheme.plateau_length(n);
    const Rational measure = level_measure(scheme, n);
    const Rational identity = Rational(1, 2) + Rational(1, n + 2);
    csv << n << ',' << rat_to_string(rn) << ',' << rat_to_string(un) << ','
        << rat_to_string(vn) << ',' << rat_to_string(measure) << ','
        << rat_to_string(identity) << '\n';
    rows.push_back({{"n", n},
                    {"r_n", rat_to_string(rn)},
                    {"u_n", rat_to_string(un)},
                    {"v_n", rat_to_string(vn)},
                    {"levelMeasure", rat_to_string(measure)},
                    {"identity", rat_to_string(identity)}});
  }
  if (common.format == "csv") {
    write_output(common.out, csv.str());
  } else {
    nlohmann::json j;
    j["command"] = "counterexample build";
    j["rows"] = rows;
    write_output(common.out, j.dump(2));
  }
  return 0;
}

int cmd_counterexample_verify(int n_min, int n_max, const std::string& r_text, double tol,
                              int depth_cap, const CommonOpts& common) {
  const std::vector<double> r_list = parse_real_list(r_text);
  if (r_list.empty()) throw spec_error("verify: empty r list");
  const CheckReport report =
      counterexample_verify(CantorScheme::fat(), n_min, n_max, r_list, tol, depth_cap);
  emit_report(report, common.out, common.format);
  return verdict_exit(report.verdict);
}

int cmd_partition_cousin(const std::string& gauge_text, const std::string& domain_text,
                         int max_depth, const CommonOpts& common) {
  const std::vector<Gauge> ladder = parse_gauge_ladder(gauge_text);
  const std::vector<double> dom = parse_real_list(domain_text);
  if (dom.size() != 2) throw spec_error("cousin: --domain needs 'lo,hi'");
  const TaggedPartition p = cousin_partition(Interval(dom[0], dom[1]), ladder.front(), max_depth);
  if (common.format == "csv") {
    std::ostringstream os;
    os << "lo,hi,tag\n";
    for (const auto& it : p.items()) {
      os << format_double(it.interval.lo) << ',' << format_double(it.interval.hi) << ','
         << format_double(it.tag) << '\n';
    }
    write_output(common.out, os.str());
  } else {
    write_output(common.out, partition_to_json(p).dump(2));
  }
  return 0;
}

int cmd_partition_check(const std::string& partition_path, const std::string& gauge_text,
                        const std::string& spec, const std::string& f_spec,
                        const std::string& domain_text, double r, const CommonOpts& common) {
  nlohmann::json pj;
  {
    std::ifstream in(partition_path);
    if (!in) throw spec_error("cannot open partition file '" + partition_path + "'");
    try {
      pj = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw spec_error(std::string("partition JSON parse error: ") + e.what());
    }
  }
  const TaggedPartition p = partition_from_json(pj);

  nlohmann::json j;
  j["command"] = "partition check";
  j["items"] = p.size();
  bool ok = true;
  const bool nonoverlap = p.nonoverlapping();
  j["nonoverlap"] = nonoverlap;
  ok = ok && nonoverlap;
  if (!domain_text.empty()) {
    const std::vector<double> dom = parse_real_list(domain_text);
    if (dom.size() != 2) throw spec_error("check: --domain needs 'lo,hi'");
    const bool tiling = p.tiles(Interval(dom[0], dom[1]));
    j["tiling"] = tiling;
    ok = ok && tiling;
  }
  if (!gauge_text.empty()) {
    const std::vector<Gauge> ladder = parse_gauge_ladder(gauge_text);
    const bool fine = is_fine(p, ladder.front());
    j["fine"] = fine;
    ok = ok && fine;
  }
  if (!spec.empty()) {
    const FunctionModel F = load_function_spec(spec);
    j["acSum"] = ac_sum(p, F, r);
    if (!f_spec.empty()) {
      const FunctionModel f = load_function_spec(f_spec);
      j["riemannLrSum"] = riemann_lr_sum(p, F, f, r);
    }
  }
  j["pass"] = ok;
  if (common.format == "csv") {
    std::ostringstream os;
    os << "key,value\n";
    for (const auto& item : j.items()) {
      os << item.key() << ',' << item.value().dump() << '\n';
    }
    write_output(common.out, os.str());
  } else {
    write_output(common.out, j.dump(2));
  }
  return ok ? 0 : 1;
}

}  // namespace

int run(std::vector<std::string> args) {
  CLI::App app{"gauge-partition calculus toolkit"};
  app.require_subcommand(1);

  // derivate
  auto* derivate = app.add_subcommand("derivate", "Estimate derivates and the derivative");
  std::string d_spec, d_points;
  double d_r = 2.0, d_h0 = 0.0, d_q = 0.5;
  int d_count = 20;
  CommonOpts d_common;
  derivate->add_option("--spec", d_spec, "Function spec (path or inline JSON)")->required();
  derivate->add_option("--points", d_points, "Comma-separated evaluation points")->required();
  derivate->add_option("--r", d_r, "Exponent r >= 1");
  derivate->add_option("--h0", d_h0, "Initial scale (0 = auto)");
  derivate->add_option("--q", d_q, "Grid ratio in (0,1)");
  derivate->add_option("--count", d_count, "Grid size");
  add_common(derivate, &d_common);

  // counterexample build|verify
  auto* ce = app.add_subcommand("counterexample", "Scheme tables and divergence verification");
  ce->require_subcommand(1);
  auto* build = ce->add_subcommand("build", "Exact-rational scheme table");
  int b_min = 0, b_max = 10;
  CommonOpts b_common;
  build->add_option("--n-min", b_min, "First level");
  build->add_option("--n-max", b_max, "Last level");
  add_common(build, &b_common);
  auto* verify = ce->add_subcommand("verify", "Check measured ratios against the bound");
  int v_min = 1, v_max = 10, v_cap = 60;
  double v_tol = 1e-6;
  std::string v_r = "1,2";
  CommonOpts v_common;
  verify->add_option("--n-min", v_min, "First level (>= 1)");
  verify->add_option("--n-max", v_max, "Last level");
  verify->add_option("--r", v_r, "Comma-separated exponents");
  verify->add_option("--tol", v_tol, "Bound-comparison tolerance");
  verify->add_option("--depth-cap", v_cap, "Evaluation depth cap");
  add_common(verify, &v_common);

  // partition cousin|check
  auto* partition = app.add_subcommand("partition", "Generate and check tagged partitions");
  partition->require_subcommand(1);
  auto* cousin = partition->add_subcommand("cousin", "Emit a fine partition for a gauge");
  std::string c_gauge = "1", c_domain = "0,1";
  int c_depth = 48;
  CommonOpts c_common;
  cousin->add_option("--gauge", c_gauge, "Gauge (number, JSON, or comma ladder; first is used)");
  cousin->add_option("--domain", c_domain, "Domain 'lo,hi'");
  cousin->add_option("--max-depth", c_depth, "Bisection depth limit");
  add_common(cousin, &c_common);
  auto* check = partition->add_subcommand("check", "Validate a partition file");
  std::string k_partition, k_gauge, k_spec, k_f, k_domain;
  double k_r = 1.0;
  CommonOpts k_common;
  check->add_option("--partition", k_partition, "Partition JSON file")->required();
  check->add_option("--gauge", k_gauge, "Gauge for the fineness check");
  check->add_option("--spec", k_spec, "Function F for ac_sum");
  check->add_option("--f", k_f, "Function f for the Riemann-type sum");
  check->add_option("--domain", k_domain, "Domain 'lo,hi' for the tiling check");
  check->add_option("--r", k_r, "Exponent r >= 1");
  add_common(check, &k_common);

  // acr-check
  auto* acr = app.add_subcommand("acr-check", "Gauge-quantified absolute-continuity check");
  std::string a_spec, a_points, a_eta = "0.1,0.01,0.001", a_gauge = "0.1,0.01,0.001,0.0001";
  double a_r = 1.0, a_eps = 1.0;
  int a_level = -1;
  long a_budget = 10000;
  CommonOpts a_common;
  acr->add_option("--spec", a_spec, "Function spec")->required();
  acr->add_option("--points", a_points, "Comma-separated tag set E");
  acr->add_option("--tags-level", a_level, "Use level-N interval endpoints of the scheme as E");
  acr->add_option("--r", a_r, "Exponent r >= 1");
  acr->add_option("--epsilon", a_eps, "Target epsilon");
  acr->add_option("--eta", a_eta, "Comma-separated eta ladder");
  acr->add_option("--gauge", a_gauge, "Gauge ladder");
  acr->add_option("--budget", a_budget, "Candidate budget");
  add_common(acr, &a_common);

  // ac-check
  auto* ac = app.add_subcommand("ac-check", "Classical absolute-continuity check");
  std::string ac_spec, ac_points, ac_eta = "0.1,0.01,0.001";
  double ac_eps = 1.0;
  int ac_level = -1;
  long ac_budget = 10000;
  CommonOpts ac_common;
  ac->add_option("--spec", ac_spec, "Function spec")->required();
  ac->add_option("--points", ac_points, "Comma-separated endpoint set E");
  ac->add_option("--tags-level", ac_level, "Use level-N interval endpoints of the scheme as E");
  ac->add_option("--epsilon", ac_eps, "Target epsilon");
  ac->add_option("--eta", ac_eta, "Comma-separated eta ladder");
  ac->add_option("--budget", ac_budget, "Candidate budget");
  add_common(ac, &ac_common);

  // hkr-check
  auto* hkr = app.add_subcommand("hkr-check", "Riemann-type deviation-sum check");
  std::string h_spec, h_f, h_gauge = "0.1,0.01,0.001,0.0001";
  double h_eps = 1e-3, h_r = 1.0;
  int h_trials = 8;
  CommonOpts h_common;
  hkr->add_option("--spec", h_spec, "Primitive F spec")->required();
  hkr->add_option("--f", h_f, "Integrand f spec")->required();
  hkr->add_option("--epsilon", h_eps, "Target epsilon");
  hkr->add_option("--gauge", h_gauge, "Gauge ladder, coarse to fine");
  hkr->add_option("--trials", h_trials, "Randomized partitions per gauge");
  hkr->add_option("--r", h_r, "Exponent r >= 1");
  add_common(hkr, &h_common);

  std::vector<const char*> argv;
  argv.push_back("gaugecalc");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*derivate) {
      return cmd_derivate(d_spec, d_points, d_r, d_h0, d_q, d_count, d_common);
    }
    if (*build) return cmd_counterexample_build(b_min, b_max, b_common);
    if (*verify) {
      return cmd_counterexample_verify(v_min, v_max, v_r, v_tol, v_cap, v_common);
    }
    if (*cousin) return cmd_partition_cousin(c_gauge, c_domain, c_depth, c_common);
    if (*check) {
      return cmd_partition_check(k_partition, k_gauge, k_spec, k_f, k_domain, k_r, k_common);
    }
    if (*acr) {
      const FunctionModel F = load_function_spec(a_spec);
      std::vector<double> E =
          a_level >= 0 ? level_endpoints(CantorScheme::fat(), a_level) : parse_real_list(a_points);
      if (E.empty()) throw spec_error("acr-check: empty tag set");
      const CheckReport report = acr_check(F, E, a_r, a_eps, parse_real_list(a_eta),
                                           parse_gauge_ladder(a_gauge), a_budget, a_common.seed);
      emit_report(report, a_common.out, a_common.format);
      return verdict_exit(report.verdict);
    }
    if (*ac) {
      const FunctionModel F = load_function_spec(ac_spec);
      std::vector<double> E = ac_level >= 0 ? level_endpoints(CantorScheme::fat(), ac_level)
                                            : parse_real_list(ac_points);
      if (E.empty()) throw spec_error("ac-check: empty endpoint set");
      const CheckReport report = ac_check(F, E, ac_eps, parse_real_list(ac_eta), ac_budget);
      emit_report(report, ac_common.out, ac_common.format);
      return verdict_exit(report.verdict);
    }
    if (*hkr) {
      const FunctionModel F = load_function_spec(h_spec);
      const FunctionModel f = load_function_spec(h_f);
      const CheckReport report =
          hkr_check(F, f, h_eps, parse_gauge_ladder(h_gauge), h_trials, h_r, h_common.seed);
      emit_report(report, h_common.out, h_common.format);
      return verdict_exit(report.verdict);
    }
  } catch (const resource_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace gaugecalc::cli
