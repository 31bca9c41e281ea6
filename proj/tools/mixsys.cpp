// Command line front end. Every subcommand reads the system from --config,
// prints one JSON (or CSV) document to stdout, and maps failures onto exit
// codes: 1 infeasible or outside hypotheses, 2 certification failure,
// 3 budget exceeded.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mixsys/anchor.hpp"
#include "mixsys/arcs.hpp"
#include "mixsys/counting.hpp"
#include "mixsys/errors.hpp"
#include "mixsys/expsum.hpp"
#include "mixsys/integral.hpp"
#include "mixsys/model.hpp"
#include "mixsys/report.hpp"
#include "mixsys/series.hpp"
#include "mixsys/simd.hpp"
#include "mixsys/validate.hpp"

namespace {

using mixsys::report::json;
using mixsys::report::num;

struct Global {
  std::string config_path;
  std::string out = "json";
  int threads = 1;
  std::uint64_t seed = 1;
  nlohmann::json config;
  bool have_config = false;
};

void load_config(Global& g) {
  if (g.config_path.empty()) return;
  std::ifstream in(g.config_path);
  if (!in) throw mixsys::model::InvalidSpec("cannot open config: " + g.config_path);
  in >> g.config;
  g.have_config = true;
}

mixsys::model::SystemSpec spec_of(const Global& g) {
  if (!g.have_config)
    throw mixsys::model::InvalidSpec("this command needs --config <file>");
  return mixsys::model::spec_from_json(g.config);
}

// Anchored box sizes: taken from the config when present, otherwise solved.
std::vector<double> eta_of(const Global& g, const mixsys::model::SystemSpec& spec) {
  if (g.config.contains("eta")) {
    auto eta = g.config.at("eta").get<std::vector<double>>();
    if (static_cast<long long>(eta.size()) != spec.s())
      throw mixsys::model::InvalidSpec("eta must have s entries");
    return eta;
  }
  return mixsys::anchor::find_anchor(spec, g.seed).eta;
}

mixsys::counting::Method method_of(const std::string& name) {
  return name == "brute" ? mixsys::counting::Method::Brute
                         : mixsys::counting::Method::Mitm;
}

// CSV fallback for documents without a natural row shape: one key,value row
// per scalar leaf, dotted paths, scalar arrays joined with ';'.
void flatten(const json& j, const std::string& path,
             std::vector<std::vector<std::string>>& rows) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      flatten(v, path.empty() ? k : path + "." + k, rows);
  } else if (j.is_array()) {
    bool scalars = true;
    for (const auto& v : j)
      if (v.is_object() || v.is_array()) scalars = false;
    if (scalars) {
      std::string joined;
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) joined += ";";
        joined += j[i].is_string() ? j[i].get<std::string>() : j[i].dump();
      }
      rows.push_back({path, joined});
    } else {
      for (size_t i = 0; i < j.size(); ++i)
        flatten(j[i], path + "[" + std::to_string(i) + "]", rows);
    }
  } else {
    rows.push_back({path, j.is_string() ? j.get<std::string>() : j.dump()});
  }
}

void emit(const Global& g, const json& doc,
          const std::vector<std::string>& csv_header = {},
          const std::vector<std::vector<std::string>>& csv_rows = {}) {
  if (g.out == "csv") {
    if (!csv_header.empty()) {
      std::cout << mixsys::report::render_csv(csv_header, csv_rows);
    } else {
      std::vector<std::vector<std::string>> rows;
      flatten(doc, "", rows);
      std::cout << mixsys::report::render_csv({"key", "value"}, rows);
    }
    return;
  }
  std::cout << mixsys::report::render_json(doc);
}

json spec_json(const mixsys::model::SystemSpec& spec) {
  return json::parse(mixsys::model::spec_to_json(spec).dump());
}

const char* arc_name(mixsys::arcs::ArcKind k) {
  switch (k) {
    case mixsys::arcs::ArcKind::MajorP: return "major";
    case mixsys::arcs::ArcKind::MinorInequality: return "minor-inequality";
    case mixsys::arcs::ArcKind::MinorRational: return "minor-rational";
    default: return "trivial";
  }
}

// ---------------------------------------------------------------- commands

int cmd_params(const Global& g) {
  auto spec = spec_of(g);
  mixsys::model::validate(spec);
  auto dp = mixsys::model::derive_params(spec);
  auto hyp = mixsys::model::check_hypotheses(spec, dp);
  auto hw = mixsys::model::holder_weights(spec, dp,
                                          mixsys::model::default_holder_delta(spec.theta));

  json doc = mixsys::report::envelope("params", g.seed, g.threads);
  doc["spec"] = spec_json(spec);
  doc["derived"] = {{"a_theta", dp.a_theta},
                    {"a_d", dp.a_d},
                    {"s", dp.s},
                    {"s_min", dp.s_min},
                    {"s_max", dp.s_max},
                    {"gamma_frac", dp.gamma_frac},
                    {"delta0", dp.delta0},
                    {"log5_omega", dp.log5_omega},
                    {"omega_used", dp.omega_used},
                    {"xi_theoretical", dp.xi_theoretical},
                    {"xi_used", dp.xi_used},
                    {"eta1", dp.eta1},
                    {"delta_cap", dp.delta_cap}};
  doc["hypotheses"] = {{"block_floors", {{"pass", hyp.cond_b.pass}, {"detail", hyp.cond_b.detail}}},
                       {"block_sums", {{"pass", hyp.cond_c.pass}, {"detail", hyp.cond_c.detail}}},
                       {"count_window", {{"pass", hyp.cond_d.pass}, {"detail", hyp.cond_d.detail}}},
                       {"real_anchor", hyp.cond_a_note},
                       {"all_pass", hyp.all_pass}};
  doc["holder"] = {{"w", {hw.w[0], hw.w[1], hw.w[2], hw.w[3]}},
                   {"delta", hw.delta},
                   {"s_prime", hw.s_prime},
                   {"feasible", hw.feasible}};
  doc["simd_backend"] = mixsys::simd::backend().name;
  emit(g, doc);
  return 0;
}

int cmd_anchor(const Global& g, bool padic, long long prime_bound) {
  auto spec = spec_of(g);
  mixsys::model::validate(spec);
  auto sol = mixsys::anchor::find_anchor(spec, g.seed);

  json doc = mixsys::report::envelope("anchor", g.seed, g.threads);
  doc["spec"] = spec_json(spec);
  doc["eta"] = sol.eta;
  doc["residual_f"] = sol.residual_f;
  doc["residual_d"] = sol.residual_d;
  doc["rank2"] = sol.rank2;
  doc["best_minor_cond"] = sol.best_minor_cond;
  if (padic) {
    json rows = json::array();
    for (const auto& v : mixsys::anchor::check_padic(spec, prime_bound)) {
      rows.push_back({{"prime", v.prime},
                      {"lifted_to", v.lifted_to},
                      {"witness", v.witness},
                      {"nonsingular", v.nonsingular}});
    }
    doc["padic"] = rows;
  }
  emit(g, doc);
  return 0;
}

int cmd_count(const Global& g, const std::vector<long long>& ps,
              const std::string& method, bool with_prediction, long long series_q) {
  auto spec = spec_of(g);
  mixsys::model::validate(spec);
  auto eta = eta_of(g, spec);

  bool have_pred = false;
  mixsys::validate::Prediction pred;
  if (with_prediction) {
    mixsys::integral::QuadratureConfig qc;
    qc.seed = g.seed;
    pred = mixsys::validate::predict(spec, eta, series_q, qc, g.threads);
    have_pred = true;
  }

  json doc = mixsys::report::envelope("count", g.seed, g.threads);
  doc["spec"] = spec_json(spec);
  doc["eta"] = eta;
  doc["method"] = method;
  json rows = json::array();
  std::vector<std::vector<std::string>> csv;
  for (long long P : ps) {
    auto r = mixsys::counting::count_solutions(spec, eta, P, method_of(method),
                                               g.threads);
    double n_pred = have_pred ? pred.at(static_cast<double>(P))
                              : std::numeric_limits<double>::quiet_NaN();
    double ratio = have_pred && n_pred != 0.0 ? static_cast<double>(r.count) / n_pred
                                              : std::numeric_limits<double>::quiet_NaN();
    rows.push_back({{"P", r.P},
                    {"n_exact", r.count},
                    {"n_pred", n_pred},
                    {"ratio", ratio},
                    {"elapsed_ms", r.elapsed_ms}});
    csv.push_back({num(r.P), num(r.count), num(n_pred), num(ratio), num(r.elapsed_ms)});
  }
  doc["rows"] = rows;
  emit(g, doc, {"P", "n_exact", "n_pred", "ratio", "elapsed_ms"}, csv);
  return 0;
}

int cmd_series(const Global& g, long long Q, long long euler_bound) {
  auto spec = spec_of(g);
  mixsys::model::validate(spec);
  auto ss = mixsys::series::singular_series(spec, Q, g.threads);

  json doc = mixsys::report::envelope("series", g.seed, g.threads);
  doc["spec"] = spec_json(spec);
  doc["Q"] = ss.Q;
  doc["partial_sum"] = ss.partial_sum;
  doc["tail_bound"] = ss.divergent_tail ? json() : json(ss.tail_bound);
  doc["divergent_tail"] = ss.divergent_tail;
  doc["empirical_constant"] = ss.empirical_constant;
  json tail = json::array();
  size_t from = ss.per_q_terms.size() > 8 ? ss.per_q_terms.size() - 8 : 0;
  for (size_t i = from; i < ss.per_q_terms.size(); ++i)
    tail.push_back({{"q", ss.per_q_terms[i].first}, {"term", ss.per_q_terms[i].second}});
  doc["last_terms"] = tail;
  if (euler_bound > 0) {
    doc["euler_product"] = mixsys::series::euler_product(spec, euler_bound, g.threads);
    doc["euler_bound"] = euler_bound;
  }
  emit(g, doc);
  return 0;
}

int cmd_integral(const Global& g, double P, std::vector<double> ts, bool physical,
                 long long mc_samples, double radius) {
  auto spec = spec_of(g);
  mixsys::model::validate(spec);
  auto eta = eta_of(g, spec);
  mixsys::integral::QuadratureConfig qc;
  qc.seed = g.seed;
  if (mc_samples > 0) qc.mc_samples = mc_samples;
  if (radius > 0) qc.truncation_radius = radius;

  auto ser = mixsys::integral::tent_series(spec, eta, P, ts, qc, g.threads);

  json doc = mixsys::report::envelope("integral", g.seed, g.threads);
  doc["spec"] = spec_json(spec);
  doc["eta"] = eta;
  doc["P"] = P;
  doc["j0"] = {{"value", ser.base.value},
               {"tail_estimate", ser.base.tail_estimate},
               {"refine_change", ser.base.refine_change},
               {"decay_fitted", ser.base.decay_fitted},
               {"radius_d", ser.base.radius_d},
               {"radius_t", ser.base.radius_t},
               {"grid_nodes", ser.base.grid_nodes}};
  json rows = json::array();
  for (const auto& [T, sp] : ser.j_of_t) {
    json row = {{"T", T}, {"spectral", sp}};
    if (physical) {
      auto ph = mixsys::integral::j_t_physical(spec, eta, P, T, qc, g.threads);
      row["physical"] = ph.value;
      row["physical_err"] = ph.err;
      double gap = std::abs(sp - ph.value);
      double tol = 3.0 * (ser.base.tail_estimate +
                          ser.base.refine_change * std::abs(sp) + ph.err) +
                   1e-9;
      if (gap > tol)
        throw mixsys::integral::RouteMismatch(
            "spectral and physical routes disagree at T=" + std::to_string(T));
      row["route_gap"] = gap;
    }
    rows.push_back(row);
  }
  doc["j_of_t"] = rows;
  emit(g, doc);
  return 0;
}

int cmd_predict(const Global& g, long long series_q) {
  auto spec = spec_of(g);
  auto eta = eta_of(g, spec);
  mixsys::integral::QuadratureConfig qc;
  qc.seed = g.seed;
  auto pred = mixsys::validate::predict(spec, eta, series_q, qc, g.threads);

  json doc = mixsys::report::envelope("predict", g.seed, g.threads);
  doc["spec"] = spec_json(spec);
  doc["eta"] = eta;
  doc["j0"] = pred.j0;
  doc["series_sum"] = pred.series_sum;
  doc["series_tail"] = pred.series_tail_divergent ? json() : json(pred.series_tail);
  doc["series_tail_divergent"] = pred.series_tail_divergent;
  doc["series_q"] = pred.series_q;
  doc["constant"] = pred.constant;
  doc["exponent"] = pred.exponent;
  doc["warnings"] = pred.warnings;
  emit(g, doc);
  return 0;
}

int cmd_validate(const Global& g, const std::vector<long long>& ps,
                 const std::string& method, long long series_q) {
  auto spec = spec_of(g);
  auto eta = eta_of(g, spec);
  mixsys::integral::QuadratureConfig qc;
  qc.seed = g.seed;
  auto rep = mixsys::validate::validate_scaling(spec, eta, ps, series_q, qc,
                                                method_of(method), g.threads);

  json doc = mixsys::report::envelope("validate", g.seed, g.threads);
  doc["spec"] = spec_json(spec);
  doc["eta"] = eta;
  doc["expected_exponent"] = rep.expected_exponent;
  doc["prediction_available"] = rep.prediction_available;
  if (rep.prediction_available) {
    doc["constant"] = rep.pred.constant;
    doc["j0"] = rep.pred.j0;
    doc["series_sum"] = rep.pred.series_sum;
  }
  doc["fit"] = {{"slope", rep.exact_fit.slope},
                {"intercept", rep.exact_fit.intercept},
                {"stderr_slope", rep.exact_fit.stderr_slope},
                {"points", rep.exact_fit.points}};
  doc["labels"] = rep.labels;
  json rows = json::array();
  std::vector<std::vector<std::string>> csv;
  for (const auto& r : rep.rows) {
    rows.push_back({{"P", r.P},
                    {"n_exact", r.n_exact},
                    {"n_pred", r.n_pred},
                    {"ratio", r.ratio},
                    {"elapsed_ms", r.elapsed_ms}});
    csv.push_back({num(r.P), num(r.n_exact), num(r.n_pred), num(r.ratio),
                   num(r.elapsed_ms)});
  }
  doc["rows"] = rows;
  emit(g, doc, {"P", "n_exact", "n_pred", "ratio", "elapsed_ms"}, csv);
  return 0;
}

int cmd_scan_expsum(const Global& g, long long P, long long samples, long long weyl_q) {
  auto spec = spec_of(g);
  mixsys::model::validate(spec);
  auto eta = eta_of(g, spec);

  json doc = mixsys::report::envelope("scan-expsum", g.seed, g.threads);
  doc["spec"] = spec_json(spec);
  auto scan = mixsys::validate::minor_arc_sup_scan(spec, eta, P, samples, g.seed);
  doc["P"] = scan.P;
  doc["samples"] = scan.samples;
  doc["ratio_inequality_region"] = scan.ratio_inequality_region;
  doc["ratio_rational_region"] = scan.ratio_rational_region;
  if (weyl_q > 0) {
    double worst = 0.0;
    long long worst_q = 1;
    for (long long q = 1; q <= weyl_q; ++q) {
      auto row = mixsys::expsum::weyl_scan_q(q, spec.d);
      if (row.max_ratio > worst) {
        worst = row.max_ratio;
        worst_q = q;
      }
    }
    doc["weyl"] = {{"q_bound", weyl_q}, {"max_ratio", worst}, {"argmax_q", worst_q}};
  }
  emit(g, doc);
  return 0;
}

int cmd_arcs(const Global& g, double P, bool have_point, double alpha_d,
             double alpha_theta) {
  auto spec = spec_of(g);
  mixsys::model::validate(spec);
  auto dp = mixsys::model::derive_params(spec);
  auto params = mixsys::arcs::make_dissection(P, spec, dp);
  auto arcs = mixsys::arcs::major_arcs(params);

  json doc = mixsys::report::envelope("arcs", g.seed, g.threads);
  doc["spec"] = spec_json(spec);
  doc["P"] = P;
  doc["delta0"] = params.delta0;
  doc["omega_used"] = params.omega_used;
  doc["xi_used"] = params.xi_used;
  doc["m_lower"] = params.m_lower();
  doc["m_upper"] = params.m_upper();
  doc["arc_width"] = params.arc_width();
  doc["q_bound"] = params.q_bound();
  doc["arc_count"] = static_cast<long long>(arcs.size());
  doc["total_arc_measure"] = mixsys::arcs::total_arc_measure(arcs);
  if (have_point) {
    auto label = mixsys::arcs::classify({alpha_d, alpha_theta}, params);
    doc["point"] = {{"alpha_d", alpha_d},
                    {"alpha_theta", alpha_theta},
                    {"kind", arc_name(label.kind)},
                    {"q", label.q},
                    {"a", label.a}};
  }
  emit(g, doc);
  return 0;
}

int cmd_check_bounds(const Global& g) {
  auto spec = spec_of(g);
  mixsys::model::validate(spec);
  auto eta = eta_of(g, spec);
  auto checks = mixsys::validate::inequality_audit(spec, eta, g.seed);

  json doc = mixsys::report::envelope("check-bounds", g.seed, g.threads);
  doc["spec"] = spec_json(spec);
  json rows = json::array();
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.pass;
    rows.push_back({{"name", c.name},
                    {"ratios", c.ratios},
                    {"bound", c.bound},
                    {"exact", c.exact},
                    {"pass", c.pass}});
  }
  doc["checks"] = rows;
  doc["all_pass"] = all;
  emit(g, doc);
  return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixed-system counting toolkit: exact counts, exponential sums,"
               " arc dissection, density constants, and scaling validation"};
  app.require_subcommand(1);
  app.fallthrough();

  Global g;
  app.add_option("--config", g.config_path, "JSON file describing the system");
  app.add_option("--out", g.out, "output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", g.threads, "worker threads (0 = hardware)");
  app.add_option("--seed", g.seed, "seed for anchored search and sampling");

  auto* sc_params = app.add_subcommand("params", "derived parameters and hypothesis checks");

  auto* sc_anchor = app.add_subcommand("anchor", "non-singular real zero of both forms");
  bool padic = false;
  long long prime_bound = 20;
  sc_anchor->add_flag("--padic", padic, "also certify p-adic zeros of the equation");
  sc_anchor->add_option("--prime-bound", prime_bound, "primes up to this bound");

  auto* sc_count = app.add_subcommand("count", "certified exact solution counts");
  std::vector<long long> count_ps;
  std::string count_method = "mitm";
  bool with_prediction = false;
  long long count_series_q = 150;
  sc_count->add_option("--p", count_ps, "box scale P (repeatable)")->required();
  sc_count->add_option("--method", count_method)->check(CLI::IsMember({"mitm", "brute"}));
  sc_count->add_flag("--with-prediction", with_prediction,
                     "also evaluate the predicted power law");
  sc_count->add_option("--series-q", count_series_q, "series cutoff for the prediction");

  auto* sc_series = app.add_subcommand("series", "rational-arc density sum");
  long long series_Q = 120;
  long long euler_bound = 0;
  sc_series->add_option("--q", series_Q, "sum over moduli up to Q");
  sc_series->add_option("--euler-bound", euler_bound,
                        "cross-check against the p-adic density product");

  auto* sc_integral = app.add_subcommand("integral", "real density integral");
  double int_P = 1.0;
  std::vector<double> int_ts;
  bool int_physical = false;
  long long mc_samples = 0;
  double radius = 0.0;
  sc_integral->add_option("--p", int_P, "box scale");
  sc_integral->add_option("--t", int_ts, "tent sharpness values (repeatable)");
  sc_integral->add_flag("--physical", int_physical,
                        "cross-check each tent value by direct sampling");
  sc_integral->add_option("--mc-samples", mc_samples, "sampling budget per tent value");
  sc_integral->add_option("--radius", radius, "fixed frequency truncation radius");

  auto* sc_predict = app.add_subcommand("predict", "leading constant and exponent");
  long long predict_series_q = 150;
  sc_predict->add_option("--series-q", predict_series_q, "series cutoff");

  auto* sc_validate = app.add_subcommand("validate", "exact counts against the power law");
  std::vector<long long> val_ps;
  std::string val_method = "mitm";
  long long val_series_q = 150;
  sc_validate->add_option("--p", val_ps, "box scales (repeatable)")->required();
  sc_validate->add_option("--method", val_method)->check(CLI::IsMember({"mitm", "brute"}));
  sc_validate->add_option("--series-q", val_series_q, "series cutoff");

  auto* sc_scan = app.add_subcommand("scan-expsum", "sup of box sums over the minor regions");
  long long scan_P = 60;
  long long scan_samples = 160;
  long long weyl_q = 0;
  sc_scan->add_option("--p", scan_P, "box scale");
  sc_scan->add_option("--samples", scan_samples, "points per region");
  sc_scan->add_option("--weyl-q", weyl_q, "also scan complete sums up to this modulus");

  auto* sc_arcs = app.add_subcommand("arcs", "dissection summary and point classification");
  double arcs_P = 60.0;
  double alpha_d = 0.0, alpha_theta = 0.0;
  sc_arcs->add_option("--p", arcs_P, "box scale");
  auto* opt_ad = sc_arcs->add_option("--alpha-d", alpha_d, "classify this point");
  sc_arcs->add_option("--alpha-theta", alpha_theta, "classify this point")->needs(opt_ad);

  auto* sc_check = app.add_subcommand("check-bounds", "numerical audits of the bound inequalities");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (g.threads <= 0)
    g.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  try {
    load_config(g);
    if (sc_params->parsed()) return cmd_params(g);
    if (sc_anchor->parsed()) return cmd_anchor(g, padic, prime_bound);
    if (sc_count->parsed())
      return cmd_count(g, count_ps, count_method, with_prediction, count_series_q);
    if (sc_series->parsed()) return cmd_series(g, series_Q, euler_bound);
    if (sc_integral->parsed())
      return cmd_integral(g, int_P, int_ts, int_physical, mc_samples, radius);
    if (sc_predict->parsed()) return cmd_predict(g, predict_series_q);
    if (sc_validate->parsed()) return cmd_validate(g, val_ps, val_method, val_series_q);
    if (sc_scan->parsed()) return cmd_scan_expsum(g, scan_P, scan_samples, weyl_q);
    if (sc_arcs->parsed())
      return cmd_arcs(g, arcs_P, sc_arcs->count("--alpha-d") > 0, alpha_d, alpha_theta);
    if (sc_check->parsed()) return cmd_check_bounds(g);
  } catch (const mixsys::BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const mixsys::CertificationError& e) {
    std::cerr << "certification failure: " << e.what() << "\n";
    return 2;
  } catch (const mixsys::FeasibilityError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 1;
  } catch (const mixsys::model::InvalidSpec& e) {
    std::cerr << "invalid spec: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
