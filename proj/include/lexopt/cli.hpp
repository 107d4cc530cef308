#pragma once

// Command dispatch for the lexopt tool. Kept header-only so tests can drive
// `run` in-process; tools/lexopt.cpp is a thin main around it.

#include <cstdint>
#include <fstream>
#include <map>
#include <string_view>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lexopt/alpha_search.hpp"
#include "lexopt/cobb_douglas.hpp"
#include "lexopt/compliance.hpp"
#include "lexopt/core_model.hpp"
#include "lexopt/cost_schedule.hpp"
#include "lexopt/errors.hpp"
#include "lexopt/format.hpp"
#include "lexopt/hessian.hpp"
#include "lexopt/sim.hpp"

namespace lexopt::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kInvalidInput = 1, kDomainFailure = 2, kUsage = 64 };

enum class OutputFormat { Json, Csv };

struct Outcome {
  int exit_code = kOk;
  std::string out;
  std::string err;
};

/// Thrown for malformed invocations; maps to exit 64.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"bargain", "classify", "solve",
                                              "hessian", "phi",      "alpha-search",
                                              "comply",  "simulate", "sweep"};
  return names;
}

inline std::string_view describe(std::string_view command) {
  static const std::map<std::string_view, std::string_view> text{
      {"bargain", "decompose a case into R_B, P_C and L_C"},
      {"classify", "cost regime and settle/trial decision for a case"},
      {"solve", "closed-form Cobb-Douglas optimum with second-order report"},
      {"hessian", "bordered Hessian determinants under every variant"},
      {"phi", "piecewise transaction-cost schedule and its bounds"},
      {"alpha-search", "pick the L_C exponent over a grid"},
      {"comply", "minimal penalty that makes the rule-compliant strategy dominant"},
      {"simulate", "run the litigation market for a fixed admin-cost policy"},
      {"sweep", "simulate across a grid of admin-cost policies"},
  };
  return text.at(command);
}

inline bool is_simulation(const std::string& cmd) { return cmd == "simulate" || cmd == "sweep"; }

/// Typed access to a command's merged input object. Every key must be
/// consumed; leftovers are reported as unknown fields.
class Fields {
 public:
  explicit Fields(Json obj) : obj_(std::move(obj)) {}

  bool has(const std::string& key) const { return obj_.contains(key); }

  double number(const std::string& key) {
    const auto& v = fetch(key);
    if (!v.is_number()) throw InvalidParameter(key, "expected a number");
    return v.get<double>();
  }

  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return number(key);
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback) {
    if (!has(key)) return fallback;
    const auto& v = fetch(key);
    if (!v.is_number_integer()) throw InvalidParameter(key, "expected an integer");
    return v.get<std::int64_t>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const auto& v = fetch(key);
    if (!v.is_boolean()) throw InvalidParameter(key, "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const auto& v = fetch(key);
    if (!v.is_string()) throw InvalidParameter(key, "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    const auto& v = fetch(key);
    if (!v.is_array()) throw InvalidParameter(key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw InvalidParameter(key, "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::optional<std::vector<double>> optional_numbers(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return numbers(key);
  }

  const Json& raw(const std::string& key) { return fetch(key); }

  void finish() const {
    for (const auto& [key, value] : obj_.items())
      if (!used_.contains(key)) throw InvalidParameter(key, "unknown field for this command");
  }

 private:
  const Json& fetch(const std::string& key) {
    if (!obj_.contains(key)) throw InvalidParameter(key, "required field is missing");
    used_.insert(key);
    return obj_.at(key);
  }

  Json obj_;
  std::set<std::string> used_;
};

struct Invocation {
  std::string command;
  OutputFormat format = OutputFormat::Json;
  std::optional<std::uint64_t> seed;
  Json input = Json::object();
  std::vector<std::string> overrides;  ///< keys where an inline flag replaced a file value
};

namespace detail {

inline Json parse_inline_value(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error&) {
    return Json(text);
  }
}

inline std::uint64_t parse_seed(const std::string& text, const char* source) {
  try {
    std::size_t pos = 0;
    if (text.empty() || text[0] == '-') throw std::invalid_argument(text);
    const auto v = std::stoull(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("seed from ") + source + " must be a nonnegative integer");
  }
}

inline Json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("config", "cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidParameter("config", std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidParameter("config", "top level must be a JSON object");
  return j;
}

inline Json number_or_null(std::optional<double> v) { return v ? Json(*v) : Json(nullptr); }

inline Json matrix_json(const Matrix3& m) {
  Json rows = Json::array();
  for (const auto& r : m) rows.push_back(Json::array({r[0], r[1], r[2]}));
  return rows;
}

inline CaseParameters read_case(Fields& f) {
  CaseParameters c;
  c.p = f.number("p");
  c.W_B = f.number("W_B");
  c.S_B = f.number("S_B");
  c.C_a = f.number("C_a");
  c.C_b = f.number("C_b");
  return c;
}

inline CobbDouglasProblem read_problem(Fields& f) {
  CobbDouglasProblem p;
  p.alpha = f.number("alpha");
  p.beta = f.number("beta");
  p.p1 = f.number("p1", 1.0);
  p.p2 = f.number("p2", 1.0);
  p.P_C = f.number("P_C");
  return p;
}

inline HessianVariant read_variant(Fields& f) {
  const auto s = f.string("hessian_variant", "DirectForm");
  if (s == "DirectForm") return HessianVariant::DirectForm;
  if (s == "ShadowForm") return HessianVariant::ShadowForm;
  throw InvalidParameter("hessian_variant", "expected ShadowForm or DirectForm");
}

inline CrossTerms read_cross_terms(Fields& f) {
  const auto s = f.string("cross_terms", "printed");
  if (s == "printed") return CrossTerms::Printed;
  if (s == "exact") return CrossTerms::Exact;
  throw InvalidParameter("cross_terms", "expected printed or exact");
}

inline Json solution_json(const OptimumSolution& s) {
  Json j;
  j["L_C_star"] = s.L_C_star;
  j["R_B_star"] = s.R_B_star;
  j["lambda"] = s.lambda;
  j["U_star"] = s.U_star;
  j["kkt_ok"] = s.kkt_ok;
  j["identity_residual"] = s.identity_residual;
  j["lambda_cross_check"] = s.lambda_cross_check;
  return j;
}

inline Json verdict_json(const char* variant, const char* cross, const VariantVerdict& v) {
  Json j;
  j["variant"] = variant;
  j["cross_terms"] = cross;
  j["det"] = v.det;
  j["verdict"] = std::string(to_string(v.verdict));
  return j;
}

inline Json second_order_json(const SecondOrderReport& r) {
  Json a = Json::array();
  a.push_back(verdict_json("ShadowForm", "printed", r.shadow));
  a.push_back(verdict_json("DirectForm", "printed", r.direct_printed));
  a.push_back(verdict_json("DirectForm", "exact", r.direct_exact));
  return a;
}

/// Renders a flat object as a one-row CSV table.
inline std::string flat_csv(const Json& result) {
  CsvWriter w;
  w.comment("lexopt " + std::string(kVersion));
  std::vector<std::string> header, row;
  for (const auto& [k, v] : result.items()) {
    header.push_back(k);
    if (v.is_number_integer()) {
      row.push_back(format_number(v.get<std::int64_t>()));
    } else if (v.is_number()) {
      row.push_back(format_number(v.get<double>()));
    } else if (v.is_boolean()) {
      row.push_back(v.get<bool>() ? "true" : "false");
    } else if (v.is_null()) {
      row.push_back("");
    } else if (v.is_string()) {
      row.push_back(v.get<std::string>());
    } else {
      continue;  // nested values have no flat column
    }
  }
  w.header(header);
  w.row(row);
  return w.str();
}

inline Json envelope(const std::string& command) {
  Json j;
  j["command"] = command;
  j["lexopt_version"] = std::string(kVersion);
  return j;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Per-command handlers. Each consumes its schema from `f` and returns the
// serialized payload.

inline std::string cmd_bargain(Fields& f, OutputFormat fmt) {
  const auto c = detail::read_case(f);
  const double ps = f.number("plaintiff_cost_share", 1.0);
  const double ds = f.number("defendant_cost_share", 1.0);
  f.finish();

  const auto d = reasonable_bargain(c);
  const auto w = derive_wta_wtp(c, ps, ds);
  Json r;
  r["R_B"] = d.R_B;
  r["P_C"] = d.P_C;
  r["L_C"] = d.L_C;
  r["R_B_negative"] = d.negative();
  r["identity_residual"] = d.R_B + d.L_C - d.P_C;
  r["wta"] = w.wta;
  r["wtp"] = w.wtp;
  r["cooperation_possible"] = cooperation_possible(w.wta, w.wtp);
  if (fmt == OutputFormat::Csv) return detail::flat_csv(r);
  auto j = detail::envelope("bargain");
  j["result"] = r;
  return detail::dump(j);
}

inline std::string cmd_classify(Fields& f, OutputFormat fmt) {
  const auto c = detail::read_case(f);
  auto t = default_thresholds(c);
  t.theta_a = f.number("theta_a", t.theta_a);
  t.theta_b = f.number("theta_b", t.theta_b);
  f.finish();

  const auto label = classify_scenario(c, t);
  Json r;
  r["regime"] = std::string(to_string(label.regime));
  r["decision"] = std::string(to_string(label.decision));
  r["theta_a"] = t.theta_a;
  r["theta_b"] = t.theta_b;
  r["trial_net"] = c.p * c.W_B - c.C_a;
  r["settlement_net"] = c.S_B - c.C_b;
  if (fmt == OutputFormat::Csv) return detail::flat_csv(r);
  auto j = detail::envelope("classify");
  j["result"] = r;
  return detail::dump(j);
}

inline std::string cmd_solve(Fields& f, OutputFormat fmt) {
  const auto prob = detail::read_problem(f);
  f.finish();

  const auto sol = solve_closed_form(prob);
  const auto foc = first_order_residuals(prob, sol);
  Json r = detail::solution_json(sol);
  r["mrs"] = mrs(prob, sol.L_C_star, sol.R_B_star);
  r["price_ratio"] = prob.p1 / prob.p2;
  r["budget_residual"] = foc[2];
  r["foc_residual_L_C"] = foc[0];
  r["foc_residual_R_B"] = foc[1];
  r["shadow_identity"] = (sol.lambda / (prob.alpha + prob.beta)) * prob.P_C;
  if (fmt == OutputFormat::Csv) return detail::flat_csv(r);
  auto j = detail::envelope("solve");
  j["result"] = r;
  j["second_order"] = detail::second_order_json(classify_second_order(prob, sol));
  return detail::dump(j);
}

inline std::string cmd_hessian(Fields& f, OutputFormat fmt) {
  const auto prob = detail::read_problem(f);
  f.finish();

  const auto sol = solve_closed_form(prob);
  const auto report = classify_second_order(prob, sol);
  struct Entry {
    const char* variant;
    const char* cross;
    BorderedHessian h;
    VariantVerdict v;
  };
  const std::vector<Entry> entries{
      {"ShadowForm", "printed", build_bordered_hessian(prob, sol, HessianVariant::ShadowForm),
       report.shadow},
      {"DirectForm", "printed",
       build_bordered_hessian(prob, sol, HessianVariant::DirectForm, CrossTerms::Printed),
       report.direct_printed},
      {"DirectForm", "exact",
       build_bordered_hessian(prob, sol, HessianVariant::DirectForm, CrossTerms::Exact),
       report.direct_exact},
  };

  if (fmt == OutputFormat::Csv) {
    CsvWriter w;
    w.comment("lexopt " + std::string(kVersion));
    w.comment("variants_disagree=" + std::string(report.variants_disagree() ? "true" : "false"));
    w.header({"variant", "cross_terms", "det", "verdict", "h11", "h12", "h22", "border1",
              "border2"});
    for (const auto& e : entries) {
      const auto& m = e.h.entries;
      w.row({e.variant, e.cross, format_number(e.v.det), std::string(to_string(e.v.verdict)),
             format_number(m[1][1]), format_number(m[1][2]), format_number(m[2][2]),
             format_number(m[0][1]), format_number(m[0][2])});
    }
    return w.str();
  }

  auto j = detail::envelope("hessian");
  j["solution"] = detail::solution_json(sol);
  Json vs = Json::array();
  for (const auto& e : entries) {
    auto v = detail::verdict_json(e.variant, e.cross, e.v);
    v["matrix"] = detail::matrix_json(e.h.entries);
    vs.push_back(v);
  }
  j["variants"] = vs;
  j["variants_disagree"] = report.variants_disagree();
  return detail::dump(j);
}

inline CostSchedule read_schedule(Fields& f) {
  CostSchedule s;
  s.C_b_fixed = f.number("C_b", 0.0);
  const auto& rates = f.raw("rates");
  if (!rates.is_array()) throw InvalidParameter("rates", "expected an array");
  for (const auto& r : rates) {
    CostRates cr;
    if (r.is_array() && r.size() == 2 && r[0].is_number() && r[1].is_number()) {
      cr = {r[0].get<double>(), r[1].get<double>()};
    } else if (r.is_object() && r.size() == 2 && r.contains("alpha_plus") &&
               r.contains("alpha_minus") && r["alpha_plus"].is_number() &&
               r["alpha_minus"].is_number()) {
      cr = {r["alpha_plus"].get<double>(), r["alpha_minus"].get<double>()};
    } else {
      throw InvalidParameter(
          "rates", "each entry must be [alpha_plus, alpha_minus] or {alpha_plus, alpha_minus}");
    }
    s.rates.push_back(cr);
  }
  s.validate();
  return s;
}

inline std::string cmd_phi(Fields& f, OutputFormat fmt) {
  // Case fields, when present, supply R_B and P_C through the bargain
  // decomposition and share C_b with the schedule.
  const bool has_case = f.has("p") || f.has("W_B") || f.has("S_B") || f.has("C_a");
  std::optional<double> R_B, P_C;
  if (has_case) {
    if (f.has("R_B")) throw InvalidParameter("R_B", "conflicts with case fields p/W_B/S_B/C_a");
    if (f.has("P_C")) throw InvalidParameter("P_C", "conflicts with case fields p/W_B/S_B/C_a");
    CaseParameters c{f.number("p"), f.number("W_B"), f.number("S_B"), f.number("C_a"),
                     f.number("C_b", 0.0)};
    const auto d = reasonable_bargain(c);
    R_B = d.R_B;
    P_C = d.P_C;
  } else {
    R_B = f.optional_number("R_B");
    P_C = f.optional_number("P_C");
  }
  const auto sched = read_schedule(f);
  const auto L = f.numbers("L");
  const auto fixed = f.boolean("with_fixed", false) ? FixedCost::Included : FixedCost::Excluded;
  f.finish();
  if (R_B) lexopt::detail::require_finite(*R_B, "R_B");
  if (P_C) lexopt::detail::require_finite(*P_C, "P_C");

  const double total = phi_total(sched, L, fixed);
  std::vector<double> parts;
  for (std::size_t i = 0; i < L.size(); ++i) parts.push_back(phi_component(sched, i, L[i], fixed));

  Json r;
  r["phi_total"] = total;
  r["with_fixed"] = fixed == FixedCost::Included;
  r["R_B"] = detail::number_or_null(R_B);
  r["P_C"] = detail::number_or_null(P_C);
  r["admissible"] = R_B ? Json(admissible_total(total, *R_B)) : Json(nullptr);
  r["within_budget"] = (R_B && P_C) ? Json(*R_B + total <= *P_C) : Json(nullptr);

  if (fmt == OutputFormat::Csv) {
    CsvWriter w;
    w.comment("lexopt " + std::string(kVersion));
    for (const auto& [k, v] : r.items()) w.comment(k + "=" + v.dump());
    w.header({"i", "L_i", "phi_i"});
    for (std::size_t i = 0; i < L.size(); ++i)
      w.row({std::to_string(i), format_number(L[i]), format_number(parts[i])});
    return w.str();
  }
  auto j = detail::envelope("phi");
  r["components"] = parts;
  j["result"] = r;
  return detail::dump(j);
}

/// Signals that final_utility rejected the shadow price (exit 2).
class ShadowPriceFailure : public DomainError {
 public:
  using DomainError::DomainError;
};

inline std::string cmd_alpha_search(Fields& f, OutputFormat fmt) {
  AlphaSearchConfig cfg;
  cfg.alpha_grid = f.numbers("alpha_grid");
  cfg.beta = f.number("beta");
  cfg.p1 = f.number("p1", 1.0);
  cfg.p2 = f.number("p2", 1.0);
  cfg.P_C = f.number("P_C");
  const auto obj = f.string("objective", "MaxUtility");
  if (obj == "MaxUtility") {
    cfg.objective = AlphaObjective::MaxUtility;
  } else if (obj == "MaxLambda") {
    cfg.objective = AlphaObjective::MaxLambda;
  } else {
    throw InvalidParameter("objective", "expected MaxUtility or MaxLambda");
  }
  cfg.hessian_variant = detail::read_variant(f);
  cfg.cross_terms = detail::read_cross_terms(f);
  const auto phi_sum_in = f.optional_number("phi_sum");
  const auto R_B_in = f.optional_number("R_B");
  f.finish();

  const auto res = search_alpha(cfg);

  std::optional<double> U_final, phi_sum, R_B;
  if (res.star_index) {
    const auto& star = res.candidates[*res.star_index];
    phi_sum = phi_sum_in.value_or(star.solution.L_C_star);
    R_B = R_B_in.value_or(star.solution.R_B_star);
    try {
      U_final = final_utility(star.solution, star.alpha, cfg.beta, *phi_sum, *R_B);
    } catch (const InvalidParameter& e) {
      throw ShadowPriceFailure(e.what());
    }
  }

  if (fmt == OutputFormat::Csv) {
    CsvWriter w;
    w.comment("lexopt " + std::string(kVersion));
    w.comment("alpha_star=" + (res.alpha_star() ? format_number(*res.alpha_star()) : "none"));
    w.comment("U_star_final=" + (U_final ? format_number(*U_final) : "none"));
    w.header({"alpha", "L_C_star", "R_B_star", "lambda", "U_star", "det_H", "admissible",
              "is_star"});
    for (std::size_t i = 0; i < res.candidates.size(); ++i) {
      const auto& c = res.candidates[i];
      w.row({format_number(c.alpha), format_number(c.solution.L_C_star),
             format_number(c.solution.R_B_star), format_number(c.solution.lambda),
             format_number(c.solution.U_star), format_number(c.det_H),
             c.admissible ? "true" : "false", res.star_index == i ? "true" : "false"});
    }
    return w.str();
  }

  auto j = detail::envelope("alpha-search");
  j["objective"] = std::string(to_string(cfg.objective));
  j["hessian_variant"] = std::string(to_string(cfg.hessian_variant));
  j["cross_terms"] = std::string(to_string(cfg.cross_terms));
  Json cands = Json::array();
  for (const auto& c : res.candidates) {
    Json e;
    e["alpha"] = c.alpha;
    e["solution"] = detail::solution_json(c.solution);
    e["det_H"] = c.det_H;
    e["admissible"] = c.admissible;
    e["second_order"] = detail::second_order_json(c.second_order);
    cands.push_back(e);
  }
  j["candidates"] = cands;
  j["alpha_star"] = detail::number_or_null(res.alpha_star());
  j["L_C_opt"] = detail::number_or_null(res.L_C_opt());
  j["phi_sum"] = detail::number_or_null(phi_sum);
  j["R_B"] = detail::number_or_null(R_B);
  j["U_star_final"] = detail::number_or_null(U_final);
  return detail::dump(j);
}

inline std::string cmd_comply(Fields& f, OutputFormat fmt) {
  StrategyGame g;
  const auto& utilities = f.raw("utilities");
  if (!utilities.is_object()) throw InvalidParameter("utilities", "expected an object id -> number");
  for (const auto& [id, u] : utilities.items()) {
    if (!u.is_number()) throw InvalidParameter("utilities", "utility of '" + id + "' must be a number");
    g.utilities[id] = u.get<double>();
  }
  const auto& allowed = f.raw("allowed");
  if (!allowed.is_array()) throw InvalidParameter("allowed", "expected an array of ids");
  for (const auto& a : allowed) {
    if (!a.is_string()) throw InvalidParameter("allowed", "expected an array of ids");
    g.allowed.insert(a.get<std::string>());
  }
  g.validate();
  const double margin = f.number("margin", default_margin(g));
  std::optional<StrategyChoice> social;
  if (f.has("welfare")) {
    std::map<std::string, double> w;
    const auto& wj = f.raw("welfare");
    if (!wj.is_object()) throw InvalidParameter("welfare", "expected an object id -> number");
    for (const auto& [id, v] : wj.items()) {
      if (!v.is_number()) throw InvalidParameter("welfare", "value of '" + id + "' must be a number");
      w[id] = v.get<double>();
    }
    social = social_maximum(w);
  }
  f.finish();

  const auto best = best_allowed(g);
  const double tau = min_compliance_penalty(g, margin);
  const auto after = best_overall(g, tau);

  Json r;
  r["best_allowed"] = best.strategy;
  r["best_allowed_utility"] = best.utility;
  r["margin"] = margin;
  r["penalty"] = tau;
  r["post_penalty_best"] = after.strategy;
  r["post_penalty_best_allowed"] = g.is_allowed(after.strategy);
  if (social) {
    r["social_maximum"] = social->strategy;
    r["social_maximum_value"] = social->utility;
  }

  if (fmt == OutputFormat::Csv) {
    CsvWriter w;
    w.comment("lexopt " + std::string(kVersion));
    for (const auto& [k, v] : r.items()) w.comment(k + "=" + v.dump());
    w.header({"strategy", "utility", "allowed", "penalized_utility"});
    for (const auto& [id, u] : g.utilities) {
      const bool ok = g.is_allowed(id);
      w.row({id, format_number(u), ok ? "true" : "false", format_number(ok ? u : u - tau)});
    }
    return w.str();
  }
  auto j = detail::envelope("comply");
  j["result"] = r;
  return detail::dump(j);
}

inline sim::SimConfig read_sim_config(Fields& f, std::uint64_t seed, bool with_policy) {
  auto c = sim::SimConfig::defaults();
  c.seed = seed;
  c.n_injurers = f.integer("n_injurers", c.n_injurers);
  if (auto g = f.optional_numbers("precaution_grid")) c.precaution_grid = *g;
  if (auto h = f.optional_numbers("harm_probability")) c.harm_probability = *h;
  c.L_harm = f.number("L_harm", c.L_harm);
  c.p = f.number("p", c.p);
  c.W_B = f.number("W_B", c.W_B);
  c.S_B = f.number("S_B", c.S_B);
  c.C_b = f.number("C_b", c.C_b);
  if (with_policy) c.C_a_policy = f.number("C_a", c.C_a_policy);
  c.theta_a = f.optional_number("theta_a");
  c.theta_b = f.optional_number("theta_b");
  c.settlement_liability_discount =
      f.number("settlement_liability_discount", c.settlement_liability_discount);
  c.p_spread = f.number("p_spread", c.p_spread);
  c.initial_settlement_rate = f.number("initial_settlement_rate", c.initial_settlement_rate);
  c.ticks = f.integer("ticks", c.ticks);
  c.stochastic = f.boolean("stochastic", c.stochastic);
  return c;
}

inline std::string cmd_simulate(Fields& f, OutputFormat fmt, std::uint64_t seed) {
  const auto cfg = read_sim_config(f, seed, true);
  f.finish();
  const auto traj = sim::run(cfg);

  const std::vector<std::string> cols{"tick",        "precaution",      "injuries",
                                      "filings",     "settlements",     "trials",
                                      "settlement_rate", "aggregate_trials", "welfare",
                                      "cumulative_welfare"};
  if (fmt == OutputFormat::Csv) {
    CsvWriter w;
    w.comment("lexopt " + std::string(kVersion));
    w.comment("seed=" + std::to_string(seed));
    w.header(cols);
    for (const auto& s : traj)
      w.row({format_number(s.tick), format_number(s.precaution), format_number(s.injuries),
             format_number(s.filings), format_number(s.settlements), format_number(s.trials),
             format_number(s.settlement_rate), format_number(s.aggregate_trials),
             format_number(s.welfare), format_number(s.cumulative_welfare)});
    return w.str();
  }
  auto j = detail::envelope("simulate");
  j["seed"] = seed;
  const auto t = cfg.thresholds();
  j["theta_a"] = t.theta_a;
  j["theta_b"] = t.theta_b;
  Json ticks = Json::array();
  for (const auto& s : traj) {
    Json e;
    e["tick"] = s.tick;
    e["precaution"] = s.precaution;
    e["injuries"] = s.injuries;
    e["filings"] = s.filings;
    e["settlements"] = s.settlements;
    e["trials"] = s.trials;
    e["settlement_rate"] = s.settlement_rate;
    e["aggregate_trials"] = s.aggregate_trials;
    e["welfare"] = s.welfare;
    e["cumulative_welfare"] = s.cumulative_welfare;
    ticks.push_back(e);
  }
  j["ticks"] = ticks;
  return detail::dump(j);
}

inline std::string cmd_sweep(Fields& f, OutputFormat fmt, std::uint64_t seed) {
  const auto cfg = read_sim_config(f, seed, false);
  const auto grid = f.has("C_a_grid") ? f.numbers("C_a_grid") : sim::default_admin_cost_grid();
  f.finish();
  const auto table = sim::sweep_admin_cost(cfg, grid);

  if (fmt == OutputFormat::Csv) {
    CsvWriter w;
    w.comment("lexopt " + std::string(kVersion));
    w.comment("seed=" + std::to_string(seed));
    w.comment("argmax_welfare_row=" + std::to_string(table.argmax_welfare));
    w.comment("argmin_trials_row=" + std::to_string(table.argmin_trials));
    w.header({"C_a", "aggregate_trials", "settlement_rate", "welfare"});
    for (const auto& r : table.rows)
      w.row({format_number(r.C_a), format_number(r.aggregate_trials),
             format_number(r.settlement_rate), format_number(r.welfare)});
    return w.str();
  }
  auto j = detail::envelope("sweep");
  j["seed"] = seed;
  j["columns"] = Json::array({"C_a", "aggregate_trials", "settlement_rate", "welfare"});
  Json rows = Json::array();
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    Json e;
    e["C_a"] = r.C_a;
    e["aggregate_trials"] = r.aggregate_trials;
    e["settlement_rate"] = r.settlement_rate;
    e["welfare"] = r.welfare;
    e["argmax_welfare"] = i == table.argmax_welfare;
    e["argmin_trials"] = i == table.argmin_trials;
    rows.push_back(e);
  }
  j["rows"] = rows;
  j["argmax_welfare_index"] = table.argmax_welfare;
  j["argmin_trials_index"] = table.argmin_trials;
  return detail::dump(j);
}

// ---------------------------------------------------------------------------

/// Parses argv-style arguments (program name excluded). `env_seed` is the
/// value of LEXOPT_SEED, if set; an explicit --seed wins over it.
inline Invocation parse_invocation(const std::vector<std::string>& args,
                                   const std::optional<std::string>& env_seed,
                                   std::string& help_text) {
  CLI::App app{"Optimal transaction-cost toolkit for settlement/trial analysis", "lexopt"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(kVersion));

  struct Opts {
    std::string config;
    std::string format = "json";
    std::optional<std::uint64_t> seed;
  };
  std::map<std::string, Opts> opts;
  std::vector<CLI::App*> subs;
  for (const auto& name : commands()) {
    auto* sub = app.add_subcommand(name, std::string(describe(name)));
    sub->allow_extras();
    auto& o = opts[name];
    sub->add_option("-c,--config", o.config, "JSON input file");
    sub->add_option("-f,--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", o.seed, "simulation seed (simulate/sweep only)");
    subs.push_back(sub);
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    help_text = app.help();
    throw;
  } catch (const CLI::CallForVersion&) {
    help_text = std::string(kVersion) + "\n";
    throw;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  Invocation inv;
  CLI::App* chosen = nullptr;
  for (auto* s : subs)
    if (s->parsed()) chosen = s;
  inv.command = chosen->get_name();
  const auto& o = opts[inv.command];
  inv.format = o.format == "csv" ? OutputFormat::Csv : OutputFormat::Json;

  if (is_simulation(inv.command)) {
    if (o.seed) {
      inv.seed = o.seed;
    } else if (env_seed) {
      inv.seed = detail::parse_seed(*env_seed, "LEXOPT_SEED");
    } else {
      throw UsageError(inv.command + " requires --seed (or LEXOPT_SEED)");
    }
  } else if (o.seed) {
    throw UsageError("--seed only applies to simulate and sweep");
  }

  Json inline_values = Json::object();
  const auto extras = chosen->remaining();
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const auto& tok = extras[i];
    if (tok.rfind("--", 0) != 0 || tok.size() < 3)
      throw UsageError("unexpected argument '" + tok + "'; parameters are --key value");
    std::string key = tok.substr(2);
    std::string value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= extras.size()) throw UsageError("missing value for --" + key);
      value = extras[++i];
    }
    if (inline_values.contains(key)) throw UsageError("--" + key + " given more than once");
    inline_values[key] = detail::parse_inline_value(value);
  }

  if (!o.config.empty()) inv.input = detail::read_config(o.config);
  for (const auto& [k, v] : inline_values.items()) {
    if (inv.input.contains(k) && inv.input[k] != v) inv.overrides.push_back(k);
    inv.input[k] = v;
  }
  return inv;
}

inline std::string dispatch(const Invocation& inv) {
  Fields f(inv.input);
  const auto fmt = inv.format;
  const auto& c = inv.command;
  if (c == "bargain") return cmd_bargain(f, fmt);
  if (c == "classify") return cmd_classify(f, fmt);
  if (c == "solve") return cmd_solve(f, fmt);
  if (c == "hessian") return cmd_hessian(f, fmt);
  if (c == "phi") return cmd_phi(f, fmt);
  if (c == "alpha-search") return cmd_alpha_search(f, fmt);
  if (c == "comply") return cmd_comply(f, fmt);
  if (c == "simulate") return cmd_simulate(f, fmt, *inv.seed);
  if (c == "sweep") return cmd_sweep(f, fmt, *inv.seed);
  throw UsageError("unknown command '" + c + "'");
}

inline Outcome run(const std::vector<std::string>& args,
                   const std::optional<std::string>& env_seed = std::nullopt) {
  Outcome o;
  std::string help;
  try {
    const auto inv = parse_invocation(args, env_seed, help);
    for (const auto& k : inv.overrides)
      o.err += "note: inline --" + k + " overrides the config file value\n";
    o.out = dispatch(inv);
  } catch (const CLI::CallForHelp&) {
    o.out = help;
  } catch (const CLI::CallForVersion&) {
    o.out = help;
  } catch (const UsageError& e) {
    o.exit_code = kUsage;
    o.err += std::string("usage error: ") + e.what() + "\n";
  } catch (const InvalidParameter& e) {
    o.exit_code = kInvalidInput;
    o.err += std::string("error: ") + e.what() + "\n";
  } catch (const DomainError& e) {
    o.exit_code = kDomainFailure;
    o.err += std::string("domain error: ") + e.what() + "\n";
  } catch (const nlohmann::json::exception& e) {
    o.exit_code = kInvalidInput;
    o.err += std::string("error: ") + e.what() + "\n";
  } catch (const std::out_of_range& e) {
    o.exit_code = kInvalidInput;
    o.err += std::string("error: ") + e.what() + "\n";
  }
  if (o.exit_code != kOk) o.out.clear();
  return o;
}

}  // namespace lexopt::cli
