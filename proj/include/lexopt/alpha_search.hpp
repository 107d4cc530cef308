#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "lexopt/cobb_douglas.hpp"
#include "lexopt/errors.hpp"
#include "lexopt/hessian.hpp"

namespace lexopt {

enum class AlphaObjective { MaxUtility, MaxLambda };

inline std::string_view to_string(AlphaObjective o) {
  return o == AlphaObjective::MaxUtility ? "MaxUtility" : "MaxLambda";
}

struct AlphaSearchConfig {
  std::vector<double> alpha_grid;  ///< candidate exponents, strictly increasing
  double beta = 0.5;
  double p1 = 1.0;
  double p2 = 1.0;
  double P_C = 1.0;
  AlphaObjective objective = AlphaObjective::MaxUtility;
  HessianVariant hessian_variant = HessianVariant::DirectForm;
  CrossTerms cross_terms = CrossTerms::Printed;

  void validate() const {
    if (alpha_grid.empty()) throw InvalidParameter("alpha_grid", "must be nonempty");
    for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
      detail::require_positive(alpha_grid[i], "alpha_grid");
      if (i > 0 && !(alpha_grid[i] > alpha_grid[i - 1]))
        throw InvalidParameter("alpha_grid", "must be strictly increasing");
    }
    CobbDouglasProblem{alpha_grid.front(), beta, p1, p2, P_C}.validate();
  }

  CobbDouglasProblem problem(double alpha) const { return {alpha, beta, p1, p2, P_C}; }
};

struct AlphaCandidate {
  double alpha = 0.0;
  OptimumSolution solution;
  SecondOrderReport second_order;
  double det_H = 0.0;  ///< determinant under the configured variant
  bool admissible = false;
};

struct AlphaSearchResult {
  /// Every grid point in grid order, admissible or not.
  std::vector<AlphaCandidate> candidates;
  std::optional<std::size_t> star_index;  ///< index into `candidates`

  std::vector<AlphaCandidate> admissible() const {
    std::vector<AlphaCandidate> out;
    for (const auto& c : candidates)
      if (c.admissible) out.push_back(c);
    return out;
  }

  std::optional<double> alpha_star() const {
    if (!star_index) return std::nullopt;
    return candidates[*star_index].alpha;
  }

  /// L_C* at alpha*: the optimal transaction-cost level.
  std::optional<double> L_C_opt() const {
    if (!star_index) return std::nullopt;
    return candidates[*star_index].solution.L_C_star;
  }
};

inline double objective_value(AlphaObjective o, const OptimumSolution& s) {
  return o == AlphaObjective::MaxUtility ? s.U_star : s.lambda;
}

/// Evaluates one candidate. Admissible means lambda > 0, lambda/(alpha+beta) > 0
/// and det(H) > 0 beyond noise under the configured variant.
inline AlphaCandidate evaluate_alpha(const AlphaSearchConfig& cfg, double alpha) {
  const auto prob = cfg.problem(alpha);
  AlphaCandidate c;
  c.alpha = alpha;
  c.solution = solve_closed_form(prob);
  c.second_order = classify_second_order(prob, c.solution);
  const auto& v = c.second_order.select(cfg.hessian_variant, cfg.cross_terms);
  c.det_H = v.det;
  c.admissible = c.solution.lambda > 0.0 &&
                 c.solution.lambda / (alpha + cfg.beta) > 0.0 &&
                 v.verdict == SecondOrder::LocalMax;
  return c;
}

/// Argmax of the objective over admissible candidates. Candidates arrive in
/// ascending alpha and the comparison is strict, so ties keep the smallest alpha.
inline std::optional<std::size_t> pick_star(const std::vector<AlphaCandidate>& candidates,
                                            AlphaObjective objective) {
  std::optional<std::size_t> star;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    if (!c.admissible) continue;
    if (!star || objective_value(objective, c.solution) >
                     objective_value(objective, candidates[*star].solution)) {
      star = i;
    }
  }
  return star;
}

inline AlphaSearchResult search_alpha(const AlphaSearchConfig& cfg) {
  cfg.validate();
  AlphaSearchResult r;
  r.candidates.reserve(cfg.alpha_grid.size());
  for (double a : cfg.alpha_grid) r.candidates.push_back(evaluate_alpha(cfg, a));

  r.star_index = pick_star(r.candidates, cfg.objective);
  return r;
}

/// (lambda*/(alpha*+beta)) * (phi_sum + R_B), with phi_sum standing in for the
/// transaction-cost component. Equals U* when prices are unit and
/// phi_sum = L_C*.
inline double final_utility(const OptimumSolution& sol, double alpha_star, double beta,
                            double phi_sum, double R_B) {
  if (!(sol.lambda > 0.0)) throw InvalidParameter("lambda", "must be > 0");
  return (sol.lambda / (alpha_star + beta)) * (phi_sum + R_B);
}

}  // namespace lexopt
