#pragma once

#include <array>
#include <cmath>

#include "lexopt/errors.hpp"

namespace lexopt {

/// Maximize U(L_C, R_B) = L_C^alpha * R_B^beta subject to
/// p1*L_C + p2*R_B <= P_C.
struct CobbDouglasProblem {
  double alpha = 0.5;  ///< exponent on the transaction-cost component L_C
  double beta = 0.5;   ///< exponent on the reasonable bargain R_B
  double p1 = 1.0;     ///< price of L_C
  double p2 = 1.0;     ///< price of R_B
  double P_C = 1.0;    ///< budget (expectation benefit)

  void validate() const {
    detail::require_positive(alpha, "alpha");
    detail::require_positive(beta, "beta");
    detail::require_positive(p1, "p1");
    detail::require_positive(p2, "p2");
    detail::require_positive(P_C, "P_C");
  }
};

struct OptimumSolution {
  double L_C_star = 0.0;
  double R_B_star = 0.0;
  double lambda = 0.0;  ///< shadow price of the budget
  double U_star = 0.0;
  bool kkt_ok = false;
  /// |U* - (lambda/(alpha+beta)) P_C| / U*
  double identity_residual = 0.0;
  /// Relative gap between lambda and the multiplier implied by the R_B
  /// first-order condition.
  double lambda_cross_check = 0.0;
};

inline double utility(const CobbDouglasProblem& prob, double L_C, double R_B) {
  detail::require_nonnegative(L_C, "L_C");
  detail::require_nonnegative(R_B, "R_B");
  if (L_C == 0.0 || R_B == 0.0) return 0.0;
  return std::pow(L_C, prob.alpha) * std::pow(R_B, prob.beta);
}

/// Analytic gradient (dU/dL_C, dU/dR_B) at a strictly interior point.
inline std::array<double, 2> utility_gradient(const CobbDouglasProblem& prob,
                                              double L_C, double R_B) {
  detail::require_positive(L_C, "L_C");
  detail::require_positive(R_B, "R_B");
  const double la = std::pow(L_C, prob.alpha);
  const double rb = std::pow(R_B, prob.beta);
  return {prob.alpha * std::pow(L_C, prob.alpha - 1.0) * rb,
          prob.beta * la * std::pow(R_B, prob.beta - 1.0)};
}

/// Marginal rate of substitution alpha*R_B / (beta*L_C).
inline double mrs(const CobbDouglasProblem& prob, double L_C, double R_B) {
  if (L_C == 0.0) throw DomainError("mrs: L_C must be nonzero");
  return (prob.alpha * R_B) / (prob.beta * L_C);
}

inline OptimumSolution solve_closed_form(const CobbDouglasProblem& prob) {
  prob.validate();
  const double a = prob.alpha;
  const double b = prob.beta;
  const double share_L = a / (a + b);
  const double share_R = b / (a + b);

  OptimumSolution s;
  s.L_C_star = share_L * prob.P_C / prob.p1;
  s.R_B_star = share_R * prob.P_C / prob.p2;

  const auto grad = utility_gradient(prob, s.L_C_star, s.R_B_star);
  s.lambda = grad[0] / prob.p1;
  s.U_star = utility(prob, s.L_C_star, s.R_B_star);
  s.kkt_ok = s.lambda > 0.0;

  const double implied = (s.lambda / (a + b)) * prob.P_C;
  s.identity_residual = std::abs(s.U_star - implied) / s.U_star;
  const double lambda_R = grad[1] / prob.p2;
  s.lambda_cross_check = std::abs(lambda_R - s.lambda) / s.lambda;
  return s;
}

/// Lagrangian stationarity residuals at `sol`:
/// (dU/dL_C - lambda*p1, dU/dR_B - lambda*p2, P_C - p1*L_C - p2*R_B).
inline std::array<double, 3> first_order_residuals(const CobbDouglasProblem& prob,
                                                   const OptimumSolution& sol) {
  const auto grad = utility_gradient(prob, sol.L_C_star, sol.R_B_star);
  return {grad[0] - sol.lambda * prob.p1, grad[1] - sol.lambda * prob.p2,
          prob.P_C - prob.p1 * sol.L_C_star - prob.p2 * sol.R_B_star};
}

/// Residuals scaled by lambda*p1, lambda*p2 and P_C respectively.
inline std::array<double, 3> relative_first_order_residuals(
    const CobbDouglasProblem& prob, const OptimumSolution& sol) {
  auto r = first_order_residuals(prob, sol);
  const double s0 = std::abs(sol.lambda * prob.p1);
  const double s1 = std::abs(sol.lambda * prob.p2);
  r[0] = s0 > 0.0 ? std::abs(r[0]) / s0 : std::abs(r[0]);
  r[1] = s1 > 0.0 ? std::abs(r[1]) / s1 : std::abs(r[1]);
  r[2] = std::abs(r[2]) / prob.P_C;
  return r;
}

}  // namespace lexopt
