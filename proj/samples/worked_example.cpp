// Walks one dispute through the pipeline: bargain decomposition, the
// constrained optimum, its second-order check and an exponent search.

#include <cstdio>

#include "lexopt/lexopt.hpp"

int main() {
  using namespace lexopt;

  const CaseParameters dispute{0.5, 100.0, 60.0, 10.0, 4.0};
  const auto bargain = reasonable_bargain(dispute);
  std::printf("R_B = %g  P_C = %g  L_C = %g\n", bargain.R_B, bargain.P_C, bargain.L_C);

  const CobbDouglasProblem prob{2.0, 1.0, 1.0, 1.0, 6.0};
  const auto sol = solve_closed_form(prob);
  std::printf("L_C* = %g  R_B* = %g  lambda = %g  U* = %g\n", sol.L_C_star, sol.R_B_star,
              sol.lambda, sol.U_star);

  const auto so = classify_second_order(prob, sol);
  std::printf("ShadowForm: %s  DirectForm(printed): %s  DirectForm(exact): %s\n",
              to_string(so.shadow.verdict).data(), to_string(so.direct_printed.verdict).data(),
              to_string(so.direct_exact.verdict).data());

  AlphaSearchConfig cfg;
  for (int i = 1; i <= 9; ++i) cfg.alpha_grid.push_back(0.1 * i);
  cfg.beta = 0.5;
  cfg.P_C = 2.0;
  const auto res = search_alpha(cfg);
  if (const auto a = res.alpha_star())
    std::printf("alpha* = %g  optimal L_C = %g\n", *a, *res.L_C_opt());
  return 0;
}
