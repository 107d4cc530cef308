#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lexopt/errors.hpp"

namespace lexopt {

struct CostRates {
  double alpha_plus = 0.0;   ///< rate applied to positive intensities
  double alpha_minus = 0.0;  ///< rate applied to negative intensities
};

/// Piecewise-linear transaction-cost schedule. Each component charges its
/// rate on |L_i| in the direction of L_i, plus an optional fixed cost
/// whenever the component is active (L_i != 0).
struct CostSchedule {
  double C_b_fixed = 0.0;
  std::vector<CostRates> rates;

  void validate() const {
    detail::require_nonnegative(C_b_fixed, "C_b");
    if (rates.empty()) throw InvalidParameter("rates", "need at least one component");
    for (const auto& r : rates) {
      detail::require_nonnegative(r.alpha_plus, "alpha_plus");
      detail::require_nonnegative(r.alpha_minus, "alpha_minus");
    }
  }

  std::size_t size() const noexcept { return rates.size(); }
};

enum class FixedCost : bool { Excluded = false, Included = true };

inline double phi_component(const CostSchedule& s, std::size_t i, double L_i,
                            FixedCost fixed = FixedCost::Excluded) {
  if (i >= s.rates.size())
    throw std::out_of_range("phi_component: index " + std::to_string(i) +
                            " out of range for " + std::to_string(s.rates.size()) +
                            " components");
  if (L_i == 0.0) return 0.0;
  const double rate = L_i > 0.0 ? s.rates[i].alpha_plus : s.rates[i].alpha_minus;
  const double variable = rate * std::abs(L_i);
  return fixed == FixedCost::Included ? s.C_b_fixed + variable : variable;
}

inline double phi_total(const CostSchedule& s, std::span<const double> L,
                        FixedCost fixed = FixedCost::Excluded) {
  if (L.size() != s.rates.size())
    throw InvalidParameter("L", "length " + std::to_string(L.size()) +
                                    " does not match schedule with " +
                                    std::to_string(s.rates.size()) + " components");
  double total = 0.0;
  for (std::size_t i = 0; i < L.size(); ++i) total += phi_component(s, i, L[i], fixed);
  return total;
}

/// Strict bounds 0 < phi < R_B.
inline bool admissible_total(double phi, double R_B) { return phi > 0.0 && phi < R_B; }

inline bool admissible(const CostSchedule& s, std::span<const double> L, double R_B,
                       FixedCost fixed = FixedCost::Excluded) {
  return admissible_total(phi_total(s, L, fixed), R_B);
}

/// The aggregate budget R_B + phi <= P_C. Independent of `admissible`.
inline bool within_budget(const CostSchedule& s, std::span<const double> L, double R_B,
                          double P_C, FixedCost fixed = FixedCost::Excluded) {
  return R_B + phi_total(s, L, fixed) <= P_C;
}

}  // namespace lexopt
