#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string_view>

#include "lexopt/cobb_douglas.hpp"
#include "lexopt/errors.hpp"

namespace lexopt {

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// ShadowForm writes the curvature block through lambda and the budget;
/// DirectForm differentiates the utility twice.
enum class HessianVariant { ShadowForm, DirectForm };

/// Printed: zero mixed partial. Exact: alpha*beta*L^(alpha-1)*R^(beta-1).
/// Only affects DirectForm.
enum class CrossTerms { Printed, Exact };

enum class SecondOrder { LocalMax, LocalMin, Indeterminate };

inline std::string_view to_string(HessianVariant v) {
  return v == HessianVariant::ShadowForm ? "ShadowForm" : "DirectForm";
}

inline std::string_view to_string(CrossTerms c) {
  return c == CrossTerms::Printed ? "printed" : "exact";
}

inline std::string_view to_string(SecondOrder s) {
  switch (s) {
    case SecondOrder::LocalMax: return "LocalMax";
    case SecondOrder::LocalMin: return "LocalMin";
    case SecondOrder::Indeterminate: return "Indeterminate";
  }
  return "unknown";
}

/// Row/column 0 is the border; rows 1 and 2 correspond to L_C and R_B.
struct BorderedHessian {
  Matrix3 entries{};
  HessianVariant variant = HessianVariant::ShadowForm;

  double scale() const noexcept {
    double s = 0.0;
    for (const auto& row : entries)
      for (double v : row) s = std::max(s, std::abs(v));
    return s;
  }
};

inline BorderedHessian build_bordered_hessian(const CobbDouglasProblem& prob,
                                              const OptimumSolution& sol,
                                              HessianVariant variant,
                                              CrossTerms cross = CrossTerms::Printed) {
  detail::require_positive(sol.L_C_star, "L_C_star");
  detail::require_positive(sol.R_B_star, "R_B_star");

  const double a = prob.alpha;
  const double b = prob.beta;
  const double L = sol.L_C_star;
  const double R = sol.R_B_star;
  const double lam = sol.lambda;

  BorderedHessian h;
  h.variant = variant;
  auto& m = h.entries;
  m[0][0] = 0.0;
  m[0][1] = m[1][0] = -lam * prob.p1;
  m[0][2] = m[2][0] = -lam * prob.p2;

  if (variant == HessianVariant::ShadowForm) {
    m[1][1] = -lam * (a / (a + b)) * prob.P_C / (L * L);
    m[2][2] = -lam * (b / (a + b)) * prob.P_C / (R * R);
    m[1][2] = m[2][1] = 0.0;
  } else {
    m[1][1] = a * (a - 1.0) * std::pow(L, a - 2.0) * std::pow(R, b);
    m[2][2] = b * (b - 1.0) * std::pow(L, a) * std::pow(R, b - 2.0);
    const double mixed = cross == CrossTerms::Exact
                             ? a * b * std::pow(L, a - 1.0) * std::pow(R, b - 1.0)
                             : 0.0;
    m[1][2] = m[2][1] = mixed;
  }
  return h;
}

/// Cofactor expansion along the border row.
inline double hessian_determinant(const BorderedHessian& h) {
  const auto& m = h.entries;
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

/// Determinants within 1e-10 * scale^3 of zero are treated as noise.
inline SecondOrder classify_determinant(const BorderedHessian& h) {
  const double det = hessian_determinant(h);
  const double s = h.scale();
  const double tol = 1e-10 * s * s * s;
  if (std::abs(det) <= tol) return SecondOrder::Indeterminate;
  return det > 0.0 ? SecondOrder::LocalMax : SecondOrder::LocalMin;
}

struct VariantVerdict {
  double det = 0.0;
  SecondOrder verdict = SecondOrder::Indeterminate;
};

struct SecondOrderReport {
  VariantVerdict shadow;
  VariantVerdict direct_printed;
  VariantVerdict direct_exact;

  const VariantVerdict& select(HessianVariant v, CrossTerms c) const {
    if (v == HessianVariant::ShadowForm) return shadow;
    return c == CrossTerms::Printed ? direct_printed : direct_exact;
  }

  /// True when the printed variants reach different verdicts.
  bool variants_disagree() const noexcept {
    return shadow.verdict != direct_printed.verdict;
  }
};

inline VariantVerdict evaluate_variant(const CobbDouglasProblem& prob,
                                       const OptimumSolution& sol, HessianVariant v,
                                       CrossTerms c) {
  const auto h = build_bordered_hessian(prob, sol, v, c);
  return {hessian_determinant(h), classify_determinant(h)};
}

inline SecondOrderReport classify_second_order(const CobbDouglasProblem& prob,
                                               const OptimumSolution& sol) {
  SecondOrderReport r;
  r.shadow = evaluate_variant(prob, sol, HessianVariant::ShadowForm, CrossTerms::Printed);
  r.direct_printed =
      evaluate_variant(prob, sol, HessianVariant::DirectForm, CrossTerms::Printed);
  r.direct_exact = evaluate_variant(prob, sol, HessianVariant::DirectForm, CrossTerms::Exact);
  return r;
}

}  // namespace lexopt
