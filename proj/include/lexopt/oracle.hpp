#pragma once

// Brute-force references used to check the closed forms. Nothing here is
// called by the production paths in cobb_douglas.hpp or hessian.hpp.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>

#include "lexopt/cobb_douglas.hpp"
#include "lexopt/errors.hpp"
#include "lexopt/hessian.hpp"

namespace lexopt::oracle {

enum class GridDomain { BudgetLine, Region };

struct GridSpec {
  std::size_t points_per_axis = 10'000;
  GridDomain domain = GridDomain::BudgetLine;
  /// Distance kept from the zero boundary. Defaults to
  /// 1e-9 * P_C / min(p1, p2) when unset.
  std::optional<double> clamp_epsilon;

  void validate() const {
    if (points_per_axis < 100)
      throw InvalidParameter("points_per_axis", "must be >= 100");
    if (clamp_epsilon) detail::require_positive(*clamp_epsilon, "clamp_epsilon");
  }

  double epsilon_for(const CobbDouglasProblem& prob) const {
    return clamp_epsilon ? *clamp_epsilon : 1e-9 * prob.P_C / std::min(prob.p1, prob.p2);
  }
};

struct GridMax {
  double L_C = 0.0;
  double R_B = 0.0;
  double utility = -std::numeric_limits<double>::infinity();
  double step = 0.0;  ///< spacing of the L_C axis
};

/// Evaluates U along p1*L_C + p2*R_B = P_C at evenly spaced L_C in
/// [eps, P_C/p1 - eps]. The first maximal index wins.
inline GridMax grid_max_on_budget(const CobbDouglasProblem& prob, const GridSpec& spec) {
  prob.validate();
  spec.validate();
  const double eps = spec.epsilon_for(prob);
  const double lo = eps;
  const double hi = prob.P_C / prob.p1 - eps;
  const std::size_t n = spec.points_per_axis;
  const double step = (hi - lo) / static_cast<double>(n - 1);

  GridMax best;
  best.step = step;
  for (std::size_t k = 0; k < n; ++k) {
    const double L = k + 1 == n ? hi : lo + step * static_cast<double>(k);
    const double R = (prob.P_C - prob.p1 * L) / prob.p2;
    if (R <= 0.0) continue;
    const double u = std::pow(L, prob.alpha) * std::pow(R, prob.beta);
    if (u > best.utility) best = {L, R, u, step};
  }
  return best;
}

/// Full-region scan of the feasible triangle on a points_per_axis^2 lattice.
/// Slower than the line search; used to confirm the budget binds.
inline GridMax grid_max_in_region(const CobbDouglasProblem& prob, const GridSpec& spec) {
  prob.validate();
  spec.validate();
  const double eps = spec.epsilon_for(prob);
  const std::size_t n = spec.points_per_axis;
  const double L_hi = prob.P_C / prob.p1;
  const double R_hi = prob.P_C / prob.p2;
  const double dL = (L_hi - eps) / static_cast<double>(n - 1);
  const double dR = (R_hi - eps) / static_cast<double>(n - 1);

  GridMax best;
  best.step = dL;
  for (std::size_t i = 0; i < n; ++i) {
    const double L = eps + dL * static_cast<double>(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double R = eps + dR * static_cast<double>(j);
      if (prob.p1 * L + prob.p2 * R > prob.P_C) break;
      const double u = std::pow(L, prob.alpha) * std::pow(R, prob.beta);
      if (u > best.utility) best = {L, R, u, dL};
    }
  }
  return best;
}

/// Leibniz permutation-sum determinant of a 3x3 matrix.
inline double leibniz_determinant(const Matrix3& m) {
  std::array<int, 3> perm{0, 1, 2};
  double det = 0.0;
  do {
    int inversions = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (perm[i] > perm[j]) ++inversions;
    double term = inversions % 2 == 0 ? 1.0 : -1.0;
    for (int i = 0; i < 3; ++i) term *= m[i][perm[i]];
    det += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

/// Axis-aligned domain for finite differences; unbounded by default.
template <std::size_t N>
struct Box {
  std::array<double, N> lower;
  std::array<double, N> upper;

  static Box unbounded() {
    Box b;
    b.lower.fill(-std::numeric_limits<double>::infinity());
    b.upper.fill(std::numeric_limits<double>::infinity());
    return b;
  }

  static Box positive_orthant() {
    Box b = unbounded();
    b.lower.fill(0.0);
    return b;
  }
};

/// Central differences, one step per coordinate. Throws DomainError when the
/// stencil touches or leaves the box.
template <std::size_t N, class F>
std::array<double, N> finite_diff_gradient(F&& f, const std::array<double, N>& point,
                                           const std::array<double, N>& h,
                                           const Box<N>& domain = Box<N>::unbounded()) {
  std::array<double, N> grad{};
  for (std::size_t i = 0; i < N; ++i) {
    if (!(h[i] > 0.0)) throw InvalidParameter("h", "must be > 0");
    if (!(point[i] - h[i] > domain.lower[i]) || !(point[i] + h[i] < domain.upper[i]))
      throw DomainError("finite_diff_gradient: stencil leaves the domain");
    auto plus = point;
    auto minus = point;
    plus[i] += h[i];
    minus[i] -= h[i];
    grad[i] = (f(plus) - f(minus)) / (plus[i] - minus[i]);
  }
  return grad;
}

template <std::size_t N, class F>
std::array<double, N> finite_diff_gradient(F&& f, const std::array<double, N>& point,
                                           double h,
                                           const Box<N>& domain = Box<N>::unbounded()) {
  std::array<double, N> steps;
  steps.fill(h);
  return finite_diff_gradient(std::forward<F>(f), point, steps, domain);
}

}  // namespace lexopt::oracle
