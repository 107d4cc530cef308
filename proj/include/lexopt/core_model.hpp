#pragma once

#include <cmath>
#include <string_view>
#include <utility>

#include "lexopt/errors.hpp"

namespace lexopt {

/// Primitives of a two-party dispute. Monetary fields share one currency unit.
struct CaseParameters {
  double p = 0.0;    ///< probability the plaintiff wins at trial, in [0, 1]
  double W_B = 0.0;  ///< plaintiff's benefit from winning at trial
  double S_B = 0.0;  ///< settlement benefit
  double C_a = 0.0;  ///< administration (trial-side) costs
  double C_b = 0.0;  ///< bargaining (negotiation-side) costs

  void validate() const {
    detail::require_unit_interval(p, "p");
    detail::require_nonnegative(W_B, "W_B");
    detail::require_nonnegative(S_B, "S_B");
    detail::require_nonnegative(C_a, "C_a");
    detail::require_nonnegative(C_b, "C_b");
  }
};

/// Split of the reasonable bargain into its benefit and cost sides.
/// `R_B + L_C == P_C` holds by construction.
struct BargainDecomposition {
  double R_B = 0.0;  ///< reasonable bargain; negative when costs dominate
  double P_C = 0.0;  ///< expectation-benefit component
  double L_C = 0.0;  ///< transaction-cost component

  bool negative() const noexcept { return R_B < 0.0; }
};

struct HandRuleInputs {
  double B_prec = 0.0;  ///< investment in precaution
  double P_harm = 0.0;  ///< probability of harm
  double L_harm = 0.0;  ///< magnitude of harm

  void validate() const {
    detail::require_nonnegative(B_prec, "B_prec");
    detail::require_unit_interval(P_harm, "P_harm");
    detail::require_nonnegative(L_harm, "L_harm");
  }
};

enum class CostRegime { HighCb_HighCa, HighCb_LowCa, LowCb_HighCa, LowCb_LowCa };
enum class Resolution { Trial, Settle };

struct ScenarioLabel {
  CostRegime regime = CostRegime::LowCb_LowCa;
  Resolution decision = Resolution::Trial;
};

/// High/low cutoffs for the cost-regime classifier.
struct CostThresholds {
  double theta_a = 0.0;
  double theta_b = 0.0;
};

inline std::string_view to_string(CostRegime r) {
  switch (r) {
    case CostRegime::HighCb_HighCa: return "HighCb_HighCa";
    case CostRegime::HighCb_LowCa: return "HighCb_LowCa";
    case CostRegime::LowCb_HighCa: return "LowCb_HighCa";
    case CostRegime::LowCb_LowCa: return "LowCb_LowCa";
  }
  return "unknown";
}

inline std::string_view to_string(Resolution r) {
  return r == Resolution::Settle ? "Settle" : "Trial";
}

inline BargainDecomposition reasonable_bargain(const CaseParameters& c) {
  c.validate();
  BargainDecomposition d;
  d.P_C = 0.5 * (c.p * c.W_B + c.S_B);
  d.L_C = 0.5 * (c.C_a + 3.0 * c.C_b);
  d.R_B = d.P_C - d.L_C;
  return d;
}

/// Default cutoffs: half the expectation benefit on both axes.
inline CostThresholds default_thresholds(const CaseParameters& c) {
  const double half = 0.5 * reasonable_bargain(c).P_C;
  return {half, half};
}

/// Labels the cost regime and decides trial vs settlement. Only the
/// low-bargaining / high-administration regime can settle, and only when the
/// trial expectation net of C_a falls strictly below S_B net of C_b.
inline ScenarioLabel classify_scenario(const CaseParameters& c, CostThresholds t) {
  c.validate();
  detail::require_positive(t.theta_a, "theta_a");
  detail::require_positive(t.theta_b, "theta_b");

  const bool high_b = c.C_b >= t.theta_b;
  const bool high_a = c.C_a >= t.theta_a;

  ScenarioLabel out;
  if (high_b) {
    out.regime = high_a ? CostRegime::HighCb_HighCa : CostRegime::HighCb_LowCa;
  } else {
    out.regime = high_a ? CostRegime::LowCb_HighCa : CostRegime::LowCb_LowCa;
  }
  if (out.regime == CostRegime::LowCb_HighCa &&
      c.p * c.W_B - c.C_a < c.S_B - c.C_b) {
    out.decision = Resolution::Settle;
  }
  return out;
}

/// Learned Hand negligence test: liable iff expected harm strictly exceeds
/// the precaution spend.
inline bool hand_liability(const HandRuleInputs& h) {
  h.validate();
  return h.P_harm * h.L_harm > h.B_prec;
}

inline bool cooperation_possible(double wta, double wtp) {
  if (std::isnan(wta)) throw InvalidParameter("wta", "must not be NaN");
  if (std::isnan(wtp)) throw InvalidParameter("wtp", "must not be NaN");
  return wta <= wtp;
}

struct WtaWtp {
  double wta = 0.0;
  double wtp = 0.0;
};

/// Threat-point construction: the plaintiff accepts anything above the
/// expected judgment net of its share of trial costs; the defendant pays up to
/// the expected judgment plus its share.
inline WtaWtp derive_wta_wtp(const CaseParameters& c, double plaintiff_cost_share,
                             double defendant_cost_share) {
  c.validate();
  detail::require_unit_interval(plaintiff_cost_share, "plaintiff_cost_share");
  detail::require_unit_interval(defendant_cost_share, "defendant_cost_share");
  const double expected = c.p * c.W_B;
  return {expected - plaintiff_cost_share * c.C_a,
          expected + defendant_cost_share * c.C_a};
}

}  // namespace lexopt
