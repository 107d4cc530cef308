#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lexopt/errors.hpp"

namespace lexopt {

/// A legal rule carves the permitted strategies out of the full set.
struct LegalRule {
  std::string name;
  std::set<std::string> allowed;
};

/// A moral code is a named bundle of rules.
struct MoralCode {
  std::string name;
  std::vector<LegalRule> rules;

  const LegalRule& rule(const std::string& rule_name) const {
    for (const auto& r : rules)
      if (r.name == rule_name) return r;
    throw InvalidParameter("rule", "no rule named '" + rule_name + "' in code '" + name + "'");
  }
};

/// One player's strategy set with utilities and the subset permitted by the
/// active rule. Identifiers order lexicographically for tie-breaks.
struct StrategyGame {
  std::map<std::string, double> utilities;
  std::set<std::string> allowed;

  void validate() const {
    if (allowed.empty()) throw InvalidParameter("allowed", "must be nonempty");
    for (const auto& s : allowed)
      if (!utilities.contains(s))
        throw InvalidParameter("allowed", "strategy '" + s + "' has no utility");
    for (const auto& [id, u] : utilities) detail::require_finite(u, "utilities");
  }

  bool is_allowed(const std::string& s) const { return allowed.contains(s); }
};

inline StrategyGame game_under_rule(std::map<std::string, double> utilities,
                                    const LegalRule& rule) {
  StrategyGame g{std::move(utilities), rule.allowed};
  g.validate();
  return g;
}

struct StrategyChoice {
  std::string strategy;
  double utility = 0.0;
};

namespace detail {

/// Argmax over strategies passing `keep`, with `penalty` subtracted from
/// disallowed ones. Ties resolve to the smallest identifier.
template <class Keep>
std::optional<StrategyChoice> argmax_strategy(const StrategyGame& g, Keep keep,
                                              double penalty = 0.0) {
  std::optional<StrategyChoice> best;
  for (const auto& [id, u] : g.utilities) {
    if (!keep(id)) continue;
    const double v = g.is_allowed(id) ? u : u - penalty;
    if (!best || v > best->utility) best = StrategyChoice{id, v};
  }
  return best;
}

}  // namespace detail

inline StrategyChoice best_allowed(const StrategyGame& g) {
  g.validate();
  return *detail::argmax_strategy(g, [&](const std::string& s) { return g.is_allowed(s); });
}

/// Best strategy over the whole set after charging `penalty` to every
/// disallowed strategy.
inline StrategyChoice best_overall(const StrategyGame& g, double penalty = 0.0) {
  g.validate();
  return *detail::argmax_strategy(g, [](const std::string&) { return true; }, penalty);
}

/// Utility-scaled default margin: 1e-6 * max|U| (or 1e-6 when all are zero).
inline double default_margin(const StrategyGame& g) {
  double scale = 0.0;
  for (const auto& [id, u] : g.utilities) scale = std::max(scale, std::abs(u));
  return 1e-6 * (scale > 0.0 ? scale : 1.0);
}

/// Smallest uniform penalty on disallowed strategies that leaves the best
/// allowed strategy ahead of every disallowed one by at least `margin`.
inline double min_compliance_penalty(const StrategyGame& g, double margin) {
  g.validate();
  detail::require_positive(margin, "margin");
  const auto disallowed =
      detail::argmax_strategy(g, [&](const std::string& s) { return !g.is_allowed(s); });
  if (!disallowed)
    throw InvalidParameter("allowed", "every strategy is allowed; nothing to penalize");
  const double allowed_best = best_allowed(g).utility;
  return std::max(0.0, disallowed->utility - allowed_best + margin);
}

/// Whether the rule-compliant optimum beats every penalized disallowed
/// strategy by at least `margin`, up to rounding in the utilities.
inline bool compliance_dominates(const StrategyGame& g, double penalty, double margin) {
  const double allowed_best = best_allowed(g).utility;
  const auto disallowed = detail::argmax_strategy(
      g, [&](const std::string& s) { return !g.is_allowed(s); }, penalty);
  if (!disallowed) return true;
  const double slack = 1e-12 * std::max({1.0, std::abs(allowed_best), std::abs(disallowed->utility + penalty)});
  return allowed_best - disallowed->utility >= margin - slack;
}

/// Social maximum over an aggregate utility W supplied per strategy.
inline StrategyChoice social_maximum(const std::map<std::string, double>& welfare) {
  if (welfare.empty()) throw InvalidParameter("welfare", "must be nonempty");
  std::optional<StrategyChoice> best;
  for (const auto& [id, w] : welfare) {
    detail::require_finite(w, "welfare");
    if (!best || w > best->utility) best = StrategyChoice{id, w};
  }
  return *best;
}

}  // namespace lexopt
