#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <optional>
#include <random>
#include <vector>

#include "lexopt/core_model.hpp"
#include "lexopt/errors.hpp"

namespace lexopt::sim {

/// Litigation market with a deterrence feedback loop. Injurers pick a
/// precaution level, injuries follow from the harm-probability table, every
/// injury is filed, and each filing is settled or tried by the cost-regime
/// classifier. A high settlement rate discounts expected liability, which
/// pushes precaution down on the next tick.
struct SimConfig {
  std::int64_t n_injurers = 10'000;
  std::vector<double> precaution_grid;   ///< candidate B values, strictly increasing
  std::vector<double> harm_probability;  ///< P_harm(B) per grid entry, nonincreasing
  double L_harm = 200.0;

  // Case template; C_a comes from the policy.
  double p = 0.6;
  double W_B = 200.0;
  double S_B = 100.0;
  double C_b = 2.0;

  double C_a_policy = 60.0;
  std::optional<double> theta_a;  ///< defaults to P_C / 2 of the template
  std::optional<double> theta_b;  ///< defaults to P_C / 2 of the template

  double settlement_liability_discount = 0.8;
  /// Filings draw their win probability from [p - p_spread, p + p_spread]
  /// (clamped to [0, 1]); evenly spaced quantiles in deterministic mode.
  double p_spread = 0.3;
  double initial_settlement_rate = 0.0;
  std::int64_t ticks = 100;
  std::uint64_t seed = 0;
  bool stochastic = false;

  /// 10^4 injurers, 100 ticks, precaution grid 0..40 step 2 with
  /// P_harm(B) = 0.2 * exp(-B / 10).
  static SimConfig defaults() {
    SimConfig c;
    for (int b = 0; b <= 40; b += 2) {
      c.precaution_grid.push_back(b);
      c.harm_probability.push_back(0.2 * std::exp(-b / 10.0));
    }
    return c;
  }

  CaseParameters case_for(double p_case) const { return {p_case, W_B, S_B, C_a_policy, C_b}; }

  CostThresholds thresholds() const {
    const auto d = default_thresholds(CaseParameters{p, W_B, S_B, 0.0, C_b});
    return {theta_a.value_or(d.theta_a), theta_b.value_or(d.theta_b)};
  }

  void validate() const {
    if (n_injurers <= 0) throw InvalidParameter("n_injurers", "must be > 0");
    if (ticks <= 0) throw InvalidParameter("ticks", "must be > 0");
    if (precaution_grid.empty())
      throw InvalidParameter("precaution_grid", "must be nonempty");
    if (harm_probability.size() != precaution_grid.size())
      throw InvalidParameter("harm_probability", "must have one entry per precaution_grid value");
    for (std::size_t i = 0; i < precaution_grid.size(); ++i) {
      detail::require_nonnegative(precaution_grid[i], "precaution_grid");
      detail::require_unit_interval(harm_probability[i], "harm_probability");
      if (i > 0) {
        if (!(precaution_grid[i] > precaution_grid[i - 1]))
          throw InvalidParameter("precaution_grid", "must be strictly increasing");
        if (harm_probability[i] > harm_probability[i - 1])
          throw InvalidParameter("harm_probability", "must be nonincreasing in precaution");
      }
    }
    detail::require_nonnegative(L_harm, "L_harm");
    case_for(p).validate();
    detail::require_nonnegative(p_spread, "p_spread");
    detail::require_unit_interval(settlement_liability_discount,
                                  "settlement_liability_discount");
    detail::require_unit_interval(initial_settlement_rate, "initial_settlement_rate");
    const auto t = thresholds();
    detail::require_positive(t.theta_a, "theta_a");
    detail::require_positive(t.theta_b, "theta_b");
  }
};

struct SimState {
  std::int64_t tick = 0;
  double precaution = 0.0;
  std::int64_t injuries = 0;
  std::int64_t filings = 0;
  std::int64_t settlements = 0;
  std::int64_t trials = 0;
  /// Settled share of this tick's filings; carried over unchanged when a tick
  /// has no filings. Feeds the next tick's precaution choice.
  double settlement_rate = 0.0;
  std::int64_t aggregate_filings = 0;
  std::int64_t aggregate_settlements = 0;
  std::int64_t aggregate_trials = 0;
  double welfare = 0.0;  ///< this tick
  double cumulative_welfare = 0.0;

  friend bool operator==(const SimState&, const SimState&) = default;
};

inline SimState initial_state(const SimConfig& cfg) {
  SimState s;
  s.settlement_rate = cfg.initial_settlement_rate;
  return s;
}

inline std::size_t choose_precaution_index(const SimConfig& cfg, double settlement_rate) {
  const double keep = 1.0 - cfg.settlement_liability_discount * settlement_rate;
  std::size_t best = 0;
  double best_cost = 0.0;
  for (std::size_t i = 0; i < cfg.precaution_grid.size(); ++i) {
    const double cost =
        cfg.precaution_grid[i] + cfg.harm_probability[i] * cfg.L_harm * keep;
    if (i == 0 || cost < best_cost) {
      best = i;
      best_cost = cost;
    }
  }
  return best;
}

/// Precaution minimizing B + P_harm(B) * L_harm * (1 - discount * rate).
/// Ties resolve to the smaller B.
inline double choose_precaution(const SimConfig& cfg, double settlement_rate) {
  return cfg.precaution_grid[choose_precaution_index(cfg, settlement_rate)];
}

namespace internal {

inline std::mt19937_64 tick_rng(std::uint64_t seed, std::int64_t tick) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tick)};
  return std::mt19937_64(seq);
}

}  // namespace internal

/// Advances one tick. Pure in (state, cfg): the stochastic mode reseeds from
/// (seed, tick).
inline SimState step(const SimState& state, const SimConfig& cfg) {
  SimState next = state;
  next.tick = state.tick + 1;

  const std::size_t idx = choose_precaution_index(cfg, state.settlement_rate);
  next.precaution = cfg.precaution_grid[idx];
  const double p_harm = cfg.harm_probability[idx];

  auto rng = internal::tick_rng(cfg.seed, next.tick);
  if (cfg.stochastic) {
    next.injuries = std::binomial_distribution<std::int64_t>(cfg.n_injurers, p_harm)(rng);
  } else {
    next.injuries = std::llround(static_cast<double>(cfg.n_injurers) * p_harm);
  }
  next.filings = next.injuries;
  next.settlements = 0;
  next.trials = 0;

  const auto thresholds = cfg.thresholds();
  const double p_lo = std::clamp(cfg.p - cfg.p_spread, 0.0, 1.0);
  const double p_hi = std::clamp(cfg.p + cfg.p_spread, 0.0, 1.0);
  std::uniform_real_distribution<double> draw_p(p_lo, std::nextafter(p_hi, 2.0));

  double payoffs = 0.0;
  double transaction_costs = 0.0;
  for (std::int64_t j = 0; j < next.filings; ++j) {
    double p_case;
    if (cfg.stochastic) {
      p_case = std::min(draw_p(rng), p_hi);
    } else {
      const double q = (static_cast<double>(j) + 0.5) / static_cast<double>(next.filings);
      p_case = p_lo + (p_hi - p_lo) * q;
    }
    const auto c = cfg.case_for(p_case);
    if (classify_scenario(c, thresholds).decision == Resolution::Settle) {
      ++next.settlements;
      payoffs += c.S_B;
      transaction_costs += c.C_b;
    } else {
      ++next.trials;
      payoffs += c.p * c.W_B;
      transaction_costs += c.C_a;
    }
  }

  if (next.filings > 0)
    next.settlement_rate =
        static_cast<double>(next.settlements) / static_cast<double>(next.filings);
  next.aggregate_filings += next.filings;
  next.aggregate_settlements += next.settlements;
  next.aggregate_trials += next.trials;

  const double precaution_total = static_cast<double>(cfg.n_injurers) * next.precaution;
  const double harm_total = static_cast<double>(next.injuries) * cfg.L_harm;
  next.welfare = payoffs - precaution_total - harm_total - transaction_costs;
  next.cumulative_welfare += next.welfare;
  return next;
}

/// Runs `cfg.ticks` steps and returns the per-tick states (initial state excluded).
inline std::vector<SimState> run(const SimConfig& cfg) {
  cfg.validate();
  std::vector<SimState> out;
  out.reserve(static_cast<std::size_t>(cfg.ticks));
  SimState s = initial_state(cfg);
  for (std::int64_t t = 0; t < cfg.ticks; ++t) {
    s = step(s, cfg);
    out.push_back(s);
  }
  return out;
}

struct SweepRow {
  double C_a = 0.0;
  std::int64_t aggregate_trials = 0;
  double settlement_rate = 0.0;  ///< aggregate settlements / aggregate filings
  double welfare = 0.0;          ///< cumulative over the run
};

struct SweepTable {
  std::vector<SweepRow> rows;
  std::size_t argmax_welfare = 0;  ///< first row on ties
  std::size_t argmin_trials = 0;   ///< first row on ties
};

inline SweepRow summarize(double C_a, const SimState& last) {
  SweepRow r;
  r.C_a = C_a;
  r.aggregate_trials = last.aggregate_trials;
  r.settlement_rate = last.aggregate_filings > 0
                          ? static_cast<double>(last.aggregate_settlements) /
                                static_cast<double>(last.aggregate_filings)
                          : 0.0;
  r.welfare = last.cumulative_welfare;
  return r;
}

/// One full simulation per C_a value, all with the same seed. Cells run
/// concurrently; rows come back in grid order.
inline SweepTable sweep_admin_cost(const SimConfig& cfg, const std::vector<double>& C_a_grid) {
  if (C_a_grid.empty()) throw InvalidParameter("C_a_grid", "must be nonempty");
  for (std::size_t i = 0; i < C_a_grid.size(); ++i) {
    detail::require_nonnegative(C_a_grid[i], "C_a_grid");
    if (i > 0 && !(C_a_grid[i] > C_a_grid[i - 1]))
      throw InvalidParameter("C_a_grid", "must be strictly increasing");
  }
  cfg.validate();

  std::vector<std::future<SweepRow>> cells;
  cells.reserve(C_a_grid.size());
  for (double C_a : C_a_grid) {
    SimConfig cell = cfg;
    cell.C_a_policy = C_a;
    cells.push_back(std::async(std::launch::async, [cell = std::move(cell), C_a] {
      return summarize(C_a, run(cell).back());
    }));
  }

  SweepTable table;
  for (auto& f : cells) table.rows.push_back(f.get());
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    if (table.rows[i].welfare > table.rows[table.argmax_welfare].welfare)
      table.argmax_welfare = i;
    if (table.rows[i].aggregate_trials < table.rows[table.argmin_trials].aggregate_trials)
      table.argmin_trials = i;
  }
  return table;
}

/// 0, 10, ..., 190.
inline std::vector<double> default_admin_cost_grid() {
  std::vector<double> g;
  for (int i = 0; i < 20; ++i) g.push_back(10.0 * i);
  return g;
}

}  // namespace lexopt::sim
