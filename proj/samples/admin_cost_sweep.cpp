// Sweeps the administration cost over the default litigation market and
// prints the table.

#include <cstdio>

#include "lexopt/sim.hpp"

int main() {
  using namespace lexopt::sim;
  const auto cfg = SimConfig::defaults();
  const auto table = sweep_admin_cost(cfg, default_admin_cost_grid());
  std::printf("%8s %16s %16s %18s\n", "C_a", "aggregate_trials", "settlement_rate", "welfare");
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    std::printf("%8g %16lld %16.4f %18.1f%s%s\n", r.C_a,
                static_cast<long long>(r.aggregate_trials), r.settlement_rate, r.welfare,
                i == table.argmax_welfare ? "  <- max welfare" : "",
                i == table.argmin_trials ? "  <- min trials" : "");
  }
  return 0;
}
