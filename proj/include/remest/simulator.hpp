#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "remest/codec.hpp"
#include "remest/dp_planner.hpp"
#include "remest/source_model.hpp"

namespace remest {

/// Soft constraint: no transmission cap, fixed stationary threshold, price
/// comm_cost added to the stage cost of every transmission.
struct SoftPolicy {
  double comm_cost;
  double beta;
};

/// Hard constraint: at most `budget` transmissions, thresholds looked up from
/// the DP policy table at (t, E). The table may come from a larger budget
/// solve; only columns up to `budget` are read.
struct HardPolicy {
  int budget;
  PolicyTable thresholds;
};

struct EpisodeConfig {
  int horizon;
  SourceModel source;
  ChannelSpec channel;
  std::variant<SoftPolicy, HardPolicy> policy;
  std::uint64_t seed = 0;
};

/// Record of one stage. Channel fields (y, v, y_tilde) are NaN on silent
/// stages and serialize as empty CSV cells. budget_left is the opportunity
/// count at the start of the stage; unset for soft-constraint runs.
struct SimStep {
  int t;
  double x;
  bool transmitted;
  SideSymbol side;
  double y;
  double v;
  double y_tilde;
  double x_hat;
  std::optional<int> budget_left;
  double stage_cost;
};

struct SimTrace {
  std::vector<SimStep> steps;
  double total_cost = 0.0;
  int transmissions = 0;
};

struct BudgetQuantiles {
  double q10, q50, q90;
};

struct MonteCarloReport {
  long long episodes = 0;
  double mean_total_cost = 0.0;
  double std_error = 0.0;  // sample std of episode totals / sqrt(episodes)
  double mean_transmissions = 0.0;

  /// Mean stage cost per t (size T); flat in t for stationary soft policies.
  std::vector<double> mean_stage_cost;

  /// Split-half episode totals, for stationarity checks.
  double first_half_mean = 0.0, first_half_se = 0.0;
  double second_half_mean = 0.0, second_half_se = 0.0;

  /// Hard-constraint only: per-t quantiles of the remaining budget (at the
  /// start of each stage) and the fraction of episodes ending with budget
  /// left over.
  std::vector<BudgetQuantiles> budget_quantiles;
  double terminal_budget_positive_fraction = 0.0;
};

/// One full closed-loop episode driven by the given stream. The hard budget
/// is asserted against the recorded trace before returning.
SimTrace run_episode(const EpisodeConfig& config, Rng& rng);

/// Streaming Monte-Carlo over independent per-episode streams derived from
/// config.seed. Episode i always uses stream i, and partial sums are reduced
/// in a fixed block order, so the report is identical for any worker count.
/// workers = 0 picks the hardware concurrency.
MonteCarloReport monte_carlo(const EpisodeConfig& config, long long episodes,
                             int workers = 0);

/// Remaining-budget path E_1..E_{T+1} of a single episode (hard constraint).
std::vector<int> budget_trajectory(const EpisodeConfig& config,
                                   std::uint64_t episode_index = 0);

/// CSV export with header `t,x,u,s,y,v,y_tilde,x_hat,E,stage_cost`; absent
/// fields are empty cells, s is 1/-1 on transmit and 0 on silence. The
/// comment lines (provenance) are emitted first, prefixed with '#'.
void write_trace_csv(std::ostream& os, const SimTrace& trace,
                     std::span<const std::string> comment_lines = {});

}  // namespace remest
