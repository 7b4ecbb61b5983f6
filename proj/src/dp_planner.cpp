#include "remest/dp_planner.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "remest/stage_cost.hpp"

namespace remest {

namespace {

void validate(const HorizonSpec& spec) {
  if (spec.horizon < 1) throw std::invalid_argument("HorizonSpec: horizon must be >= 1");
  if (spec.budget < 0 || spec.budget > spec.horizon) {
    throw std::invalid_argument("HorizonSpec: budget must be in [0, horizon]");
  }
  if (!(spec.gamma >= 0.0)) throw std::invalid_argument("HorizonSpec: gamma must be >= 0");
}

// Memoization key: opportunity costs within 1e-12 share a bucket.
long long cost_key(double c) { return std::llround(c * 1e12); }

}  // namespace

std::size_t CostTable::index(int t, int e) const {
  if (t < 1 || t > horizon_ + 1 || e < 0 || e > budget_) {
    throw std::out_of_range("CostTable: index outside (t, E) range");
  }
  return static_cast<std::size_t>(t - 1) * (budget_ + 1) + e;
}

std::size_t PolicyTable::index(int t, int e) const {
  if (t < 1 || t > horizon_ || e < 1 || e > budget_) {
    throw std::out_of_range("PolicyTable: index outside (t, E) range");
  }
  return static_cast<std::size_t>(t - 1) * budget_ + (e - 1);
}

double opportunity_cost(const CostTable& table, int t, int e) {
  if (e < 1) throw std::invalid_argument("opportunity_cost: needs E >= 1");
  return table.at(t + 1, e - 1) - table.at(t + 1, e);
}

DpSolution solve_dp(const HorizonSpec& spec) {
  validate(spec);
  const int T = spec.horizon;
  const int N = spec.budget;
  CostTable cost(T, N);
  PolicyTable policy(T, N);

  const double var = spec.source.variance();
  struct Solved {
    double beta;
    double stage;
  };
  std::unordered_map<long long, Solved> memo;

  for (int t = T; t >= 1; --t) {
    cost.at(t, 0) = cost.at(t + 1, 0) + var;
    for (int e = 1; e <= N; ++e) {
      const double c = opportunity_cost(cost, t, e);
      const long long key = cost_key(c);
      auto it = memo.find(key);
      if (it == memo.end()) {
        const ThresholdSolution sol =
            solve_threshold({spec.source, spec.gamma, c});
        it = memo.emplace(key, Solved{sol.beta, sol.cost}).first;
      }
      policy.at(t, e) = it->second.beta;
      cost.at(t, e) = cost.at(t + 1, e) + it->second.stage;
    }
  }
  return {std::move(cost), std::move(policy)};
}

CostTable laplace_closed_form_table(double rate, double gamma, int horizon,
                                    int budget) {
  if (!(rate > 0.0)) throw std::invalid_argument("laplace_closed_form_table: rate must be > 0");
  if (horizon < 1 || budget < 0 || budget > horizon) {
    throw std::invalid_argument("laplace_closed_form_table: bad horizon/budget");
  }
  const double r = rate;
  const double m = 1.0 / ((gamma + 1.0) * r * r);
  const double var = 2.0 / (r * r);

  CostTable table(horizon, budget);
  for (int t = horizon; t >= 1; --t) {
    table.at(t, 0) = table.at(t + 1, 0) + var;
    for (int e = 1; e <= budget; ++e) {
      const double c = table.at(t + 1, e - 1) - table.at(t + 1, e);
      const double b = std::sqrt(m + c);
      table.at(t, e) = table.at(t + 1, e) + var -
                       2.0 * (b / r + 1.0 / (r * r)) * std::exp(-r * b);
    }
  }
  return table;
}

double opportunity_threshold(double rate, double gamma, int horizon) {
  if (!(rate > 0.0)) throw std::invalid_argument("opportunity_threshold: rate must be > 0");
  const double m = 1.0 / ((gamma + 1.0) * rate * rate);
  return horizon * std::exp(-rate * std::sqrt(m));
}

std::vector<BudgetPoint> budget_sweep(const SourceModel& source, double gamma,
                                      int horizon,
                                      std::span<const int> budgets) {
  for (int n : budgets) {
    if (n < 0 || n > horizon) {
      throw std::invalid_argument("budget_sweep: budget outside [0, horizon]");
    }
  }
  // One solve at full budget covers every smaller budget: column E of the
  // recursion never reads columns above E.
  const DpSolution full = solve_dp({horizon, horizon, source, gamma});
  std::vector<BudgetPoint> out;
  out.reserve(budgets.size());
  for (int n : budgets) out.push_back({n, full.cost.at(1, n)});
  return out;
}

}  // namespace remest
