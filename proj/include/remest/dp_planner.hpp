#pragma once

#include <span>
#include <vector>

#include "remest/source_model.hpp"

namespace remest {

/// Finite-horizon hard-constraint problem: at most `budget` transmissions
/// over `horizon` stages.
struct HorizonSpec {
  int horizon;  // T >= 1
  int budget;   // N, 0 <= N <= T
  SourceModel source;
  double gamma;
};

/// Optimal cost-to-go J(t, E), t in 1..T+1, E in 0..N, with J(T+1, .) = 0.
class CostTable {
 public:
  CostTable(int horizon, int budget)
      : horizon_(horizon),
        budget_(budget),
        values_(static_cast<std::size_t>(horizon + 1) * (budget + 1), 0.0) {}

  int horizon() const { return horizon_; }
  int budget() const { return budget_; }

  double at(int t, int e) const { return values_[index(t, e)]; }
  double& at(int t, int e) { return values_[index(t, e)]; }

 private:
  std::size_t index(int t, int e) const;

  int horizon_;
  int budget_;
  std::vector<double> values_;
};

/// Optimal thresholds beta(t, E), t in 1..T, E in 1..N.
class PolicyTable {
 public:
  PolicyTable(int horizon, int budget)
      : horizon_(horizon),
        budget_(budget),
        values_(static_cast<std::size_t>(horizon) * budget, 0.0) {}

  int horizon() const { return horizon_; }
  int budget() const { return budget_; }

  double at(int t, int e) const { return values_[index(t, e)]; }
  double& at(int t, int e) { return values_[index(t, e)]; }

 private:
  std::size_t index(int t, int e) const;

  int horizon_;
  int budget_;
  std::vector<double> values_;
};

struct DpSolution {
  CostTable cost;
  PolicyTable policy;
};

/// Opportunity cost of spending one budget unit at stage t with E > 0 left:
/// c(t, E) = J(t+1, E-1) - J(t+1, E). Nonnegative.
double opportunity_cost(const CostTable& table, int t, int e);

/// Backward dynamic program over (t, E). Each cell with E > 0 solves the
/// one-stage problem priced at its opportunity cost; E = 0 cells accrue the
/// source variance. Stage costs are memoized on the opportunity-cost value,
/// which collapses the many cells sharing c = 0.
DpSolution solve_dp(const HorizonSpec& spec);

/// Laplace cost table computed purely from the closed-form update rule
///   J(t,E) = J(t+1,E) + 2/r^2                                  if E = 0
///   J(t,E) = J(t+1,E) + 2/r^2 - 2(b/r + 1/r^2) e^{-r b}        if E > 0
/// with b = sqrt(1/((gamma+1) r^2) + c(t,E)). No quadrature and no root
/// finding anywhere; serves as an independent oracle against solve_dp.
CostTable laplace_closed_form_table(double rate, double gamma, int horizon,
                                    int budget);

/// Budget level beyond which extra transmission opportunities stop reducing
/// the Laplace cost: T * exp(-rate * sqrt(m)) = T * exp(-1/sqrt(1+gamma)),
/// the expected number of stages whose observation clears the free threshold.
double opportunity_threshold(double rate, double gamma, int horizon);

struct BudgetPoint {
  int budget;
  double cost;  // J(1, budget)
};

/// J(1, N) for each requested budget, read off a single DP solve at N = T
/// (the recursion for column E never touches columns above E).
std::vector<BudgetPoint> budget_sweep(const SourceModel& source, double gamma,
                                      int horizon, std::span<const int> budgets);

}  // namespace remest
