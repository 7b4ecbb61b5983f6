#include "remest/stage_cost.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace remest {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate(const StageProblem& p) {
  if (!(p.gamma >= 0.0) || !std::isfinite(p.gamma)) {
    throw std::invalid_argument("StageProblem: gamma must be finite and >= 0");
  }
  if (!(p.comm_cost >= 0.0) || !std::isfinite(p.comm_cost)) {
    throw std::invalid_argument("StageProblem: comm_cost must be finite and >= 0");
  }
}

}  // namespace

double stage_cost(const StageProblem& problem, double beta) {
  validate(problem);
  if (!(beta >= 0.0)) throw std::invalid_argument("stage_cost: beta must be >= 0");

  const SourceModel& src = problem.source;
  const double b = std::min(beta, src.support_bound());

  double cost = 2.0 * src.partial_moment(2, 0.0, b);
  const double mass = src.tail_prob(b);
  if (mass > 0.0) {
    const double m1 = src.partial_moment(1, b, kInf);
    const double m2 = src.partial_moment(2, b, kInf);
    const double weighted_var = m2 - m1 * m1 / mass;  // Var(X|X>b) * P(X>b)
    cost += 2.0 / (problem.gamma + 1.0) * weighted_var +
            2.0 * problem.comm_cost * mass;
  }
  return cost;
}

double threshold_residual(const StageProblem& problem, double beta) {
  validate(problem);
  if (!(beta >= 0.0)) {
    throw std::invalid_argument("threshold_residual: beta must be >= 0");
  }
  const double b = std::min(beta, problem.source.support_bound());
  const double excess = problem.source.mean_excess(b);
  return beta * beta - excess * excess / (problem.gamma + 1.0) -
         problem.comm_cost;
}

double stage_cost_derivative(const StageProblem& problem, double beta) {
  return 2.0 * problem.source.pdf(beta) * threshold_residual(problem, beta);
}

ThresholdSolution solve_threshold(const StageProblem& problem) {
  validate(problem);
  const SourceModel& src = problem.source;
  const double bound = src.support_bound();

  if (threshold_residual(problem, 0.0) >= 0.0) {
    // Only reachable in the free-communication limit (c = 0, huge SNR).
    return {0.0, stage_cost(problem, 0.0), false};
  }

  if (src.has_bounded_support()) {
    // Residual at the bound is bound^2 - c (mean excess vanishes there). If
    // still negative, the cost decreases all the way to the edge: never
    // transmit.
    const double at_bound = threshold_residual(problem, bound);
    if (at_bound <= 0.0) {
      return {bound, stage_cost(problem, bound), at_bound < 0.0};
    }
  }

  const double excess0 = src.mean_excess(0.0);
  double hi = std::sqrt(excess0 * excess0 / (problem.gamma + 1.0) +
                        problem.comm_cost) +
              1.0;
  if (src.has_bounded_support()) hi = std::min(hi, bound);
  for (int tries = 0; threshold_residual(problem, hi) <= 0.0; ++tries) {
    if (tries > 120 || (src.has_bounded_support() && hi >= bound)) {
      throw std::runtime_error("solve_threshold: bracket expansion failed");
    }
    hi *= 2.0;
    if (src.has_bounded_support()) hi = std::min(hi, bound);
  }

  double lo = 0.0;
  for (int i = 0; i < 200 && (hi - lo) > 1e-15 * (hi + 1.0); ++i) {
    const double mid = 0.5 * (lo + hi);
    (threshold_residual(problem, mid) < 0.0 ? lo : hi) = mid;
  }
  const double beta = 0.5 * (lo + hi);
  return {beta, stage_cost(problem, beta), false};
}

}  // namespace remest
