#pragma once

#include "remest/source_model.hpp"

namespace remest {

/// One-stage problem: source, channel SNR, and per-transmission price.
struct StageProblem {
  SourceModel source;
  double gamma;      // SNR = transmit power / noise variance, >= 0
  double comm_cost;  // price c charged per transmission, >= 0
};

struct ThresholdSolution {
  double beta;             // optimal symmetric threshold
  double cost;             // stage cost at the optimum
  bool boundary_clamped;   // support bound binds: never transmit (bounded sources)
};

/// Expected per-stage cost of the symmetric threshold policy with the matched
/// affine codec:
///   J(b) = 2*int_0^b x^2 p(x) dx
///        + 2/(gamma+1) * Var(X | X > b) * P(X > b)
///        + 2c * P(X > b).
/// b at or beyond the support bound means "never transmit".
double stage_cost(const StageProblem& problem, double beta);

/// Analytic derivative dJ/db = 2 p(b) * (b^2 - mean_excess(b)^2/(gamma+1) - c).
double stage_cost_derivative(const StageProblem& problem, double beta);

/// Fixed-point residual phi(b) = b^2 - mean_excess(b)^2/(gamma+1) - c.
/// Strictly increasing in b; its root is the optimal threshold.
double threshold_residual(const StageProblem& problem, double beta);

/// Unique optimal threshold via bracketed bisection on the residual. For
/// bounded supports where the residual stays negative up to the bound, the
/// solution clamps to the bound with boundary_clamped set (always silent).
ThresholdSolution solve_threshold(const StageProblem& problem);

}  // namespace remest
