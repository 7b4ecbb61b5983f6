#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "remest/source_model.hpp"
#include "remest/stage_cost.hpp"

namespace remest {

/// Distortion accounting for the three-level quantizer with regions
/// (-g2, g1) silent, (g1, inf) positive-transmit, (-inf, -g2)
/// negative-transmit and conditional-mean codepoints.
struct DistortionReport {
  double total;     // D: mass-weighted conditional variances, all regions
  double transmit;  // PD: the two transmit regions only
  std::array<double, 3> masses;      // silent, plus, minus
  std::array<double, 3> codepoints;  // conditional means, same order
};

/// Region masses, codepoints, and distortions for thresholds (g1, g2).
/// Zero-mass regions contribute nothing; throws if every region is empty.
DistortionReport three_level_distortion(const SourceModel& source,
                                        double gamma1, double gamma2);

/// The g2 that keeps the silent-region mass P(-g2 < X < g1) equal to
/// silent_mass when the positive threshold is g1.
double matched_lower_threshold(const SourceModel& source, double gamma1,
                               double silent_mass);

struct DerivativeCheck {
  double analytic;  // p(g1) * (mean_excess(g2)^2 - mean_excess(g1)^2)
  double numeric;   // central difference along the constant-silent-mass curve
};

/// Derivative of the transmit-region distortion PD with respect to g1 while
/// holding the silent mass fixed (g2 moves to compensate). The analytic form
/// vanishes on the symmetric diagonal and is nonnegative for g1 > g2.
DerivativeCheck transmit_distortion_derivative(const SourceModel& source,
                                               double gamma1, double gamma2,
                                               double step = 1e-6);

struct ScanPoint {
  double gamma1;
  double gamma2;
  double total;      // D
  double transmit;   // PD
  double soft_cost;  // full one-stage objective (soft_cost_scan only)
};

struct ScanReport {
  std::vector<ScanPoint> points;
  ScanPoint symmetric;         // the symmetric policy under the same constraint
  ScanPoint best;              // grid argmin of the scanned objective
  bool symmetric_is_optimal;   // objective(symmetric) <= objective(grid) + 1e-10
  double max_mass_violation;   // worst silent-mass drift across the grid
};

/// Sweeps (g1, g2) pairs of equal silent mass and checks that the symmetric
/// point minimizes the transmit-region distortion (and the total distortion).
/// The grid is refined near the symmetric diagonal, where a violation of the
/// claim would have to hide.
ScanReport equal_mass_scan(const SourceModel& source, double silent_mass,
                           int grid_size);

/// Evaluates the full one-stage objective
///   D/(gamma+1) + gamma/(gamma+1) * Var(X|silent) P(silent) + c * P(transmit)
/// over an unconstrained (g1, g2) grid and checks that the minimum sits at
/// the symmetric threshold returned by solve_threshold. The symmetric-point
/// value is computed through this decomposition, independently of
/// stage_cost's integral form.
ScanReport soft_cost_scan(const StageProblem& problem, int grid_size);

/// The scanned objective at a symmetric pair, via the Eq.-style distortion
/// decomposition (the second algebraic route to stage_cost).
double decomposed_stage_cost(const StageProblem& problem, double beta);

/// CSV rows `(gamma1, gamma2, D, PD, J)` with '#'-prefixed comment lines.
void write_scan_csv(std::ostream& os, const ScanReport& report,
                    std::span<const std::string> comment_lines = {});

}  // namespace remest
