#include "remest/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "remest/stage_cost.hpp"

namespace remest {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Mass-weighted conditional variance of a region: M2 - M1^2/M0, 0 if empty.
double weighted_var(const SourceModel& src, double lo, double hi,
                    double* mass_out, double* mean_out) {
  const double m0 = src.partial_moment(0, lo, hi);
  *mass_out = m0;
  if (!(m0 > 0.0)) {
    *mean_out = 0.0;
    return 0.0;
  }
  const double m1 = src.partial_moment(1, lo, hi);
  *mean_out = m1 / m0;
  return std::max(0.0, src.partial_moment(2, lo, hi) - m1 * m1 / m0);
}

double silent_mass_of(const SourceModel& src, double g1, double g2) {
  return 1.0 - src.tail_prob(g1) - src.tail_prob(g2);
}

}  // namespace

DistortionReport three_level_distortion(const SourceModel& source,
                                        double gamma1, double gamma2) {
  if (!(gamma1 >= 0.0) || !(gamma2 >= 0.0) || !std::isfinite(gamma1) ||
      !std::isfinite(gamma2)) {
    throw std::invalid_argument("three_level_distortion: thresholds must be finite and >= 0");
  }

  DistortionReport rep{};
  double d_silent = weighted_var(source, -gamma2, gamma1, &rep.masses[0],
                                 &rep.codepoints[0]);
  double d_plus =
      weighted_var(source, gamma1, kInf, &rep.masses[1], &rep.codepoints[1]);
  double d_minus =
      weighted_var(source, -kInf, -gamma2, &rep.masses[2], &rep.codepoints[2]);

  rep.transmit = d_plus + d_minus;
  rep.total = d_silent + rep.transmit;
  return rep;
}

double matched_lower_threshold(const SourceModel& source, double gamma1,
                               double silent_mass) {
  if (!(silent_mass > 0.0 && silent_mass < 1.0)) {
    throw std::invalid_argument("matched_lower_threshold: silent_mass must be in (0, 1)");
  }
  const double target = 1.0 - silent_mass - source.tail_prob(gamma1);
  if (!(target > 0.0 && target <= 0.5)) {
    throw std::invalid_argument("matched_lower_threshold: no nonnegative threshold matches the mass");
  }
  return source.tail_quantile(target);
}

DerivativeCheck transmit_distortion_derivative(const SourceModel& source,
                                               double gamma1, double gamma2,
                                               double step) {
  const double e1 = source.mean_excess(gamma1);
  const double e2 = source.mean_excess(gamma2);
  DerivativeCheck check;
  check.analytic = source.pdf(gamma1) * (e2 * e2 - e1 * e1);

  const double mass = silent_mass_of(source, gamma1, gamma2);
  auto pd_at = [&source, mass](double g1) {
    const double g2 = matched_lower_threshold(source, g1, mass);
    return three_level_distortion(source, g1, g2).transmit;
  };
  check.numeric = (pd_at(gamma1 + step) - pd_at(gamma1 - step)) / (2.0 * step);
  return check;
}

ScanReport equal_mass_scan(const SourceModel& source, double silent_mass,
                           int grid_size) {
  if (!(silent_mass > 0.0 && silent_mass < 1.0)) {
    throw std::invalid_argument("equal_mass_scan: silent_mass must be in (0, 1)");
  }
  if (grid_size < 16) throw std::invalid_argument("equal_mass_scan: grid too small");

  // Parametrize by the positive-region mass q; the silent-mass constraint is
  // then satisfied by construction and both thresholds stay nonnegative for
  // q in [max(0, 1/2 - s), min(1/2, 1 - s)].
  const double transmit_mass = 1.0 - silent_mass;
  const double q_min = std::max(1e-9, 0.5 - silent_mass);
  const double q_max = std::min(0.5, transmit_mass) - 1e-9;
  const double q_sym = 0.5 * transmit_mass;

  std::vector<double> qs;
  qs.reserve(grid_size);
  const int n_uniform = 2 * grid_size / 3;
  const double margin = (q_max - q_min) * 0.005;
  for (int i = 0; i < n_uniform; ++i) {
    qs.push_back(q_min + margin +
                 (q_max - q_min - 2 * margin) * i / (n_uniform - 1.0));
  }
  // Refinement near the symmetric point, where a violation would hide.
  const int n_fine = grid_size - n_uniform;
  const double fine_half = (q_max - q_min) * 0.05;
  for (int i = 0; i < n_fine; ++i) {
    const double q =
        q_sym - fine_half + 2.0 * fine_half * i / (n_fine - 1.0);
    if (q > q_min && q < q_max) qs.push_back(q);
  }
  std::sort(qs.begin(), qs.end());

  ScanReport report;
  report.points.reserve(qs.size());
  report.max_mass_violation = 0.0;
  for (double q : qs) {
    const double g1 = source.tail_quantile(q);
    const double g2 = source.tail_quantile(transmit_mass - q);
    const DistortionReport d = three_level_distortion(source, g1, g2);
    report.points.push_back({g1, g2, d.total, d.transmit, kNan});
    report.max_mass_violation = std::max(
        report.max_mass_violation,
        std::fabs(silent_mass_of(source, g1, g2) - silent_mass));
  }

  const double g_sym = source.tail_quantile(q_sym);
  const DistortionReport d_sym = three_level_distortion(source, g_sym, g_sym);
  report.symmetric = {g_sym, g_sym, d_sym.total, d_sym.transmit, kNan};

  report.best = report.points.front();
  for (const ScanPoint& p : report.points) {
    if (p.transmit < report.best.transmit) report.best = p;
  }
  bool ok = report.symmetric.transmit <= report.best.transmit + 1e-10;
  for (const ScanPoint& p : report.points) {
    ok = ok && report.symmetric.total <= p.total + 1e-10;
  }
  report.symmetric_is_optimal = ok;
  return report;
}

double decomposed_stage_cost(const StageProblem& problem, double beta) {
  const double b = std::min(beta, problem.source.support_bound());
  const DistortionReport d = three_level_distortion(problem.source, b, b);
  const double g = problem.gamma;
  return d.total / (g + 1.0) + g / (g + 1.0) * (d.total - d.transmit) +
         problem.comm_cost * (d.masses[1] + d.masses[2]);
}

ScanReport soft_cost_scan(const StageProblem& problem, int grid_size) {
  if (grid_size < 8) throw std::invalid_argument("soft_cost_scan: grid too small");
  const SourceModel& src = problem.source;
  const double g = problem.gamma;

  const ThresholdSolution opt = solve_threshold(problem);
  double hi = std::max({2.0 * opt.beta, opt.beta + 2.0 * src.std_dev(),
                        src.std_dev()});
  hi = std::min(hi, src.support_bound());

  auto make_point = [&](double g1, double g2) {
    const DistortionReport d = three_level_distortion(src, g1, g2);
    const double obj = d.total / (g + 1.0) +
                       g / (g + 1.0) * (d.total - d.transmit) +
                       problem.comm_cost * (d.masses[1] + d.masses[2]);
    return ScanPoint{g1, g2, d.total, d.transmit, obj};
  };

  ScanReport report;
  report.max_mass_violation = 0.0;  // unconstrained scan
  report.points.reserve(static_cast<std::size_t>(grid_size) * grid_size + 144);
  for (int i = 0; i < grid_size; ++i) {
    const double g1 = hi * i / (grid_size - 1.0);
    for (int j = 0; j < grid_size; ++j) {
      report.points.push_back(make_point(g1, hi * j / (grid_size - 1.0)));
    }
  }
  // Local refinement around the solver's optimum.
  const double patch = hi * 0.04;
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) {
      report.points.push_back(make_point(
          std::max(0.0, opt.beta - patch + 2.0 * patch * i / 11.0),
          std::max(0.0, opt.beta - patch + 2.0 * patch * j / 11.0)));
    }
  }

  report.symmetric = make_point(opt.beta, opt.beta);
  report.best = report.points.front();
  for (const ScanPoint& p : report.points) {
    if (p.soft_cost < report.best.soft_cost) report.best = p;
  }
  report.symmetric_is_optimal =
      report.symmetric.soft_cost <= report.best.soft_cost + 1e-10;
  return report;
}

void write_scan_csv(std::ostream& os, const ScanReport& report,
                    std::span<const std::string> comment_lines) {
  for (const auto& line : comment_lines) os << "# " << line << '\n';
  os << "gamma1,gamma2,D,PD,J\n";
  char buf[192];
  for (const ScanPoint& p : report.points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", p.gamma1,
                  p.gamma2, p.total, p.transmit, p.soft_cost);
    os << buf;
  }
}

}  // namespace remest
