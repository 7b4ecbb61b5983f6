#pragma once

#include <string>

#include "remest/rng.hpp"

namespace remest {

enum class SourceFamily { kLaplace, kGaussian, kUniform };

/// Even, log-concave scalar source density with closed-form partial moments.
///
/// Families: Laplace (rate lambda), zero-mean Gaussian (std dev sigma), and
/// Uniform on (-a, a) (half-width a). All three are even and log-concave,
/// which is what the threshold-optimality results require. The Uniform family
/// has bounded support and is handled in the boundary-clamp regime by the
/// threshold solver; validation output labels it accordingly.
///
/// Instances are immutable after construction and freely shareable across
/// threads. Sampling draws from a caller-owned Rng.
class SourceModel {
 public:
  static SourceModel laplace(double rate);
  static SourceModel gaussian(double sigma);
  static SourceModel uniform(double half_width);

  SourceFamily family() const { return family_; }

  /// Family parameter: rate for Laplace, std dev for Gaussian, half-width
  /// for Uniform.
  double scale() const { return scale_; }

  bool has_bounded_support() const { return family_ == SourceFamily::kUniform; }

  /// Upper end of the support: half-width for Uniform, +inf otherwise.
  double support_bound() const;

  double variance() const;
  double std_dev() const;

  double pdf(double x) const;
  double cdf(double x) const;

  /// P(X > threshold). By evenness P(|X| > t) = 2 * tail_prob(t) for t >= 0.
  double tail_prob(double threshold) const;

  /// Inverse of tail_prob on [0, support bound): the t with P(X > t) = mass.
  /// Requires 0 < mass <= 1/2.
  double tail_quantile(double mass) const;

  /// Mean excess over a threshold: E[X | X > t] - t. Nonnegative, and
  /// nonincreasing in t for log-concave densities. Defined as 0 at the
  /// support bound (continuity limit) for bounded families.
  double mean_excess(double threshold) const;

  /// Conditional mean of X given X in (lo, hi). Throws std::domain_error if
  /// the interval carries no mass. Infinite endpoints are allowed.
  double truncated_mean(double lo, double hi) const;

  /// Conditional variance of X given X in (lo, hi). Same contract as
  /// truncated_mean.
  double truncated_var(double lo, double hi) const;

  /// Partial moment: integral of x^k * pdf(x) over (lo, hi), k in {0, 1, 2}.
  double partial_moment(int k, double lo, double hi) const;

  double sample(Rng& rng) const;

  /// Short textual form for provenance headers, e.g. "laplace(rate=1)".
  std::string describe() const;

 private:
  SourceModel(SourceFamily family, double scale);

  // Upper partial moments U_k(t) = integral of x^k pdf over (t, inf), t >= 0.
  double upper_moment(int k, double t) const;

  SourceFamily family_;
  double scale_;
};

/// Quadrature-backed partial moment over (lo, hi); the generic fallback for
/// densities without closed forms, kept as an independent cross-check of the
/// closed-form path.
double partial_moment_quad(const SourceModel& model, int k, double lo,
                           double hi, double abs_tol = 1e-12);

double truncated_mean_quad(const SourceModel& model, double lo, double hi);
double truncated_var_quad(const SourceModel& model, double lo, double hi);

}  // namespace remest
