#include "remest/source_model.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "remest/quadrature.hpp"

namespace remest {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
constexpr double kInvSqrt2 = 0.7071067811865475244;

double sqr(double x) { return x * x; }

}  // namespace

SourceModel::SourceModel(SourceFamily family, double scale)
    : family_(family), scale_(scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("SourceModel: scale parameter must be positive");
  }
}

SourceModel SourceModel::laplace(double rate) {
  return SourceModel(SourceFamily::kLaplace, rate);
}

SourceModel SourceModel::gaussian(double sigma) {
  return SourceModel(SourceFamily::kGaussian, sigma);
}

SourceModel SourceModel::uniform(double half_width) {
  return SourceModel(SourceFamily::kUniform, half_width);
}

double SourceModel::support_bound() const {
  return family_ == SourceFamily::kUniform ? scale_ : kInf;
}

double SourceModel::variance() const {
  switch (family_) {
    case SourceFamily::kLaplace:
      return 2.0 / sqr(scale_);
    case SourceFamily::kGaussian:
      return sqr(scale_);
    case SourceFamily::kUniform:
      return sqr(scale_) / 3.0;
  }
  return 0.0;
}

double SourceModel::std_dev() const { return std::sqrt(variance()); }

double SourceModel::pdf(double x) const {
  switch (family_) {
    case SourceFamily::kLaplace:
      return 0.5 * scale_ * std::exp(-scale_ * std::fabs(x));
    case SourceFamily::kGaussian:
      return kInvSqrt2Pi / scale_ * std::exp(-0.5 * sqr(x / scale_));
    case SourceFamily::kUniform:
      return std::fabs(x) < scale_ ? 0.5 / scale_ : 0.0;
  }
  return 0.0;
}

double SourceModel::tail_prob(double threshold) const {
  if (!(threshold >= 0.0)) {
    throw std::invalid_argument("tail_prob: threshold must be nonnegative");
  }
  return upper_moment(0, threshold);
}

double SourceModel::cdf(double x) const {
  return x >= 0.0 ? 1.0 - upper_moment(0, x) : upper_moment(0, -x);
}

double SourceModel::tail_quantile(double mass) const {
  if (!(mass > 0.0 && mass <= 0.5)) {
    throw std::invalid_argument("tail_quantile: mass must be in (0, 1/2]");
  }
  switch (family_) {
    case SourceFamily::kLaplace:
      return -std::log(2.0 * mass) / scale_;
    case SourceFamily::kUniform:
      return scale_ * (1.0 - 2.0 * mass);
    case SourceFamily::kGaussian: {
      // Monotone bisection on the tail; erfc has no standard inverse.
      double lo = 0.0, hi = scale_;
      while (tail_prob(hi) > mass) hi *= 2.0;
      for (int i = 0; i < 200 && (hi - lo) > 1e-16 * (hi + 1.0); ++i) {
        const double mid = 0.5 * (lo + hi);
        (tail_prob(mid) > mass ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  return 0.0;
}

double SourceModel::mean_excess(double threshold) const {
  if (!(threshold >= 0.0)) {
    throw std::invalid_argument("mean_excess: threshold must be nonnegative");
  }
  switch (family_) {
    case SourceFamily::kLaplace:
      return 1.0 / scale_;  // memoryless tail
    case SourceFamily::kUniform:
      return threshold >= scale_ ? 0.0 : 0.5 * (scale_ - threshold);
    case SourceFamily::kGaussian: {
      const double mass = upper_moment(0, threshold);
      if (mass < 1e-280) {
        // Far-tail Mills-ratio asymptote; only reachable through degenerate
        // bracket expansion.
        return sqr(scale_) / threshold;
      }
      return upper_moment(1, threshold) / mass - threshold;
    }
  }
  return 0.0;
}

double SourceModel::upper_moment(int k, double t) const {
  if (t == kInf) return 0.0;
  switch (family_) {
    case SourceFamily::kLaplace: {
      const double r = scale_;
      const double e = 0.5 * std::exp(-r * t);
      if (e == 0.0) return 0.0;  // underflowed tail; avoids 0 * inf below
      if (k == 0) return e;
      if (k == 1) return e * (t + 1.0 / r);
      return e * (t * t + 2.0 * t / r + 2.0 / sqr(r));
    }
    case SourceFamily::kGaussian: {
      const double s = scale_;
      if (k == 0) return 0.5 * std::erfc(t / s * kInvSqrt2);
      const double p = pdf(t);
      if (k == 1) return sqr(s) * p;
      return sqr(s) * (0.5 * std::erfc(t / s * kInvSqrt2) + t * p);
    }
    case SourceFamily::kUniform: {
      const double a = scale_;
      if (t >= a) return 0.0;
      if (k == 0) return (a - t) / (2.0 * a);
      if (k == 1) return (sqr(a) - sqr(t)) / (4.0 * a);
      return (a * sqr(a) - t * sqr(t)) / (6.0 * a);
    }
  }
  return 0.0;
}

double SourceModel::partial_moment(int k, double lo, double hi) const {
  if (k < 0 || k > 2) {
    throw std::invalid_argument("partial_moment: order must be 0, 1 or 2");
  }
  if (std::isnan(lo) || std::isnan(hi)) {
    throw std::invalid_argument("partial_moment: NaN endpoint");
  }
  if (!(lo < hi)) return 0.0;

  const double sign = (k == 1) ? -1.0 : 1.0;
  double result = 0.0;
  if (hi > 0.0) {
    const double a = std::max(lo, 0.0);
    result += upper_moment(k, a) - upper_moment(k, hi);
  }
  if (lo < 0.0) {
    // Reflect the negative piece onto the positive axis; odd moments flip.
    const double a = std::max(-hi, 0.0);
    result += sign * (upper_moment(k, a) - upper_moment(k, -lo));
  }
  return result;
}

double SourceModel::truncated_mean(double lo, double hi) const {
  if (!(lo < hi)) throw std::invalid_argument("truncated_mean: needs lo < hi");
  const double mass = partial_moment(0, lo, hi);
  if (!(mass > 0.0)) {
    throw std::domain_error("truncated_mean: interval carries no mass");
  }
  return partial_moment(1, lo, hi) / mass;
}

double SourceModel::truncated_var(double lo, double hi) const {
  if (!(lo < hi)) throw std::invalid_argument("truncated_var: needs lo < hi");
  const double mass = partial_moment(0, lo, hi);
  if (!(mass > 0.0)) {
    throw std::domain_error("truncated_var: interval carries no mass");
  }
  const double mean = partial_moment(1, lo, hi) / mass;
  const double second = partial_moment(2, lo, hi) / mass;
  return std::max(0.0, second - sqr(mean));
}

double SourceModel::sample(Rng& rng) const {
  switch (family_) {
    case SourceFamily::kLaplace: {
      const double w = rng.uniform_open() - 0.5;
      const double mag = -std::log(1.0 - 2.0 * std::fabs(w)) / scale_;
      return w < 0.0 ? -mag : mag;
    }
    case SourceFamily::kGaussian:
      return scale_ * rng.normal();
    case SourceFamily::kUniform:
      return scale_ * (2.0 * rng.uniform() - 1.0);
  }
  return 0.0;
}

std::string SourceModel::describe() const {
  char buf[64];
  switch (family_) {
    case SourceFamily::kLaplace:
      std::snprintf(buf, sizeof buf, "laplace(rate=%g)", scale_);
      break;
    case SourceFamily::kGaussian:
      std::snprintf(buf, sizeof buf, "gaussian(sigma=%g)", scale_);
      break;
    case SourceFamily::kUniform:
      std::snprintf(buf, sizeof buf, "uniform(halfwidth=%g)", scale_);
      break;
  }
  return buf;
}

double partial_moment_quad(const SourceModel& model, int k, double lo,
                           double hi, double abs_tol) {
  if (k < 0 || k > 2) {
    throw std::invalid_argument("partial_moment_quad: order must be 0, 1 or 2");
  }
  const double bound = model.support_bound();
  lo = std::max(lo, -bound);
  hi = std::min(hi, bound);
  if (!(lo < hi)) return 0.0;

  auto f = [&model, k](double x) {
    double xk = 1.0;
    for (int i = 0; i < k; ++i) xk *= x;
    return xk * model.pdf(x);
  };

  // Tail decay hint: the density falls at least like exp(-x/scale) past a
  // few scales for both unbounded families.
  const double decay = model.family() == SourceFamily::kLaplace
                           ? 1.0 / model.scale()
                           : model.scale();

  double result = 0.0;
  if (hi > 0.0) {
    const double a = std::max(lo, 0.0);
    if (hi == kInf) {
      result += integrate_upper_tail(f, a, decay, abs_tol);
    } else {
      result += integrate(f, a, hi, abs_tol);
    }
  }
  if (lo < 0.0) {
    // Even pdf: integrate the reflected piece on the positive axis.
    const double a = std::max(-hi, 0.0);
    const double sign = (k == 1) ? -1.0 : 1.0;
    if (lo == -kInf) {
      result += sign * integrate_upper_tail(f, a, decay, abs_tol);
    } else {
      result += sign * integrate(f, a, -lo, abs_tol);
    }
  }
  return result;
}

double truncated_mean_quad(const SourceModel& model, double lo, double hi) {
  const double mass = partial_moment_quad(model, 0, lo, hi);
  if (!(mass > 0.0)) {
    throw std::domain_error("truncated_mean_quad: interval carries no mass");
  }
  return partial_moment_quad(model, 1, lo, hi) / mass;
}

double truncated_var_quad(const SourceModel& model, double lo, double hi) {
  const double mass = partial_moment_quad(model, 0, lo, hi);
  if (!(mass > 0.0)) {
    throw std::domain_error("truncated_var_quad: interval carries no mass");
  }
  const double mean = partial_moment_quad(model, 1, lo, hi) / mass;
  const double second = partial_moment_quad(model, 2, lo, hi) / mass;
  return std::max(0.0, second - mean * mean);
}

}  // namespace remest
