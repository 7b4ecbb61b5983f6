#include "remest/codec.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace remest {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double ChannelSpec::sample_noise(Rng& rng) const {
  switch (noise) {
    case NoiseFamily::kGaussian:
      return std::sqrt(noise_var) * rng.normal();
    case NoiseFamily::kLaplace: {
      // Zero-mean Laplace with variance noise_var has rate sqrt(2/var).
      const double rate = std::sqrt(2.0 / noise_var);
      const double w = rng.uniform_open() - 0.5;
      const double mag = -std::log(1.0 - 2.0 * std::fabs(w)) / rate;
      return w < 0.0 ? -mag : mag;
    }
    case NoiseFamily::kUniform: {
      const double half_width = std::sqrt(3.0 * noise_var);
      return half_width * (2.0 * rng.uniform() - 1.0);
    }
  }
  return 0.0;
}

AffineCodec::AffineCodec(const SourceModel& source, double beta, double power)
    : beta_(beta) {
  if (!(beta >= 0.0)) throw std::invalid_argument("AffineCodec: beta must be >= 0");
  if (!(power > 0.0)) throw std::invalid_argument("AffineCodec: power must be > 0");

  const double b = std::min(beta, source.support_bound());
  if (source.tail_prob(b) > 0.0) {
    mean_plus_ = source.truncated_mean(b, kInf);
    var_plus_ = source.truncated_var(b, kInf);
    gain_plus_ = std::sqrt(power / var_plus_);
    mean_minus_ = source.truncated_mean(-kInf, -b);
    var_minus_ = source.truncated_var(-kInf, -b);
    gain_minus_ = std::sqrt(power / var_minus_);
  } else {
    // Threshold at or past the support bound: the codec is never invoked.
    mean_plus_ = mean_minus_ = 0.0;
    var_plus_ = var_minus_ = 0.0;
    gain_plus_ = gain_minus_ = 0.0;
  }
  silent_mean_ =
      b > 0.0 ? source.truncated_mean(-b, b) : 0.0;
}

double AffineCodec::encode(double x) const {
  if (!(x > beta_ || x < -beta_)) {
    throw std::invalid_argument("AffineCodec::encode: sample inside the silent region");
  }
  if (x > 0.0) return gain_plus_ * (x - mean_plus_);
  return -gain_minus_ * (x - mean_minus_);
}

double AffineCodec::decode(const ChannelOutput& out, double gamma) const {
  const double shrink = gamma / (gamma + 1.0);
  switch (out.side) {
    case SideSymbol::kSilent:
      return silent_mean_;
    case SideSymbol::kPlus:
      return shrink * out.y_tilde / gain_plus_ + mean_plus_;
    case SideSymbol::kMinus:
      return -shrink * out.y_tilde / gain_minus_ + mean_minus_;
  }
  return silent_mean_;
}

}  // namespace remest
