#pragma once

#include "remest/rng.hpp"
#include "remest/source_model.hpp"

namespace remest {

enum class NoiseFamily { kGaussian, kLaplace, kUniform };

/// Additive-noise channel: transmit power P_T, zero-mean noise with variance
/// noise_var. All analytic costs depend on the noise only through the SNR
/// gamma = power / noise_var; the family is configurable to demonstrate that.
struct ChannelSpec {
  double power;
  double noise_var;
  NoiseFamily noise = NoiseFamily::kGaussian;

  double gamma() const { return power / noise_var; }

  /// One zero-mean noise draw with variance noise_var.
  double sample_noise(Rng& rng) const;
};

/// Side-channel symbol: sign of the transmitted sample, or silence.
enum class SideSymbol { kPlus, kMinus, kSilent };

/// What the estimator receives for one stage. y_tilde is meaningful only
/// when side != kSilent (silence means the channel was not used).
struct ChannelOutput {
  double y_tilde;
  SideSymbol side;
};

/// Transmit decision: budget available and |x| beyond the threshold.
inline bool should_transmit(double x, double beta, long long budget_remaining) {
  return budget_remaining > 0 && (x > beta || x < -beta);
}

inline SideSymbol sign_symbol(double x) {
  return x > 0 ? SideSymbol::kPlus : SideSymbol::kMinus;
}

/// Piecewise-affine encoder/decoder matched to a threshold.
///
/// On each transmit region the encoder centers the source at its conditional
/// mean and scales by gain = sqrt(power / conditional variance), so the power
/// constraint is met with equality. The decoder applies the matched affine
/// shrinkage gamma/(gamma+1) and adds the conditional mean back. Positive and
/// negative regions carry separate parameter slots even though evenness makes
/// them mirror images; an asymmetric source would fail loudly rather than
/// silently reuse the wrong branch.
class AffineCodec {
 public:
  AffineCodec(const SourceModel& source, double beta, double power);

  double beta() const { return beta_; }
  double mean_plus() const { return mean_plus_; }
  double mean_minus() const { return mean_minus_; }
  double var_plus() const { return var_plus_; }
  double var_minus() const { return var_minus_; }
  double gain_plus() const { return gain_plus_; }
  double gain_minus() const { return gain_minus_; }

  /// Decoder output for a silent stage: E[X | |X| <= beta] (zero for even
  /// sources, stored explicitly).
  double silent_estimate() const { return silent_mean_; }

  /// Channel input for a transmitted sample. Requires |x| > beta; throws
  /// std::invalid_argument otherwise.
  double encode(double x) const;

  /// Estimate of x from the channel and side-channel outputs.
  double decode(const ChannelOutput& out, double gamma) const;

 private:
  double beta_;
  double mean_plus_, mean_minus_;
  double var_plus_, var_minus_;
  double gain_plus_, gain_minus_;
  double silent_mean_;
};

}  // namespace remest
