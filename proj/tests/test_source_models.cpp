#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "remest/quadrature.hpp"
#include "remest/rng.hpp"
#include "remest/source_model.hpp"

using namespace remest;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<SourceModel> all_models() {
  return {SourceModel::laplace(1.0),  SourceModel::laplace(2.0),
          SourceModel::laplace(0.5),  SourceModel::gaussian(1.0),
          SourceModel::gaussian(0.7), SourceModel::uniform(1.0),
          SourceModel::uniform(2.5)};
}

// Inverse CDF through the tail quantile; used to build equal-mass regions.
double quantile(const SourceModel& m, double u) {
  if (u >= 0.5) return m.tail_quantile(1.0 - u);
  return -m.tail_quantile(u);
}

}  // namespace

TEST_CASE("pdf values and symmetry") {
  CHECK(SourceModel::laplace(1.0).pdf(0.0) == doctest::Approx(0.5));
  CHECK(SourceModel::laplace(1.0).pdf(-2.0) ==
        doctest::Approx(SourceModel::laplace(1.0).pdf(2.0)));
  CHECK(SourceModel::uniform(1.0).pdf(1.5) == 0.0);

  for (const auto& m : all_models()) {
    Rng rng(7);
    for (int i = 0; i < 64; ++i) {
      const double x = 3.0 * m.std_dev() * (2.0 * rng.uniform() - 1.0);
      CHECK(m.pdf(x) == doctest::Approx(m.pdf(-x)));
      CHECK(m.pdf(x) >= 0.0);
    }
  }
}

TEST_CASE("pdf integrates to one (quadrature)") {
  for (const auto& m : all_models()) {
    CHECK(std::fabs(partial_moment_quad(m, 0, -kInf, kInf) - 1.0) < 1e-10);
  }
}

TEST_CASE("log-concavity on sampled triples") {
  for (const auto& m : all_models()) {
    Rng rng(11);
    const double span = m.has_bounded_support() ? 0.999 * m.support_bound()
                                                : 4.0 * m.std_dev();
    for (int i = 0; i < 200; ++i) {
      double x = span * (2.0 * rng.uniform() - 1.0);
      double y = span * (2.0 * rng.uniform() - 1.0);
      const double th = rng.uniform_open();
      const double lhs = std::log(m.pdf(th * x + (1.0 - th) * y));
      const double rhs =
          th * std::log(m.pdf(x)) + (1.0 - th) * std::log(m.pdf(y));
      CHECK(lhs >= rhs - 1e-12);
    }
  }
}

TEST_CASE("tail probabilities") {
  for (const auto& m : all_models()) {
    CHECK(m.tail_prob(0.0) == doctest::Approx(0.5));
  }
  CHECK(SourceModel::laplace(1.0).tail_prob(1.0) ==
        doctest::Approx(0.18393972058572117).epsilon(1e-12));
  CHECK(SourceModel::uniform(1.0).tail_prob(1.0) == 0.0);
  CHECK_THROWS_AS(SourceModel::laplace(1.0).tail_prob(-0.5),
                  std::invalid_argument);
}

TEST_CASE("tail_quantile inverts tail_prob") {
  for (const auto& m : all_models()) {
    for (double mass : {0.5, 0.3, 0.12, 0.04, 1e-3}) {
      const double t = m.tail_quantile(mass);
      CHECK(m.tail_prob(t) == doctest::Approx(mass).epsilon(1e-11));
    }
  }
  CHECK_THROWS_AS(SourceModel::gaussian(1.0).tail_quantile(0.75),
                  std::invalid_argument);
}

TEST_CASE("mean excess: closed values") {
  // Laplace is memoryless: constant 1/rate at every threshold.
  for (double b : {0.0, 0.3, 1.0, 4.0}) {
    CHECK(SourceModel::laplace(1.0).mean_excess(b) == doctest::Approx(1.0));
  }
  CHECK(SourceModel::laplace(2.0).mean_excess(0.7) == doctest::Approx(0.5));

  // Half-normal mean: sqrt(2/pi), cross-checked against quadrature.
  const auto gauss = SourceModel::gaussian(1.0);
  CHECK(gauss.mean_excess(0.0) ==
        doctest::Approx(0.7978845608028654).epsilon(1e-12));
  const double quad_mean = truncated_mean_quad(gauss, 0.0, kInf);
  CHECK(gauss.mean_excess(0.0) == doctest::Approx(quad_mean).epsilon(1e-10));

  // Bounded support: continuity limit 0 at the edge.
  CHECK(SourceModel::uniform(1.0).mean_excess(1.0) == 0.0);
  CHECK(SourceModel::uniform(1.0).mean_excess(0.5) == doctest::Approx(0.25));
}

TEST_CASE("mean excess is nonincreasing (log-concave tails)") {
  for (const auto& m : all_models()) {
    const double hi = m.has_bounded_support() ? m.support_bound() : 5.0 * m.std_dev();
    double prev = m.mean_excess(0.0);
    for (int i = 1; i <= 400; ++i) {
      const double b = hi * i / 400.0;
      const double cur = m.mean_excess(b);
      CHECK(cur <= prev + 1e-9);
      CHECK(cur >= 0.0);
      prev = cur;
    }
  }
}

TEST_CASE("truncated moments: closed values") {
  for (const auto& m : all_models()) {
    const double b = 0.5 * m.std_dev();
    CHECK(std::fabs(m.truncated_mean(-b, b)) < 1e-14);
  }

  const auto lap = SourceModel::laplace(1.0);
  for (double b : {0.0, 0.8, 2.0}) {
    CHECK(lap.truncated_mean(b, kInf) == doctest::Approx(b + 1.0));
    CHECK(lap.truncated_var(b, kInf) == doctest::Approx(1.0));
  }

  const auto uni = SourceModel::uniform(1.0);
  CHECK(uni.truncated_mean(0.2, 1.0) == doctest::Approx(0.6));
  CHECK(uni.truncated_var(0.2, 1.0) ==
        doctest::Approx(0.64 / 12.0).epsilon(1e-12));

  CHECK_THROWS_AS(uni.truncated_mean(1.2, 2.0), std::domain_error);
  CHECK_THROWS_AS(lap.truncated_mean(2.0, 1.0), std::invalid_argument);
}

TEST_CASE("closed-form moments agree with quadrature to 1e-9 relative") {
  for (const auto& m : all_models()) {
    const double s = m.std_dev();
    const double intervals[][2] = {{0.0, 0.7 * s},  {-1.3 * s, 0.4 * s},
                                   {0.5 * s, kInf}, {-kInf, -0.2 * s},
                                   {-kInf, kInf},   {-0.9 * s, 0.9 * s}};
    for (const auto& iv : intervals) {
      for (int k = 0; k <= 2; ++k) {
        const double closed = m.partial_moment(k, iv[0], iv[1]);
        const double quad = partial_moment_quad(m, k, iv[0], iv[1]);
        CHECK(std::fabs(closed - quad) <=
              1e-9 * std::max(1.0, std::fabs(closed)));
      }
    }
  }
}

TEST_CASE("law of total variance over 3-region partitions") {
  for (const auto& m : all_models()) {
    Rng rng(23);
    for (int trial = 0; trial < 25; ++trial) {
      const double bound = m.has_bounded_support() ? m.support_bound() : kInf;
      double a = quantile(m, 0.05 + 0.4 * rng.uniform());
      double b = quantile(m, 0.55 + 0.4 * rng.uniform());
      a = std::max(a, -bound);
      b = std::min(b, bound);
      const double cuts[4] = {-bound == -kInf ? -kInf : -bound, a, b, bound};
      double total = 0.0;
      for (int r = 0; r < 3; ++r) {
        const double mass = m.partial_moment(0, cuts[r], cuts[r + 1]);
        if (mass <= 0.0) continue;
        const double mean = m.partial_moment(1, cuts[r], cuts[r + 1]) / mass;
        const double second = m.partial_moment(2, cuts[r], cuts[r + 1]) / mass;
        total += (second - mean * mean) * mass + mass * mean * mean;
      }
      CHECK(std::fabs(total - m.variance()) < 1e-9);
    }
  }
}

TEST_CASE("symmetric interval minimizes conditional variance at equal mass") {
  // Random unions of up to 4 intervals carrying the same probability mass as
  // a centered interval; the centered one can never have larger conditional
  // variance. Union moments go through the quadrature path.
  for (const auto& m :
       {SourceModel::laplace(1.0), SourceModel::gaussian(1.0),
        SourceModel::uniform(1.5)}) {
    Rng rng(101);
    for (int trial = 0; trial < 70; ++trial) {
      const double p = 0.15 + 0.7 * rng.uniform();  // shared mass
      const double tau = m.tail_quantile((1.0 - p) / 2.0);
      const double var_symmetric = m.truncated_var(-tau, tau);

      const int pieces = 1 + static_cast<int>(rng.uniform() * 4.0);
      // Split the mass budget and scatter the pieces in CDF space.
      std::vector<double> w(pieces);
      double wsum = 0.0;
      for (auto& x : w) wsum += (x = 0.1 + rng.uniform());
      double gap_total = 1.0 - p;
      std::vector<double> gaps(pieces + 1);
      double gsum = 0.0;
      for (auto& x : gaps) gsum += (x = 0.05 + rng.uniform());

      double u = 0.0;
      double m0 = 0.0, m1 = 0.0, m2 = 0.0;
      for (int i = 0; i < pieces; ++i) {
        u += gaps[i] / gsum * gap_total;
        const double mass_i = w[i] / wsum * p;
        const double lo = quantile(m, u);
        const double hi2 = quantile(m, u + mass_i);
        u += mass_i;
        m0 += partial_moment_quad(m, 0, lo, hi2);
        m1 += partial_moment_quad(m, 1, lo, hi2);
        m2 += partial_moment_quad(m, 2, lo, hi2);
      }
      REQUIRE(std::fabs(m0 - p) < 1e-7);
      const double mean = m1 / m0;
      const double var_union = m2 / m0 - mean * mean;
      CHECK(var_symmetric <= var_union + 1e-8);
    }
  }
}

TEST_CASE("sampling: moments and determinism") {
  const int n = 1'000'000;

  {
    const auto lap = SourceModel::laplace(1.0);
    Rng rng(42);
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = lap.sample(rng);
      sum += x;
      sumsq += x * x;
    }
    const double var = sumsq / n - (sum / n) * (sum / n);
    CHECK(std::fabs(var - 2.0) < 0.01);
  }
  {
    const auto gauss = SourceModel::gaussian(1.0);
    Rng rng(42);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += gauss.sample(rng);
    CHECK(std::fabs(sum / n) < 0.005);
  }
  {
    const auto uni = SourceModel::uniform(1.0);
    Rng rng(42);
    double sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = uni.sample(rng);
      sumsq += x * x;
    }
    CHECK(std::fabs(sumsq / n - 1.0 / 3.0) < 0.002);
  }

  // Fixed seed reproduces the exact sequence.
  const auto m = SourceModel::laplace(2.0);
  Rng a(123), b(123);
  for (int i = 0; i < 1000; ++i) CHECK(m.sample(a) == m.sample(b));
}

TEST_CASE("empirical tail mass matches tail_prob") {
  const auto m = SourceModel::gaussian(1.0);
  Rng rng(5);
  const double beta = 0.9;
  int hits = 0;
  const int n = 200'000;
  for (int i = 0; i < n; ++i) {
    if (std::fabs(m.sample(rng)) > beta) ++hits;
  }
  const double expected = 2.0 * m.tail_prob(beta);
  CHECK(std::fabs(static_cast<double>(hits) / n - expected) < 0.005);
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(SourceModel::laplace(0.0), std::invalid_argument);
  CHECK_THROWS_AS(SourceModel::gaussian(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(SourceModel::uniform(0.0), std::invalid_argument);
}

TEST_CASE("describe strings") {
  CHECK(SourceModel::laplace(1.0).describe() == "laplace(rate=1)");
  CHECK(SourceModel::uniform(2.5).describe() == "uniform(halfwidth=2.5)");
}
