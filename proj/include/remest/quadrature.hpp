#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

namespace remest {

namespace detail {

// Gauss-Kronrod 7/15 pair on [-1, 1]. Column 0: abscissa, column 1: Gauss-7
// weight (zero for Kronrod-only nodes), column 2: Kronrod-15 weight.
inline constexpr double kGk15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

template <class F>
double gk15(const F& f, double lo, double hi, double& err) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double f0 = f(mid);
  double g7 = kGk15[0][1] * f0;
  double k15 = kGk15[0][2] * f0;
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kGk15[i][0];
    const double fi = f(mid + dx) + f(mid - dx);
    g7 += kGk15[i][1] * fi;
    k15 += kGk15[i][2] * fi;
  }
  g7 *= half;
  k15 *= half;
  err = std::pow(200.0 * std::fabs(g7 - k15), 1.5);
  return k15;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over the finite interval [lo, hi]
/// to absolute tolerance abs_tol. Throws if the interval stack overflows
/// (integrand too rough for the budget).
template <class F>
double integrate(F&& f, double lo, double hi, double abs_tol = 1e-12) {
  if (!(lo <= hi)) throw std::invalid_argument("integrate: lo > hi");
  if (lo == hi) return 0.0;

  struct Interval {
    double lo, hi, tol;
  };
  constexpr int kMaxStack = 512;
  Interval stack[kMaxStack];
  int top = 0;
  stack[top++] = {lo, hi, abs_tol};

  double sum = 0.0;
  while (top > 0) {
    const Interval iv = stack[--top];
    double err = 0.0;
    const double s = detail::gk15(f, iv.lo, iv.hi, err);
    if (err <= iv.tol || (iv.hi - iv.lo) < 1e-15 * (std::fabs(iv.lo) + 1.0)) {
      sum += s;
      continue;
    }
    if (top + 2 > kMaxStack) {
      throw std::runtime_error("integrate: subdivision limit reached");
    }
    const double mid = 0.5 * (iv.lo + iv.hi);
    const double child_tol = 0.5 * iv.tol;
    stack[top++] = {iv.lo, mid, child_tol};
    stack[top++] = {mid, iv.hi, child_tol};
  }
  return sum;
}

/// Integral of f over (lo, +inf) for integrands that decay at least as fast
/// as exp(-x / scale) up to polynomial factors. Uses the exponential
/// substitution x = lo - 2*scale*log(1 - t), which maps the tail onto (0, 1)
/// and keeps the transformed integrand bounded.
template <class F>
double integrate_upper_tail(F&& f, double lo, double scale,
                            double abs_tol = 1e-12) {
  if (!(scale > 0.0)) throw std::invalid_argument("integrate_upper_tail: scale <= 0");
  const double s = 2.0 * scale;
  auto g = [&f, lo, s](double t) {
    const double one_minus = 1.0 - t;
    const double x = lo - s * std::log(one_minus);
    const double v = f(x) * (s / one_minus);
    return std::isfinite(v) ? v : 0.0;
  };
  return integrate(g, 0.0, 1.0, abs_tol);
}

}  // namespace remest
