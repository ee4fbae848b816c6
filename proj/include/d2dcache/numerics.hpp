#pragma once

// Scalar numeric kernels shared by the analytic layer and the optimizers:
// both real branches of the Lambert W function, a bracketing hybrid root
// finder, and adaptive quadrature for radial (polar-area) integrals whose
// integrands have known kink locations.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "d2dcache/errors.hpp"

namespace d2dcache {

// Sign-change enclosure for find_root.
struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  double f_lo = 0.0;
  double f_hi = 0.0;
};

inline Bracket make_bracket(const std::function<double(double)>& f, double lo,
                            double hi) {
  return Bracket{lo, hi, f(lo), f(hi)};
}

namespace detail {

// One Halley step for w*e^w = x; returns the updated w.
inline double halley_w_step(double w, double x) {
  const double ew = std::exp(w);
  const double f = w * ew - x;
  const double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
  return w - f / denom;
}

// Polishes an initial guess to residual <= 1e-13 * max(1, |x|) when possible,
// keeping the best iterate seen.
inline double halley_w_polish(double w, double x) {
  double best_w = w;
  double best_res = std::abs(w * std::exp(w) - x);
  const double target = 1e-13 * std::max(1.0, std::abs(x));
  for (int it = 0; it < 40 && best_res > target; ++it) {
    const double next = halley_w_step(w, x);
    if (!std::isfinite(next)) break;
    w = next;
    const double res = std::abs(w * std::exp(w) - x);
    if (res < best_res) {
      best_res = res;
      best_w = w;
    } else if (it > 4) {
      break;  // stalled in round-off noise
    }
  }
  return best_w;
}

constexpr double kInvE = 0.36787944117144233;  // 1/e

}  // namespace detail

// Principal branch W0: returns w >= -1 with w*e^w = x, defined for x >= -1/e.
inline double lambert_w0(double x) {
  if (!(x >= -detail::kInvE)) {
    // Tolerate round-off immediately below the branch point.
    if (x > -detail::kInvE - 1e-12) return -1.0;
    throw std::domain_error("lambert_w0: argument below -1/e");
  }
  if (x == 0.0) return 0.0;
  double w;
  if (x < -0.25) {
    // Branch-point series in p = sqrt(2(e*x + 1)).
    const double p2 = std::max(0.0, 2.0 * (std::exp(1.0) * x + 1.0));
    const double p = std::sqrt(p2);
    if (p < 1e-7) return -1.0 + p - p2 / 6.0;
    w = -1.0 + p - p2 / 6.0 + 11.0 / 72.0 * p2 * p;
  } else if (x < 2.0) {
    // Series around 0: W(x) = x - x^2 + 1.5 x^3 - ... (coarse start suffices).
    w = x * (1.0 - x + 1.5 * x * x);
    if (w < -0.99) w = -0.99;
    if (x >= 1.0) w = std::log1p(x) * 0.8;
  } else {
    // Asymptotic start: L1 - L2 + L2/L1.
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }
  return detail::halley_w_polish(w, x);
}

// Secondary real branch W-1: returns w <= -1 with w*e^w = x, for x in [-1/e, 0).
inline double lambert_w_minus1(double x) {
  if (!(x >= -detail::kInvE) || !(x < 0.0)) {
    if (x > -detail::kInvE - 1e-12 && x < 0.0) return -1.0;
    throw std::domain_error("lambert_w_minus1: argument outside [-1/e, 0)");
  }
  double w;
  if (x > -0.27) {
    // Asymptote toward 0-: w ~ ln(-x) - ln(-ln(-x)).
    const double l1 = std::log(-x);
    const double l2 = std::log(-l1);
    w = l1 - l2 + l2 / l1;
  } else {
    // Branch-point series with the sign of p flipped relative to W0.
    const double p2 = std::max(0.0, 2.0 * (std::exp(1.0) * x + 1.0));
    const double p = std::sqrt(p2);
    if (p < 1e-7) return -1.0 - p - p2 / 6.0;
    w = -1.0 - p - p2 / 6.0 - 11.0 / 72.0 * p2 * p;
  }
  return detail::halley_w_polish(w, x);
}

// Hybrid secant/bisection root finder on a bracketed sign change.
// Terminates when |f(root)| <= tol or the bracket width falls below
// tol * max(1, |root|).  Deterministic for fixed inputs.
inline double find_root(const std::function<double(double)>& f, Bracket b,
                        double tol) {
  if (!(b.f_lo * b.f_hi <= 0.0)) {
    throw solver_error("find_root: bracket does not enclose a sign change");
  }
  if (b.f_lo == 0.0) return b.lo;
  if (b.f_hi == 0.0) return b.hi;
  double lo = b.lo, hi = b.hi, flo = b.f_lo, fhi = b.f_hi;
  double x = lo;
  for (int it = 0; it < 200; ++it) {
    // Secant proposal, replaced by the midpoint when degenerate or outside.
    double mid;
    const double denom = fhi - flo;
    if (denom != 0.0) {
      mid = (lo * fhi - hi * flo) / denom;
      const double span = hi - lo;
      if (!(mid > lo + 1e-3 * span) || !(mid < hi - 1e-3 * span)) {
        mid = 0.5 * (lo + hi);
      }
    } else {
      mid = 0.5 * (lo + hi);
    }
    const double fm = f(mid);
    x = mid;
    if (std::abs(fm) <= tol) return mid;
    if (flo * fm <= 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
    if (hi - lo <= tol * std::max(1.0, std::abs(mid))) {
      return 0.5 * (lo + hi);
    }
  }
  return x;
}

namespace detail {

// Adaptive Simpson on g over [a, b] with recursion bookkeeping.
inline double adaptive_simpson(const std::function<double(double)>& g, double a,
                               double fa, double b, double fb, double fm,
                               double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = g(lm);
  const double frm = g(rm);
  if (!std::isfinite(flm) || !std::isfinite(frm)) {
    throw solver_error("integrate: integrand evaluated to a non-finite value");
  }
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(g, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(g, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

inline double integrate_segment(const std::function<double(double)>& g,
                                double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  const double fa = g(a);
  const double fb = g(b);
  const double m = 0.5 * (a + b);
  const double fm = g(m);
  if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm)) {
    throw solver_error("integrate: integrand evaluated to a non-finite value");
  }
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(g, a, fa, b, fb, fm, whole, tol, 48);
}

inline double integrate_1d(const std::function<double(double)>& g, double a,
                           double b, double tol,
                           const std::vector<double>& breakpoints) {
  if (!(a <= b)) throw std::invalid_argument("integrate: requires a <= b");
  std::vector<double> cuts;
  cuts.push_back(a);
  for (double c : breakpoints) {
    if (c > a && c < b) cuts.push_back(c);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  // Scale the absolute Simpson tolerance by a first-pass magnitude estimate
  // so the contract's relative-error target is met on non-tiny integrals.
  double rough = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double m = 0.5 * (cuts[i] + cuts[i + 1]);
    rough += std::abs(g(m)) * (cuts[i + 1] - cuts[i]);
  }
  const double abs_tol = std::max(tol * std::max(rough, 1e-300), 1e-300);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double seg_tol =
        abs_tol * std::max(1e-6, (cuts[i + 1] - cuts[i]) / std::max(b - a, 1e-300));
    total += integrate_segment(g, cuts[i], cuts[i + 1], seg_tol);
  }
  return total;
}

}  // namespace detail

// Polar-area integral: returns the integral of f(r) * 2*pi*r dr over [a, b],
// splitting the adaptive rule at the caller-supplied kink locations.
inline double integrate_radial(const std::function<double(double)>& f, double a,
                               double b, double tol,
                               const std::vector<double>& breakpoints = {}) {
  const double two_pi = 2.0 * 3.14159265358979323846;
  return detail::integrate_1d([&f, two_pi](double r) { return f(r) * two_pi * r; },
                              a, b, tol, breakpoints);
}

// Plain line integral of f over [a, b] with the same adaptive machinery; used
// where a formula calls for a 1-D integral without the polar area element.
inline double integrate_interval(const std::function<double(double)>& f,
                                 double a, double b, double tol,
                                 const std::vector<double>& breakpoints = {}) {
  return detail::integrate_1d(f, a, b, tol, breakpoints);
}

}  // namespace d2dcache
