#pragma once

// Test-only numeric oracles: adaptive quadrature for the Gaussian soft-risk
// functional and the tail expectation behind the universal threshold. Library
// code must never include this header; golden values in the tests were frozen
// from these routines.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "waverisk/normal.hpp"

namespace oracle {

// Adaptive Simpson on [a, b] to absolute tolerance tol.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol) {
  if (a >= b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Integrates f phi over [-B, B] splitting at the supplied breakpoints, which
// must include every kink of f; adaptive refinement cannot otherwise reach
// 1e-10 on piecewise-smooth integrands. A fixed ladder of interior points is
// always added: on a segment like [lambda, 40] whose endpoints and midpoint
// all sit where f phi ~ 0, the first Simpson probe sees nothing and the
// refinement terminates at once with 0.
inline double gauss_expect(const std::function<double(double)>& f,
                           std::vector<double> breaks, double tol = 1e-11) {
  const double B = 40.0;
  for (const double b : {0.0, 1.0, 2.0, 5.0, 10.0, 20.0}) {
    breaks.push_back(b);
    breaks.push_back(-b);
  }
  breaks.push_back(-B);
  breaks.push_back(B);
  std::sort(breaks.begin(), breaks.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = std::max(breaks[i], -B);
    const double b = std::min(breaks[i + 1], B);
    if (b <= a) continue;
    total += integrate([&](double x) { return f(x) * waverisk::norm_pdf(x); }, a, b, tol);
  }
  return total;
}

inline double soft(double x, double lambda) {
  const double a = std::abs(x) - lambda;
  return a > 0.0 ? (x > 0.0 ? a : -a) : 0.0;
}

// E (T_lambda(Z + theta) - theta)^2 for Z standard normal, by quadrature with
// the integrand's kinks (-lambda - theta, lambda - theta) as breakpoints.
inline double soft_risk_quad(double lambda, double theta, double tol = 1e-11) {
  return gauss_expect(
      [=](double x) {
        const double e = soft(x + theta, lambda) - theta;
        return e * e;
      },
      {-lambda - theta, lambda - theta}, tol);
}

// E 1_{|Z| > t} (1 + Z^2) by quadrature; defines the universal threshold.
inline double tail_weight_quad(double t, double tol = 1e-12) {
  const double B = 40.0;
  const double upper =
      integrate([](double x) { return (1.0 + x * x) * waverisk::norm_pdf(x); }, t, B, tol);
  return 2.0 * upper;
}

}  // namespace oracle
