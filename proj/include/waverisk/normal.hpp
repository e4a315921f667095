#pragma once

#include <cmath>

namespace waverisk {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;
inline constexpr double kSqrt2 = 1.41421356237309504880;

// Standard normal density.
inline double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

// P(Z <= x). erfc keeps full relative accuracy in the lower tail.
inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

// Upper tail P(Z > x).
inline double norm_upper(double x) { return 0.5 * std::erfc(x / kSqrt2); }

}  // namespace waverisk
