#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "waverisk/signal.hpp"

namespace waverisk {

// Sequence-space smoothness ball.  p or q may be +inf (sup norms); values
// below 1 are rejected (quasi-norm range is out of scope).
struct BesovSpec {
  double m = 1.0;
  double p = 2.0;
  double q = 2.0;
  double A = 1.0;
  int j0 = 0;

  double s() const { return m + 0.5 - 1.0 / p; }
  void validate() const;
};

// Two-term norm: l^p of the scaling block plus the l^q ladder of the
// 2^{js}-weighted per-level l^p norms.
double besov_norm(const CoeffPyramid& pyramid, const BesovSpec& spec);

// Multiplies by A / max(A, norm): inside stays put, outside lands on the
// boundary.
CoeffPyramid scale_to_ball(const CoeffPyramid& pyramid, const BesovSpec& spec);

// Upper bound on sum_{j >= l} ||theta_j||_2^2 over the ball: geometric with
// ratio 2^{-2m} (p >= 2) or 2^{-2s} (p < 2).
double tail_energy_bound(const BesovSpec& spec, int l);

// Smallest j with C sqrt(j)/sqrt(n) >= 2 A sqrt(2^{-j(2m+1)}): the level
// where the threshold overtakes the boundary coefficient size.
int critical_level(const BesovSpec& spec, std::uint64_t n, double C);

// Worst-case candidates, all inside the ball: the critical-level constant
// signal, per-level constant signals on the boundary, per-level single
// spikes, and random-sign profiles rescaled onto the ball.
std::vector<std::pair<std::string, CoeffPyramid>> adversary_signals(const BesovSpec& spec,
                                                                    std::uint64_t n, double C);

}  // namespace waverisk
