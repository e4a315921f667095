#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "waverisk/signal.hpp"

namespace waverisk {

// (|x| - lambda)+ sgn(x).  lambda may be +inf (kills everything, no NaN).
double soft_threshold(double x, double lambda);

// Level-constant threshold schedule for detail levels j0..h-1.  Levels
// strictly above discard_above (when set) are zeroed outright.
struct ThresholdPlan {
  int j0 = 0;
  std::vector<double> lambda;
  std::optional<int> discard_above;
};

// Soft-thresholds each detail coefficient with its level's lambda; scaling
// coefficients pass through unchanged.
CoeffPyramid apply_plan(const CoeffPyramid& pyramid, const ThresholdPlan& plan);

// Root t of 4Q(t) + 2t phi(t) = 1/n shifted by one: the keep-or-kill
// threshold for unit-variance coefficients.  Callers rescale by sigma/sqrt(n).
// Grows like sqrt(2 log n); root located to 1e-10.
double universal_threshold(std::uint64_t n);

// lambda_j = C sigma sqrt((j - j0)+) / sqrt(n) for j in [j0, h-1], h = log2 n.
ThresholdPlan level_thresholds(std::uint64_t n, int j0, double C, double sigma);

struct BlockConfig {
  int J = 0;
  double lambda_n = 0.0;
  // Also seed the band from same-level neighbors of each large coefficient.
  bool keep_row_neighbors = false;
};

struct RetentionMask {
  int j0 = 0;
  int h = 0;
  std::vector<std::uint8_t> scaling_kept;
  std::vector<std::vector<std::uint8_t>> details_kept;

  std::vector<std::uint8_t>& level(int j) { return details_kept.at(std::size_t(j - j0)); }
  const std::vector<std::uint8_t>& level(int j) const {
    return details_kept.at(std::size_t(j - j0));
  }
  std::size_t kept_count() const;
};

// True iff (jp, kp) sits above (j, k): jp <= j and the ceiling projection of
// k onto level jp lands within J of kp.
bool above(int jp, std::int64_t kp, int j, std::int64_t k, int J);

// Keep-or-kill: a detail coefficient survives iff |Y| >= lambda_n or it is
// above some coefficient with |Y| >= lambda_n.  Scaling always survives.
std::pair<CoeffPyramid, RetentionMask> vertical_block_estimate(const CoeffPyramid& noisy,
                                                               const BlockConfig& cfg);

}  // namespace waverisk
