#pragma once

#include <cstddef>
#include <vector>

namespace waverisk {

// Dyadic-length sample vector. Length 2^h with h >= 1 and finite entries;
// signal_depth enforces both at API boundaries.
using Signal = std::vector<double>;

// Returns h with x.size() == 2^h. Throws std::invalid_argument if the length
// is not a power of two >= 2 or an entry is not finite.
int signal_depth(const Signal& x);

// Scaling coefficients at level j0 plus detail levels j0 .. h-1. The level-j
// detail vector has 2^j entries; total coefficient count is 2^h.
struct CoeffPyramid {
  int j0 = 0;
  int h = 0;
  std::vector<double> scaling;
  std::vector<std::vector<double>> details;  // details[j - j0] is level j

  static CoeffPyramid zeros(int j0, int h);

  int levels() const { return h - j0; }
  std::vector<double>& level(int j) { return details[static_cast<std::size_t>(j - j0)]; }
  const std::vector<double>& level(int j) const {
    return details[static_cast<std::size_t>(j - j0)];
  }
  std::size_t coeff_count() const { return std::size_t{1} << h; }

  double l2_norm() const;
};

// Shape check; throws std::invalid_argument on malformed pyramids.
void validate(const CoeffPyramid& p);

// True when the two pyramids have identical (j0, h).
bool same_shape(const CoeffPyramid& a, const CoeffPyramid& b);

}  // namespace waverisk
