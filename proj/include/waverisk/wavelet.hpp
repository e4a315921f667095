#pragma once

#include <vector>

#include "waverisk/signal.hpp"

namespace waverisk {

enum class Wavelet { haar, daubechies4 };

// Orthonormal filter pair plus the Holder index of the underlying wavelet.
// Haar has holder_index 1 recorded for bookkeeping only: it characterizes
// smoothness m < 1, so rate experiments with m >= 1 should use daubechies4.
struct WaveletSpec {
  Wavelet name = Wavelet::haar;
  std::vector<double> lowpass;
  std::vector<double> highpass;
  double holder_index = 1.0;

  static WaveletSpec haar();
  static WaveletSpec daubechies4();
  static WaveletSpec make(Wavelet name);
};

// Analysis transform with periodic boundary handling. The detail convention
// is first-half-minus-second-half: for Haar,
//   d_{j,k} = 2^{-(h-j)/2} (sum of first half of block - sum of second half)
// over the dyadic block samples [k 2^{h-j}, (k+1) 2^{h-j}).
CoeffPyramid forward_dwt(const Signal& x, const WaveletSpec& spec, int j0);

// Exact inverse of forward_dwt (transpose of the orthonormal analysis map).
Signal inverse_dwt(const CoeffPyramid& p, const WaveletSpec& spec);

// Cascaded filters expressing one coarse-level basis function in the scaling
// coordinates `depth` levels finer: u for the scaling function, v for the
// wavelet. Support length is at most 2^depth (N - 1) + 1 for N taps and the
// largest tap magnitude decays like 2^{-depth/2}.
struct CascadePair {
  std::vector<double> u;
  std::vector<double> v;
};
CascadePair cascade_filters(const WaveletSpec& spec, int depth);

// Per-sample mean over the dyadic block of width 2^{h-j0-1} containing the
// sample. Equals Haar reconstruction after zeroing all detail levels > j0.
Signal haar_block_mean(const Signal& x, int j0);

}  // namespace waverisk
