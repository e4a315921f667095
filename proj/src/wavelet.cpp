#include "waverisk/wavelet.hpp"

#include <cmath>
#include <stdexcept>

namespace waverisk {

int signal_depth(const Signal& x) {
  const std::size_t n = x.size();
  if (n < 2 || (n & (n - 1)) != 0)
    throw std::invalid_argument("signal length must be a power of two >= 2");
  for (double v : x)
    if (!std::isfinite(v)) throw std::invalid_argument("signal entries must be finite");
  int h = 0;
  while ((std::size_t{1} << h) < n) ++h;
  return h;
}

CoeffPyramid CoeffPyramid::zeros(int j0, int h) {
  if (j0 < 0 || h < 1 || j0 > h - 1)
    throw std::invalid_argument("pyramid levels require 0 <= j0 <= h-1");
  CoeffPyramid p;
  p.j0 = j0;
  p.h = h;
  p.scaling.assign(std::size_t{1} << j0, 0.0);
  p.details.resize(static_cast<std::size_t>(h - j0));
  for (int j = j0; j < h; ++j) p.details[static_cast<std::size_t>(j - j0)].assign(std::size_t{1} << j, 0.0);
  return p;
}

double CoeffPyramid::l2_norm() const {
  double s = 0.0;
  for (double v : scaling) s += v * v;
  for (const auto& lvl : details)
    for (double v : lvl) s += v * v;
  return std::sqrt(s);
}

void validate(const CoeffPyramid& p) {
  if (p.j0 < 0 || p.h < 1 || p.j0 > p.h - 1)
    throw std::invalid_argument("pyramid levels require 0 <= j0 <= h-1");
  if (p.scaling.size() != (std::size_t{1} << p.j0))
    throw std::invalid_argument("scaling vector has wrong length");
  if (p.details.size() != static_cast<std::size_t>(p.h - p.j0))
    throw std::invalid_argument("detail level count mismatch");
  for (int j = p.j0; j < p.h; ++j)
    if (p.level(j).size() != (std::size_t{1} << j))
      throw std::invalid_argument("detail level has wrong length");
}

bool same_shape(const CoeffPyramid& a, const CoeffPyramid& b) {
  return a.j0 == b.j0 && a.h == b.h;
}

WaveletSpec WaveletSpec::haar() {
  const double r = 1.0 / std::sqrt(2.0);
  return {Wavelet::haar, {r, r}, {r, -r}, 1.0};
}

WaveletSpec WaveletSpec::daubechies4() {
  // Standard (1 +- sqrt 3) taps, normalized so the squares sum to one. The
  // highpass is the alternating-flip g_k = (-1)^k h_{3-k}, which keeps the
  // first-half-minus-second-half detail sign convention.
  const double s3 = std::sqrt(3.0);
  const double d = 4.0 * std::sqrt(2.0);
  const std::vector<double> h = {(1.0 + s3) / d, (3.0 + s3) / d, (3.0 - s3) / d,
                                 (1.0 - s3) / d};
  const std::vector<double> g = {h[3], -h[2], h[1], -h[0]};
  return {Wavelet::daubechies4, h, g, 1.0};
}

WaveletSpec WaveletSpec::make(Wavelet name) {
  return name == Wavelet::haar ? haar() : daubechies4();
}

CoeffPyramid forward_dwt(const Signal& x, const WaveletSpec& spec, int j0) {
  const int h = signal_depth(x);
  if (j0 < 0 || j0 > h - 1) throw std::invalid_argument("forward_dwt: j0 out of range");

  CoeffPyramid p;
  p.j0 = j0;
  p.h = h;
  p.details.resize(static_cast<std::size_t>(h - j0));

  const auto& lo = spec.lowpass;
  const auto& hi = spec.highpass;
  const std::size_t taps = lo.size();

  std::vector<double> approx = x;
  std::vector<double> next;
  for (int j = h - 1; j >= j0; --j) {
    const std::size_t len = approx.size();
    const std::size_t half = len / 2;
    std::vector<double> detail(half);
    next.assign(half, 0.0);
    for (std::size_t k = 0; k < half; ++k) {
      double a = 0.0, d = 0.0;
      for (std::size_t t = 0; t < taps; ++t) {
        const double v = approx[(2 * k + t) & (len - 1)];  // periodic wrap
        a += lo[t] * v;
        d += hi[t] * v;
      }
      next[k] = a;
      detail[k] = d;
    }
    p.details[static_cast<std::size_t>(j - j0)] = std::move(detail);
    approx.swap(next);
  }
  p.scaling = std::move(approx);
  return p;
}

Signal inverse_dwt(const CoeffPyramid& p, const WaveletSpec& spec) {
  validate(p);
  const auto& lo = spec.lowpass;
  const auto& hi = spec.highpass;
  const std::size_t taps = lo.size();

  std::vector<double> approx = p.scaling;
  std::vector<double> next;
  for (int j = p.j0; j < p.h; ++j) {
    const auto& detail = p.level(j);
    const std::size_t half = approx.size();
    const std::size_t len = 2 * half;
    next.assign(len, 0.0);
    for (std::size_t k = 0; k < half; ++k) {
      const double a = approx[k];
      const double d = detail[k];
      for (std::size_t t = 0; t < taps; ++t)
        next[(2 * k + t) & (len - 1)] += lo[t] * a + hi[t] * d;
    }
    approx.swap(next);
  }
  return approx;
}

namespace {

// out[r] = sum_t f[t] u[r - stride t]; scatter form of the upsampled
// convolution used by the filter cascade.
std::vector<double> upsample_convolve(const std::vector<double>& f,
                                      const std::vector<double>& u, std::size_t stride) {
  std::vector<double> out(u.size() + stride * (f.size() - 1), 0.0);
  for (std::size_t t = 0; t < f.size(); ++t)
    for (std::size_t i = 0; i < u.size(); ++i) out[i + stride * t] += f[t] * u[i];
  return out;
}

}  // namespace

CascadePair cascade_filters(const WaveletSpec& spec, int depth) {
  if (depth < 1) throw std::invalid_argument("cascade_filters: depth must be >= 1");
  CascadePair out;
  if (depth == 1) {
    out.u = spec.lowpass;
    out.v = spec.highpass;
    return out;
  }
  // The wavelet appears once at the coarsest step; all finer steps cascade
  // through the scaling filter.
  std::vector<double> u = spec.lowpass;
  for (int d = 2; d <= depth; ++d) {
    const std::size_t stride = std::size_t{1} << (d - 1);
    if (d == depth) out.v = upsample_convolve(spec.highpass, u, stride);
    u = upsample_convolve(spec.lowpass, u, stride);
  }
  out.u = std::move(u);
  return out;
}

Signal haar_block_mean(const Signal& x, int j0) {
  const int h = signal_depth(x);
  if (j0 < 0 || j0 > h - 1)
    throw std::invalid_argument("haar_block_mean: j0 out of range");
  const std::size_t width = std::size_t{1} << (h - j0 - 1);
  Signal out(x.size());
  for (std::size_t b = 0; b < x.size(); b += width) {
    double sum = 0.0;
    for (std::size_t i = 0; i < width; ++i) sum += x[b + i];
    const double mean = sum / static_cast<double>(width);
    for (std::size_t i = 0; i < width; ++i) out[b + i] = mean;
  }
  return out;
}

}  // namespace waverisk
