#include "waverisk/median.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace waverisk {

namespace {

double window_median(const double* w, int len, std::vector<double>& scratch) {
  scratch.assign(w, w + len);
  std::nth_element(scratch.begin(), scratch.begin() + len / 2, scratch.end());
  return scratch[std::size_t(len / 2)];
}

template <bool Parallel>
Signal run_median(const Signal& x, int l) {
  if (l < 0) throw std::invalid_argument("median_filter: l must be >= 0");
  const std::ptrdiff_t n = std::ptrdiff_t(x.size());
  const int D = 2 * l + 1;
  if (n < D) throw std::invalid_argument("median_filter: signal shorter than window");
  if (l == 0) return x;

  Signal out(x.size());
#pragma omp parallel if (Parallel && n >= 4096)
  {
    std::vector<double> scratch(static_cast<std::size_t>(D));
#pragma omp for
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      // Clamp to the first/last full window near the edges.
      const std::ptrdiff_t start = std::clamp<std::ptrdiff_t>(i - l, 0, n - D);
      out[std::size_t(i)] = window_median(x.data() + start, D, scratch);
    }
  }
  return out;
}

}  // namespace

Signal median_filter(const Signal& x, int l) { return run_median<true>(x, l); }

Signal median_filter_serial(const Signal& x, int l) { return run_median<false>(x, l); }

double median_tail_bound(int k, double p_max) {
  if (k < 1) throw std::invalid_argument("median_tail_bound: k must be >= 1");
  if (!(p_max >= 0.0 && p_max <= 1.0))
    throw std::invalid_argument("median_tail_bound: p_max must be a probability");
  double binom = 1.0;  // binom(2k-1, k) = prod_{i=1..k-1} (k+i)/i
  for (int i = 1; i < k; ++i) binom *= double(k + i) / double(i);
  const double bound = binom * std::pow(p_max, k);
  return std::clamp(bound, 0.0, 1.0);
}

int filter_length(double gamma, double L_required) {
  if (!(gamma > 0.0) || !(L_required > 0.0))
    throw std::invalid_argument("filter_length: gamma and L_required must be positive");
  // Smallest window count k = l+1 with k*gamma strictly above L_required;
  // the loop guards against floor() landing one short in float arithmetic.
  double k = std::floor(L_required / gamma);
  if (k < 0.0) k = 0.0;
  while (!(k * gamma > L_required)) k += 1.0;
  return int(k) - 1;
}

std::pair<double, double> bias_check(const Signal& f, const Signal& e, int l) {
  if (f.size() != e.size()) throw std::invalid_argument("bias_check: length mismatch");
  if (l == 0) return {0.0, 0.0};  // identity filter cancels exactly
  Signal sum(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) sum[i] = f[i] + e[i];
  const Signal mfe = median_filter(sum, l);
  const Signal me = median_filter(e, l);

  double lhs = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = mfe[i] - me[i] - f[i];
    lhs += d * d;
  }
  double rhs = 0.0;
  for (std::size_t i = 1; i < f.size(); ++i) {
    const double d = f[i] - f[i - 1];
    rhs += d * d;
  }
  rhs *= 8.0 * double(l) * double(l);
  return {lhs, rhs};
}

}  // namespace waverisk
