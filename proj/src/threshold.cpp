#include "waverisk/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "waverisk/normal.hpp"

namespace waverisk {

double soft_threshold(double x, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("soft_threshold: lambda must be >= 0");
  const double a = std::abs(x);
  if (a <= lambda) return 0.0;  // covers lambda = +inf without producing NaN
  return std::copysign(a - lambda, x);
}

CoeffPyramid apply_plan(const CoeffPyramid& pyramid, const ThresholdPlan& plan) {
  validate(pyramid);
  if (plan.j0 != pyramid.j0 || plan.lambda.size() != std::size_t(pyramid.levels()))
    throw std::invalid_argument("apply_plan: plan does not match pyramid shape");
  for (double l : plan.lambda)
    if (!(l >= 0.0)) throw std::invalid_argument("apply_plan: negative threshold");
  if (plan.discard_above &&
      (*plan.discard_above < plan.j0 || *plan.discard_above > pyramid.h - 1))
    throw std::invalid_argument("apply_plan: discard_above outside level range");

  CoeffPyramid out = pyramid;
  for (int j = pyramid.j0; j < pyramid.h; ++j) {
    const bool discard = plan.discard_above && j > *plan.discard_above;
    const double l = plan.lambda[std::size_t(j - plan.j0)];
    for (auto& d : out.level(j)) d = discard ? 0.0 : soft_threshold(d, l);
  }
  return out;
}

double universal_threshold(std::uint64_t n) {
  if (n < 2) throw std::invalid_argument("universal_threshold: need n >= 2");
  const double target = 1.0 / double(n);
  // g(t) = E 1{|Z|>t}(1+Z^2) = 4Q(t) + 2t phi(t), strictly decreasing from 2.
  const auto g = [](double t) { return 4.0 * norm_upper(t) + 2.0 * t * norm_pdf(t); };
  double lo = 0.0, hi = 2.0;
  while (g(hi) > target) hi *= 2.0;
  // Newton from the bracket midpoint, bisection whenever a step escapes.
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double val = g(t) - target;
    if (val > 0.0)
      lo = t;
    else
      hi = t;
    const double deriv = -2.0 * norm_pdf(t) * (1.0 + t * t);
    double next = t - val / deriv;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo < 1e-12 || std::abs(next - t) < 1e-13 * (1.0 + t)) {
      t = next;
      break;
    }
    t = next;
  }
  return t + 1.0;
}

ThresholdPlan level_thresholds(std::uint64_t n, int j0, double C, double sigma) {
  if (!(C > 0.0) || !(sigma > 0.0))
    throw std::invalid_argument("level_thresholds: C and sigma must be positive");
  if (n < 2 || (n & (n - 1)) != 0)
    throw std::invalid_argument("level_thresholds: n must be a power of two >= 2");
  int h = 0;
  while ((std::uint64_t{1} << h) < n) ++h;
  if (j0 < 0 || j0 > h - 1) throw std::invalid_argument("level_thresholds: j0 out of range");

  ThresholdPlan plan;
  plan.j0 = j0;
  plan.lambda.resize(std::size_t(h - j0));
  const double root_n = std::sqrt(double(n));
  for (int j = j0; j < h; ++j)
    plan.lambda[std::size_t(j - j0)] = C * sigma * std::sqrt(double(j - j0)) / root_n;
  return plan;
}

std::size_t RetentionMask::kept_count() const {
  std::size_t c = 0;
  for (std::uint8_t b : scaling_kept) c += b;
  for (const auto& lvl : details_kept)
    for (std::uint8_t b : lvl) c += b;
  return c;
}

namespace {

std::int64_t ceil_div_pow2(std::int64_t k, int d) {
  const std::int64_t m = std::int64_t{1} << d;
  return (k + m - 1) >> d;
}

}  // namespace

bool above(int jp, std::int64_t kp, int j, std::int64_t k, int J) {
  if (J < 0) throw std::invalid_argument("above: J must be >= 0");
  if (jp > j) return false;
  return std::llabs(ceil_div_pow2(k, j - jp) - kp) <= J;
}

std::pair<CoeffPyramid, RetentionMask> vertical_block_estimate(const CoeffPyramid& noisy,
                                                               const BlockConfig& cfg) {
  validate(noisy);
  if (cfg.J < 0) throw std::invalid_argument("vertical_block_estimate: J must be >= 0");
  if (!(cfg.lambda_n >= 0.0))
    throw std::invalid_argument("vertical_block_estimate: lambda_n must be >= 0");

  RetentionMask mask;
  mask.j0 = noisy.j0;
  mask.h = noisy.h;
  mask.scaling_kept.assign(noisy.scaling.size(), 1);
  mask.details_kept.resize(std::size_t(noisy.levels()));
  for (int j = noisy.j0; j < noisy.h; ++j)
    mask.level(j).assign(noisy.level(j).size(), 0);

  // Seed at each large coefficient, then mark the ceiling-projected band of
  // width 2J+1 on every level at or above it.
  const auto mark_above = [&](int jl, std::int64_t kl) {
    for (int j = noisy.j0; j <= jl; ++j) {
      const std::int64_t center = ceil_div_pow2(kl, jl - j);
      const std::int64_t size = std::int64_t(noisy.level(j).size());
      const std::int64_t lo = std::max<std::int64_t>(0, center - cfg.J);
      const std::int64_t hi = std::min<std::int64_t>(size - 1, center + cfg.J);
      for (std::int64_t kp = lo; kp <= hi; ++kp) mask.level(j)[std::size_t(kp)] = 1;
    }
  };

  for (int j = noisy.j0; j < noisy.h; ++j) {
    const auto& lvl = noisy.level(j);
    for (std::size_t k = 0; k < lvl.size(); ++k) {
      if (!(std::abs(lvl[k]) >= cfg.lambda_n)) continue;
      mark_above(j, std::int64_t(k));
      if (cfg.keep_row_neighbors) {
        const std::int64_t size = std::int64_t(lvl.size());
        for (std::int64_t kn = std::max<std::int64_t>(0, std::int64_t(k) - cfg.J);
             kn <= std::min<std::int64_t>(size - 1, std::int64_t(k) + cfg.J); ++kn)
          mark_above(j, kn);
      }
    }
  }

  CoeffPyramid est = noisy;
  for (int j = noisy.j0; j < noisy.h; ++j)
    for (std::size_t k = 0; k < est.level(j).size(); ++k)
      if (!mask.level(j)[k]) est.level(j)[k] = 0.0;
  return {std::move(est), std::move(mask)};
}

}  // namespace waverisk
