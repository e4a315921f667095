#include "waverisk/besov.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "waverisk/rng.hpp"

namespace waverisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// l^p norm with p = +inf meaning the sup.
double lp_norm(const std::vector<double>& x, double p) {
  if (std::isinf(p)) {
    double mx = 0.0;
    for (double v : x) mx = std::max(mx, std::abs(v));
    return mx;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
  }
  if (p == 1.0) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
  }
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v), p);
  return std::pow(s, 1.0 / p);
}

int depth_of(std::uint64_t n) {
  if (n < 2 || (n & (n - 1)) != 0)
    throw std::invalid_argument("besov: n must be a power of two >= 2");
  int h = 0;
  while ((std::uint64_t{1} << h) < n) ++h;
  return h;
}

}  // namespace

void BesovSpec::validate() const {
  if (!(m > 0.0)) throw std::invalid_argument("BesovSpec: m must be positive");
  if (!(p >= 1.0)) throw std::invalid_argument("BesovSpec: p < 1 (quasi-norms unsupported)");
  if (!(q >= 1.0)) throw std::invalid_argument("BesovSpec: q < 1 (quasi-norms unsupported)");
  if (!(m > 1.0 / p)) throw std::invalid_argument("BesovSpec: need m > 1/p");
  if (!(A > 0.0)) throw std::invalid_argument("BesovSpec: radius must be positive");
  if (j0 < 0) throw std::invalid_argument("BesovSpec: j0 must be >= 0");
}

double besov_norm(const CoeffPyramid& pyramid, const BesovSpec& spec) {
  spec.validate();
  validate(pyramid);
  if (pyramid.j0 != spec.j0) throw std::invalid_argument("besov_norm: j0 mismatch");

  const double head = lp_norm(pyramid.scaling, spec.p);

  double ladder = 0.0;
  for (int j = pyramid.j0; j < pyramid.h; ++j) {
    const double w = std::exp2(double(j) * spec.s()) * lp_norm(pyramid.level(j), spec.p);
    if (std::isinf(spec.q))
      ladder = std::max(ladder, w);
    else
      ladder += std::pow(w, spec.q);
  }
  if (!std::isinf(spec.q)) ladder = std::pow(ladder, 1.0 / spec.q);
  return head + ladder;
}

CoeffPyramid scale_to_ball(const CoeffPyramid& pyramid, const BesovSpec& spec) {
  const double norm = besov_norm(pyramid, spec);
  CoeffPyramid out = pyramid;
  if (norm <= spec.A) return out;
  const double c = spec.A / norm;
  for (auto& v : out.scaling) v *= c;
  for (auto& lvl : out.details)
    for (auto& v : lvl) v *= c;
  return out;
}

double tail_energy_bound(const BesovSpec& spec, int l) {
  spec.validate();
  if (l < spec.j0) throw std::invalid_argument("tail_energy_bound: l below j0");
  const double eta = spec.p >= 2.0 ? spec.m : spec.s();
  const double r = std::exp2(-2.0 * eta);
  return spec.A * spec.A * std::pow(r, double(l)) / (1.0 - r);
}

int critical_level(const BesovSpec& spec, std::uint64_t n, double C) {
  spec.validate();
  if (!(C > 0.0)) throw std::invalid_argument("critical_level: C must be positive");
  depth_of(n);  // validates the power-of-two shape
  const double root_n = std::sqrt(double(n));
  for (int j = 0; j < 64; ++j) {
    const double lhs = C * std::sqrt(double(j)) / root_n;
    const double rhs = 2.0 * spec.A * std::sqrt(std::exp2(-double(j) * (2.0 * spec.m + 1.0)));
    if (lhs >= rhs) return j;
  }
  throw std::invalid_argument("critical_level: no level found");
}

std::vector<std::pair<std::string, CoeffPyramid>> adversary_signals(const BesovSpec& spec,
                                                                    std::uint64_t n, double C) {
  spec.validate();
  const int h = depth_of(n);
  if (spec.j0 >= h) throw std::invalid_argument("adversary_signals: j0 too deep for n");

  std::vector<std::pair<std::string, CoeffPyramid>> out;
  // Level-constant boundary magnitude: puts the level's ladder weight at
  // exactly A for any q.
  const auto level_const = [&](int j) {
    auto p = CoeffPyramid::zeros(spec.j0, h);
    const double c = spec.A * std::exp2(-double(j) * (spec.m + 0.5));
    for (auto& v : p.level(j)) v = c;
    return p;
  };

  const int jc = std::min(critical_level(spec, n, C), h - 1);
  out.emplace_back("critical_" + std::to_string(jc), level_const(jc));

  for (int j = spec.j0; j < h; ++j) out.emplace_back("level_const_" + std::to_string(j), level_const(j));

  for (int j = spec.j0; j < h; ++j) {
    auto p = CoeffPyramid::zeros(spec.j0, h);
    p.level(j)[0] = spec.A * std::exp2(-double(j) * spec.s());
    out.emplace_back("spike_" + std::to_string(j), std::move(p));
  }

  // Random-sign multi-level profiles, pushed onto the ball boundary.
  Rng rng(0xBE50Fu, 1);
  for (int rep = 0; rep < 2; ++rep) {
    auto p = CoeffPyramid::zeros(spec.j0, h);
    for (int j = spec.j0; j < h; ++j) {
      const double c = spec.A * std::exp2(-double(j) * (spec.m + 0.5));
      for (auto& v : p.level(j)) v = rng.uniform() < 0.5 ? -c : c;
    }
    out.emplace_back("random_signs_" + std::to_string(rep), scale_to_ball(p, spec));
  }
  return out;
}

}  // namespace waverisk
