#pragma once

#include <cstdint>
#include <string>

#include "waverisk/rng.hpp"
#include "waverisk/signal.hpp"

namespace waverisk {

enum class NoiseFamily { gaussian, bernoulli_sym, uniform_sym, student_t, cauchy };

// Symmetric zero-mean noise.  Families with a variance are standardized to
// unit variance before `scale` is applied; student_t with nu <= 2 and cauchy
// are served raw (no variance to standardize).
struct NoiseSpec {
  NoiseFamily family = NoiseFamily::gaussian;
  double nu = 0.0;     // student_t degrees of freedom
  double scale = 1.0;

  void validate() const;

  // Exponent gamma with P(|X| >= x) <= C/x^gamma; +inf for bounded tails
  // and gaussian.
  double tail_order() const;
  bool has_variance() const;
  double variance() const;
  double fourth_moment() const;
  double abs_third_moment() const;

  // "gaussian", "bernoulli_sym", "uniform_sym", "student_t(3)", "cauchy";
  // optional "* 2.5" suffix sets scale.
  static NoiseSpec parse(const std::string& text);
  std::string to_string() const;
};

Signal sample(const NoiseSpec& spec, std::size_t n, SeedSpec seed);

// One draw from the caller's generator: the hot path for Monte Carlo loops.
double draw(const NoiseSpec& spec, Rng& rng);

// Fills the whole buffer from the caller's generator.
void sample_into(const NoiseSpec& spec, Signal& out, Rng& rng);

// Moment order the noise must beat for the minimax rate to go through:
// 3(2m+1)/m when p >= 2, else 6s(2m+1)/(s(2m+1) - m) with s = m+1/2-1/p.
double moment_condition(double m, double p);

struct MaxStats {
  double c_M = 0.0;      // E max of M draws
  double var_max = 0.0;  // var of the max
  double se_c = 0.0;     // 0 when exact
  double se_var = 0.0;
  bool exact = false;
};

// Closed form for bernoulli_sym and uniform_sym, cached Monte Carlo for
// gaussian; heavy-tailed families are rejected.
MaxStats max_statistics(const NoiseSpec& spec, int M);

// Moving median of width D (odd) over an i.i.d. stream: exactly D-dependent,
// symmetric hence zero mean, D = 1 degenerates to the base sample.
Signal d_dependent_sample(const NoiseSpec& base, int D, std::size_t n, SeedSpec seed);
Signal d_dependent_sample(const NoiseSpec& base, int D, std::size_t n, Rng& rng);

}  // namespace waverisk
