#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "waverisk/besov.hpp"
#include "waverisk/noise.hpp"
#include "waverisk/rng.hpp"
#include "waverisk/signal.hpp"
#include "waverisk/threshold.hpp"
#include "waverisk/wavelet.hpp"

namespace waverisk {

// ---------------------------------------------------------------------------
// Exact Gaussian risk of a single soft-thresholded coefficient.
// ---------------------------------------------------------------------------

// E (T_lambda(theta + Z) - theta)^2 for standard normal Z, in closed form.
// Even in theta; lambda = +inf gives exactly theta^2; (0, 0) gives 1.
double gaussian_soft_risk(double lambda, double theta);

// Threshold lambda solving gaussian_soft_risk(lambda, 0) == target for
// target in (0, 1]; the pure-noise risk is strictly decreasing in lambda.
double pure_noise_threshold(double target);

// ---------------------------------------------------------------------------
// Replicate driver. Row r of every table is produced from its own stream
// (seed.stream + r), and all reductions use fixed-order pairwise summation,
// so results are bit-identical no matter how rows are scheduled.
// ---------------------------------------------------------------------------

double pairwise_sum(const double* x, std::size_t n);
inline double pairwise_sum(const std::vector<double>& x) {
  return pairwise_sum(x.data(), x.size());
}

struct McEstimate {
  double mean = 0.0;
  double se = 0.0;
};

// Mean and standard error of the mean; two-pass, pairwise sums.
McEstimate mean_se(const double* x, std::size_t n);
inline McEstimate mean_se(const std::vector<double>& x) { return mean_se(x.data(), x.size()); }

// Fills a reps x width row-major table, one fn(rng, row_pointer) call per
// replicate. OpenMP across rows when enabled.
template <typename Fn>
std::vector<double> replicate_table(std::uint64_t reps, std::size_t width, SeedSpec seed,
                                    Fn&& fn, bool run_parallel = true) {
  std::vector<double> table(reps * width, 0.0);
  const auto n = static_cast<std::int64_t>(reps);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (run_parallel && n > 1)
#endif
  for (std::int64_t r = 0; r < n; ++r) {
    Rng rng(seed.seed, seed.stream + static_cast<std::uint64_t>(r));
    fn(rng, table.data() + static_cast<std::size_t>(r) * width);
  }
  (void)run_parallel;
  return table;
}

// Per-column mean and SE of a row-major table.
std::vector<McEstimate> column_stats(const std::vector<double>& table, std::uint64_t reps,
                                     std::size_t width);

// ---------------------------------------------------------------------------
// Single-coefficient Monte Carlo risk.
// ---------------------------------------------------------------------------

// MC estimate of E (T_lambda(theta + e) - theta)^2 under the given noise.
// Families without a variance are rejected (the risk may be infinite)
// unless allow_infinite_variance is set.
McEstimate mc_soft_risk(const NoiseSpec& noise, double lambda, double theta, std::uint64_t reps,
                        SeedSpec seed, bool allow_infinite_variance = false);

// ---------------------------------------------------------------------------
// Estimator pipelines over the sampled model X_i = f_i + e_i / sqrt(n).
// Risks are reported in coefficient space (equals sample space by
// orthonormality); the target pyramid is theta = forward_dwt(f).
// ---------------------------------------------------------------------------

enum class RuleKind { level_constant, universal, vertical_block };

struct PipelineConfig {
  bool prefilter = false;  // running median of width 2 prefilter_l + 1 first
  int prefilter_l = 0;
  Wavelet wavelet = Wavelet::daubechies4;
  int j0 = 0;
  RuleKind rule = RuleKind::level_constant;
  double C = 1.0;      // level_constant: lambda_j = C sigma sqrt(j - j0) / sqrt(n)
  double sigma = 1.0;  // noise scale the thresholds are calibrated for
  BlockConfig block;   // vertical_block; block.lambda_n in coefficient units

  // Stable estimator label for report rows, e.g. "med19+d4+level(C=1.5)".
  std::string id() const;
};

// Uniform plan lambda_j = universal_threshold(n) * sigma / sqrt(n).
ThresholdPlan universal_plan(std::uint64_t n, int j0, double sigma);

// The soft-threshold plan the pipeline applies at sample count n.
// vertical_block has no plan and is rejected here.
ThresholdPlan pipeline_plan(const PipelineConfig& pipe, std::uint64_t n);

// Exact risk of a soft-threshold plan in the Gaussian sequence model
// w = theta + sigma z / sqrt(n): the pass-through scaling block contributes
// 2^{j0} sigma^2 / n and each detail coefficient
// gaussian_soft_risk(sqrt(n) lambda_j / sigma, sqrt(n) theta / sigma) sigma^2 / n.
double exact_plan_risk(const CoeffPyramid& theta, const ThresholdPlan& plan, double sigma = 1.0);

struct RiskRow {
  std::uint64_t n = 0;
  std::string estimator;
  std::string adversary;
  double risk = 0.0;
  double se = 0.0;
  std::uint64_t reps = 0;
};

// MC risk of the pipeline against every adversary signal, one row each.
// Every replicate draws one noise realization shared by all adversaries.
std::vector<RiskRow> adversary_risks(const PipelineConfig& pipe, const BesovSpec& spec,
                                     std::uint64_t n, const NoiseSpec& noise, std::uint64_t reps,
                                     SeedSpec seed);

// Worst row of adversary_risks, relabeled adversary = "max".
RiskRow minimax_risk(const PipelineConfig& pipe, const BesovSpec& spec, std::uint64_t n,
                     const NoiseSpec& noise, std::uint64_t reps, SeedSpec seed);

// adversary_risks plus the "max" row for each n in turn; n_list entry i uses
// stream block seed.stream + i * reps so no two runs share a stream.
std::vector<RiskRow> rate_experiment(const PipelineConfig& pipe, const BesovSpec& spec,
                                     const std::vector<std::uint64_t>& n_list,
                                     const NoiseSpec& noise, std::uint64_t reps, SeedSpec seed);

// Candidate constants for the 1-d threshold search: a fixed geometric sweep
// over [0.5, 6].
std::vector<double> threshold_constant_grid();

// Best constant of threshold_constant_grid for the level-threshold pipeline
// on the adversary family: exact Gaussian risk when noise is gaussian with
// no prefilter, otherwise shared-noise MC with the given replicate budget.
double calibrate_constant(const PipelineConfig& pipe, const BesovSpec& spec, std::uint64_t n,
                          const NoiseSpec& noise, std::uint64_t reps, SeedSpec seed);

// ---------------------------------------------------------------------------
// Rate fitting.
// ---------------------------------------------------------------------------

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root mean square residual in log2 space
  std::size_t points = 0;
};

// Least squares of log2(risk) on log2(n). Requires >= 4 rows with distinct
// n, a single estimator label, and positive risks.
RateFit rate_fit(const std::vector<RiskRow>& rows);

// ---------------------------------------------------------------------------
// Gaussian-to-noise best-threshold risk ratio.
// ---------------------------------------------------------------------------

struct RatioResult {
  double gaussian_risk = 0.0;  // exact: best candidate plan, worst adversary
  double noise_risk = 0.0;     // MC: same search under the sampled noise
  double noise_se = 0.0;       // SE of the winning cell
  double ratio = 0.0;          // gaussian_risk / noise_risk
};

// Both sides search the same candidate plans (constant grid + universal).
// The noise must have a variance and is used without prefilter.
RatioResult gaussian_ratio_experiment(const NoiseSpec& noise, const BesovSpec& spec,
                                      std::uint64_t n, std::uint64_t reps, SeedSpec seed);

// ---------------------------------------------------------------------------
// Empirical verification of the probability bounds.
// ---------------------------------------------------------------------------

enum class TailBoundKind { kolmogorov, truncated_moment, d_dependent };

struct TailBoundConfig {
  TailBoundKind kind = TailBoundKind::kolmogorov;
  NoiseSpec base;                 // bounded summands only
  std::uint64_t n_summands = 0;   // N
  double x = 0.0;                 // kolmogorov: P(S >= s_n x); d_dependent: P(S >= x)
  double a = 0.0;                 // truncated_moment: E S^2 1{S > a}, 0 < a < a_n
  double a_n = 0.0;
  int D = 1;                      // d_dependent window width, odd
};

struct TailBoundResult {
  double empirical = 0.0;
  double se = 0.0;
  double bound = 0.0;
  bool pass = false;  // empirical <= bound + 3 se
};

// kolmogorov:       S = sum of N i.i.d. draws / sqrt(N); bounded-summand
//                   exponential bound with the two-branch exponent.
// truncated_moment: same S (unit scale required); truncated second moment
//                   against (a^2+2)/k_n exp(-k_n a^2 / 2) plus the exact
//                   (8 + 32 K_n^2) exp(-1/(4 K_n^2)) remainder.
// d_dependent:      S = sum of N width-D moving medians of bernoulli_sym
//                   draws; bound D exp(-x^2/(4 D^2 sigma_max^2)) in the
//                   small-deviation branch, D exp(-x/(4KD)) beyond.
TailBoundResult tail_bound_check(const TailBoundConfig& cfg, std::uint64_t reps, SeedSpec seed);

struct SandwichResult {
  double estimate = 0.0;
  double se = 0.0;
  double lower = 0.0;  // min(3, m4)
  double upper = 0.0;  // max(3, m4)
  bool pass = false;   // estimate inside [lower - 4 se, upper + 4 se]
};

// MC estimate of E (sum_i a_i e_i)^4 for unit-l2 weights against the
// [min(3, m4), max(3, m4)] sandwich.
SandwichResult fourth_moment_sandwich(const std::vector<double>& weights, const NoiseSpec& base,
                                      std::uint64_t reps, SeedSpec seed);

// ---------------------------------------------------------------------------
// Sliding-max estimator.
// ---------------------------------------------------------------------------

// fhat_i = max(X_i .. X_{i+M-1}) - c for i <= n - M, then constant on the
// last M - 1 positions. M = 1, c = 0 is the identity.
Signal max_estimator(const Signal& x, int M, double c);

// MC estimate of E sum_i (fhat_i - f_i)^2 in the model X = f + e / sqrt(n),
// with c = c_M / sqrt(n) taken from max_statistics of the noise.
McEstimate max_estimator_risk(const Signal& f, const NoiseSpec& noise, int M, std::uint64_t reps,
                              SeedSpec seed);

// ---------------------------------------------------------------------------
// Moderate-deviation diagnostic.
// ---------------------------------------------------------------------------

struct ProbeRow {
  double x = 0.0;
  double ratio = 0.0;
  double se = 0.0;
};

// Empirical-to-Gaussian tail ratio of S = sum_i w_i e_i at each grid point:
// P(S <= x)/Phi(x) for x <= 0 and P(S > x)/(1 - Phi(x)) for x > 0. Every x
// must sit in the window |x| <= 0.8 sqrt(2 log(1/M3)) with
// M3 = sum |w_i|^3 E|e|^3; the bracket-to-1 behavior only holds there.
std::vector<ProbeRow> deviation_ratio_probe(const std::vector<double>& weights,
                                            const NoiseSpec& base,
                                            const std::vector<double>& x_grid, std::uint64_t reps,
                                            SeedSpec seed);

}  // namespace waverisk
