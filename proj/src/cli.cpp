#include "waverisk/cli.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "waverisk/besov.hpp"
#include "waverisk/config.hpp"
#include "waverisk/errors.hpp"
#include "waverisk/io.hpp"
#include "waverisk/median.hpp"
#include "waverisk/risk.hpp"
#include "waverisk/threshold.hpp"
#include "waverisk/wavelet.hpp"

namespace waverisk {
namespace {

void apply_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

void note(const std::string& line) { std::fprintf(stderr, "# %s\n", line.c_str()); }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool dyadic(std::uint64_t n) { return n >= 2 && (n & (n - 1)) == 0; }

// In-place auto threshold for the vertical block rule: lambda_n = 0 in a
// config means "universal threshold at this n". sigma_eff carries the same
// units convention as universal_plan, so the resulting coefficient-space
// lambda is universal_threshold(n) * sigma_eff / sqrt(n).
void resolve_block_lambda(PipelineConfig& pipe, std::uint64_t n, double sigma_eff) {
  if (pipe.rule == RuleKind::vertical_block && pipe.block.lambda_n == 0.0)
    pipe.block.lambda_n = universal_threshold(n) * sigma_eff / std::sqrt(double(n));
}

// ---------------------------------------------------------------------------
// denoise
// ---------------------------------------------------------------------------

int run_denoise(const std::string& input, const std::string& config_path, std::string out,
                int threads) {
  apply_threads(threads);
  ExperimentConfig cfg = load_config(config_path);
  Signal x = read_signal(input);
  const std::uint64_t n = x.size();
  if (!dyadic(n))
    throw data_error(input + ": signal length " + std::to_string(n) +
                     " is not a power of two >= 2");
  if ((n >> cfg.ball.j0) < 2)
    throw data_error(input + ": signal of length " + std::to_string(n) +
                     " is too short for coarse level " + std::to_string(cfg.ball.j0));
  if (out.empty()) out = input + ".denoised";

  PipelineConfig pipe = cfg.pipe;
  if (pipe.prefilter) {
    x = median_filter(x, pipe.prefilter_l);
    note("median prefilter width " + std::to_string(2 * pipe.prefilter_l + 1));
  }

  // Config sigma is the per-sample noise standard deviation of the input,
  // so thresholds live in data units: lambda_j = C sigma sqrt(j - j0) for
  // the level rule and universal_threshold(n) sigma for the universal one.
  const double sigma_eff = pipe.sigma * std::sqrt(double(n));
  const WaveletSpec w = WaveletSpec::make(pipe.wavelet);
  const CoeffPyramid noisy = forward_dwt(x, w, pipe.j0);

  CoeffPyramid est;
  std::string sidecar_path;
  std::string sidecar;
  if (pipe.rule == RuleKind::vertical_block) {
    resolve_block_lambda(pipe, n, sigma_eff);
    auto [kept, mask] = vertical_block_estimate(noisy, pipe.block);
    est = std::move(kept);
    sidecar_path = out + ".mask.csv";
    sidecar = format_mask_csv(mask);
    note("block rule lambda " + fmt(pipe.block.lambda_n) + ", kept " +
         std::to_string(mask.kept_count()) + " of " + std::to_string(noisy.coeff_count()) +
         " coefficients");
  } else {
    PipelineConfig scaled = pipe;
    scaled.sigma = sigma_eff;
    const ThresholdPlan plan = pipeline_plan(scaled, n);
    est = apply_plan(noisy, plan);
    sidecar_path = out + ".pyramid.csv";
    sidecar = format_pyramid_csv(est);
  }

  const Signal y = inverse_dwt(est, w);
  write_text_atomic(out, format_signal(y));
  write_text_atomic(sidecar_path, sidecar);
  note("wrote " + out + " and " + sidecar_path);
  return 0;
}

// ---------------------------------------------------------------------------
// experiment
// ---------------------------------------------------------------------------

RiskRow max_of(const std::vector<RiskRow>& rows) {
  RiskRow best = rows.front();
  for (const auto& r : rows)
    if (r.risk > best.risk) best = r;
  best.adversary = "max";
  return best;
}

int run_experiment(ExperimentConfig cfg) {
  apply_threads(cfg.threads);

  // Calibration consumes its own stream block past everything the main run
  // can touch, so adding or removing it never shifts the experiment draws.
  if (cfg.calibrate_n > 0) {
    const SeedSpec cal_seed{cfg.seed.seed,
                            cfg.seed.stream + cfg.n_list.size() * cfg.reps + (1ull << 32)};
    const double c = calibrate_constant(cfg.pipe, cfg.ball, cfg.calibrate_n, cfg.noise, cfg.reps,
                                        cal_seed);
    cfg.pipe.C = c;
    note("calibrated C = " + fmt(c) + " at n = " + std::to_string(cfg.calibrate_n));
  }

  std::vector<RiskRow> rows;
  std::string footer;
  if (cfg.kind == "minimax") {
    const std::uint64_t n = cfg.n_list.front();
    resolve_block_lambda(cfg.pipe, n, cfg.pipe.sigma);
    rows = adversary_risks(cfg.pipe, cfg.ball, n, cfg.noise, cfg.reps, cfg.seed);
    rows.push_back(max_of(rows));
    note("minimax n = " + std::to_string(n) + ": risk " + fmt(rows.back().risk) + " (se " +
         fmt(rows.back().se) + ") at adversary sweep of " + std::to_string(rows.size() - 1));
  } else if (cfg.kind == "rate") {
    rows = rate_experiment(cfg.pipe, cfg.ball, cfg.n_list, cfg.noise, cfg.reps, cfg.seed);
    std::vector<RiskRow> maxes;
    for (const auto& r : rows)
      if (r.adversary == "max") maxes.push_back(r);
    for (const auto& r : maxes)
      note("n = " + std::to_string(r.n) + ": max risk " + fmt(r.risk) + " (se " + fmt(r.se) + ")");
    const RateFit fit = rate_fit(maxes);
    footer = format_rate_fit_footer({fit});
    note("fitted slope " + fmt(fit.slope) + " over " + std::to_string(fit.points) + " points");
  } else {  // ratio
    const std::uint64_t n = cfg.n_list.front();
    const RatioResult r = gaussian_ratio_experiment(cfg.noise, cfg.ball, n, cfg.reps, cfg.seed);
    rows.push_back({n, "best-plan+gaussian", "max", r.gaussian_risk, 0.0, cfg.reps});
    rows.push_back({n, "best-plan+" + cfg.noise.to_string(), "max", r.noise_risk, r.noise_se,
                    cfg.reps});
    footer = "# ratio," + fmt(r.ratio) + "\n";
    note("gaussian/noise risk ratio " + fmt(r.ratio) + " at n = " + std::to_string(n));
  }

  write_text_atomic(cfg.out, format_report_csv(rows) + footer);
  note("wrote " + cfg.out);
  return 0;
}

// ---------------------------------------------------------------------------
// verify-bounds
// ---------------------------------------------------------------------------

int run_verify_bounds(std::uint64_t reps, SeedSpec seed, const std::string& out, int threads) {
  apply_threads(threads);

  struct Line {
    std::string name;
    double estimate, se, lower, upper;
    bool pass;
  };
  std::vector<Line> lines;
  std::uint64_t stream = seed.stream;
  const auto next = [&] { return SeedSpec{seed.seed, stream++}; };

  const auto tail = [&](const std::string& name, const TailBoundConfig& cfg) {
    const TailBoundResult r = tail_bound_check(cfg, reps, next());
    lines.push_back({name, r.empirical, r.se, 0.0, r.bound, r.pass});
  };
  const auto sandwich = [&](const std::string& name, const NoiseSpec& base) {
    const std::vector<double> w(64, 1.0 / 8.0);
    const SandwichResult r = fourth_moment_sandwich(w, base, reps, next());
    lines.push_back({name, r.estimate, r.se, r.lower, r.upper, r.pass});
  };

  TailBoundConfig k1;
  k1.kind = TailBoundKind::kolmogorov;
  k1.base = NoiseSpec{NoiseFamily::bernoulli_sym};
  k1.n_summands = 400;
  k1.x = 2.0;
  tail("kolmogorov_bernoulli_N400_x2", k1);

  TailBoundConfig k2 = k1;
  k2.base = NoiseSpec{NoiseFamily::uniform_sym};
  tail("kolmogorov_uniform_N400_x2", k2);

  TailBoundConfig t;
  t.kind = TailBoundKind::truncated_moment;
  t.base = NoiseSpec{NoiseFamily::bernoulli_sym};
  t.n_summands = 400;
  t.a = 2.0;
  t.a_n = 2.5;
  tail("truncated_moment_bernoulli_N400", t);

  TailBoundConfig d;
  d.kind = TailBoundKind::d_dependent;
  d.base = NoiseSpec{NoiseFamily::bernoulli_sym};
  d.n_summands = 300;
  d.D = 3;
  d.x = 90.0;
  tail("dependent_median_sum_D3_N300", d);

  sandwich("fourth_moment_gaussian_64", NoiseSpec{NoiseFamily::gaussian});
  sandwich("fourth_moment_bernoulli_64", NoiseSpec{NoiseFamily::bernoulli_sym});
  sandwich("fourth_moment_uniform_64", NoiseSpec{NoiseFamily::uniform_sym});

  std::string csv = "check,estimate,se,lower,upper,pass\n";
  bool all_pass = true;
  for (const auto& l : lines) {
    csv += l.name + "," + fmt(l.estimate) + "," + fmt(l.se) + "," + fmt(l.lower) + "," +
           fmt(l.upper) + "," + (l.pass ? "1" : "0") + "\n";
    note(l.name + ": " + (l.pass ? "pass" : "FAIL") + " (estimate " + fmt(l.estimate) + ")");
    all_pass = all_pass && l.pass;
  }
  write_text_atomic(out, csv);
  note("wrote " + out);
  if (!all_pass) throw numeric_error("verify-bounds: at least one bound check failed");
  return 0;
}

// ---------------------------------------------------------------------------
// rate-fit
// ---------------------------------------------------------------------------

int run_rate_fit(const std::string& report_path, const std::string& out) {
  const auto rows = read_report_csv(report_path);
  std::vector<RiskRow> maxes;
  for (const auto& r : rows)
    if (r.adversary == "max") maxes.push_back(r);
  if (maxes.size() < 4)
    throw data_error(report_path + ": need at least 4 rows with adversary \"max\", found " +
                     std::to_string(maxes.size()));
  std::set<std::uint64_t> ns;
  std::set<std::string> estimators;
  for (const auto& r : maxes) {
    if (!(r.risk > 0.0) || !std::isfinite(r.risk))
      throw data_error(report_path + ": nonpositive risk in max row for n = " +
                       std::to_string(r.n));
    ns.insert(r.n);
    estimators.insert(r.estimator);
  }
  if (ns.size() != maxes.size()) throw data_error(report_path + ": duplicate n among max rows");
  if (estimators.size() != 1)
    throw data_error(report_path + ": max rows mix estimator labels");

  const RateFit fit = rate_fit(maxes);
  const std::string footer = format_rate_fit_footer({fit});
  if (out.empty()) {
    std::fputs(footer.c_str(), stdout);
  } else {
    write_text_atomic(out, footer);
    note("wrote " + out);
  }
  note("slope " + fmt(fit.slope) + ", intercept " + fmt(fit.intercept) + ", residual " +
       fmt(fit.residual));
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"wavelet soft-threshold denoiser and risk laboratory"};
  app.require_subcommand(1);

  std::string den_input, den_config, den_out;
  int den_threads = 0;
  auto* den = app.add_subcommand("denoise", "apply the configured pipeline to a signal file");
  den->add_option("input", den_input, "one sample per line, dyadic length")->required();
  den->add_option("config", den_config, "pipeline configuration file")->required();
  den->add_option("--out", den_out, "output signal path (default: <input>.denoised)");
  den->add_option("--threads", den_threads, "worker thread cap (0 = library default)");

  std::string exp_config, exp_out;
  std::uint64_t exp_seed = 0, exp_reps = 0;
  int exp_threads = 0;
  auto* exp = app.add_subcommand("experiment", "run a configured risk experiment");
  exp->add_option("config", exp_config, "experiment configuration file")->required();
  exp->add_option("--seed", exp_seed, "override the configured seed");
  exp->add_option("--reps", exp_reps, "override the configured replicate count");
  exp->add_option("--out", exp_out, "override the configured report path");
  exp->add_option("--threads", exp_threads, "override the configured thread cap");

  std::uint64_t vb_reps = 1000000, vb_seed = 0;
  std::string vb_out = "bounds.csv";
  int vb_threads = 0;
  auto* vb = app.add_subcommand("verify-bounds",
                                "check the tail and fourth-moment bounds empirically");
  vb->add_option("--reps", vb_reps, "replicates per check (default 1000000)");
  vb->add_option("--seed", vb_seed, "base seed");
  vb->add_option("--out", vb_out, "result table path (default bounds.csv)");
  vb->add_option("--threads", vb_threads, "worker thread cap");

  std::string rf_report, rf_out;
  auto* rf = app.add_subcommand("rate-fit", "fit a log2 slope to an existing report");
  rf->add_option("report", rf_report, "report produced by the experiment subcommand")->required();
  rf->add_option("--out", rf_out, "write the fit here instead of standard output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (den->parsed()) return run_denoise(den_input, den_config, den_out, den_threads);
    if (exp->parsed()) {
      ExperimentConfig cfg = load_config(exp_config);
      if (exp->count("--seed")) cfg.seed = SeedSpec{exp_seed, 0};
      if (exp->count("--reps")) {
        if (exp_reps == 0) throw config_error("--reps: replicate count must be positive");
        cfg.reps = exp_reps;
      }
      if (exp->count("--out")) cfg.out = exp_out;
      if (exp->count("--threads")) cfg.threads = exp_threads;
      return run_experiment(std::move(cfg));
    }
    if (vb->parsed()) return run_verify_bounds(vb_reps, SeedSpec{vb_seed, 0}, vb_out, vb_threads);
    if (rf->parsed()) return run_rate_fit(rf_report, rf_out);
  } catch (const config_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const data_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const numeric_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
  return 1;  // unreachable: require_subcommand guarantees one branch parsed
}

}  // namespace waverisk
