#include "waverisk/risk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "waverisk/errors.hpp"
#include "waverisk/median.hpp"
#include "waverisk/normal.hpp"

namespace waverisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Largest |value| the family can produce; the K of the exponential bounds.
double support_bound(const NoiseSpec& s) {
  switch (s.family) {
    case NoiseFamily::bernoulli_sym: return s.scale;
    case NoiseFamily::uniform_sym: return s.scale * 1.7320508075688772;
    default:
      throw std::invalid_argument("tail_bound_check: bounded summands required");
  }
}

void add_in_place(CoeffPyramid& w, const CoeffPyramid& z) {
  for (std::size_t i = 0; i < w.scaling.size(); ++i) w.scaling[i] += z.scaling[i];
  for (std::size_t j = 0; j < w.details.size(); ++j)
    for (std::size_t k = 0; k < w.details[j].size(); ++k) w.details[j][k] += z.details[j][k];
}

void scale_in_place(CoeffPyramid& p, double c) {
  for (auto& v : p.scaling) v *= c;
  for (auto& lv : p.details)
    for (auto& v : lv) v *= c;
}

double sq_dist(const CoeffPyramid& a, const CoeffPyramid& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.scaling.size(); ++i) {
    const double d = a.scaling[i] - b.scaling[i];
    acc += d * d;
  }
  for (std::size_t j = 0; j < a.details.size(); ++j)
    for (std::size_t k = 0; k < a.details[j].size(); ++k) {
      const double d = a.details[j][k] - b.details[j][k];
      acc += d * d;
    }
  return acc;
}

// One column group of the MC grid: either a soft-threshold plan or the
// vertical block rule.
struct CandidateRule {
  bool is_block = false;
  ThresholdPlan plan;
  BlockConfig block;
};

double rule_loss(const CoeffPyramid& w, const CoeffPyramid& theta, const CandidateRule& rule) {
  if (rule.is_block) {
    const auto fit = vertical_block_estimate(w, rule.block);
    return sq_dist(fit.first, theta);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < w.scaling.size(); ++i) {
    const double d = w.scaling[i] - theta.scaling[i];
    acc += d * d;
  }
  for (int j = theta.j0; j < theta.h; ++j) {
    double lam = rule.plan.lambda[std::size_t(j - theta.j0)];
    if (rule.plan.discard_above && j > *rule.plan.discard_above) lam = kInf;
    const auto& wv = w.level(j);
    const auto& tv = theta.level(j);
    for (std::size_t k = 0; k < wv.size(); ++k) {
      const double d = soft_threshold(wv[k], lam) - tv[k];
      acc += d * d;
    }
  }
  return acc;
}

// Shared-noise MC over adversaries x rules. Each replicate draws one noise
// realization; without the prefilter it enters additively in coefficient
// space, with it each adversary's sampled signal is filtered then analyzed.
std::vector<McEstimate> mc_rule_grid(const PipelineConfig& pipe,
                                     const std::vector<std::pair<std::string, CoeffPyramid>>& advs,
                                     const std::vector<CandidateRule>& rules, std::uint64_t n,
                                     const NoiseSpec& noise, std::uint64_t reps, SeedSpec seed) {
  const WaveletSpec wav = WaveletSpec::make(pipe.wavelet);
  const double rootn = std::sqrt(static_cast<double>(n));
  std::vector<Signal> targets;
  if (pipe.prefilter)
    for (const auto& a : advs) targets.push_back(inverse_dwt(a.second, wav));

  const std::size_t width = advs.size() * rules.size();
  const auto table = replicate_table(reps, width, seed, [&](Rng& rng, double* row) {
    Signal e(n);
    sample_into(noise, e, rng);
    if (!pipe.prefilter) {
      CoeffPyramid z = forward_dwt(e, wav, pipe.j0);
      scale_in_place(z, 1.0 / rootn);
      CoeffPyramid w;
      for (std::size_t a = 0; a < advs.size(); ++a) {
        w = advs[a].second;
        add_in_place(w, z);
        for (std::size_t p = 0; p < rules.size(); ++p)
          row[a * rules.size() + p] = rule_loss(w, advs[a].second, rules[p]);
      }
    } else {
      Signal x(n);
      for (std::size_t a = 0; a < advs.size(); ++a) {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = targets[a][i] + e[i] / rootn;
        const Signal med = median_filter_serial(x, pipe.prefilter_l);
        const CoeffPyramid w = forward_dwt(med, wav, pipe.j0);
        for (std::size_t p = 0; p < rules.size(); ++p)
          row[a * rules.size() + p] = rule_loss(w, advs[a].second, rules[p]);
      }
    }
  });
  return column_stats(table, reps, width);
}

CandidateRule pipeline_rule(const PipelineConfig& pipe, std::uint64_t n) {
  CandidateRule rule;
  if (pipe.rule == RuleKind::vertical_block) {
    rule.is_block = true;
    rule.block = pipe.block;
  } else {
    rule.plan = pipeline_plan(pipe, n);
  }
  return rule;
}

void check_risk_inputs(const PipelineConfig& pipe, const BesovSpec& spec, const NoiseSpec& noise,
                       std::uint64_t reps) {
  spec.validate();
  noise.validate();
  if (pipe.j0 != spec.j0)
    throw std::invalid_argument("risk experiment: pipeline j0 must match the ball's j0");
  if (pipe.prefilter && pipe.prefilter_l < 0)
    throw std::invalid_argument("risk experiment: prefilter_l must be >= 0");
  if (reps < 2) throw std::invalid_argument("risk experiment: needs reps >= 2 for an SE");
  if (!noise.has_variance() && !pipe.prefilter)
    throw numeric_error(
        "risk experiment: noise without a variance needs the median prefilter; "
        "the raw risk may be infinite");
}

RiskRow max_row(const std::vector<RiskRow>& rows) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].risk > rows[best].risk) best = i;
  RiskRow out = rows[best];
  out.adversary = "max";
  return out;
}

}  // namespace

double gaussian_soft_risk(double lambda, double theta) {
  if (!(lambda >= 0.0))
    throw std::invalid_argument("gaussian_soft_risk: lambda must be >= 0");
  const double t = std::fabs(theta);
  if (!std::isfinite(t)) throw std::invalid_argument("gaussian_soft_risk: theta must be finite");
  if (std::isinf(lambda)) return t * t;
  // Piecewise expectation: theta^2 over the dead zone plus the two analytic
  // tail integrals of (x -+ lambda)^2 against the normal density.
  const double lo = lambda - t;
  const double hi = lambda + t;
  const double dead = t * t * (norm_cdf(lo) - norm_cdf(-hi));
  const double upper = (1.0 + lambda * lambda) * norm_upper(lo) - (lambda + t) * norm_pdf(lo);
  const double lower = (1.0 + lambda * lambda) * norm_upper(hi) + (t - lambda) * norm_pdf(hi);
  return dead + upper + lower;
}

double pure_noise_threshold(double target) {
  if (!(target > 0.0) || !(target <= 1.0))
    throw std::invalid_argument("pure_noise_threshold: target must be in (0, 1]");
  if (target == 1.0) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (gaussian_soft_risk(hi, 0.0) > target) hi *= 2.0;
  double t = std::min(hi, std::sqrt(2.0 * std::log(1.0 / target)));
  for (int iter = 0; iter < 200; ++iter) {
    const double p = gaussian_soft_risk(t, 0.0);
    if (std::fabs(p - target) <= 1e-13 * target) return t;
    if (p > target) lo = t; else hi = t;
    const double dp = 4.0 * (t * norm_upper(t) - norm_pdf(t));  // d/dt of the pure-noise risk
    double next = t - (p - target) / dp;
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  return t;
}

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

McEstimate mean_se(const double* x, std::size_t n) {
  if (n == 0) throw std::invalid_argument("mean_se: empty sample");
  McEstimate out;
  out.mean = pairwise_sum(x, n) / static_cast<double>(n);
  if (n == 1) return out;
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - out.mean;
    sq[i] = d * d;
  }
  const double ss = pairwise_sum(sq.data(), n);
  out.se = std::sqrt(ss / (static_cast<double>(n) * static_cast<double>(n - 1)));
  return out;
}

std::vector<McEstimate> column_stats(const std::vector<double>& table, std::uint64_t reps,
                                     std::size_t width) {
  if (width == 0 || table.size() != reps * width)
    throw std::invalid_argument("column_stats: table shape mismatch");
  std::vector<McEstimate> out(width);
  std::vector<double> col(reps);
  for (std::size_t c = 0; c < width; ++c) {
    for (std::uint64_t r = 0; r < reps; ++r) col[r] = table[r * width + c];
    out[c] = mean_se(col.data(), col.size());
  }
  return out;
}

McEstimate mc_soft_risk(const NoiseSpec& noise, double lambda, double theta, std::uint64_t reps,
                        SeedSpec seed, bool allow_infinite_variance) {
  noise.validate();
  if (!(lambda >= 0.0)) throw std::invalid_argument("mc_soft_risk: lambda must be >= 0");
  if (reps < 100) throw std::invalid_argument("mc_soft_risk: reps must be >= 100");
  if (!noise.has_variance() && !allow_infinite_variance)
    throw numeric_error(
        "mc_soft_risk: noise has no variance so the risk may be infinite; "
        "set allow_infinite_variance to force the run");
  const auto table = replicate_table(reps, 1, seed, [&](Rng& rng, double* row) {
    const double d = soft_threshold(theta + draw(noise, rng), lambda) - theta;
    row[0] = d * d;
  });
  return mean_se(table);
}

std::string PipelineConfig::id() const {
  std::ostringstream out;
  if (prefilter) out << "med" << (2 * prefilter_l + 1) << "+";
  out << (wavelet == Wavelet::haar ? "haar" : "d4") << "+";
  switch (rule) {
    case RuleKind::level_constant: out << "level(C=" << C << ")"; break;
    case RuleKind::universal: out << "universal"; break;
    case RuleKind::vertical_block: out << "block(J=" << block.J << ")"; break;
  }
  return out.str();
}

ThresholdPlan universal_plan(std::uint64_t n, int j0, double sigma) {
  ThresholdPlan plan = level_thresholds(n, j0, 1.0, sigma);
  const double lam = universal_threshold(n) * sigma / std::sqrt(static_cast<double>(n));
  for (auto& v : plan.lambda) v = lam;
  return plan;
}

ThresholdPlan pipeline_plan(const PipelineConfig& pipe, std::uint64_t n) {
  switch (pipe.rule) {
    case RuleKind::level_constant: return level_thresholds(n, pipe.j0, pipe.C, pipe.sigma);
    case RuleKind::universal: return universal_plan(n, pipe.j0, pipe.sigma);
    case RuleKind::vertical_block: break;
  }
  throw std::invalid_argument("pipeline_plan: the vertical block rule has no threshold plan");
}

double exact_plan_risk(const CoeffPyramid& theta, const ThresholdPlan& plan, double sigma) {
  validate(theta);
  if (plan.j0 != theta.j0 || plan.lambda.size() != static_cast<std::size_t>(theta.levels()))
    throw std::invalid_argument("exact_plan_risk: plan shape does not match the pyramid");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("exact_plan_risk: sigma must be positive and finite");
  const double n = static_cast<double>(theta.coeff_count());
  const double rootn = std::sqrt(n);
  const double unit = sigma * sigma / n;  // risk of one pass-through coefficient
  double total = static_cast<double>(theta.scaling.size()) * unit;
  for (int j = theta.j0; j < theta.h; ++j) {
    double lam = plan.lambda[std::size_t(j - theta.j0)];
    if (plan.discard_above && j > *plan.discard_above) lam = kInf;
    const double lam_u = lam * rootn / sigma;
    // Adversary levels are constant in |theta|, so one risk evaluation per
    // distinct magnitude covers the whole level.
    double cached_t = -1.0;
    double cached_p = 0.0;
    for (const double th : theta.level(j)) {
      const double tu = std::fabs(th) * rootn / sigma;
      if (tu != cached_t) {
        cached_p = gaussian_soft_risk(lam_u, tu);
        cached_t = tu;
      }
      total += cached_p * unit;
    }
  }
  return total;
}

std::vector<RiskRow> adversary_risks(const PipelineConfig& pipe, const BesovSpec& spec,
                                     std::uint64_t n, const NoiseSpec& noise, std::uint64_t reps,
                                     SeedSpec seed) {
  check_risk_inputs(pipe, spec, noise, reps);
  const double fam_c = pipe.rule == RuleKind::level_constant ? pipe.C : 1.0;
  const auto advs = adversary_signals(spec, n, fam_c);
  const std::vector<CandidateRule> rules = {pipeline_rule(pipe, n)};
  const auto cells = mc_rule_grid(pipe, advs, rules, n, noise, reps, seed);
  std::vector<RiskRow> rows;
  rows.reserve(advs.size());
  for (std::size_t a = 0; a < advs.size(); ++a)
    rows.push_back({n, pipe.id(), advs[a].first, cells[a].mean, cells[a].se, reps});
  return rows;
}

RiskRow minimax_risk(const PipelineConfig& pipe, const BesovSpec& spec, std::uint64_t n,
                     const NoiseSpec& noise, std::uint64_t reps, SeedSpec seed) {
  return max_row(adversary_risks(pipe, spec, n, noise, reps, seed));
}

std::vector<RiskRow> rate_experiment(const PipelineConfig& pipe, const BesovSpec& spec,
                                     const std::vector<std::uint64_t>& n_list,
                                     const NoiseSpec& noise, std::uint64_t reps, SeedSpec seed) {
  if (n_list.empty()) throw std::invalid_argument("rate_experiment: empty n list");
  std::vector<RiskRow> rows;
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const SeedSpec block{seed.seed, seed.stream + static_cast<std::uint64_t>(i) * reps};
    auto part = adversary_risks(pipe, spec, n_list[i], noise, reps, block);
    part.push_back(max_row(part));
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

std::vector<double> threshold_constant_grid() {
  std::vector<double> grid(16);
  const double ratio = std::pow(6.0 / 0.5, 1.0 / 15.0);
  double c = 0.5;
  for (auto& v : grid) {
    v = c;
    c *= ratio;
  }
  return grid;
}

double calibrate_constant(const PipelineConfig& pipe, const BesovSpec& spec, std::uint64_t n,
                          const NoiseSpec& noise, std::uint64_t reps, SeedSpec seed) {
  if (pipe.rule != RuleKind::level_constant)
    throw std::invalid_argument("calibrate_constant: only the level-threshold rule has a C");
  check_risk_inputs(pipe, spec, noise, reps);
  const auto grid = threshold_constant_grid();
  const auto advs = adversary_signals(spec, n, 1.0);

  std::vector<double> worst(grid.size(), 0.0);
  if (noise.family == NoiseFamily::gaussian && !pipe.prefilter) {
    for (std::size_t c = 0; c < grid.size(); ++c) {
      const ThresholdPlan plan = level_thresholds(n, pipe.j0, grid[c], pipe.sigma);
      for (const auto& a : advs)
        worst[c] = std::max(worst[c], exact_plan_risk(a.second, plan, noise.scale));
    }
  } else {
    std::vector<CandidateRule> rules(grid.size());
    for (std::size_t c = 0; c < grid.size(); ++c)
      rules[c].plan = level_thresholds(n, pipe.j0, grid[c], pipe.sigma);
    const auto cells = mc_rule_grid(pipe, advs, rules, n, noise, reps, seed);
    for (std::size_t a = 0; a < advs.size(); ++a)
      for (std::size_t c = 0; c < grid.size(); ++c)
        worst[c] = std::max(worst[c], cells[a * grid.size() + c].mean);
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < grid.size(); ++c)
    if (worst[c] < worst[best]) best = c;
  return grid[best];
}

RateFit rate_fit(const std::vector<RiskRow>& rows) {
  if (rows.size() < 4) throw std::invalid_argument("rate_fit: needs at least 4 rows");
  std::vector<double> xs, ys;
  std::vector<std::uint64_t> seen;
  for (const auto& row : rows) {
    if (row.estimator != rows.front().estimator)
      throw std::invalid_argument("rate_fit: rows must share one estimator");
    if (std::find(seen.begin(), seen.end(), row.n) != seen.end())
      throw std::invalid_argument("rate_fit: duplicate sample count");
    seen.push_back(row.n);
    if (!(row.risk > 0.0) || !std::isfinite(row.risk))
      throw numeric_error("rate_fit: risks must be positive and finite to fit in log space");
    xs.push_back(std::log2(static_cast<double>(row.n)));
    ys.push_back(std::log2(row.risk));
  }
  const double k = static_cast<double>(xs.size());
  const double xbar = pairwise_sum(xs) / k;
  const double ybar = pairwise_sum(ys) / k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
  }
  RateFit fit;
  fit.points = xs.size();
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / k);
  return fit;
}

RatioResult gaussian_ratio_experiment(const NoiseSpec& noise, const BesovSpec& spec,
                                      std::uint64_t n, std::uint64_t reps, SeedSpec seed) {
  spec.validate();
  noise.validate();
  if (!noise.has_variance())
    throw numeric_error("gaussian_ratio_experiment: noise must have a variance");
  PipelineConfig pipe;
  pipe.wavelet = Wavelet::daubechies4;
  pipe.j0 = spec.j0;
  pipe.sigma = noise.scale;
  check_risk_inputs(pipe, spec, noise, reps);

  const auto grid = threshold_constant_grid();
  std::vector<CandidateRule> rules(grid.size() + 1);
  for (std::size_t c = 0; c < grid.size(); ++c)
    rules[c].plan = level_thresholds(n, spec.j0, grid[c], noise.scale);
  rules[grid.size()].plan = universal_plan(n, spec.j0, noise.scale);

  const auto advs = adversary_signals(spec, n, 1.0);

  RatioResult out;
  out.gaussian_risk = kInf;
  for (const auto& rule : rules) {
    double worst = 0.0;
    for (const auto& a : advs)
      worst = std::max(worst, exact_plan_risk(a.second, rule.plan, noise.scale));
    out.gaussian_risk = std::min(out.gaussian_risk, worst);
  }

  const auto cells = mc_rule_grid(pipe, advs, rules, n, noise, reps, seed);
  out.noise_risk = kInf;
  for (std::size_t p = 0; p < rules.size(); ++p) {
    double worst = 0.0;
    double worst_se = 0.0;
    for (std::size_t a = 0; a < advs.size(); ++a) {
      const auto& cell = cells[a * rules.size() + p];
      if (cell.mean > worst) {
        worst = cell.mean;
        worst_se = cell.se;
      }
    }
    if (worst < out.noise_risk) {
      out.noise_risk = worst;
      out.noise_se = worst_se;
    }
  }
  out.ratio = out.gaussian_risk / out.noise_risk;
  return out;
}

TailBoundResult tail_bound_check(const TailBoundConfig& cfg, std::uint64_t reps, SeedSpec seed) {
  cfg.base.validate();
  if (reps < 100) throw std::invalid_argument("tail_bound_check: reps must be >= 100");
  if (cfg.n_summands < 1) throw std::invalid_argument("tail_bound_check: needs summands");
  const double rootN = std::sqrt(static_cast<double>(cfg.n_summands));

  TailBoundResult out;
  std::vector<double> table;
  switch (cfg.kind) {
    case TailBoundKind::kolmogorov: {
      const double K = support_bound(cfg.base) / rootN;
      const double s_n = cfg.base.scale;
      if (!(cfg.x >= 0.0)) throw std::invalid_argument("tail_bound_check: x must be >= 0");
      out.bound = cfg.x <= s_n / K
                      ? std::exp(-0.5 * cfg.x * cfg.x * (1.0 - cfg.x * K / (2.0 * s_n)))
                      : std::exp(-cfg.x * s_n / (4.0 * K));
      const double thresh = s_n * cfg.x;
      table = replicate_table(reps, 1, seed, [&](Rng& rng, double* row) {
        double s = 0.0;
        for (std::uint64_t i = 0; i < cfg.n_summands; ++i) s += draw(cfg.base, rng);
        row[0] = s / rootN >= thresh ? 1.0 : 0.0;
      });
      break;
    }
    case TailBoundKind::truncated_moment: {
      if (cfg.base.scale != 1.0)
        throw std::invalid_argument(
            "tail_bound_check: truncated_moment requires unit scale (the row is normalized)");
      const double K_n = support_bound(cfg.base) / rootN;
      const double k_n = 1.0 - cfg.a_n * K_n / 2.0;
      if (!(cfg.a > 0.0) || !(cfg.a < cfg.a_n))
        throw std::invalid_argument("tail_bound_check: needs 0 < a < a_n");
      if (!(k_n > 0.0))
        throw std::invalid_argument("tail_bound_check: needs k_n = 1 - a_n K_n / 2 > 0");
      out.bound = (cfg.a * cfg.a + 2.0) / k_n * std::exp(-k_n * cfg.a * cfg.a / 2.0) +
                  (8.0 + 32.0 * K_n * K_n) * std::exp(-1.0 / (4.0 * K_n * K_n));
      table = replicate_table(reps, 1, seed, [&](Rng& rng, double* row) {
        double s = 0.0;
        for (std::uint64_t i = 0; i < cfg.n_summands; ++i) s += draw(cfg.base, rng);
        s /= rootN;
        row[0] = s > cfg.a ? s * s : 0.0;
      });
      break;
    }
    case TailBoundKind::d_dependent: {
      if (cfg.base.family != NoiseFamily::bernoulli_sym)
        throw std::invalid_argument(
            "tail_bound_check: d_dependent needs bernoulli_sym summands, whose moving-median "
            "variance is exact");
      if (cfg.D < 1 || cfg.D % 2 == 0)
        throw std::invalid_argument("tail_bound_check: D must be odd >= 1");
      if (!(cfg.x >= 0.0)) throw std::invalid_argument("tail_bound_check: x must be >= 0");
      // Residue class r of 0..D-1 sums ceil((N - r) / D) independent medians,
      // each of variance scale^2 exactly, so sigma_max^2 = ceil(N / D) scale^2.
      const double terms =
          static_cast<double>((cfg.n_summands + std::uint64_t(cfg.D) - 1) / std::uint64_t(cfg.D));
      const double sigma_max2 = terms * cfg.base.scale * cfg.base.scale;
      const double K = cfg.base.scale;
      const double D = static_cast<double>(cfg.D);
      out.bound = cfg.x <= sigma_max2 * D / K
                      ? D * std::exp(-cfg.x * cfg.x / (4.0 * D * D * sigma_max2))
                      : D * std::exp(-cfg.x / (4.0 * K * D));
      table = replicate_table(reps, 1, seed, [&](Rng& rng, double* row) {
        const Signal seq = d_dependent_sample(cfg.base, cfg.D, cfg.n_summands, rng);
        row[0] = pairwise_sum(seq) >= cfg.x ? 1.0 : 0.0;
      });
      break;
    }
  }
  const McEstimate est = mean_se(table);
  out.empirical = est.mean;
  out.se = est.se;
  out.pass = out.empirical <= out.bound + 3.0 * out.se;
  return out;
}

SandwichResult fourth_moment_sandwich(const std::vector<double>& weights, const NoiseSpec& base,
                                      std::uint64_t reps, SeedSpec seed) {
  base.validate();
  if (base.scale != 1.0)
    throw std::invalid_argument("fourth_moment_sandwich: base must have unit scale");
  if (reps < 100) throw std::invalid_argument("fourth_moment_sandwich: reps must be >= 100");
  double ss = 0.0;
  for (const double w : weights) ss += w * w;
  if (weights.empty() || std::fabs(ss - 1.0) > 1e-9)
    throw std::invalid_argument("fourth_moment_sandwich: weights must have unit l2 norm");
  const double m4 = base.fourth_moment();

  SandwichResult out;
  out.lower = std::min(3.0, m4);
  out.upper = std::max(3.0, m4);
  const auto table = replicate_table(reps, 1, seed, [&](Rng& rng, double* row) {
    double y = 0.0;
    for (const double w : weights) y += w * draw(base, rng);
    const double y2 = y * y;
    row[0] = y2 * y2;
  });
  const McEstimate est = mean_se(table);
  out.estimate = est.mean;
  out.se = est.se;
  out.pass = out.estimate >= out.lower - 4.0 * out.se && out.estimate <= out.upper + 4.0 * out.se;
  return out;
}

Signal max_estimator(const Signal& x, int M, double c) {
  if (x.empty()) throw std::invalid_argument("max_estimator: empty signal");
  if (M < 1 || static_cast<std::size_t>(M) > x.size())
    throw std::invalid_argument("max_estimator: window must satisfy 1 <= M <= n");
  Signal out(x.size());
  const std::size_t last = x.size() - static_cast<std::size_t>(M);
  for (std::size_t i = 0; i <= last; ++i) {
    double m = x[i];
    for (int j = 1; j < M; ++j) m = std::max(m, x[i + static_cast<std::size_t>(j)]);
    out[i] = m - c;
  }
  for (std::size_t i = last + 1; i < x.size(); ++i) out[i] = out[last];
  return out;
}

McEstimate max_estimator_risk(const Signal& f, const NoiseSpec& noise, int M, std::uint64_t reps,
                              SeedSpec seed) {
  if (reps < 2) throw std::invalid_argument("max_estimator_risk: needs reps >= 2");
  const MaxStats stats = max_statistics(noise, M);
  const double rootn = std::sqrt(static_cast<double>(f.size()));
  const double c = stats.c_M / rootn;
  const auto table = replicate_table(reps, 1, seed, [&](Rng& rng, double* row) {
    Signal x(f.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = f[i] + draw(noise, rng) / rootn;
    const Signal fit = max_estimator(x, M, c);
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = fit[i] - f[i];
      acc += d * d;
    }
    row[0] = acc;
  });
  return mean_se(table);
}

std::vector<ProbeRow> deviation_ratio_probe(const std::vector<double>& weights,
                                            const NoiseSpec& base,
                                            const std::vector<double>& x_grid, std::uint64_t reps,
                                            SeedSpec seed) {
  base.validate();
  if (reps < 100) throw std::invalid_argument("deviation_ratio_probe: reps must be >= 100");
  double ss = 0.0;
  double m3 = 0.0;
  for (const double w : weights) {
    ss += w * w;
    m3 += std::fabs(w) * std::fabs(w) * std::fabs(w);
  }
  if (weights.empty() || std::fabs(ss - 1.0) > 1e-9)
    throw std::invalid_argument("deviation_ratio_probe: weights must have unit l2 norm");
  m3 *= base.abs_third_moment();
  const double window = m3 < 1.0 ? 0.8 * std::sqrt(2.0 * std::log(1.0 / m3)) : 0.0;
  for (const double x : x_grid)
    if (!(std::fabs(x) <= window)) {
      std::ostringstream msg;
      msg << "deviation_ratio_probe: x = " << x << " outside the moderate-deviation window |x| <= "
          << window;
      throw std::invalid_argument(msg.str());
    }

  const auto table = replicate_table(reps, x_grid.size(), seed, [&](Rng& rng, double* row) {
    double s = 0.0;
    for (const double w : weights) s += w * draw(base, rng);
    for (std::size_t g = 0; g < x_grid.size(); ++g)
      row[g] = x_grid[g] <= 0.0 ? (s <= x_grid[g] ? 1.0 : 0.0) : (s > x_grid[g] ? 1.0 : 0.0);
  });
  const auto cells = column_stats(table, reps, x_grid.size());
  std::vector<ProbeRow> out(x_grid.size());
  for (std::size_t g = 0; g < x_grid.size(); ++g) {
    const double denom = x_grid[g] <= 0.0 ? norm_cdf(x_grid[g]) : norm_upper(x_grid[g]);
    out[g] = {x_grid[g], cells[g].mean / denom, cells[g].se / denom};
  }
  return out;
}

}  // namespace waverisk
