#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "waverisk/config.hpp"
#include "waverisk/errors.hpp"
#include "waverisk/io.hpp"
#include "waverisk/median.hpp"
#include "waverisk/noise.hpp"
#include "waverisk/risk.hpp"
#include "waverisk/threshold.hpp"
#include "waverisk/wavelet.hpp"

using namespace waverisk;

namespace {

// Scratch file helper; each test writes under a unique name so runs can't
// interfere through the shared build dir.
std::string scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "waverisk_io_tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

// ---------------------------------------------------------------------------
// io
// ---------------------------------------------------------------------------

TEST_CASE("write_text_atomic leaves no temp file and replaces content") {
  const std::string path = scratch("atomic.txt");
  write_text_atomic(path, "first\n");
  CHECK(slurp(path) == "first\n");
  write_text_atomic(path, "second\n");
  CHECK(slurp(path) == "second\n");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  CHECK_THROWS_AS(write_text_atomic("/nonexistent_dir_zz/x.txt", "y"), data_error);
}

TEST_CASE("signal format and read round-trip exactly") {
  const Signal x = {1.0, -0.5, 0.1 + 0.2, 1e-300, 98765.4321, 0.0};
  const std::string path = scratch("sig.txt");
  write_text_atomic(path, format_signal(x));
  const Signal y = read_signal(path);
  REQUIRE(y.size() == x.size());
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(y[i] == x[i]);
}

TEST_CASE("read_signal skips blank lines and rejects junk") {
  const std::string path = scratch("sig2.txt");
  write_text_atomic(path, "1.5\n\n  \n-2\n");
  const Signal y = read_signal(path);
  REQUIRE(y.size() == 2);
  CHECK(y[0] == 1.5);
  CHECK(y[1] == -2.0);

  write_text_atomic(path, "1.5\n2.0x\n");
  CHECK_THROWS_AS(read_signal(path), data_error);
  write_text_atomic(path, "");
  CHECK_THROWS_AS(read_signal(path), data_error);
  CHECK_THROWS_AS(read_signal(scratch("no_such_file.txt")), data_error);
}

TEST_CASE("pyramid and mask CSV use level -1 for the scaling block") {
  CoeffPyramid p = CoeffPyramid::zeros(1, 2);
  p.scaling = {3.0, 4.0};
  p.level(1) = {-1.0, 2.0};
  const std::string csv = format_pyramid_csv(p);
  CHECK(csv == "level,index,value\n-1,0,3\n-1,1,4\n1,0,-1\n1,1,2\n");

  RetentionMask m;
  m.j0 = 1;
  m.h = 2;
  m.scaling_kept = {1, 1};
  m.details_kept = {{0, 1}};
  const std::string mcsv = format_mask_csv(m);
  CHECK(mcsv == "level,index,kept\n-1,0,1\n-1,1,1\n1,0,0\n1,1,1\n");
}

TEST_CASE("report CSV round-trips rows and skips footers") {
  const std::vector<RiskRow> rows = {
      {256, "d4+level(C=1.5)", "critical_4", 0.123456789012345678, 0.002, 2000},
      {512, "d4+level(C=1.5)", "max", 3.0e-5, 1.25e-7, 2000},
  };
  RateFit fit;
  fit.slope = -2.0 / 3.0;
  fit.intercept = 0.5;
  fit.residual = 1e-3;
  fit.points = 6;
  const std::string path = scratch("report.csv");
  write_text_atomic(path, format_report_csv(rows) + format_rate_fit_footer({fit}));

  const auto back = read_report_csv(path);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].n == rows[i].n);
    CHECK(back[i].estimator == rows[i].estimator);
    CHECK(back[i].adversary == rows[i].adversary);
    CHECK(back[i].risk == rows[i].risk);
    CHECK(back[i].se == rows[i].se);
    CHECK(back[i].reps == rows[i].reps);
  }
}

TEST_CASE("format_rate_fit_footer shape") {
  CHECK(format_rate_fit_footer({}) == "");
  RateFit f;
  f.slope = -0.5;
  f.intercept = 2.0;
  f.residual = 0.25;
  f.points = 4;
  CHECK(format_rate_fit_footer({f}) ==
        "# rate_fit,slope,intercept,residual,points\n# rate_fit,-0.5,2,0.25,4\n");
}

TEST_CASE("read_report_csv rejects malformed input") {
  const std::string path = scratch("bad_report.csv");
  write_text_atomic(path, "wrong,header\n");
  CHECK_THROWS_AS(read_report_csv(path), data_error);
  write_text_atomic(path, "n,estimator,adversary,risk,se,reps\n1,a,b,c\n");
  CHECK_THROWS_AS(read_report_csv(path), data_error);
  write_text_atomic(path, "n,estimator,adversary,risk,se,reps\n64,a,b,zz,0,10\n");
  CHECK_THROWS_AS(read_report_csv(path), data_error);
  // \r\n reports parse (header carriage return stripped)
  write_text_atomic(path, "n,estimator,adversary,risk,se,reps\r\n64,a,b,0.5,0.1,10\r\n");
  const auto rows = read_report_csv(path);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].risk == 0.5);
}

// ---------------------------------------------------------------------------
// config
// ---------------------------------------------------------------------------

namespace {

const std::string kFullConfig = R"(# exercise every section
[experiment]
kind = rate
n = 64 128 256 512
reps = 321
seed = 77
stream = 5
out = custom.csv
calibrate_n = 128
threads = 2

[ball]
m = 1.5
p = 3
q = 2.5
A = 2.0
j0 = 1

[noise]
model = student_t(6) * 0.5

[estimator]
prefilter = median
l = 4
wavelet = haar
rule = level
C = 2.25
sigma = 0.75
)";

}  // namespace

TEST_CASE("full config parses every key") {
  const ExperimentConfig cfg = parse_config(kFullConfig, "full.cfg");
  CHECK(cfg.kind == "rate");
  REQUIRE(cfg.n_list.size() == 4);
  CHECK(cfg.n_list[0] == 64);
  CHECK(cfg.n_list[3] == 512);
  CHECK(cfg.reps == 321);
  CHECK(cfg.seed.seed == 77);
  CHECK(cfg.seed.stream == 5);
  CHECK(cfg.out == "custom.csv");
  CHECK(cfg.calibrate_n == 128);
  CHECK(cfg.threads == 2);
  CHECK(cfg.ball.m == 1.5);
  CHECK(cfg.ball.p == 3.0);
  CHECK(cfg.ball.q == 2.5);
  CHECK(cfg.ball.A == 2.0);
  CHECK(cfg.ball.j0 == 1);
  CHECK(cfg.noise.family == NoiseFamily::student_t);
  CHECK(cfg.noise.nu == 6.0);
  CHECK(cfg.noise.scale == 0.5);
  CHECK(cfg.pipe.prefilter);
  CHECK(cfg.pipe.prefilter_l == 4);
  CHECK(cfg.pipe.wavelet == Wavelet::haar);
  CHECK(cfg.pipe.rule == RuleKind::level_constant);
  CHECK(cfg.pipe.C == 2.25);
  CHECK(cfg.pipe.sigma == 0.75);
  // coarse level propagates from the ball to the pipeline
  CHECK(cfg.pipe.j0 == 1);
}

TEST_CASE("defaults hold for a minimal config") {
  const ExperimentConfig cfg = parse_config("[noise]\nmodel = gaussian\n", "min.cfg");
  CHECK(cfg.kind == "minimax");
  REQUIRE(cfg.n_list.size() == 1);
  CHECK(cfg.n_list[0] == 1024);
  CHECK(cfg.reps == 2000);
  CHECK(cfg.seed.seed == 1);
  CHECK(cfg.out == "report.csv");
  CHECK(cfg.calibrate_n == 0);
  CHECK_FALSE(cfg.pipe.prefilter);
  CHECK(cfg.pipe.rule == RuleKind::level_constant);
}

TEST_CASE("median prefilter length is derived from tail order when omitted") {
  // cauchy (tail order 1) with the default ball needs the moment-condition
  // length; spelling l explicitly must override it.
  const std::string base = "[noise]\nmodel = cauchy\n[estimator]\nprefilter = median\n";
  const ExperimentConfig cfg = parse_config(base, "auto_l.cfg");
  CHECK(cfg.pipe.prefilter);
  CHECK(cfg.pipe.prefilter_l ==
        filter_length(cfg.noise.tail_order(), moment_condition(cfg.ball.m, cfg.ball.p)));

  const ExperimentConfig forced = parse_config(base + "l = 3\n", "forced_l.cfg");
  CHECK(forced.pipe.prefilter_l == 3);
}

TEST_CASE("block keys populate BlockConfig") {
  const ExperimentConfig cfg = parse_config(
      "[noise]\nmodel = gaussian\n[estimator]\nrule = block\nblock_j = 2\n"
      "block_lambda = 0.125\nblock_neighbors = true\n",
      "block.cfg");
  CHECK(cfg.pipe.rule == RuleKind::vertical_block);
  CHECK(cfg.pipe.block.J == 2);
  CHECK(cfg.pipe.block.lambda_n == 0.125);
  CHECK(cfg.pipe.block.keep_row_neighbors);
}

TEST_CASE("config rejections") {
  const auto rejects = [](const std::string& text) {
    CHECK_THROWS_AS(parse_config(text, "t.cfg"), config_error);
  };
  rejects("[experiment]\nkind = bogus\n");                     // unknown kind
  rejects("[experiment]\nreps = 0\n");                         // zero replicates
  rejects("[experiment]\nn = 100\n");                          // non-dyadic n
  rejects("[experiment]\nn = 64 128\n");                       // minimax wants one n
  rejects("[experiment]\nkind = rate\nn = 64 128 256\n");      // rate wants >= 4
  rejects("[experiment]\nn = 64 64\n[experiment]\nkind = rate\n");
  rejects("[bogus]\nx = 1\n");                                 // unknown section
  rejects("[experiment]\nbogus = 1\n");                        // unknown key
  rejects("kind = rate\n");                                    // key before any section
  rejects("[experiment]\nkind =\n");                           // empty value
  rejects("[experiment]\nreps = 12x\n");                       // trailing junk
  rejects("[experiment]\nseed = -4\n");                        // negative unsigned
  rejects("[noise]\nmodel = lognormal\n");                     // unknown family
  rejects("[estimator]\nrule = sideways\n");                   // unknown rule
  rejects("[estimator]\nC = 0\n");                             // C must be positive
  rejects("[estimator]\nsigma = -1\n");                        // sigma must be positive
  rejects("[estimator]\nblock_lambda = -0.5\n");               // negative lambda
  rejects("[experiment]\nkind = rate\nn = 16 32 64 128\n[estimator]\nrule = block\n");
  rejects("[estimator]\nrule = universal\n[experiment]\ncalibrate_n = 64\n");  // nothing to tune
  rejects("[experiment]\ncalibrate_n = 100\n");                // non-dyadic calibration n
  rejects("[ball]\nj0 = 50\n");                                // implausible coarse level
  rejects("[ball]\nj0 = 9\n[experiment]\nn = 64\n");           // n too small for j0
  rejects("[ball]\nm = 0\n");                                  // ball validation wrapped
}

TEST_CASE("auto prefilter length shrinks as the tail order grows") {
  const auto auto_l = [](const std::string& model) {
    return parse_config("[noise]\nmodel = " + model + "\n[estimator]\nprefilter = median\n",
                        "l.cfg")
        .pipe.prefilter_l;
  };
  const int l_cauchy = auto_l("cauchy");
  const int l_t5 = auto_l("student_t(5)");
  CHECK(l_cauchy > l_t5);
  CHECK(l_t5 >= 1);
}

TEST_CASE("load_config maps missing file to data_error") {
  CHECK_THROWS_AS(load_config(scratch("no_such.cfg")), data_error);
  const std::string path = scratch("ok.cfg");
  write_text_atomic(path, "[noise]\nmodel = gaussian\n");
  CHECK(load_config(path).noise.family == NoiseFamily::gaussian);
}

TEST_CASE("config_error messages carry origin and line") {
  try {
    parse_config("[experiment]\n\nreps = 0\n", "where.cfg");
    FAIL("expected config_error");
  } catch (const config_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("where.cfg") != std::string::npos);
  }
}
