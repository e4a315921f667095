// Timing comparison of the OpenMP kernels against their serial references.
// Each case checks agreement first (the parallel path must be bit-identical
// or within summation tolerance), then reports wall time and speedup.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "waverisk/besov.hpp"
#include "waverisk/median.hpp"
#include "waverisk/noise.hpp"
#include "waverisk/risk.hpp"
#include "waverisk/rng.hpp"
#include "waverisk/signal.hpp"
#include "waverisk/wavelet.hpp"

using namespace waverisk;

namespace {

double seconds(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

void row(const std::string& name, double serial, double parallel, bool agree) {
  std::printf("%-34s %10.4fs %10.4fs %7.2fx  %s\n", name.c_str(), serial, parallel,
              serial / parallel, agree ? "agree" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("openmp: %d threads\n", omp_get_max_threads());
#else
  std::printf("openmp: disabled (serial build)\n");
#endif
  std::printf("%-34s %11s %11s %8s\n", "case", "serial", "parallel", "speedup");

  // Running median, wide window on a long noisy signal.
  {
    const std::uint64_t n = 1u << 22;
    Signal x = sample(NoiseSpec{NoiseFamily::gaussian}, n, SeedSpec{7, 0});
    const int l = 40;
    Signal ys, yp;
    const double ts = seconds([&] { ys = median_filter_serial(x, l); });
    const double tp = seconds([&] { yp = median_filter(x, l); });
    row("median_filter n=2^22 l=40", ts, tp, ys == yp);
  }

  // Replicate table: many independent MC replicates of a cheap kernel.
  {
    const std::uint64_t reps = 20000;
    const auto body = [](Rng& rng, double* out) {
      double acc = 0.0;
      for (int i = 0; i < 512; ++i) {
        const double z = rng.gaussian();
        acc += z * z;
      }
      out[0] = acc;
    };
    std::vector<double> rs, rp;
    const double ts =
        seconds([&] { rs = replicate_table(reps, 1, SeedSpec{11, 0}, body, false); });
    const double tp = seconds([&] { rp = replicate_table(reps, 1, SeedSpec{11, 0}, body, true); });
    row("replicate_table 20000x512 draws", ts, tp, rs == rp);
  }

  // Batch pyramid transforms. The transform itself is serial; the batch
  // loop is where the parallelism lives in the risk estimators.
  {
    const std::uint64_t n = 1u << 12;
    const std::uint64_t batch = 4000;
    const WaveletSpec w = WaveletSpec::daubechies4();
    std::vector<Signal> xs(batch);
    for (std::uint64_t b = 0; b < batch; ++b)
      xs[b] = sample(NoiseSpec{NoiseFamily::gaussian}, n, SeedSpec{23, b});
    std::vector<double> es(batch), ep(batch);
    const double ts = seconds([&] {
      for (std::uint64_t b = 0; b < batch; ++b) es[b] = forward_dwt(xs[b], w, 0).l2_norm();
    });
    const double tp = seconds([&] {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
      for (std::int64_t b = 0; b < std::int64_t(batch); ++b)
        ep[b] = forward_dwt(xs[std::size_t(b)], w, 0).l2_norm();
    });
    row("forward_dwt batch 4000 n=2^12", ts, tp, es == ep);
  }

  // End-to-end adversary risk sweep, the dominant cost in experiments.
  {
    PipelineConfig pipe;
    pipe.C = 1.5;
    const BesovSpec ball;
    const NoiseSpec noise{NoiseFamily::gaussian};
    std::vector<RiskRow> rows;
    const double tp = seconds(
        [&] { rows = adversary_risks(pipe, ball, 1024, noise, 2000, SeedSpec{31, 0}); });
    std::printf("%-34s %10s %10.4fs %7s  %zu adversaries\n", "adversary_risks n=1024 reps=2000",
                "-", tp, "-", rows.size());
  }
  return 0;
}
