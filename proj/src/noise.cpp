#include "waverisk/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace waverisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt3 = 1.7320508075688772;

[[noreturn]] void bad_spec(const std::string& what) { throw std::invalid_argument("NoiseSpec: " + what); }

}  // namespace

void NoiseSpec::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) bad_spec("scale must be positive and finite");
  if (family == NoiseFamily::student_t && !(nu > 0.0)) bad_spec("student_t needs nu > 0");
  if (family != NoiseFamily::student_t && nu != 0.0) bad_spec("nu only applies to student_t");
}

double NoiseSpec::tail_order() const {
  validate();
  switch (family) {
    case NoiseFamily::student_t: return nu;
    case NoiseFamily::cauchy: return 1.0;
    default: return kInf;
  }
}

bool NoiseSpec::has_variance() const {
  validate();
  if (family == NoiseFamily::cauchy) return false;
  if (family == NoiseFamily::student_t) return nu > 2.0;
  return true;
}

double NoiseSpec::variance() const {
  if (!has_variance()) bad_spec("variance undefined for this family");
  return scale * scale;  // standardized families
}

double NoiseSpec::fourth_moment() const {
  validate();
  const double s4 = scale * scale * scale * scale;
  switch (family) {
    case NoiseFamily::gaussian: return 3.0 * s4;
    case NoiseFamily::bernoulli_sym: return 1.0 * s4;
    case NoiseFamily::uniform_sym: return 1.8 * s4;
    case NoiseFamily::student_t:
      if (!(nu > 4.0)) bad_spec("fourth moment needs nu > 4");
      return (3.0 + 6.0 / (nu - 4.0)) * s4;
    case NoiseFamily::cauchy: bad_spec("fourth moment undefined for cauchy");
  }
  bad_spec("unreachable");
}

double NoiseSpec::abs_third_moment() const {
  validate();
  const double s3 = scale * scale * scale;
  switch (family) {
    case NoiseFamily::gaussian: return 2.0 * std::sqrt(2.0 / 3.14159265358979323846) * s3;
    case NoiseFamily::bernoulli_sym: return 1.0 * s3;
    case NoiseFamily::uniform_sym: return 0.75 * kSqrt3 * s3;  // E|U|^3 on [-sqrt3, sqrt3]
    case NoiseFamily::student_t: {
      if (!(nu > 3.0)) bad_spec("third absolute moment needs nu > 3");
      // E|T|^3 = nu^{3/2} Gamma(2) Gamma((nu-3)/2) / (sqrt(pi) Gamma(nu/2)),
      // then the unit-variance rescale sqrt((nu-2)/nu) cubed.
      const double raw = std::exp(1.5 * std::log(nu) + std::lgamma((nu - 3.0) / 2.0) -
                                  0.5 * std::log(3.14159265358979323846) -
                                  std::lgamma(nu / 2.0));
      const double std3 = std::pow((nu - 2.0) / nu, 1.5);
      return raw * std3 * s3;
    }
    case NoiseFamily::cauchy: bad_spec("third absolute moment undefined for cauchy");
  }
  bad_spec("unreachable");
}

NoiseSpec NoiseSpec::parse(const std::string& text) {
  std::string s = text;
  const auto strip = [](std::string v) {
    const auto b = v.find_first_not_of(" \t");
    const auto e = v.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
  };
  s = strip(s);

  NoiseSpec spec;
  if (const auto star = s.find('*'); star != std::string::npos) {
    const std::string num = strip(s.substr(star + 1));
    std::size_t used = 0;
    try {
      spec.scale = std::stod(num, &used);
    } catch (const std::exception&) {
      bad_spec("bad scale in '" + text + "'");
    }
    if (used != num.size()) bad_spec("bad scale in '" + text + "'");
    s = strip(s.substr(0, star));
  }

  if (s == "gaussian") {
    spec.family = NoiseFamily::gaussian;
  } else if (s == "bernoulli_sym") {
    spec.family = NoiseFamily::bernoulli_sym;
  } else if (s == "uniform_sym") {
    spec.family = NoiseFamily::uniform_sym;
  } else if (s == "cauchy") {
    spec.family = NoiseFamily::cauchy;
  } else if (s.rfind("student_t(", 0) == 0 && s.back() == ')') {
    spec.family = NoiseFamily::student_t;
    const std::string num = s.substr(10, s.size() - 11);
    std::size_t used = 0;
    try {
      spec.nu = std::stod(num, &used);
    } catch (const std::exception&) {
      bad_spec("bad degrees of freedom in '" + text + "'");
    }
    if (used != num.size()) bad_spec("bad degrees of freedom in '" + text + "'");
  } else {
    bad_spec("unknown family '" + text + "'");
  }
  spec.validate();
  return spec;
}

std::string NoiseSpec::to_string() const {
  validate();
  std::ostringstream out;
  switch (family) {
    case NoiseFamily::gaussian: out << "gaussian"; break;
    case NoiseFamily::bernoulli_sym: out << "bernoulli_sym"; break;
    case NoiseFamily::uniform_sym: out << "uniform_sym"; break;
    case NoiseFamily::cauchy: out << "cauchy"; break;
    case NoiseFamily::student_t: out << "student_t(" << nu << ")"; break;
  }
  if (scale != 1.0) out << " * " << scale;
  return out.str();
}

double draw(const NoiseSpec& spec, Rng& rng) {
  switch (spec.family) {
    case NoiseFamily::gaussian: return spec.scale * rng.gaussian();
    case NoiseFamily::bernoulli_sym: return rng.uniform() < 0.5 ? -spec.scale : spec.scale;
    case NoiseFamily::uniform_sym: return spec.scale * kSqrt3 * (2.0 * rng.uniform() - 1.0);
    case NoiseFamily::student_t: {
      const double unit = spec.nu > 2.0 ? std::sqrt((spec.nu - 2.0) / spec.nu) : 1.0;
      return spec.scale * unit * rng.student_t(spec.nu);
    }
    case NoiseFamily::cauchy: return spec.scale * rng.cauchy();
  }
  throw std::invalid_argument("draw: unreachable");
}

void sample_into(const NoiseSpec& spec, Signal& out, Rng& rng) {
  spec.validate();
  for (auto& v : out) v = draw(spec, rng);
}

Signal sample(const NoiseSpec& spec, std::size_t n, SeedSpec seed) {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  Rng rng(seed.seed, seed.stream);
  Signal out(n);
  sample_into(spec, out, rng);
  return out;
}

double moment_condition(double m, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("moment_condition: p must be >= 1");
  if (!(m > 1.0 / p)) throw std::invalid_argument("moment_condition: need m > 1/p");
  if (p >= 2.0) return 3.0 * (2.0 * m + 1.0) / m;
  const double s = m + 0.5 - 1.0 / p;
  return 6.0 * s * (2.0 * m + 1.0) / (s * (2.0 * m + 1.0) - m);
}

namespace {

// Deterministic cache for the standardized gaussian max moments; keyed by M.
MaxStats gaussian_max_mc(int M) {
  static std::mutex mu;
  static std::map<int, MaxStats> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (const auto it = cache.find(M); it != cache.end()) return it->second;

  const std::size_t reps = 200000;
  Rng rng(0xC0FFEEu, std::uint64_t(M));
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    double mx = -kInf;
    for (int i = 0; i < M; ++i) mx = std::max(mx, rng.gaussian());
    s1 += mx;
    s2 += mx * mx;
    s3 += mx * mx * mx;
    s4 += mx * mx * mx * mx;
  }
  const double N = double(reps);
  const double mean = s1 / N;
  const double var = s2 / N - mean * mean;
  // var of the sample variance via fourth central moment.
  const double m2 = var;
  const double m4c = s4 / N - 4.0 * mean * (s3 / N) + 6.0 * mean * mean * (s2 / N) -
                     3.0 * mean * mean * mean * mean;
  MaxStats st;
  st.c_M = mean;
  st.var_max = var * N / (N - 1.0);
  st.se_c = std::sqrt(var / N);
  st.se_var = std::sqrt(std::max(0.0, m4c - m2 * m2) / N);
  st.exact = false;
  cache[M] = st;
  return st;
}

}  // namespace

MaxStats max_statistics(const NoiseSpec& spec, int M) {
  spec.validate();
  if (M < 1) throw std::invalid_argument("max_statistics: M must be >= 1");

  MaxStats st;
  st.exact = true;
  switch (spec.family) {
    case NoiseFamily::bernoulli_sym: {
      // max = -c only when all M draws are -c.
      const double c = spec.scale;
      const double pm = std::exp2(double(-M));
      st.c_M = c * (1.0 - 2.0 * pm);
      st.var_max = c * c * (4.0 * pm - 4.0 * pm * pm);
      return st;
    }
    case NoiseFamily::uniform_sym: {
      const double a = spec.scale * kSqrt3;
      const double Md = double(M);
      st.c_M = a * (Md - 1.0) / (Md + 1.0);
      st.var_max = a * a * 4.0 * Md / ((Md + 1.0) * (Md + 1.0) * (Md + 2.0));
      return st;
    }
    case NoiseFamily::gaussian: {
      if (M == 1) {
        st.c_M = 0.0;
        st.var_max = spec.scale * spec.scale;
        return st;
      }
      st = gaussian_max_mc(M);
      st.c_M *= spec.scale;
      st.se_c *= spec.scale;
      st.var_max *= spec.scale * spec.scale;
      st.se_var *= spec.scale * spec.scale;
      return st;
    }
    case NoiseFamily::student_t:
    case NoiseFamily::cauchy:
      throw std::invalid_argument("max_statistics: max moments unavailable for heavy tails");
  }
  throw std::invalid_argument("max_statistics: unreachable");
}

Signal d_dependent_sample(const NoiseSpec& base, int D, std::size_t n, Rng& rng) {
  base.validate();
  if (D < 1 || D % 2 == 0) throw std::invalid_argument("d_dependent_sample: D must be odd >= 1");
  if (n < 1) throw std::invalid_argument("d_dependent_sample: n must be >= 1");
  Signal stream(n + std::size_t(D) - 1);
  sample_into(base, stream, rng);
  if (D == 1) return stream;

  Signal out(n);
  std::vector<double> scratch(static_cast<std::size_t>(D));
  for (std::size_t i = 0; i < n; ++i) {
    scratch.assign(stream.begin() + std::ptrdiff_t(i), stream.begin() + std::ptrdiff_t(i) + D);
    std::nth_element(scratch.begin(), scratch.begin() + D / 2, scratch.end());
    out[i] = scratch[std::size_t(D / 2)];
  }
  return out;
}

Signal d_dependent_sample(const NoiseSpec& base, int D, std::size_t n, SeedSpec seed) {
  Rng rng(seed.seed, seed.stream);
  return d_dependent_sample(base, D, n, rng);
}

}  // namespace waverisk
