#include "waverisk/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "waverisk/errors.hpp"
#include "waverisk/median.hpp"

namespace waverisk {

namespace {

struct Cursor {
  std::string origin;
  std::size_t line = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw config_error(origin + ":" + std::to_string(line) + ": " + what);
  }
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const Cursor& at) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    at.fail("expected a number, got '" + v + "'");
  }
  if (used != v.size()) at.fail("expected a number, got '" + v + "'");
  return x;
}

std::uint64_t to_u64(const std::string& v, const Cursor& at) {
  if (!v.empty() && v[0] == '-') at.fail("expected a nonnegative integer, got '" + v + "'");
  std::size_t used = 0;
  unsigned long long x = 0;
  try {
    x = std::stoull(v, &used);
  } catch (const std::exception&) {
    at.fail("expected a nonnegative integer, got '" + v + "'");
  }
  if (used != v.size()) at.fail("expected a nonnegative integer, got '" + v + "'");
  return x;
}

int to_int(const std::string& v, const Cursor& at) {
  const std::uint64_t x = to_u64(v, at);
  if (x > 1u << 30) at.fail("value out of range: '" + v + "'");
  return int(x);
}

bool to_bool(const std::string& v, const Cursor& at) {
  if (v == "true") return true;
  if (v == "false") return false;
  at.fail("expected true or false, got '" + v + "'");
}

bool dyadic(std::uint64_t n) { return n >= 2 && (n & (n - 1)) == 0; }

struct Builder {
  ExperimentConfig cfg;
  bool l_given = false;

  void apply(const std::string& section, const std::string& key, const std::string& value,
             const Cursor& at) {
    if (section == "experiment") {
      experiment_key(key, value, at);
    } else if (section == "ball") {
      ball_key(key, value, at);
    } else if (section == "noise") {
      noise_key(key, value, at);
    } else if (section == "estimator") {
      estimator_key(key, value, at);
    } else {
      at.fail("unknown section [" + section + "]");
    }
  }

  void experiment_key(const std::string& key, const std::string& value, const Cursor& at) {
    if (key == "kind") {
      cfg.kind = value;
    } else if (key == "n") {
      cfg.n_list.clear();
      std::istringstream items(value);
      std::string item;
      while (items >> item) cfg.n_list.push_back(to_u64(item, at));
      if (cfg.n_list.empty()) at.fail("n needs at least one value");
    } else if (key == "reps") {
      cfg.reps = to_u64(value, at);
    } else if (key == "seed") {
      cfg.seed.seed = to_u64(value, at);
    } else if (key == "stream") {
      cfg.seed.stream = to_u64(value, at);
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "calibrate_n") {
      cfg.calibrate_n = to_u64(value, at);
    } else if (key == "threads") {
      cfg.threads = to_int(value, at);
    } else {
      at.fail("unknown key '" + key + "' in [experiment]");
    }
  }

  void ball_key(const std::string& key, const std::string& value, const Cursor& at) {
    if (key == "m") {
      cfg.ball.m = to_double(value, at);
    } else if (key == "p") {
      cfg.ball.p = to_double(value, at);
    } else if (key == "q") {
      cfg.ball.q = to_double(value, at);
    } else if (key == "A") {
      cfg.ball.A = to_double(value, at);
    } else if (key == "j0") {
      cfg.ball.j0 = to_int(value, at);
    } else {
      at.fail("unknown key '" + key + "' in [ball]");
    }
  }

  void noise_key(const std::string& key, const std::string& value, const Cursor& at) {
    if (key == "model") {
      try {
        cfg.noise = NoiseSpec::parse(value);
      } catch (const std::invalid_argument& e) {
        at.fail(e.what());
      }
    } else {
      at.fail("unknown key '" + key + "' in [noise]");
    }
  }

  void estimator_key(const std::string& key, const std::string& value, const Cursor& at) {
    if (key == "prefilter") {
      if (value == "none")
        cfg.pipe.prefilter = false;
      else if (value == "median")
        cfg.pipe.prefilter = true;
      else
        at.fail("prefilter must be none or median, got '" + value + "'");
    } else if (key == "l") {
      cfg.pipe.prefilter_l = to_int(value, at);
      l_given = true;
    } else if (key == "wavelet") {
      if (value == "haar")
        cfg.pipe.wavelet = Wavelet::haar;
      else if (value == "d4")
        cfg.pipe.wavelet = Wavelet::daubechies4;
      else
        at.fail("wavelet must be haar or d4, got '" + value + "'");
    } else if (key == "rule") {
      if (value == "level")
        cfg.pipe.rule = RuleKind::level_constant;
      else if (value == "universal")
        cfg.pipe.rule = RuleKind::universal;
      else if (value == "block")
        cfg.pipe.rule = RuleKind::vertical_block;
      else
        at.fail("rule must be level, universal or block, got '" + value + "'");
    } else if (key == "C") {
      cfg.pipe.C = to_double(value, at);
    } else if (key == "sigma") {
      cfg.pipe.sigma = to_double(value, at);
    } else if (key == "block_j") {
      cfg.pipe.block.J = to_int(value, at);
    } else if (key == "block_lambda") {
      cfg.pipe.block.lambda_n = to_double(value, at);
    } else if (key == "block_neighbors") {
      cfg.pipe.block.keep_row_neighbors = to_bool(value, at);
    } else {
      at.fail("unknown key '" + key + "' in [estimator]");
    }
  }

  void finish(Cursor at) {
    at.line = 0;
    if (cfg.kind != "rate" && cfg.kind != "minimax" && cfg.kind != "ratio")
      at.fail("kind must be rate, minimax or ratio, got '" + cfg.kind + "'");
    if (cfg.reps == 0) at.fail("reps must be positive");
    try {
      cfg.ball.validate();
      cfg.noise.validate();
    } catch (const std::invalid_argument& e) {
      at.fail(e.what());
    }
    if (cfg.ball.j0 > 40) at.fail("j0 is implausibly deep");
    for (const std::uint64_t n : cfg.n_list) {
      if (!dyadic(n)) at.fail("n = " + std::to_string(n) + " is not a power of two >= 2");
      if (n >> cfg.ball.j0 < 2)
        at.fail("n = " + std::to_string(n) + " leaves no detail level above j0");
    }
    if (cfg.kind == "rate" && cfg.n_list.size() < 4)
      at.fail("kind = rate needs at least 4 values of n to fit a slope");
    if (cfg.kind != "rate" && cfg.n_list.size() != 1)
      at.fail("kind = " + cfg.kind + " takes exactly one n");
    if (cfg.calibrate_n != 0) {
      if (!dyadic(cfg.calibrate_n)) at.fail("calibrate_n must be a power of two >= 2");
      if (cfg.pipe.rule != RuleKind::level_constant)
        at.fail("calibrate_n only applies to rule = level");
    }
    if (!(cfg.pipe.C > 0.0)) at.fail("C must be positive");
    if (!(cfg.pipe.sigma > 0.0)) at.fail("sigma must be positive");
    if (cfg.pipe.block.lambda_n < 0.0) at.fail("block_lambda must be >= 0");
    // The auto threshold (block_lambda = 0 meaning "universal at this n")
    // is resolved per run for a single n; a rate sweep would need one per
    // n, so it must be spelled out there.
    if (cfg.kind == "rate" && cfg.pipe.rule == RuleKind::vertical_block &&
        cfg.pipe.block.lambda_n == 0.0)
      at.fail("kind = rate with rule = block needs an explicit block_lambda");
    if (cfg.pipe.prefilter && !l_given) {
      // Median window sized for the noise tail: long enough that the
      // filtered values have the moments the ball's smoothness demands.
      try {
        cfg.pipe.prefilter_l =
            filter_length(cfg.noise.tail_order(), moment_condition(cfg.ball.m, cfg.ball.p));
      } catch (const std::invalid_argument& e) {
        at.fail(e.what());
      }
    }
    cfg.pipe.j0 = cfg.ball.j0;
  }
};

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  Builder b;
  Cursor at{origin, 0};
  std::istringstream in(text);
  std::string raw;
  std::string section;
  while (std::getline(in, raw)) {
    ++at.line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') at.fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) at.fail("empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) at.fail("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) at.fail("empty key");
    if (value.empty()) at.fail("key '" + key + "' has no value");
    if (section.empty()) at.fail("key '" + key + "' appears before any section");
    b.apply(section, key, value, at);
  }
  b.finish(at);
  return b.cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot read config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

}  // namespace waverisk
