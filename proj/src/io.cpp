#include "waverisk/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "waverisk/errors.hpp"

namespace waverisk {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Splits a CSV line; report fields never contain commas or quotes.
std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_double(const std::string& s, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw data_error(where + ": bad number '" + s + "'");
  }
  if (used != s.size()) throw data_error(where + ": bad number '" + s + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& s, const std::string& where) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    throw data_error(where + ": bad count '" + s + "'");
  }
  if (used != s.size()) throw data_error(where + ": bad count '" + s + "'");
  return v;
}

}  // namespace

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw data_error("cannot open '" + tmp + "' for writing");
    out << content;
    out.flush();
    if (!out) throw data_error("write failed for '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw data_error("cannot move '" + tmp + "' to '" + path + "'");
  }
}

Signal read_signal(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot read signal file '" + path + "'");
  Signal x;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(line, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || line.find_first_not_of(" \t\r", used) != std::string::npos)
      throw data_error(path + ":" + std::to_string(lineno) + ": not a number: '" + line + "'");
    x.push_back(v);
  }
  if (x.empty()) throw data_error("signal file '" + path + "' is empty");
  return x;
}

std::string format_signal(const Signal& x) {
  std::string out;
  out.reserve(x.size() * 20);
  for (const double v : x) {
    out += fmt(v);
    out += '\n';
  }
  return out;
}

std::string format_pyramid_csv(const CoeffPyramid& p) {
  std::ostringstream out;
  out << "level,index,value\n";
  for (std::size_t k = 0; k < p.scaling.size(); ++k)
    out << "-1," << k << ',' << fmt(p.scaling[k]) << '\n';
  for (int j = p.j0; j < p.h; ++j) {
    const auto& row = p.level(j);
    for (std::size_t k = 0; k < row.size(); ++k)
      out << j << ',' << k << ',' << fmt(row[k]) << '\n';
  }
  return out.str();
}

std::string format_mask_csv(const RetentionMask& m) {
  std::ostringstream out;
  out << "level,index,kept\n";
  for (std::size_t k = 0; k < m.scaling_kept.size(); ++k)
    out << "-1," << k << ',' << int(m.scaling_kept[k]) << '\n';
  for (int j = m.j0; j < m.h; ++j) {
    const auto& row = m.details_kept[std::size_t(j - m.j0)];
    for (std::size_t k = 0; k < row.size(); ++k)
      out << j << ',' << k << ',' << int(row[k]) << '\n';
  }
  return out.str();
}

std::string format_report_csv(const std::vector<RiskRow>& rows) {
  std::ostringstream out;
  out << "n,estimator,adversary,risk,se,reps\n";
  for (const auto& r : rows)
    out << r.n << ',' << r.estimator << ',' << r.adversary << ',' << fmt(r.risk) << ','
        << fmt(r.se) << ',' << r.reps << '\n';
  return out.str();
}

std::string format_rate_fit_footer(const std::vector<RateFit>& fits) {
  if (fits.empty()) return {};
  std::ostringstream out;
  out << "# rate_fit,slope,intercept,residual,points\n";
  for (const auto& f : fits)
    out << "# rate_fit," << fmt(f.slope) << ',' << fmt(f.intercept) << ',' << fmt(f.residual)
        << ',' << f.points << '\n';
  return out.str();
}

std::vector<RiskRow> read_report_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot read report '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw data_error("report '" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "n,estimator,adversary,risk,se,reps")
    throw data_error("report '" + path + "': unrecognized header '" + line + "'");
  std::vector<RiskRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto f = split_fields(line);
    const std::string where = path + ":" + std::to_string(lineno);
    if (f.size() != 6) throw data_error(where + ": expected 6 fields, got " +
                                        std::to_string(f.size()));
    RiskRow r;
    r.n = parse_u64(f[0], where);
    r.estimator = f[1];
    r.adversary = f[2];
    r.risk = parse_double(f[3], where);
    r.se = parse_double(f[4], where);
    r.reps = parse_u64(f[5], where);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace waverisk
