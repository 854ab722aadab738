#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace klic {

enum class SweepVariable { B2, Power, Users };
enum class SweepScale { Linear, Log };

// Grid request parsed from "var:min:max:points[:scale]",
// e.g. "b2:0.01:100:60:log". Scale defaults to linear.
struct SweepSpec {
  SweepVariable variable = SweepVariable::B2;
  double min = 0.0;
  double max = 0.0;
  int points = 0;
  SweepScale scale = SweepScale::Linear;

  void validate() const {
    if (!(min < max)) throw std::invalid_argument("sweep: need min < max");
    if (points < 2) throw std::invalid_argument("sweep: need at least 2 points");
    if (scale == SweepScale::Log && !(min > 0.0))
      throw std::invalid_argument("sweep: log scale needs min > 0");
  }

  std::vector<double> grid() const {
    validate();
    std::vector<double> g(points);
    if (scale == SweepScale::Log) {
      const double lmin = std::log(min), lmax = std::log(max);
      for (int i = 0; i < points; ++i)
        g[i] = std::exp(lmin + i * (lmax - lmin) / (points - 1));
    } else {
      for (int i = 0; i < points; ++i)
        g[i] = min + i * (max - min) / (points - 1);
    }
    g.front() = min;
    g.back() = max;
    return g;
  }
};

inline SweepSpec parse_sweep(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 4 && parts.size() != 5)
    throw std::invalid_argument("sweep: expected var:min:max:points[:scale]");

  SweepSpec spec;
  if (parts[0] == "b2")
    spec.variable = SweepVariable::B2;
  else if (parts[0] == "P" || parts[0] == "p" || parts[0] == "power")
    spec.variable = SweepVariable::Power;
  else if (parts[0] == "K" || parts[0] == "k")
    spec.variable = SweepVariable::Users;
  else
    throw std::invalid_argument("sweep: unknown variable '" + parts[0] + "'");

  try {
    size_t used = 0;
    spec.min = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("");
    spec.max = std::stod(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("");
    spec.points = std::stoi(parts[3], &used);
    if (used != parts[3].size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw std::invalid_argument("sweep: non-numeric bound or point count");
  }
  if (parts.size() == 5) {
    if (parts[4] == "log")
      spec.scale = SweepScale::Log;
    else if (parts[4] == "linear")
      spec.scale = SweepScale::Linear;
    else
      throw std::invalid_argument("sweep: scale must be 'linear' or 'log'");
  }
  spec.validate();
  return spec;
}

}  // namespace klic
