#pragma once

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "klic/channel.hpp"
#include "klic/layered.hpp"
#include "klic/simulate.hpp"

namespace klic {

using json = nlohmann::json;

// Full-precision decimal rendering (17 significant digits round-trips any
// double exactly).
inline std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void to_json(json& j, const WilsonInterval& ci) { j = json{{"lo", ci.lo}, {"hi", ci.hi}}; }
inline void from_json(const json& j, WilsonInterval& ci) {
  j.at("lo").get_to(ci.lo);
  j.at("hi").get_to(ci.hi);
}

inline void to_json(json& j, const RateReport& r) {
  j = json{{"codebook_rate", r.codebook_rate},
           {"secrecy_rate", r.secrecy_rate},
           {"cond_modsum", r.cond_modsum},
           {"cond_distortion", r.cond_distortion},
           {"cond_direct", r.cond_direct},
           {"vsi", r.vsi},
           {"leakage_bound", r.leakage_bound},
           {"reason", r.reason}};
}
inline void from_json(const json& j, RateReport& r) {
  j.at("codebook_rate").get_to(r.codebook_rate);
  j.at("secrecy_rate").get_to(r.secrecy_rate);
  j.at("cond_modsum").get_to(r.cond_modsum);
  j.at("cond_distortion").get_to(r.cond_distortion);
  j.at("cond_direct").get_to(r.cond_direct);
  j.at("vsi").get_to(r.vsi);
  j.at("leakage_bound").get_to(r.leakage_bound);
  j.at("reason").get_to(r.reason);
}

inline void to_json(json& j, const LayerPlan& p) {
  j = json{{"regime", std::string(regime_name(p.regime))},
           {"alpha", p.alpha},
           {"beta", p.beta},
           {"layers", p.layers},
           {"layer_power", p.layer_power},
           {"accumulated", p.accumulated},
           {"layer_rate", p.layer_rate},
           {"layer_secrecy_rate", p.layer_secrecy_rate},
           {"total_power", p.total_power()}};
}
inline void from_json(const json& j, LayerPlan& p) {
  p.regime = j.at("regime").get<std::string>() == "strong" ? Regime::Strong : Regime::Weak;
  j.at("alpha").get_to(p.alpha);
  j.at("beta").get_to(p.beta);
  j.at("layers").get_to(p.layers);
  j.at("layer_power").get_to(p.layer_power);
  j.at("accumulated").get_to(p.accumulated);
  j.at("layer_rate").get_to(p.layer_rate);
  j.at("layer_secrecy_rate").get_to(p.layer_secrecy_rate);
}

inline void to_json(json& j, const SimOutcome& o) {
  j = json{{"trials", o.trials},
           {"modsum_errors", o.modsum_errors},
           {"own_errors", o.own_errors},
           {"per_layer_errors", o.per_layer_errors},
           {"per_layer_cond_errors", o.per_layer_cond_errors},
           {"per_layer_cond_trials", o.per_layer_cond_trials},
           {"modsum_ci", o.modsum_ci},
           {"own_ci", o.own_ci},
           {"per_layer_ci", o.per_layer_ci},
           {"modsum_error_rate", o.modsum_error_rate()},
           {"own_error_rate", o.own_error_rate()}};
}
inline void from_json(const json& j, SimOutcome& o) {
  j.at("trials").get_to(o.trials);
  j.at("modsum_errors").get_to(o.modsum_errors);
  j.at("own_errors").get_to(o.own_errors);
  j.at("per_layer_errors").get_to(o.per_layer_errors);
  j.at("per_layer_cond_errors").get_to(o.per_layer_cond_errors);
  j.at("per_layer_cond_trials").get_to(o.per_layer_cond_trials);
  j.at("modsum_ci").get_to(o.modsum_ci);
  j.at("own_ci").get_to(o.own_ci);
  j.at("per_layer_ci").get_to(o.per_layer_ci);
}

inline void to_json(json& j, const LeakageReport& r) {
  j = json{{"q", r.q},
           {"k", r.k},
           {"joint_entropy", r.joint_entropy},
           {"modsum_entropy", r.modsum_entropy},
           {"cond_entropy_given_modsum", r.cond_entropy_given_modsum},
           {"carry_entropy", r.carry_entropy},
           {"cond_entropy_given_modsum_carry", r.cond_entropy_given_modsum_carry},
           {"leakage", r.leakage},
           {"bound", r.bound},
           {"within_bound", r.within_bound}};
}
inline void from_json(const json& j, LeakageReport& r) {
  j.at("q").get_to(r.q);
  j.at("k").get_to(r.k);
  j.at("joint_entropy").get_to(r.joint_entropy);
  j.at("modsum_entropy").get_to(r.modsum_entropy);
  j.at("cond_entropy_given_modsum").get_to(r.cond_entropy_given_modsum);
  j.at("carry_entropy").get_to(r.carry_entropy);
  j.at("cond_entropy_given_modsum_carry").get_to(r.cond_entropy_given_modsum_carry);
  j.at("leakage").get_to(r.leakage);
  j.at("bound").get_to(r.bound);
  j.at("within_bound").get_to(r.within_bound);
}

inline void to_json(json& j, const Fig2Row& row) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(); };
  j = json{{"b2", row.b2},
           {"regime", row.regime ? json(std::string(regime_name(*row.regime))) : json()},
           {"alpha", opt(row.alpha)},
           {"beta", opt(row.beta)},
           {"dof", opt(row.dof)},
           {"sdof", opt(row.sdof)},
           {"qbit_dof", opt(row.qbit_dof)}};
}
inline void from_json(const json& j, Fig2Row& row) {
  j.at("b2").get_to(row.b2);
  auto opt = [&](const char* key) -> std::optional<double> {
    const auto& v = j.at(key);
    return v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
  };
  const auto& reg = j.at("regime");
  row.regime = reg.is_null() ? std::nullopt
                             : std::optional<Regime>(reg.get<std::string>() == "strong"
                                                         ? Regime::Strong
                                                         : Regime::Weak);
  row.alpha = opt("alpha");
  row.beta = opt("beta");
  row.dof = opt("dof");
  row.sdof = opt("sdof");
  row.qbit_dof = opt("qbit_dof");
}

inline constexpr const char* kFig2CsvHeader = "b2,regime,alpha,beta,dof,sdof,qbit_dof";

// CSV emission for the DoF dataset. Metadata travels in '#' comment lines;
// empty fields mark the regime gap and an undefined benchmark base.
inline void write_fig2_csv(std::ostream& os, const std::vector<Fig2Row>& rows,
                           bool with_metadata = true) {
  if (with_metadata) {
    os << "# x axis: b2, the squared amplitude gain of the direct link\n";
    os << "# qbit_dof: (k/2)*(1 - log_b(2k)) with log base b = sqrt(b2), clamped at 0\n";
    os << "# empty lattice columns: gain falls in the uncovered band 6-4*sqrt(2) <= b2 <= 3/2\n";
  }
  os << kFig2CsvHeader << '\n';
  auto field = [](const std::optional<double>& v) { return v ? format_full(*v) : std::string(); };
  for (const auto& row : rows) {
    os << format_full(row.b2) << ','
       << (row.regime ? std::string(regime_name(*row.regime)) : std::string()) << ','
       << field(row.alpha) << ',' << field(row.beta) << ',' << field(row.dof) << ','
       << field(row.sdof) << ',' << field(row.qbit_dof) << '\n';
  }
}

inline std::vector<Fig2Row> parse_fig2_csv(std::istream& is) {
  std::vector<Fig2Row> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kFig2CsvHeader)
        throw std::invalid_argument("fig2 csv: unexpected header '" + line + "'");
      header_seen = true;
      continue;
    }
    std::vector<std::string> f;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        f.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    f.push_back(cur);
    if (f.size() != 7) throw std::invalid_argument("fig2 csv: expected 7 fields");
    auto opt = [](const std::string& txt) -> std::optional<double> {
      if (txt.empty()) return std::nullopt;
      return std::strtod(txt.c_str(), nullptr);
    };
    Fig2Row row;
    row.b2 = std::strtod(f[0].c_str(), nullptr);
    if (f[1] == "strong")
      row.regime = Regime::Strong;
    else if (f[1] == "weak")
      row.regime = Regime::Weak;
    row.alpha = opt(f[2]);
    row.beta = opt(f[3]);
    row.dof = opt(f[4]);
    row.sdof = opt(f[5]);
    row.qbit_dof = opt(f[6]);
    rows.push_back(row);
  }
  if (!header_seen) throw std::invalid_argument("fig2 csv: missing header");
  return rows;
}

inline void print_rate_report(std::ostream& os, const ChannelConfig& cfg, const RateReport& r) {
  os << "k " << cfg.k << "  b2 " << format_full(cfg.b2()) << "  power " << format_full(cfg.p)
     << '\n';
  os << "codebook_rate   " << format_full(r.codebook_rate) << '\n';
  os << "secrecy_rate    " << format_full(r.secrecy_rate) << '\n';
  os << "cond_modsum     " << (r.cond_modsum ? "true" : "false") << '\n';
  os << "cond_distortion " << (r.cond_distortion ? "true" : "false") << '\n';
  os << "cond_direct     " << (r.cond_direct ? "true" : "false") << '\n';
  os << "vsi             " << (r.vsi ? "true" : "false") << '\n';
  os << "leakage_bound   " << format_full(r.leakage_bound) << '\n';
  if (!r.reason.empty()) os << "reason          " << r.reason << '\n';
}

inline void print_plan(std::ostream& os, const LayerPlan& plan) {
  os << "regime " << regime_name(plan.regime) << "  alpha " << format_full(plan.alpha)
     << "  beta " << format_full(plan.beta) << "  layers " << plan.layers << '\n';
  os << "layer,power,accumulated,rate,secrecy_rate\n";
  for (int i = 0; i < plan.layers; ++i) {
    os << (i + 1) << ',' << format_full(plan.layer_power[i]) << ','
       << format_full(plan.accumulated[i]) << ',' << format_full(plan.layer_rate) << ','
       << format_full(plan.layer_secrecy_rate) << '\n';
  }
  double sum = 0.0;
  for (double p : plan.layer_power) sum += p;
  os << "total_power " << format_full(sum) << " (closed form " << format_full(plan.total_power())
     << ")\n";
  os << "sum_rate " << format_full(plan.sum_rate()) << "  sum_secrecy_rate "
     << format_full(plan.layers * plan.layer_secrecy_rate) << '\n';
}

}  // namespace klic
