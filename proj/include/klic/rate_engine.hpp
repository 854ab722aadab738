#pragma once

#include <algorithm>
#include <cmath>

#include "klic/channel.hpp"
#include "klic/common.hpp"

namespace klic {

// AWGN capacity 0.5*log2(1 + snr) in bits per channel use.
inline double capacity(double snr) {
  if (!(snr >= 0.0)) throw std::domain_error("capacity: snr must be nonnegative");
  return 0.5 * std::log2(1.0 + snr);
}

// Largest codebook rate at which a receiver can decode the modulus sum of
// its K-1 interferers while treating its own (direct) signal as noise:
// 0.5*log2(1/(K-1) + p/(b^2 p + 1)), clamped at zero.
inline double modsum_rate_bound(const ChannelConfig& cfg) {
  cfg.validate();
  const double arg = 1.0 / (cfg.k - 1) + cfg.p / (cfg.b2() * cfg.p + 1.0);
  return arg <= 1.0 ? 0.0 : 0.5 * std::log2(arg);
}

// After cancelling the interferer modulus sum, the residual direct signal
// plus noise must fit a single coarse cell: b^2 p + 1 < p.
inline bool distortion_condition(const ChannelConfig& cfg) {
  cfg.validate();
  return cfg.b2() * cfg.p + 1.0 < cfg.p;
}

// Largest b^2 for which the channel has very strong interference with k
// users at power p. May be negative for p < 1, in which case no positive
// gain qualifies.
inline double vsi_threshold(int k, double p) {
  if (k < 3) throw std::domain_error("vsi_threshold: need k >= 3");
  if (!(p > 0.0)) throw std::domain_error("vsi_threshold: power must be positive");
  const double c = double(k - 2) / double(k - 1);
  const double root = std::sqrt(p - c + (c + 1.0) * (c + 1.0) / 4.0) - (c + 1.0) / 2.0;
  return std::min((p - 1.0) / p, root / p);
}

// Boundary-inclusive very-strong-interference predicate.
inline bool vsi_condition(const ChannelConfig& cfg) {
  cfg.validate();
  if (cfg.p < 1.0) return false;
  return cfg.b2() <= vsi_threshold(cfg.k, cfg.p) + kBoundaryTol;
}

// Very-strong-interference threshold of the spherical-shaping construction,
// (sqrt(p) - 1)/p. Stated for the 3-user channel.
inline double sphere_vsi_threshold(double p) {
  if (!(p > 0.0)) throw std::domain_error("sphere_vsi_threshold: power must be positive");
  return (std::sqrt(p) - 1.0) / p;
}

inline bool sphere_vsi_condition(const ChannelConfig& cfg) {
  cfg.validate();
  if (cfg.k != 3) throw std::domain_error("sphere_vsi_condition: defined for k = 3 only");
  if (cfg.p < 1.0) return false;
  return cfg.b2() <= sphere_vsi_threshold(cfg.p) + kBoundaryTol;
}

// Per-user secrecy rate under mutual jamming at codebook rate R:
// [R - R/(k-1) - log2(k-1)/(k-1)]+. For k = 3 this is [0.5R - 0.5]+.
inline double secrecy_rate(const ChannelConfig& cfg, double codebook_rate) {
  cfg.validate();
  const double m = double(cfg.k - 1);
  return std::max(0.0, codebook_rate - codebook_rate / m - std::log2(m) / m);
}

// Upper bound on the information leaked to one eavesdropping receiver over
// n channel uses: n*(R + log2(k-1)).
inline double leakage_bound(double codebook_rate, int k, int n) {
  if (!(codebook_rate >= 0.0)) throw std::domain_error("leakage_bound: rate must be >= 0");
  if (k < 2) throw std::domain_error("leakage_bound: need k >= 2");
  if (n < 1) throw std::domain_error("leakage_bound: need n >= 1");
  return double(n) * (codebook_rate + std::log2(double(k - 1)));
}

// Evaluate one operating point. By default the codebook rate is pinned to
// the direct-link capacity C(b^2 p), the choice that is decodable exactly
// when the very-strong-interference condition holds. Rate bounds are treated
// as suprema, so the comparison against them is boundary-inclusive.
inline RateReport evaluate(const ChannelConfig& cfg) {
  cfg.validate();
  RateReport rep;
  const double direct_cap = capacity(cfg.b2() * cfg.p);
  rep.codebook_rate = direct_cap;
  rep.cond_modsum = rep.codebook_rate <= modsum_rate_bound(cfg) + kBoundaryTol;
  rep.cond_distortion = distortion_condition(cfg);
  rep.cond_direct = rep.codebook_rate <= direct_cap + kBoundaryTol;
  rep.vsi = vsi_condition(cfg);
  rep.leakage_bound = leakage_bound(rep.codebook_rate, cfg.k, 1);
  if (!rep.cond_modsum) {
    rep.reason = "interferer modulus sum not decodable at R = C(b^2 p)";
  } else if (!rep.cond_distortion) {
    rep.reason = "residual interference exceeds one coarse cell (b^2 p + 1 >= p)";
  } else if (!rep.cond_direct) {
    rep.reason = "direct link cannot support R";
  } else {
    rep.secrecy_rate = secrecy_rate(cfg, rep.codebook_rate);
    if (rep.secrecy_rate == 0.0) rep.reason = "jamming rate penalty absorbs the whole codebook rate";
  }
  return rep;
}

}  // namespace klic
