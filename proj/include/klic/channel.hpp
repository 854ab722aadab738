#pragma once

#include <stdexcept>
#include <string>

namespace klic {

// Symmetric K-user Gaussian interference channel. The direct link of every
// user has amplitude gain b, every cross link has gain 1, receiver noise has
// unit variance, and each user transmits with average power p (so p is
// already noise-normalized).
struct ChannelConfig {
  int k = 3;
  double b = 1.0;
  double p = 1.0;

  double b2() const noexcept { return b * b; }

  void validate() const {
    if (k < 3) throw std::domain_error("ChannelConfig: need k >= 3 users");
    if (!(b > 0.0)) throw std::domain_error("ChannelConfig: gain b must be positive");
    if (!(p > 0.0)) throw std::domain_error("ChannelConfig: power p must be positive");
  }
};

// Evaluation of the single-layer scheme at one operating point.
struct RateReport {
  double codebook_rate = 0.0;    // R, bits per channel use
  double secrecy_rate = 0.0;     // per-user secrecy rate, clamped at zero
  bool cond_modsum = false;      // interferer modulus sum decodable at R
  bool cond_distortion = false;  // residual fits one coarse cell: b^2 p + 1 < p
  bool cond_direct = false;      // direct link supports R
  bool vsi = false;              // very strong interference condition
  double leakage_bound = 0.0;    // per-eavesdropper leakage bound, bits/use
  std::string reason;            // why secrecy_rate is zero, when it is
};

}  // namespace klic
