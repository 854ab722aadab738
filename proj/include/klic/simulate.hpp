#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "klic/channel.hpp"
#include "klic/common.hpp"
#include "klic/lattice.hpp"
#include "klic/layered.hpp"
#include "klic/parallel.hpp"
#include "klic/rng.hpp"

namespace klic {

enum class DecodeOrder { InterferenceFirst, OwnFirst };

inline constexpr std::string_view decode_order_name(DecodeOrder o) {
  return o == DecodeOrder::InterferenceFirst ? "interference-first" : "own-first";
}

// Monte Carlo configuration. noise_std = 0 selects the exact decoding path
// (unit scaling throughout); otherwise stages use MMSE scaling against the
// configured powers. For layered runs the per-layer lattices are derived
// from the plan's powers with this lattice's nesting ratio q.
struct SimConfig {
  ChannelConfig cfg;
  ScalarNestedLattice lattice;
  long trials = 10000;
  uint64_t seed = 1;
  DecodeOrder decode_order = DecodeOrder::InterferenceFirst;
  double noise_std = 1.0;

  void validate() const {
    cfg.validate();
    lattice.validate();
    if (trials < 1) throw std::domain_error("SimConfig: trials must be >= 1");
    if (!(noise_std >= 0.0)) throw std::domain_error("SimConfig: noise_std must be >= 0");
  }
};

struct WilsonInterval {
  double lo = 0.0;
  double hi = 0.0;
};

// 95% Wilson score interval for an error count out of n trials. The
// boundary counts pin the matching endpoint exactly.
inline WilsonInterval wilson_ci(long errors, long trials) {
  const double z = 1.959963984540054;
  const double n = double(trials);
  const double ph = double(errors) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (ph + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n)) / denom;
  return {errors == 0 ? 0.0 : std::max(0.0, center - half),
          errors == trials ? 1.0 : std::min(1.0, center + half)};
}

// Tallies of a decoding run. A trial counts toward modsum_errors (resp.
// own_errors) when at least one modulus-sum (direct) stage failed in it.
// per_layer_errors[i] counts direct-stage failures at layer i (layer 0 is
// the bottom layer, decoded last); the conditional counters restrict to
// trials where every decode step before that stage succeeded, which is the
// view the layered analysis reasons about.
struct SimOutcome {
  long trials = 0;
  long modsum_errors = 0;
  long own_errors = 0;
  std::vector<long> per_layer_errors;
  std::vector<long> per_layer_cond_errors;
  std::vector<long> per_layer_cond_trials;
  WilsonInterval modsum_ci;
  WilsonInterval own_ci;
  std::vector<WilsonInterval> per_layer_ci;

  double modsum_error_rate() const { return double(modsum_errors) / double(trials); }
  double own_error_rate() const { return double(own_errors) / double(trials); }
};

namespace detail {

struct Tallies {
  long modsum = 0;
  long own = 0;
  std::vector<long> layer_err, cond_err, cond_n;
};

inline SimOutcome merge_tallies(long trials, int layers, const std::vector<Tallies>& parts) {
  SimOutcome out;
  out.trials = trials;
  out.per_layer_errors.assign(layers, 0);
  out.per_layer_cond_errors.assign(layers, 0);
  out.per_layer_cond_trials.assign(layers, 0);
  for (const auto& p : parts) {
    out.modsum_errors += p.modsum;
    out.own_errors += p.own;
    if (p.layer_err.empty()) continue;
    for (int i = 0; i < layers; ++i) {
      out.per_layer_errors[i] += p.layer_err[i];
      out.per_layer_cond_errors[i] += p.cond_err[i];
      out.per_layer_cond_trials[i] += p.cond_n[i];
    }
  }
  out.modsum_ci = wilson_ci(out.modsum_errors, trials);
  out.own_ci = wilson_ci(out.own_errors, trials);
  out.per_layer_ci.reserve(layers);
  for (int i = 0; i < layers; ++i)
    out.per_layer_ci.push_back(wilson_ci(out.per_layer_errors[i], trials));
  return out;
}

}  // namespace detail

// Single-layer chain at receiver 1: decode the modulus sum of the K-1
// interferers treating the direct signal as clutter, reconstruct and cancel
// it modulo the coarse lattice, then decode the direct message from the
// residual. Stage errors propagate; nothing is genie-aided. Deterministic in
// (seed, trials) for any worker count.
inline SimOutcome run_single_layer(const SimConfig& sim, int workers = 1) {
  sim.validate();
  const int k = sim.cfg.k;
  const double b = sim.cfg.b;
  const ScalarNestedLattice lat = sim.lattice;
  const double pt = lat.region_power();
  const double nvar = sim.noise_std * sim.noise_std;
  const bool exact = sim.noise_std == 0.0;
  const double scale_mod = exact ? 1.0 : mmse_scale((k - 1) * pt, b * b * pt + nvar);
  const double scale_own = exact ? 1.0 : mmse_scale(b * b * pt, nvar);

  std::vector<detail::Tallies> parts(num_chunks(sim.trials, workers));
  parallel_chunks(sim.trials, workers, [&](int chunk, long lo, long hi) {
    auto& c = parts[chunk];
    c.layer_err.assign(1, 0);
    c.cond_err.assign(1, 0);
    c.cond_n.assign(1, 0);
    std::vector<int> tidx(k);
    std::vector<double> dither(k), interferer_dithers(k - 1);
    for (long t = lo; t < hi; ++t) {
      TrialRng rng(sim.seed, uint64_t(t));
      double y = 0.0;
      int sum_idx = 0;
      double dsum = 0.0;
      for (int j = 0; j < k; ++j) {
        tidx[j] = rng.uniform_int(lat.q);
        dither[j] = rng.uniform(-0.5 * lat.gamma, 0.5 * lat.gamma);
        const double x = encode(tidx[j], dither[j], lat).x;
        if (j == 0) {
          y += b * x;
        } else {
          y += x;
          sum_idx += tidx[j];
          dsum += dither[j];
          interferer_dithers[j - 1] = dither[j];
        }
      }
      y += sim.noise_std * rng.gaussian();

      const double shat = decode_modsum(y, interferer_dithers, lat, scale_mod);
      const bool modsum_bad = fine_index_of(shat, lat) != sum_idx % lat.q;

      const double vhat = mod_lattice(shat + dsum, lat);
      const double resid = mod_lattice(mod_lattice(y, lat) - vhat, lat);
      const double u = mod_lattice(scale_own * (resid / b) - dither[0], lat);
      const bool own_bad = fine_index_of(quantize_fine(u, lat), lat) != tidx[0];

      c.modsum += modsum_bad;
      c.own += own_bad;
      c.layer_err[0] += own_bad;
      if (!modsum_bad) {
        ++c.cond_n[0];
        c.cond_err[0] += own_bad;
      }
    }
  });
  return detail::merge_tallies(sim.trials, 1, parts);
}

// Layered successive decoder (3 users), top layer first. Within a layer the
// stage order follows the plan's regime: interference first in the strong
// regime, the direct signal first in the weak regime. Cancellation of the
// modulus sum happens modulo that layer's coarse lattice, so a fold of the
// lower-layer residual is a genuine error event that propagates downward.
inline SimOutcome run_layered(const SimConfig& sim, const LayerPlan& plan, int workers = 1) {
  sim.validate();
  if (sim.cfg.k != 3)
    throw std::domain_error("run_layered: the layered scheme is a 3-user construction");
  if (std::abs(sim.cfg.b2() - (plan.beta - 2.0)) > 1e-9 * plan.beta)
    throw std::domain_error("run_layered: plan was built for a different gain");
  const bool interference_first = sim.decode_order == DecodeOrder::InterferenceFirst;
  if (interference_first != (plan.regime == Regime::Strong))
    throw std::domain_error("run_layered: decode order inconsistent with the plan's regime");

  const int m = plan.layers;
  const double b = sim.cfg.b;
  const double s = b * b;
  const double nvar = sim.noise_std * sim.noise_std;
  const bool exact = sim.noise_std == 0.0;
  std::vector<ScalarNestedLattice> lats(m);
  for (int i = 0; i < m; ++i)
    lats[i] = {std::sqrt(12.0 * plan.layer_power[i]), sim.lattice.q};

  std::vector<detail::Tallies> parts(num_chunks(sim.trials, workers));
  parallel_chunks(sim.trials, workers, [&](int chunk, long lo, long hi) {
    auto& c = parts[chunk];
    c.layer_err.assign(m, 0);
    c.cond_err.assign(m, 0);
    c.cond_n.assign(m, 0);
    std::vector<std::vector<int>> tidx(3, std::vector<int>(m));
    std::vector<std::vector<double>> dith(3, std::vector<double>(m));
    for (long t = lo; t < hi; ++t) {
      TrialRng rng(sim.seed, uint64_t(t));
      double user_sum[3] = {0.0, 0.0, 0.0};
      for (int u = 0; u < 3; ++u) {
        for (int i = 0; i < m; ++i) {
          tidx[u][i] = rng.uniform_int(lats[i].q);
          dith[u][i] = rng.uniform(-0.5 * lats[i].gamma, 0.5 * lats[i].gamma);
          user_sum[u] += encode(tidx[u][i], dith[u][i], lats[i]).x;
        }
      }
      double r = b * user_sum[0] + user_sum[1] + user_sum[2] + sim.noise_std * rng.gaussian();

      bool trial_mod_bad = false, trial_own_bad = false, chain_ok = true;
      for (int i = m - 1; i >= 0; --i) {
        const ScalarNestedLattice& lay = lats[i];
        const double pi = plan.layer_power[i];
        const double clutter_below = (plan.accumulated[i] - 1.0) + nvar;
        const double dpair[2] = {dith[1][i], dith[2][i]};
        const int sum_idx = (tidx[1][i] + tidx[2][i]) % lay.q;
        bool mod_bad = false, own_bad = false;

        if (interference_first) {
          const double sc_mod = exact ? 1.0 : mmse_scale(2.0 * pi, s * pi + clutter_below);
          const double shat = decode_modsum(r, dpair, lay, sc_mod);
          mod_bad = fine_index_of(shat, lay) != sum_idx;
          const double vhat = mod_lattice(shat + dpair[0] + dpair[1], lay);
          const double w = mod_lattice(mod_lattice(r, lay) - vhat, lay);
          const double sc_own = exact ? 1.0 : mmse_scale(s * pi, clutter_below);
          const double u = mod_lattice(sc_own * (w / b) - dith[0][i], lay);
          const int that = fine_index_of(quantize_fine(u, lay), lay);
          own_bad = that != tidx[0][i];
          if (chain_ok && !mod_bad) {
            ++c.cond_n[i];
            c.cond_err[i] += own_bad;
          }
          r = w - b * mod_lattice(fine_point(that, lay) + dith[0][i], lay);
        } else {
          const double sc_own = exact ? 1.0 : mmse_scale(s * pi, 2.0 * pi + clutter_below);
          const double u = mod_lattice(sc_own * (r / b) - dith[0][i], lay);
          const int that = fine_index_of(quantize_fine(u, lay), lay);
          own_bad = that != tidx[0][i];
          if (chain_ok) {
            ++c.cond_n[i];
            c.cond_err[i] += own_bad;
          }
          const double r2 = r - b * mod_lattice(fine_point(that, lay) + dith[0][i], lay);
          const double sc_mod = exact ? 1.0 : mmse_scale(2.0 * pi, clutter_below);
          const double shat = decode_modsum(r2, dpair, lay, sc_mod);
          mod_bad = fine_index_of(shat, lay) != sum_idx;
          const double vhat = mod_lattice(shat + dpair[0] + dpair[1], lay);
          r = mod_lattice(mod_lattice(r2, lay) - vhat, lay);
        }

        c.layer_err[i] += own_bad;
        trial_mod_bad |= mod_bad;
        trial_own_bad |= own_bad;
        chain_ok = chain_ok && !mod_bad && !own_bad;
      }
      c.modsum += trial_mod_bad;
      c.own += trial_own_bad;
    }
  });
  return detail::merge_tallies(sim.trials, m, parts);
}

inline constexpr uint64_t kDefaultEnumCap = uint64_t(1) << 24;

// Exact discrete entropies of the secrecy chain, all in bits. Everything is
// computed by exhaustive enumeration over the q^(k-1) equiprobable interferer
// index tuples; the modulus sum is the index sum mod q and the carry is the
// index sum div q.
struct LeakageReport {
  int q = 0;
  int k = 0;
  double joint_entropy = 0.0;                   // H(all interferer indices)
  double modsum_entropy = 0.0;                  // H(modulus sum)
  double cond_entropy_given_modsum = 0.0;       // H(indices | modulus sum)
  double carry_entropy = 0.0;                   // H(carry)
  double cond_entropy_given_modsum_carry = 0.0; // H(indices | modulus sum, carry)
  double leakage = 0.0;                         // I(indices ; exact sum)
  double bound = 0.0;                           // log2 q + log2(k-1)
  bool within_bound = false;
};

namespace detail {

inline uint64_t tuple_count_or_throw(int q, int k, uint64_t cap) {
  if (q < 2 || q > 64) throw std::domain_error("enumeration: need 2 <= q <= 64");
  if (k < 2 || k > 5) throw std::domain_error("enumeration: need 2 <= k <= 5");
  uint64_t tuples = 1;
  for (int i = 0; i < k - 1; ++i) tuples *= uint64_t(q);
  if (tuples > cap) throw resource_error("enumeration: tuple count exceeds the cap");
  return tuples;
}

inline double entropy_bits(const std::vector<uint64_t>& counts, uint64_t total) {
  double acc = 0.0;
  for (uint64_t c : counts)
    if (c > 0) acc += double(c) * std::log2(double(c));
  return std::log2(double(total)) - acc / double(total);
}

}  // namespace detail

inline LeakageReport exhaustive_leakage(int q, int k, uint64_t cap = kDefaultEnumCap) {
  const uint64_t tuples = detail::tuple_count_or_throw(q, k, cap);
  const int m = k - 1;
  std::vector<uint64_t> sum_count(size_t(m) * (q - 1) + 1, 0);
  std::vector<uint64_t> mod_count(q, 0), carry_count(m, 0);
  std::vector<int> digit(m, 0);
  int s = 0;
  for (uint64_t n = 0; n < tuples; ++n) {
    ++sum_count[s];
    ++mod_count[s % q];
    ++carry_count[s / q];
    for (int i = 0; i < m; ++i) {
      if (++digit[i] < q) {
        ++s;
        break;
      }
      digit[i] = 0;
      s -= q - 1;
    }
  }
  LeakageReport rep;
  rep.q = q;
  rep.k = k;
  rep.joint_entropy = m * std::log2(double(q));
  rep.modsum_entropy = detail::entropy_bits(mod_count, tuples);
  rep.cond_entropy_given_modsum = rep.joint_entropy - rep.modsum_entropy;
  rep.carry_entropy = detail::entropy_bits(carry_count, tuples);
  const double h_sum = detail::entropy_bits(sum_count, tuples);
  rep.leakage = h_sum;  // the exact sum is a function of the tuple
  rep.cond_entropy_given_modsum_carry = rep.joint_entropy - h_sum;
  rep.bound = std::log2(double(q)) + std::log2(double(m));
  rep.within_bound = rep.leakage <= rep.bound + kBoundaryTol;
  return rep;
}

// Verify over every tuple that (modulus sum, carry) determines the exact sum
// and that the carry never needs more than k-1 values. The reconstruction
// identity is checked in exact integer arithmetic; when q is a power of two
// the tuple is also routed through the floating-point lattice ops (dyadic
// spacings keep those sums exact).
inline bool representation_soundness(int q, int k, uint64_t cap = kDefaultEnumCap) {
  const uint64_t tuples = detail::tuple_count_or_throw(q, k, cap);
  const int m = k - 1;
  const bool dyadic = (q & (q - 1)) == 0;
  const ScalarNestedLattice lat{1.0, q};
  std::vector<int> digit(m, 0);
  for (uint64_t n = 0; n < tuples; ++n) {
    int s = 0;
    for (int i = 0; i < m; ++i) s += digit[i];
    const int carry = s / q;
    if (carry < 0 || carry >= m) return false;
    if (carry * q + s % q != s) return false;
    if (dyadic) {
      double x = 0.0;
      for (int i = 0; i < m; ++i) x += digit[i] * lat.fine_spacing();
      const int t1 = representation_index(x, lat, m);
      if (t1 != carry) return false;
      const double rebuilt = t1 * lat.gamma + mod_shifted(x, lat.gamma);
      if (std::abs(rebuilt - x) > 1e-12) return false;
    }
    for (int i = 0; i < m; ++i) {
      if (++digit[i] < q) break;
      digit[i] = 0;
    }
  }
  return true;
}

}  // namespace klic
