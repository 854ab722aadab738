#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

#include "klic/common.hpp"

namespace klic {

// One-dimensional nested lattice pair: coarse lattice gamma*Z, fine lattice
// (gamma/q)*Z. The q fine points inside the centered fundamental region
// [-gamma/2, gamma/2) form the Voronoi codebook (rate log2 q bits per
// dimension), and a dither uniform over the region carries power gamma^2/12.
struct ScalarNestedLattice {
  double gamma = 1.0;
  int q = 2;

  void validate() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
      throw std::domain_error("lattice: gamma must be positive and finite");
    if (q < 2) throw std::domain_error("lattice: nesting ratio q must be >= 2");
  }
  double fine_spacing() const { return gamma / q; }
  double codebook_rate() const { return std::log2(double(q)); }
  double region_power() const { return gamma * gamma / 12.0; }
};

// Reduce into the centered fundamental region [-gamma/2, gamma/2).
// Boundary ties go with the half-open convention (gamma/2 maps to -gamma/2).
inline double mod_lattice(double x, const ScalarNestedLattice& lat) {
  const double g = lat.gamma;
  double r = x - g * std::floor(x / g + 0.5);
  if (r < -0.5 * g) r += g;
  if (r >= 0.5 * g) r -= g;
  return r;
}

// Reduce into the shifted region [0, gamma); used by the carry index.
inline double mod_shifted(double x, double gamma) {
  double r = x - gamma * std::floor(x / gamma);
  if (r < 0.0) r += gamma;
  if (r >= gamma) r -= gamma;
  return r;
}

// Codebook representative of a message index in [0, q).
inline double fine_point(int t_index, const ScalarNestedLattice& lat) {
  if (t_index < 0 || t_index >= lat.q)
    throw std::domain_error("fine_point: index outside [0, q)");
  return mod_lattice(t_index * lat.fine_spacing(), lat);
}

// Index in [0, q) of a fine-lattice point, taken modulo the coarse lattice.
inline int fine_index_of(double t, const ScalarNestedLattice& lat) {
  const long k = std::lround(t / lat.fine_spacing());
  return int(((k % lat.q) + lat.q) % lat.q);
}

// Nearest fine-lattice point, folded into the fundamental region.
inline double quantize_fine(double x, const ScalarNestedLattice& lat) {
  const double f = lat.fine_spacing();
  return mod_lattice(f * std::floor(x / f + 0.5), lat);
}

struct Codeword {
  double t = 0.0;  // codebook representative
  double d = 0.0;  // dither
  double x = 0.0;  // channel input, (t + d) mod coarse lattice
};

// Dithered mod-lattice encoding of one message index. The dither must lie in
// the fundamental region; with a uniform dither the channel input is uniform
// over the region regardless of the message.
inline Codeword encode(int t_index, double dither, const ScalarNestedLattice& lat) {
  lat.validate();
  if (t_index < 0 || t_index >= lat.q)
    throw std::domain_error("encode: index outside [0, q)");
  if (!(dither >= -0.5 * lat.gamma) || !(dither < 0.5 * lat.gamma))
    throw std::domain_error("encode: dither outside the fundamental region");
  Codeword w;
  w.t = fine_point(t_index, lat);
  w.d = dither;
  w.x = mod_lattice(w.t + dither, lat);
  return w;
}

// Estimate the modulus sum of the summed users' codebook points from a
// scaled channel observation, given those users' dithers. scale = 1 is exact
// in the noiseless unit-gain case; an MMSE scale trades the self-noise it
// introduces against channel noise.
inline double decode_modsum(double y, std::span<const double> dithers,
                            const ScalarNestedLattice& lat, double scale = 1.0) {
  lat.validate();
  if (!(scale > 0.0)) throw std::domain_error("decode_modsum: scale must be positive");
  double u = scale * y;
  for (double d : dithers) u -= d;
  return quantize_fine(mod_lattice(u, lat), lat);
}

// MMSE estimation coefficient for a signal of power ps observed in additive
// clutter of power pn.
inline double mmse_scale(double signal_power, double clutter_power) {
  return signal_power / (signal_power + clutter_power);
}

// Carry index of a sum of m values drawn from the shifted region [0, gamma).
// The pair (sum mod-shifted gamma, carry) reconstructs the sum exactly, and
// the carry takes one of exactly m values.
inline int representation_index(double x, const ScalarNestedLattice& lat, int m) {
  lat.validate();
  if (m < 1) throw std::domain_error("representation_index: need m >= 1");
  if (!(x >= 0.0) || !(x < m * lat.gamma))
    throw std::domain_error("representation_index: x outside [0, m*gamma)");
  return std::min(int(std::floor(x / lat.gamma)), m - 1);
}

}  // namespace klic
