#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "klic/common.hpp"

namespace klic {

enum class Regime { Strong, Weak };

inline constexpr std::string_view regime_name(Regime r) {
  return r == Regime::Strong ? "strong" : "weak";
}

// Gain-squared limits of the two layered regimes. The band between them is
// covered by neither decode order.
inline constexpr double kStrongB2Max = 6.0 - 4.0 * std::numbers::sqrt2;
inline constexpr double kWeakB2Min = 1.5;

inline std::optional<Regime> regime_of(double b2) {
  if (b2 > 0.0 && b2 < kStrongB2Max) return Regime::Strong;
  if (b2 > kWeakB2Min) return Regime::Weak;
  return std::nullopt;
}

inline double beta_of(double b) { return b * b + 2.0; }

// Power ratio P_i/A_i that balances the modulus-sum and direct decodability
// bounds when interference is decoded first:
//   alpha = (2 - 3b^2 + sqrt(4 - 12b^2 + b^4)) / (4 b^4).
// Defined for 0 < b^2 <= 6 - 4*sqrt(2); the discriminant vanishes exactly at
// the upper boundary, which is admitted inclusively.
inline double alpha_strong(double b) {
  const double s = b * b;
  if (!(s > 0.0)) throw std::domain_error("alpha_strong: need b > 0");
  if (s > kStrongB2Max + kBoundaryTol)
    throw regime_error("alpha_strong: b^2 beyond the strong-interference regime");
  const double disc = std::max(0.0, 4.0 - 12.0 * s + s * s);
  return (2.0 - 3.0 * s + std::sqrt(disc)) / (4.0 * s * s);
}

// Balancing ratio when the direct signal is decoded first:
//   alpha = (b^2 + sqrt(b^4 + 4)) / 4,   defined for b^2 >= 3/2.
// At the boundary alpha = 1 exactly; the scheme itself needs alpha > 1.
inline double alpha_weak(double b) {
  const double s = b * b;
  if (s < kWeakB2Min - kBoundaryTol)
    throw regime_error("alpha_weak: b^2 below the weak-interference regime");
  return 0.25 * (s + std::sqrt(s * s + 4.0));
}

inline double alpha_of(double b, Regime regime) {
  return regime == Regime::Strong ? alpha_strong(b) : alpha_weak(b);
}

inline Regime regime_or_throw(double b) {
  const auto r = regime_of(b * b);
  if (!r)
    throw regime_error("no layered scheme covers 6-4*sqrt(2) <= b^2 <= 3/2");
  return *r;
}

// Common per-layer codebook rate, equal to 0.25*log2(alpha*beta + 1) - 0.25.
// Both stage bounds are evaluated and cross-checked rather than averaged, so
// an allocation bug cannot hide in a mean.
inline double per_layer_rate(double b, Regime regime) {
  const double s = b * b;
  const double a = alpha_of(b, regime);
  double first, second;
  if (regime == Regime::Strong) {
    first = 0.5 * std::log2(0.5 + a / (s * a + 1.0));        // modulus-sum stage
    second = 0.5 * std::log2(1.0 + s * a);                   // direct stage
  } else {
    first = 0.5 * std::log2(1.0 + s * a / (2.0 * a + 1.0));  // direct stage
    second = 0.5 * std::log2(0.5 + a);                       // modulus-sum stage
  }
  if (std::abs(first - second) > 1e-9)
    throw std::logic_error("per_layer_rate: stage bounds failed to balance");
  return second;
}

inline double per_layer_secrecy_rate(double b, Regime regime) {
  return std::max(0.0, 0.5 * per_layer_rate(b, regime) - 0.5);
}

// Geometric power allocation across M layers. Layer powers satisfy
// P_i = alpha*(alpha*beta + 1)^(i-1) and the accumulated lower-layer
// interference-plus-noise terms A_i = (alpha*beta + 1)^(i-1), with
// A_1 = 1 and A_{i+1} = A_i + beta*P_i.
struct LayerPlan {
  Regime regime = Regime::Strong;
  double alpha = 0.0;
  double beta = 0.0;
  int layers = 0;
  std::vector<double> layer_power;    // P_1..P_M
  std::vector<double> accumulated;    // A_1..A_{M+1}
  double layer_rate = 0.0;            // per-layer codebook rate
  double layer_secrecy_rate = 0.0;

  // Closed form ((alpha*beta + 1)^M - 1)/beta for the per-user power.
  double total_power() const {
    return (std::pow(alpha * beta + 1.0, layers) - 1.0) / beta;
  }
  double sum_rate() const { return layers * layer_rate; }
};

inline LayerPlan build_plan(double b, int layers) {
  if (layers < 1) throw std::domain_error("build_plan: need at least one layer");
  const Regime regime = regime_or_throw(b);
  const double s = b * b;
  LayerPlan plan;
  plan.regime = regime;
  plan.alpha = alpha_of(b, regime);
  plan.beta = beta_of(b);
  plan.layers = layers;
  const double growth = plan.alpha * plan.beta + 1.0;
  plan.layer_power.reserve(layers);
  plan.accumulated.reserve(layers + 1);
  double acc = 1.0;
  for (int i = 0; i < layers; ++i) {
    plan.accumulated.push_back(acc);
    plan.layer_power.push_back(plan.alpha * acc);
    acc *= growth;
  }
  plan.accumulated.push_back(acc);
  plan.layer_rate = per_layer_rate(b, regime);
  plan.layer_secrecy_rate = per_layer_secrecy_rate(b, regime);

  if (regime == Regime::Strong) {
    if (!((1.0 - s) * plan.alpha >= 1.0))
      throw std::logic_error("build_plan: (1-b^2)*alpha >= 1 violated");
    for (int i = 0; i < layers; ++i)
      if (!(plan.layer_power[i] > s * plan.layer_power[i] + plan.accumulated[i]))
        throw std::logic_error("build_plan: layer power does not dominate its clutter");
  } else {
    if (!(plan.alpha > 1.0))
      throw std::logic_error("build_plan: weak allocation needs alpha > 1");
  }
  return plan;
}

// Number of fully funded layers a per-user power budget supports:
// M = floor(log(beta*p + 1)/log(alpha*beta + 1)). Leftover power stays
// unused; a partially funded layer is never emitted.
inline int layers_for_power(double b, double power) {
  if (!(power > 0.0)) throw std::domain_error("layers_for_power: power must be positive");
  const Regime regime = regime_or_throw(b);
  const double a = alpha_of(b, regime);
  const double beta = beta_of(b);
  return int(std::floor(std::log(beta * power + 1.0) / std::log(a * beta + 1.0)));
}

inline LayerPlan build_plan_for_power(double b, double power) {
  const int m = layers_for_power(b, power);
  if (m < 1) throw std::domain_error("build_plan_for_power: budget below the first layer");
  return build_plan(b, m);
}

// Sum-rate degrees of freedom of the layered scheme (3 users):
// 1.5 - 1.5/log2(alpha*beta + 1).
inline double dof(double b, Regime regime) {
  const double l = std::log2(alpha_of(b, regime) * beta_of(b) + 1.0);
  return 1.5 - 1.5 / l;
}

// Secrecy sum-rate degrees of freedom: [3/4 - 3.75/log2(alpha*beta + 1)]+,
// zero exactly once log2(alpha*beta + 1) <= 5.
inline double sdof(double b, Regime regime) {
  const double l = std::log2(alpha_of(b, regime) * beta_of(b) + 1.0);
  return std::max(0.0, 0.75 - 3.75 / l);
}

// Gain-squared point where the secrecy-DoF bracket changes sign, i.e. where
// log2(alpha*beta + 1) crosses 5. Bisection to 1e-10 relative width.
inline double sdof_zero_crossing(Regime regime) {
  auto excess = [&](double s) {
    return std::log2(alpha_of(std::sqrt(s), regime) * (s + 2.0) + 1.0) - 5.0;
  };
  double lo, hi;
  if (regime == Regime::Strong) {
    lo = 1e-9;
    hi = kStrongB2Max;
  } else {
    lo = kWeakB2Min + 1e-9;
    hi = 4.0;
    while (excess(hi) <= 0.0) hi *= 2.0;
  }
  const bool lo_positive = excess(lo) > 0.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-10 * (0.5 * (lo + hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((excess(mid) > 0.0) == lo_positive)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Sum-rate DoF of the base-b expansion benchmark: (k/2)(1 - log_b(2k)),
// clamped at zero. The logarithm base is the amplitude gain b.
inline double qbit_dof(int k, double b) {
  if (k < 2) throw std::domain_error("qbit_dof: need k >= 2");
  if (!(b > 1.0)) throw std::domain_error("qbit_dof: base gain must exceed 1");
  return std::max(0.0, 0.5 * k * (1.0 - std::log(2.0 * k) / std::log(b)));
}

// Finite-layer sum-rate slope (3 users) against 0.5*log2 of the total power;
// approaches dof() as the layer count grows. Evaluated in log space so large
// layer counts cannot overflow.
inline double finite_m_dof(double b, Regime regime, int layers) {
  if (layers < 1) throw std::domain_error("finite_m_dof: need at least one layer");
  const double a = alpha_of(b, regime);
  const double beta = beta_of(b);
  const double growth_log2 = std::log2(a * beta + 1.0);
  const double sum_rate = 3.0 * layers * per_layer_rate(b, regime);
  const double log2_power = layers * growth_log2 +
                            std::log1p(-std::pow(a * beta + 1.0, -layers)) / std::numbers::ln2 -
                            std::log2(beta);
  return sum_rate / (0.5 * (std::log2(3.0) + log2_power));
}

// One row per grid point of the DoF comparison dataset. Lattice-scheme
// columns stay empty in the regime gap; the expansion benchmark column stays
// empty where its log base b = sqrt(b2) is not > 1.
struct Fig2Row {
  double b2 = 0.0;
  std::optional<Regime> regime;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> dof;
  std::optional<double> sdof;
  std::optional<double> qbit_dof;
};

inline std::vector<Fig2Row> fig2_dataset(std::span<const double> b2_grid, int k = 3) {
  if (k != 3)
    throw std::domain_error("fig2_dataset: lattice-scheme columns are derived for 3 users");
  std::vector<Fig2Row> rows;
  rows.reserve(b2_grid.size());
  for (double s : b2_grid) {
    if (!(s > 0.0)) throw std::domain_error("fig2_dataset: grid values must be positive");
    Fig2Row row;
    row.b2 = s;
    if (auto regime = regime_of(s)) {
      const double b = std::sqrt(s);
      row.regime = regime;
      row.alpha = alpha_of(b, *regime);
      row.beta = beta_of(b);
      row.dof = klic::dof(b, *regime);
      row.sdof = klic::sdof(b, *regime);
    }
    if (s > 1.0) row.qbit_dof = klic::qbit_dof(k, std::sqrt(s));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace klic
