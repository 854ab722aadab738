#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "klic/layered.hpp"

using namespace klic;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = std::exp(std::log(lo) + i * (std::log(hi) - std::log(lo)) / (n - 1));
  return g;
}

}  // namespace

TEST_CASE("alpha_strong") {
  CHECK_THAT(alpha_strong(std::sqrt(0.1)), WithinRel(84.407636535600531, 1e-12));

  // boundary: discriminant vanishes, alpha = (2 - 3b^2)/(4 b^4)
  // at the boundary the clamped discriminant contributes at most
  // sqrt(~1e-15)/(4 b^4) ~ 1e-7 of round-off to alpha
  const double s0 = kStrongB2Max;
  CHECK(std::abs(4.0 - 12.0 * s0 + s0 * s0) < 1e-9);
  CHECK_THAT(alpha_strong(std::sqrt(s0)), WithinRel(2.0606601717798213, 1e-6));

  // alpha * b^4 -> 1 as b -> 0
  CHECK_THAT(alpha_strong(std::sqrt(1e-6)) * 1e-12, WithinAbs(1.0, 1e-5));

  CHECK_THROWS_AS(alpha_strong(std::sqrt(0.4)), regime_error);
  CHECK_THROWS_AS(alpha_strong(0.0), std::domain_error);

  // alpha solves the balance equation: 1/2 + a/(b^2 a + 1) = 1 + b^2 a
  for (double s : log_grid(1e-4, s0 * 0.999, 40)) {
    const double a = alpha_strong(std::sqrt(s));
    CHECK_THAT(0.5 + a / (s * a + 1.0), WithinRel(1.0 + s * a, 1e-10));
  }
}

TEST_CASE("alpha_weak") {
  CHECK_THAT(alpha_weak(std::sqrt(1.5)), WithinAbs(1.0, 1e-12));
  CHECK_THAT(alpha_weak(2.0), WithinRel(2.1180339887498949, 1e-14));
  CHECK_THAT(alpha_weak(3.0), WithinRel(4.5548861143232218, 1e-14));
  CHECK_THROWS_AS(alpha_weak(std::sqrt(1.4)), regime_error);

  // alpha solves 1 + b^2 a/(2a + 1) = 1/2 + a
  for (double s : log_grid(1.5001, 1e3, 40)) {
    const double a = alpha_weak(std::sqrt(s));
    CHECK(a > 1.0);
    CHECK_THAT(1.0 + s * a / (2.0 * a + 1.0), WithinRel(0.5 + a, 1e-10));
  }
}

TEST_CASE("build_plan") {
  const LayerPlan plan = build_plan(std::sqrt(0.1), 3);
  CHECK(plan.regime == Regime::Strong);
  CHECK(plan.layers == 3);
  const double total = std::accumulate(plan.layer_power.begin(), plan.layer_power.end(), 0.0);
  CHECK_THAT(total, WithinRel(2697201.3456247593, 1e-10));
  CHECK_THAT(plan.total_power(), WithinRel(total, 1e-12));

  // A_{i+1}/A_i is the geometric growth factor
  const double growth = plan.alpha * plan.beta + 1.0;
  CHECK_THAT(plan.accumulated[3] / plan.accumulated[2], WithinRel(growth, 1e-12));
  CHECK(plan.accumulated[0] == 1.0);

  // single layer degenerates to P = alpha
  const LayerPlan one = build_plan(std::sqrt(0.1), 1);
  CHECK_THAT(one.total_power(), WithinRel(one.alpha, 1e-12));
  CHECK(one.layer_power[0] == one.alpha);

  CHECK_THROWS_AS(build_plan(1.0, 2), regime_error);  // gap
  CHECK_THROWS_AS(build_plan(std::sqrt(0.35), 2), regime_error);
  CHECK_THROWS_AS(build_plan(std::sqrt(1.45), 2), regime_error);
  CHECK_THROWS_AS(build_plan(std::sqrt(0.1), 0), std::domain_error);
  // both gap boundaries belong to the gap (exact b^2 comparison)
  CHECK_FALSE(regime_of(kStrongB2Max).has_value());
  CHECK_FALSE(regime_of(kWeakB2Min).has_value());
}

TEST_CASE("allocation identities over both regimes") {
  auto check_plan = [](double b, int layers) {
    const LayerPlan plan = build_plan(b, layers);
    const double growth = plan.alpha * plan.beta + 1.0;
    // closed forms
    double pw = plan.alpha, acc = 1.0;
    for (int i = 0; i < layers; ++i) {
      CHECK_THAT(plan.layer_power[i], WithinRel(pw, 1e-10));
      CHECK_THAT(plan.accumulated[i], WithinRel(acc, 1e-10));
      pw *= growth;
      acc *= growth;
    }
    // recursion A_{i+1} = A_i + beta*P_i reproduces the stored sequence
    double rec = 1.0;
    for (int i = 0; i < layers; ++i) {
      rec += plan.beta * plan.layer_power[i];
      CHECK_THAT(plan.accumulated[i + 1], WithinRel(rec, 1e-10));
    }
    const double total = std::accumulate(plan.layer_power.begin(), plan.layer_power.end(), 0.0);
    CHECK_THAT(total, WithinRel(plan.total_power(), 1e-10));
    // feasibility
    if (plan.regime == Regime::Strong) {
      CHECK((1.0 - (plan.beta - 2.0)) * plan.alpha >= 1.0);
      for (int i = 0; i < layers; ++i)
        CHECK(plan.layer_power[i] > (plan.beta - 2.0) * plan.layer_power[i] + plan.accumulated[i]);
    } else {
      CHECK(plan.alpha > 1.0);
    }
  };
  for (double s : log_grid(1e-3, kStrongB2Max * 0.999, 25)) check_plan(std::sqrt(s), 20);
  for (double s : log_grid(1.5001, 1e3, 25)) check_plan(std::sqrt(s), 20);
}

TEST_CASE("layers_for_power") {
  CHECK(layers_for_power(2.0, 100.0) == 2);
  const LayerPlan two = build_plan(2.0, 2);
  const LayerPlan three = build_plan(2.0, 3);
  CHECK(two.total_power() <= 100.0);
  CHECK(three.total_power() > 100.0);
  CHECK(build_plan_for_power(2.0, 100.0).layers == 2);
  CHECK_THROWS_AS(build_plan_for_power(2.0, 1.0), std::domain_error);  // below first layer
}

TEST_CASE("per-layer rate") {
  CHECK_THAT(per_layer_rate(std::sqrt(0.1), Regime::Strong), WithinRel(1.6194517812048075, 1e-12));
  CHECK_THAT(per_layer_rate(2.0, Regime::Weak), WithinRel(0.69424191363061727, 1e-12));
  CHECK_THAT(per_layer_secrecy_rate(std::sqrt(0.1), Regime::Strong),
             WithinRel(0.30972589060240374, 1e-12));

  // collapsed form 0.25*log2(alpha*beta + 1) - 0.25, both regimes
  for (double s : log_grid(1e-3, kStrongB2Max * 0.999, 30)) {
    const double b = std::sqrt(s);
    const double collapsed = 0.25 * std::log2(alpha_strong(b) * beta_of(b) + 1.0) - 0.25;
    CHECK_THAT(per_layer_rate(b, Regime::Strong), WithinAbs(collapsed, 1e-9));
  }
  for (double s : log_grid(1.5001, 1e3, 30)) {
    const double b = std::sqrt(s);
    const double collapsed = 0.25 * std::log2(alpha_weak(b) * beta_of(b) + 1.0) - 0.25;
    CHECK_THAT(per_layer_rate(b, Regime::Weak), WithinAbs(collapsed, 1e-9));
  }
  CHECK_THROWS_AS(per_layer_rate(1.0, Regime::Strong), regime_error);
}

TEST_CASE("stage bounds balance at every layer of a plan") {
  for (double s : {1e-3, 0.05, 0.2, 0.33}) {
    const double b = std::sqrt(s);
    const LayerPlan plan = build_plan(b, 20);
    for (int i = 0; i < plan.layers; ++i) {
      const double pi = plan.layer_power[i], ai = plan.accumulated[i];
      const double modsum_side = 0.5 * std::log2(0.5 + pi / (s * pi + ai));
      const double direct_side = 0.5 * std::log2(1.0 + s * pi / ai);
      CHECK_THAT(modsum_side, WithinAbs(direct_side, 1e-9));
      CHECK_THAT(modsum_side, WithinAbs(plan.layer_rate, 1e-9));
    }
  }
  for (double s : {1.6, 2.0, 4.0, 25.0}) {
    const double b = std::sqrt(s);
    const LayerPlan plan = build_plan(b, 20);
    for (int i = 0; i < plan.layers; ++i) {
      const double pi = plan.layer_power[i], ai = plan.accumulated[i];
      const double direct_side = 0.5 * std::log2(1.0 + s * pi / (2.0 * pi + ai));
      const double modsum_side = 0.5 * std::log2(0.5 + pi / ai);
      CHECK_THAT(direct_side, WithinAbs(modsum_side, 1e-9));
      CHECK_THAT(direct_side, WithinAbs(plan.layer_rate, 1e-9));
    }
  }
}

TEST_CASE("sum rate telescopes") {
  for (double s : {0.05, 0.2, 2.5, 9.0}) {
    const double b = std::sqrt(s);
    const auto regime = regime_of(s);
    REQUIRE(regime);
    const LayerPlan plan = build_plan(b, 12);
    const double telescoped = 0.5 * (0.5 * std::log2(plan.accumulated[plan.layers]) -
                                     0.5 * plan.layers);
    CHECK_THAT(plan.sum_rate(), WithinRel(telescoped, 1e-10));
  }
}

TEST_CASE("dof and sdof") {
  CHECK_THAT(dof(std::sqrt(0.1), Regime::Strong), WithinAbs(1.2994064336025166, 1e-12));
  CHECK_THAT(dof(2.0, Regime::Weak), WithinAbs(1.1028560111697201, 1e-12));
  CHECK_THAT(sdof(std::sqrt(0.1), Regime::Strong), WithinAbs(0.24851608400629166, 1e-12));
  CHECK(sdof(2.0, Regime::Weak) == 0.0);  // bracket is negative, clamped
  CHECK_THAT(sdof(3.0, Regime::Weak), WithinAbs(0.089248635353608941, 1e-12));

  // ranges
  for (double s : log_grid(1e-8, kStrongB2Max * 0.999, 20)) {
    const double d = dof(std::sqrt(s), Regime::Strong);
    CHECK(d > 0.0);
    CHECK(d < 1.5);
    const double sd = sdof(std::sqrt(s), Regime::Strong);
    CHECK(sd >= 0.0);
    CHECK(sd < 0.75);
  }

  // monotone toward the limits
  double prev_d = 0.0, prev_sd = 0.0;
  for (double s : {1e-2, 1e-4, 1e-6, 1e-8, 1e-12}) {
    const double d = dof(std::sqrt(s), Regime::Strong);
    const double sd = sdof(std::sqrt(s), Regime::Strong);
    CHECK(d > prev_d);
    CHECK(sd > prev_sd);
    prev_d = d;
    prev_sd = sd;
  }
  prev_d = prev_sd = 0.0;
  for (double s : {1e2, 1e4, 1e6, 1e8, 1e12}) {
    const double d = dof(std::sqrt(s), Regime::Weak);
    const double sd = sdof(std::sqrt(s), Regime::Weak);
    CHECK(d > prev_d);
    CHECK(sd > prev_sd);
    prev_d = d;
    prev_sd = sd;
  }
  CHECK_THROWS_AS(dof(1.0, Regime::Strong), regime_error);
}

TEST_CASE("sdof zero crossing") {
  const double weak = sdof_zero_crossing(Regime::Weak);
  CHECK_THAT(weak, WithinRel(48.0 / 7.0, 1e-9));
  const double strong = sdof_zero_crossing(Regime::Strong);
  CHECK_THAT(strong, WithinRel(3.0 / 14.0, 1e-9));

  // the defining bracket changes sign across each crossing
  auto excess = [](double s, Regime r) {
    return std::log2(alpha_of(std::sqrt(s), r) * (s + 2.0) + 1.0) - 5.0;
  };
  CHECK(excess(weak * 0.99, Regime::Weak) < 0.0);
  CHECK(excess(weak * 1.01, Regime::Weak) > 0.0);
  CHECK(excess(strong * 0.99, Regime::Strong) > 0.0);
  CHECK(excess(strong * 1.01, Regime::Strong) < 0.0);

  // positivity flips on either side
  CHECK(sdof(std::sqrt(weak * 0.9), Regime::Weak) == 0.0);
  CHECK(sdof(std::sqrt(weak * 1.1), Regime::Weak) > 0.0);
  CHECK(sdof(std::sqrt(strong * 0.9), Regime::Strong) > 0.0);
  CHECK(sdof(std::sqrt(strong * 1.1), Regime::Strong) == 0.0);
}

TEST_CASE("qbit benchmark") {
  CHECK_THAT(qbit_dof(3, 36.0), WithinAbs(0.75, 1e-12));
  CHECK(qbit_dof(3, 6.0) == 0.0);
  CHECK_THAT(qbit_dof(3, 8.0), WithinAbs(0.20751874963942185, 1e-14));
  CHECK(qbit_dof(3, 2.0) == 0.0);  // negative bracket, clamped
  CHECK_THROWS_AS(qbit_dof(3, 1.0), std::domain_error);
  CHECK_THROWS_AS(qbit_dof(3, 0.5), std::domain_error);
}

TEST_CASE("finite-layer slope approaches the dof") {
  const double b = std::sqrt(0.1);
  const double limit = dof(b, Regime::Strong);
  const double at50 = finite_m_dof(b, Regime::Strong, 50);
  CHECK(std::abs(at50 - limit) / limit < 0.02);
  // improves with more layers
  CHECK(std::abs(finite_m_dof(b, Regime::Strong, 200) - limit) <
        std::abs(finite_m_dof(b, Regime::Strong, 20) - limit));
  // log-space evaluation survives layer counts whose powers overflow doubles
  CHECK(std::isfinite(finite_m_dof(b, Regime::Strong, 5000)));
}

TEST_CASE("fig2 dataset") {
  const std::vector<double> grid{0.1, 1.0, 4.0, 1296.0};
  const auto rows = fig2_dataset(grid);
  REQUIRE(rows.size() == 4);

  CHECK(rows[0].regime == Regime::Strong);
  CHECK_THAT(*rows[0].dof, WithinAbs(1.2994064336025166, 1e-12));
  CHECK_THAT(*rows[0].sdof, WithinAbs(0.24851608400629166, 1e-12));
  CHECK_FALSE(rows[0].qbit_dof.has_value());  // base would be <= 1

  CHECK_FALSE(rows[1].regime.has_value());  // gap
  CHECK_FALSE(rows[1].alpha.has_value());
  CHECK_FALSE(rows[1].dof.has_value());

  CHECK(rows[2].regime == Regime::Weak);
  CHECK(*rows[2].qbit_dof == 0.0);

  CHECK_THAT(*rows[3].qbit_dof, WithinAbs(0.75, 1e-12));

  CHECK_THROWS_AS(fig2_dataset(std::vector<double>{-1.0}), std::domain_error);
  CHECK_THROWS_AS(fig2_dataset(grid, 4), std::domain_error);
}
