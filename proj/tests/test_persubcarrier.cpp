// Copyright 2026 The dfra Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>

#include "dfra/baseline.hpp"
#include "dfra/errors.hpp"
#include "dfra/persubcarrier.hpp"
#include "testutil.hpp"

using namespace dfra;
using testutil::TestRng;

namespace {

// Builds a 1-subcarrier allocation from a per-subcarrier solution so the
// model-level checks can be applied to it.
Allocation to_alloc(const SubcarrierSolution& sol) {
  const int n = static_cast<int>(sol.p_r.size());
  Allocation a = Allocation::zeros(1, n);
  a.mode[0] = sol.t;
  a.cut[0] = sol.b;
  a.p_s[0] = sol.p_s;
  for (int i = 0; i < n; ++i) a.p_r[i][0] = sol.p_r[i];
  return a;
}

double relay_penalty(const SubcarrierSolution& sol, const DualVector& mu) {
  double p = mu.mu_s * sol.p_s;
  for (std::size_t i = 0; i < sol.p_r.size(); ++i)
    p += mu.mu_r[i] * sol.p_r[i];
  return p;
}

}  // namespace

TEST_CASE("solve_direct: threshold, interior, and dead-channel examples") {
  // water level exactly at the threshold: mu_s = log2(e), G = 1
  auto s = solve_direct(kLog2E, 1.0);
  CHECK(s.p_s == doctest::Approx(0.0));
  CHECK(s.lagrangian_value == doctest::Approx(0.0));

  // mu_s = 1, G = 10 (values independently recomputed; cross-checked with
  // the 1-D numeric maximizer below)
  s = solve_direct(1.0, 10.0);
  CHECK(s.p_s == doctest::Approx(2.685390081777927).epsilon(1e-12));
  CHECK(s.lagrangian_value ==
        doctest::Approx(5.015998853886593).epsilon(1e-12));
  double p_num = 0.0;
  const double v_num = oracle_lagrangian_direct(1.0, 10.0, 1e-9, &p_num);
  CHECK(s.lagrangian_value == doctest::Approx(v_num).epsilon(1e-8));
  CHECK(s.p_s == doctest::Approx(p_num).epsilon(1e-4));

  // dead channel
  s = solve_direct(1.0, 0.0);
  CHECK(s.p_s == doctest::Approx(0.0));
  CHECK(s.lagrangian_value == doctest::Approx(0.0));

  CHECK_THROWS_AS(solve_direct(1e-13, 1.0), UnboundedDualError);
}

TEST_CASE("solve_direct: matches the 1-D numeric maximizer on random draws") {
  TestRng rng(101);
  for (int rep = 0; rep < 40; ++rep) {
    const double mu_s = rng.uniform(0.05, 10.0);
    const double g = rng.uniform(0.0, 10.0);
    const auto s = solve_direct(mu_s, g);
    const double v = oracle_lagrangian_direct(mu_s, g, 1e-10);
    CHECK(s.lagrangian_value == doctest::Approx(v).epsilon(1e-7));
  }
}

TEST_CASE("gbar: aggregates gain-to-price over the assisting set") {
  DualVector mu{1.0, {0.5}};
  auto g = testutil::single_k_gains(1.0, {4.0}, {2.0});
  auto order = RelayOrder::build(g);
  auto r = gbar(mu, g, order, 0, 1);
  CHECK_FALSE(r.mu_zero);
  CHECK(r.value == doctest::Approx(4.0));

  DualVector mu2{1.0, {1.0, 1.0}};
  auto g2 = testutil::single_k_gains(1.0, {2.0, 4.0}, {1.0, 3.0});
  auto order2 = RelayOrder::build(g2);
  auto r2 = gbar(mu2, g2, order2, 0, 1);
  CHECK(r2.value == doctest::Approx(4.0));

  DualVector mu3{1.0, {0.0, 1.0}};
  auto r3 = gbar(mu3, g2, order2, 0, 1);
  CHECK(r3.mu_zero);
}

TEST_CASE("solve_relay_fixed_b: case 1 example") {
  // mu_s=0.1, g_sd=1, single relay g_rd=2, mu_r=0.5 -> Gbar=4,
  // 0.1 <= 1/4 -> case 1: x=0, p_s = [log2(e)/0.1 - 1]^+
  DualVector mu{0.1, {0.5}};
  auto g = testutil::single_k_gains(1.0, {4.0}, {2.0});
  auto order = RelayOrder::build(g);
  auto sol = solve_relay_fixed_b(mu, g, order, 0, 1);
  CHECK(sol.case_tag == PerSubcarrierCase::kRelayCase1);
  CHECK(sol.x_opt == doctest::Approx(0.0));
  CHECK(sol.p_s == doctest::Approx(13.42695040888963).epsilon(1e-12));
  CHECK(sol.p_r[0] == doctest::Approx(0.0));
  const auto oracle = oracle_lagrangian_fixed_b(mu, g, order, 0, 1, 1e-9);
  CHECK(sol.lagrangian_value ==
        doctest::Approx(oracle.value).epsilon(1e-7));
}

TEST_CASE("solve_relay_fixed_b: case 2 example with the SNR tie") {
  // mu_s=1, mu_r=0.5, g_sr=4, g_sd=1, g_rd=2
  DualVector mu{1.0, {0.5}};
  auto g = testutil::single_k_gains(1.0, {4.0}, {2.0});
  auto order = RelayOrder::build(g);
  auto sol = solve_relay_fixed_b(mu, g, order, 0, 1);
  CHECK(sol.case_tag == PerSubcarrierCase::kRelayCase2);
  CHECK(sol.p_s == doctest::Approx(0.574397166222265).epsilon(1e-12));
  CHECK(sol.x_opt == doctest::Approx(1.723191498666794).epsilon(1e-12));
  CHECK(sol.p_r[0] == doctest::Approx(0.861595749333397).epsilon(1e-12));

  // both SNR constraints tie: p_s g_sr = p_s g_sd + x
  const double lhs = sol.p_s * 4.0;
  const double rhs = sol.p_s * 1.0 + sol.x_opt;
  CHECK(std::fabs(lhs - rhs) <= 1e-9 * (1.0 + std::fabs(lhs)));
  CHECK(lhs == doctest::Approx(2.297588664889059).epsilon(1e-12));

  const auto oracle = oracle_lagrangian_fixed_b(mu, g, order, 0, 1, 1e-9);
  CHECK(sol.lagrangian_value ==
        doctest::Approx(oracle.value).epsilon(1e-7));
  CHECK(sol.p_s == doctest::Approx(oracle.p_s).epsilon(1e-4));
  CHECK(sol.p_r[0] == doctest::Approx(oracle.p_r[0]).epsilon(1e-4));
}

TEST_CASE("solve_relay_fixed_b: case 3 example (free relay)") {
  // mu_s=1, single relay mu_r=0, g_sr=4, g_sd=1, g_rd=2
  DualVector mu{1.0, {0.0}};
  auto g = testutil::single_k_gains(1.0, {4.0}, {2.0});
  auto order = RelayOrder::build(g);
  auto sol = solve_relay_fixed_b(mu, g, order, 0, 1);
  CHECK(sol.case_tag == PerSubcarrierCase::kRelayCase3);
  CHECK(sol.p_s == doctest::Approx(1.192695040888963).epsilon(1e-12));
  CHECK(sol.x_opt == doctest::Approx(3.578085122666890).epsilon(1e-12));
  CHECK(sol.p_r[0] == doctest::Approx(1.789042561333445).epsilon(1e-12));

  // amplitude constraint: sum sqrt(p g) = sqrt(x~)
  CHECK(std::sqrt(sol.p_r[0] * 2.0) ==
        doctest::Approx(std::sqrt(sol.x_opt)).epsilon(1e-12));

  const auto oracle = oracle_lagrangian_fixed_b(mu, g, order, 0, 1, 1e-9);
  CHECK(sol.lagrangian_value ==
        doctest::Approx(oracle.value).epsilon(1e-7));
}

TEST_CASE("solve_relay_fixed_b: weak cut (g_sr <= g_sd) is still optimal") {
  DualVector mu{1.0, {1.0}};
  auto g = testutil::single_k_gains(5.0, {2.0}, {3.0});
  auto order = RelayOrder::build(g);
  auto sol = solve_relay_fixed_b(mu, g, order, 0, 1);
  CHECK(sol.x_opt == doctest::Approx(0.0));
  for (double p : sol.p_r) CHECK(p == doctest::Approx(0.0));
  const auto oracle = oracle_lagrangian_fixed_b(mu, g, order, 0, 1, 1e-9);
  CHECK(sol.lagrangian_value ==
        doctest::Approx(oracle.value).epsilon(1e-7));
}

TEST_CASE("solve_relay_fixed_b: oracle equivalence on random draws") {
  TestRng rng(202);
  int case_counts[3] = {0, 0, 0};
  for (int rep = 0; rep < 120; ++rep) {
    const int n = rng.uniform_int(1, 4);
    auto g = testutil::random_gains(rng, 1, n, 0.01, 10.0);
    auto order = RelayOrder::build(g);
    auto mu = testutil::random_mu(rng, n, 0.25);
    const int b = rng.uniform_int(1, n);
    const auto sol = solve_relay_fixed_b(mu, g, order, 0, b);
    const auto oracle = oracle_lagrangian_fixed_b(mu, g, order, 0, b, 1e-9);
    CHECK(std::fabs(sol.lagrangian_value - oracle.value) <=
          1e-5 * (1.0 + std::fabs(oracle.value)));
    if (sol.case_tag == PerSubcarrierCase::kRelayCase1) ++case_counts[0];
    if (sol.case_tag == PerSubcarrierCase::kRelayCase2) ++case_counts[1];
    if (sol.case_tag == PerSubcarrierCase::kRelayCase3) ++case_counts[2];

    // source-relay link is never the strict bottleneck at the optimum
    auto a = to_alloc(sol);
    const double gamma = snr_mrc(a, g, order, 0, b);
    const double bott = sol.p_s * g.g_sr[order.relay_at(0, b)][0];
    CHECK(gamma <= bott + 1e-9);

    // stationarity identity
    CHECK(std::fabs(mu.mu_s - (g.g_sr[order.relay_at(0, b)][0] * sol.alpha +
                               g.g_sd[0] * sol.beta)) <=
          1e-12 * mu.mu_s);

    // reported value equals the objective of the returned powers
    const double recomputed =
        rate_relay(a, g, order, 0, b) - relay_penalty(sol, mu);
    CHECK(sol.lagrangian_value ==
          doctest::Approx(recomputed).epsilon(1e-10));
  }
  // all three branches exercised
  CHECK(case_counts[0] > 0);
  CHECK(case_counts[1] > 0);
  CHECK(case_counts[2] > 0);
}

TEST_CASE("solve_relay_fixed_b: case-3 split minimizes relay sum power") {
  // two free relays: compare the closed-form split against a grid search
  // over splits meeting the amplitude constraint
  DualVector mu{1.0, {0.0, 0.0}};
  auto g = testutil::single_k_gains(1.0, {3.0, 5.0}, {2.0, 0.7});
  auto order = RelayOrder::build(g);
  auto sol = solve_relay_fixed_b(mu, g, order, 0, 1);
  REQUIRE(sol.case_tag == PerSubcarrierCase::kRelayCase3);
  const double x = sol.x_opt;
  REQUIRE(x > 0.0);
  const double target = std::sqrt(x);
  const double closed_sum = sol.p_r[0] + sol.p_r[1];
  // amplitude constraint holds
  CHECK(std::sqrt(sol.p_r[0] * 2.0) + std::sqrt(sol.p_r[1] * 0.7) ==
        doctest::Approx(target).epsilon(1e-12));
  // grid over the first relay's amplitude share
  for (int i = 0; i <= 1000; ++i) {
    const double a1 = target * i / 1000.0;
    const double a2 = target - a1;
    const double sum = a1 * a1 / 2.0 + a2 * a2 / 0.7;
    CHECK(closed_sum <= sum + 1e-9);
  }
}

TEST_CASE("solve_subcarrier: pruning rule forces direct mode") {
  TestRng rng(303);
  auto g = testutil::single_k_gains(5.0, {1.0, 4.9, 5.0}, {9.0, 9.0, 9.0});
  auto order = RelayOrder::build(g);
  for (int rep = 0; rep < 10; ++rep) {
    auto mu = testutil::random_mu(rng, 3, 0.3);
    auto sol = solve_subcarrier(mu, g, order, 0);
    CHECK(sol.t == 0);
    CHECK(sol.case_tag == PerSubcarrierCase::kDirect);
  }
}

TEST_CASE("solve_subcarrier: relay mode wins the worked example") {
  // N=1, g_sr=4 > g_sd=1, mu_s=1, mu_r=0.5: L_R ~ 0.71622 beats
  // L_D ~ 0.17214 (both recomputed independently)
  DualVector mu{1.0, {0.5}};
  auto g = testutil::single_k_gains(1.0, {4.0}, {2.0});
  auto order = RelayOrder::build(g);
  auto sol = solve_subcarrier(mu, g, order, 0);
  CHECK(sol.t == 1);
  CHECK(sol.b == 1);
  CHECK(sol.lagrangian_value ==
        doctest::Approx(0.716216409998330).epsilon(1e-12));
  const auto direct = solve_direct(1.0, 1.0);
  CHECK(direct.lagrangian_value ==
        doctest::Approx(0.172142664111868).epsilon(1e-12));
  // both candidates confirmed against the numeric maximizers
  const auto ro = oracle_lagrangian_fixed_b(mu, g, order, 0, 1, 1e-9);
  CHECK(sol.lagrangian_value == doctest::Approx(ro.value).epsilon(1e-7));
  CHECK(direct.lagrangian_value ==
        doctest::Approx(oracle_lagrangian_direct(1.0, 1.0, 1e-10))
            .epsilon(1e-7));
}

TEST_CASE("solve_subcarrier: exact ties resolve to the direct mode") {
  // price high enough that both candidates allocate nothing: L_D = L_R = 0
  DualVector mu{9.0, {8.0}};
  auto g = testutil::single_k_gains(0.1, {0.2}, {0.3});
  auto order = RelayOrder::build(g);
  auto sol = solve_subcarrier(mu, g, order, 0);
  CHECK(sol.t == 0);
  CHECK(sol.p_s == doctest::Approx(0.0));
  CHECK(sol.lagrangian_value == doctest::Approx(0.0));
}

TEST_CASE("solve_subcarrier: winner dominates every candidate") {
  TestRng rng(404);
  for (int rep = 0; rep < 60; ++rep) {
    const int n = rng.uniform_int(1, 4);
    auto g = testutil::random_gains(rng, 1, n, 0.01, 10.0);
    auto order = RelayOrder::build(g);
    auto mu = testutil::random_mu(rng, n, 0.2);
    const auto sol = solve_subcarrier(mu, g, order, 0);
    const auto direct = solve_direct(mu.mu_s, g.g_sd[0]);
    CHECK(sol.lagrangian_value >= direct.lagrangian_value - 1e-10);
    for (int b = 1; b <= n; ++b) {
      const auto cand = solve_relay_fixed_b(mu, g, order, 0, b);
      CHECK(sol.lagrangian_value >= cand.lagrangian_value - 1e-10);
    }
    // smallest-b tie rule among relay candidates
    if (sol.t == 1) {
      for (int b = 1; b < sol.b; ++b) {
        const auto cand = solve_relay_fixed_b(mu, g, order, 0, b);
        CHECK(cand.lagrangian_value < sol.lagrangian_value + 1e-15);
      }
    }
  }
}
