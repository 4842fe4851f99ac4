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

#include "dfra/errors.hpp"
#include "dfra/model.hpp"
#include "testutil.hpp"

using namespace dfra;
using testutil::TestRng;

namespace {

SystemConfig basic_config(int k_count, int n, double ps = 1.0,
                          double pr = 1.0, double nvar = 1.0) {
  SystemConfig c;
  c.num_subcarriers = k_count;
  c.num_relays = n;
  c.source_power = ps;
  c.relay_powers.assign(n, pr);
  c.noise_variance = nvar;
  return c;
}

}  // namespace

TEST_CASE("normalize_gains: identity and dBW-scale examples") {
  LinkCoeffPower c;
  c.sd = {1.0};
  c.sr = {{1.0}};
  c.rd = {{1.0}};
  auto g = normalize_gains(c, basic_config(1, 1));
  CHECK(g.g_sd[0] == doctest::Approx(1.0));
  CHECK(g.g_sr[0][0] == doctest::Approx(1.0));
  CHECK(g.g_rd[0][0] == doctest::Approx(1.0));

  // |C|^2 = 1e-5, P_s = 100 W, sigma^2 = 1e-5 W (-50 dBW) -> gain 100
  c.sd = {1e-5};
  c.sr = {{1e-5}};
  c.rd = {{1e-5}};
  g = normalize_gains(c, basic_config(1, 1, 100.0, 100.0, 1e-5));
  CHECK(g.g_sd[0] == doctest::Approx(100.0));
}

TEST_CASE("normalize_gains: random table equals elementwise recomputation") {
  TestRng rng(11);
  const int k_count = 7, n = 3;
  LinkCoeffPower c;
  c.sd.resize(k_count);
  c.sr.assign(n, std::vector<double>(k_count));
  c.rd.assign(n, std::vector<double>(k_count));
  for (int k = 0; k < k_count; ++k) c.sd[k] = rng.uniform(0.0, 3.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < k_count; ++k) {
      c.sr[i][k] = rng.uniform(0.0, 3.0);
      c.rd[i][k] = rng.uniform(0.0, 3.0);
    }
  SystemConfig cfg = basic_config(k_count, n, 7.5, 0.0, 0.37);
  for (int i = 0; i < n; ++i) cfg.relay_powers[i] = 1.0 + i;
  auto g = normalize_gains(c, cfg);
  for (int k = 0; k < k_count; ++k) {
    CHECK(g.g_sd[k] == doctest::Approx(7.5 * c.sd[k] / 0.37).epsilon(1e-14));
    for (int i = 0; i < n; ++i) {
      CHECK(g.g_sr[i][k] ==
            doctest::Approx(7.5 * c.sr[i][k] / 0.37).epsilon(1e-14));
      CHECK(g.g_rd[i][k] ==
            doctest::Approx((1.0 + i) * c.rd[i][k] / 0.37).epsilon(1e-14));
    }
  }
}

TEST_CASE("normalize_gains: rejects bad dimensions and noise") {
  LinkCoeffPower c;
  c.sd = {1.0, 2.0};
  c.sr = {{1.0}};
  c.rd = {{1.0}};
  CHECK_THROWS_AS(normalize_gains(c, basic_config(1, 1)), DimensionError);
  c.sd = {1.0};
  auto cfg = basic_config(1, 1);
  cfg.noise_variance = 0.0;
  CHECK_THROWS_AS(normalize_gains(c, cfg), DomainError);
}

TEST_CASE("snr_mrc: arithmetic examples") {
  // one relay: all relay power zero -> p_s * g_sd
  auto g = testutil::single_k_gains(2.0, {3.0}, {4.0});
  auto order = RelayOrder::build(g);
  Allocation a = Allocation::zeros(1, 1);
  a.p_s[0] = 0.5;
  CHECK(snr_mrc(a, g, order, 0, 1) == doctest::Approx(1.0));

  // p_s=1, g_sd=1, one assisting relay psi=1, g_rd=4 -> 1 + 2^2 = 5
  g = testutil::single_k_gains(1.0, {3.0}, {4.0});
  order = RelayOrder::build(g);
  a = Allocation::zeros(1, 1);
  a.p_s[0] = 1.0;
  a.p_r[0][0] = 1.0;
  a.mode[0] = 1;
  a.cut[0] = 1;
  CHECK(snr_mrc(a, g, order, 0, 1) == doctest::Approx(5.0));

  // two assisting relays psi=1 each, g_rd=1 each, p_s=0 -> (1+1)^2 = 4
  g = testutil::single_k_gains(1.0, {2.0, 3.0}, {1.0, 1.0});
  order = RelayOrder::build(g);
  a = Allocation::zeros(1, 2);
  a.p_r[0][0] = 1.0;
  a.p_r[1][0] = 1.0;
  CHECK(snr_mrc(a, g, order, 0, 1) == doctest::Approx(4.0));

  CHECK_THROWS_AS(snr_mrc(a, g, order, 0, 3), DimensionError);
  CHECK_THROWS_AS(snr_mrc(a, g, order, 2, 1), DimensionError);
}

TEST_CASE("rate_relay: bottleneck and zero-power examples") {
  auto g = testutil::single_k_gains(1.0, {3.0}, {16.0});
  auto order = RelayOrder::build(g);
  Allocation a = Allocation::zeros(1, 1);

  // p_s = 0 -> rate 0
  a.p_r[0][0] = 1.0;
  CHECK(rate_relay(a, g, order, 0, 1) == doctest::Approx(0.0));

  // p_s=1, g_sr=3, gamma=1+16=17 >= 3 -> log2(1+3) = 2
  a.p_s[0] = 1.0;
  CHECK(rate_relay(a, g, order, 0, 1) == doctest::Approx(2.0));
}

TEST_CASE("rate_relay: random draws equal the direct formula") {
  TestRng rng(22);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = rng.uniform_int(1, 4);
    auto g = testutil::random_gains(rng, 3, n, 0.01, 10.0);
    auto order = RelayOrder::build(g);
    auto a = testutil::random_feasible_alloc(rng, g, order);
    const int k = rng.uniform_int(0, 2);
    const int b = rng.uniform_int(1, n);
    double amp = 0.0;
    for (int pos = b; pos <= n; ++pos) {
      const int i = order.relay_at(k, pos);
      amp += std::sqrt(a.p_r[i][k] * g.g_rd[i][k]);
    }
    const double gamma = a.p_s[k] * g.g_sd[k] + amp * amp;
    const double bott = a.p_s[k] * g.g_sr[order.relay_at(k, b)][k];
    const double expect = std::log2(1.0 + std::min(gamma, bott));
    CHECK(rate_relay(a, g, order, k, b) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("rate_direct: examples") {
  CHECK(rate_direct(0.0, 5.0) == doctest::Approx(0.0));
  CHECK(rate_direct(2.0, 1.0) == doctest::Approx(2.0));
  // independently evaluated: 2*log2(1 + 2.68538*10/2)
  CHECK(rate_direct(2.68538, 10.0) ==
        doctest::Approx(7.7013788538689798).epsilon(1e-12));
  CHECK_THROWS_AS(rate_direct(-0.1, 1.0), DomainError);
}

TEST_CASE("sum_rate: examples and summation oracle") {
  // zero powers everywhere -> 0
  ChannelGains g;
  g.g_sd = {1.0, 2.0};
  g.g_sr = {{0.5, 0.5}};
  g.g_rd = {{1.0, 1.0}};
  auto order = RelayOrder::build(g);
  Allocation a = Allocation::zeros(2, 1);
  CHECK(sum_rate(a, g, order).sum_rate == doctest::Approx(0.0));

  // K=2 both direct, p=[2,0], g_sd=[1,2] -> 2 bpts
  a.p_s = {2.0, 0.0};
  auto rep = sum_rate(a, g, order);
  CHECK(rep.sum_rate == doctest::Approx(2.0));
  CHECK(rep.per_subcarrier[0] == doctest::Approx(2.0));
  CHECK(rep.per_subcarrier[1] == doctest::Approx(0.0));

  TestRng rng(33);
  for (int rep2 = 0; rep2 < 20; ++rep2) {
    const int k_count = rng.uniform_int(1, 5);
    const int n = rng.uniform_int(1, 3);
    auto gg = testutil::random_gains(rng, k_count, n, 0.01, 10.0);
    auto oo = RelayOrder::build(gg);
    auto aa = testutil::random_feasible_alloc(rng, gg, oo);
    auto rr = sum_rate(aa, gg, oo);
    double manual = 0.0;
    for (int k = 0; k < k_count; ++k)
      manual += aa.mode[k] ? rate_relay(aa, gg, oo, k, aa.cut[k])
                           : rate_direct(aa.p_s[k], gg.g_sd[k]);
    CHECK(rr.sum_rate == doctest::Approx(manual).epsilon(1e-12));
  }
}

TEST_CASE("check_feasible: slack vector semantics") {
  Allocation a = Allocation::zeros(3, 2);
  auto rep = check_feasible(a);
  CHECK(rep.feasible);
  CHECK(rep.slack.size() == 3);
  for (double s : rep.slack) CHECK(s == doctest::Approx(1.0));

  a.p_s = {0.5, 0.4, 0.3};  // sums to 1.2
  rep = check_feasible(a);
  CHECK_FALSE(rep.feasible);
  CHECK(rep.slack[0] == doctest::Approx(-0.2));
  CHECK(rep.nonnegative);

  a.p_s = {0.1, -0.01, 0.1};
  rep = check_feasible(a);
  CHECK_FALSE(rep.nonnegative);
  CHECK_FALSE(rep.feasible);
}

TEST_CASE("relay order: ascending gains, ties by relay index") {
  ChannelGains g;
  g.g_sd = {1.0};
  g.g_sr = {{2.0}, {2.0}, {1.0}};
  g.g_rd = {{1.0}, {1.0}, {1.0}};
  auto order = RelayOrder::build(g);
  CHECK(order.relay_at(0, 1) == 2);
  CHECK(order.relay_at(0, 2) == 0);  // tie at 2.0 -> lower index first
  CHECK(order.relay_at(0, 3) == 1);
}

TEST_CASE("property: larger cut never raises the MRC SNR") {
  TestRng rng(44);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = rng.uniform_int(2, 5);
    auto g = testutil::random_gains(rng, 2, n, 0.01, 10.0);
    auto order = RelayOrder::build(g);
    auto a = testutil::random_feasible_alloc(rng, g, order);
    const int k = rng.uniform_int(0, 1);
    // make all relay powers positive so the inclusion is strict
    for (int i = 0; i < n; ++i) a.p_r[i][k] = rng.uniform(0.0, 0.3);
    double prev = snr_mrc(a, g, order, k, 1);
    for (int b = 2; b <= n; ++b) {
      const double cur = snr_mrc(a, g, order, k, b);
      CHECK(cur <= prev + 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("property: relay rate never beats either bottleneck") {
  TestRng rng(55);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = rng.uniform_int(1, 4);
    auto g = testutil::random_gains(rng, 2, n, 0.01, 10.0);
    auto order = RelayOrder::build(g);
    auto a = testutil::random_feasible_alloc(rng, g, order);
    const int k = rng.uniform_int(0, 1);
    const int b = rng.uniform_int(1, n);
    const double r = rate_relay(a, g, order, k, b);
    CHECK(r <= log2_1p(snr_mrc(a, g, order, k, b)) + 1e-12);
    CHECK(r <= log2_1p(a.p_s[k] * g.g_sr[order.relay_at(k, b)][k]) + 1e-12);
  }
}

TEST_CASE("property: relay rate is concave in the powers at fixed cut") {
  TestRng rng(66);
  for (int checks = 0; checks < 200; ++checks) {
    const int n = rng.uniform_int(1, 3);
    auto g = testutil::random_gains(rng, 1, n, 0.01, 10.0);
    auto order = RelayOrder::build(g);
    const int b = rng.uniform_int(1, n);
    auto eval = [&](const std::vector<double>& v) {
      Allocation a = Allocation::zeros(1, n);
      a.mode[0] = 1;
      a.cut[0] = b;
      a.p_s[0] = v[0];
      for (int pos = b; pos <= n; ++pos)
        a.p_r[order.relay_at(0, pos)][0] = v[pos];
      return rate_relay(a, g, order, 0, b);
    };
    std::vector<double> u(n + 1), v(n + 1), w(n + 1);
    const double lam = rng.uniform(0.0, 1.0);
    for (int i = 0; i <= n; ++i) {
      u[i] = rng.uniform(0.0, 2.0);
      v[i] = rng.uniform(0.0, 2.0);
      w[i] = lam * u[i] + (1.0 - lam) * v[i];
    }
    CHECK(eval(w) >= lam * eval(u) + (1.0 - lam) * eval(v) - 1e-9);
  }
}

TEST_CASE("property: weak relay cut never beats direct at equal p_s") {
  TestRng rng(77);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = rng.uniform_int(1, 3);
    auto g = testutil::random_gains(rng, 1, n, 0.01, 10.0);
    auto order = RelayOrder::build(g);
    auto a = testutil::random_feasible_alloc(rng, g, order);
    for (int b = 1; b <= n; ++b) {
      if (g.g_sr[order.relay_at(0, b)][0] > g.g_sd[0]) continue;
      const double rr = rate_relay(a, g, order, 0, b);
      CHECK(rr <= rate_direct(a.p_s[0], g.g_sd[0]) + 1e-12);
    }
  }
}
