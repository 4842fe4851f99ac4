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

#ifndef DFRA_TESTS_TESTUTIL_HPP_
#define DFRA_TESTS_TESTUTIL_HPP_

#include <cmath>
#include <random>
#include <vector>

#include "dfra/model.hpp"
#include "dfra/persubcarrier.hpp"

namespace dfra::testutil {

struct TestRng {
  std::mt19937_64 eng;
  explicit TestRng(std::uint64_t seed) : eng(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng);
  }
  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(eng);
  }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
};

inline ChannelGains random_gains(TestRng& rng, int k_count, int n, double lo,
                                 double hi, bool log_scale = false) {
  ChannelGains g;
  auto draw = [&]() {
    return log_scale ? rng.log_uniform(lo, hi) : rng.uniform(lo, hi);
  };
  g.g_sd.resize(k_count);
  g.g_sr.assign(n, std::vector<double>(k_count));
  g.g_rd.assign(n, std::vector<double>(k_count));
  for (int k = 0; k < k_count; ++k) g.g_sd[k] = draw();
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < k_count; ++k) {
      g.g_sr[i][k] = draw();
      g.g_rd[i][k] = draw();
    }
  return g;
}

inline DualVector random_mu(TestRng& rng, int n, double zero_prob = 0.0) {
  DualVector mu;
  mu.mu_s = rng.uniform(0.01, 10.0);
  mu.mu_r.resize(n);
  for (int i = 0; i < n; ++i)
    mu.mu_r[i] =
        rng.uniform(0.0, 1.0) < zero_prob ? 0.0 : rng.uniform(0.01, 10.0);
  return mu;
}

// Random allocation meeting the structural invariants, with per-device sums
// scaled to a random fraction of the budget.
inline Allocation random_feasible_alloc(TestRng& rng,
                                        const ChannelGains& gains,
                                        const RelayOrder& order) {
  const int k_count = gains.num_subcarriers();
  const int n = gains.num_relays();
  Allocation a = Allocation::zeros(k_count, n);
  for (int k = 0; k < k_count; ++k) {
    a.p_s[k] = rng.uniform(0.0, 1.0);
    const int i_k = first_relay_position_above_direct(gains, order, k);
    if (i_k <= n && rng.uniform(0.0, 1.0) < 0.6) {
      a.mode[k] = 1;
      a.cut[k] = rng.uniform_int(i_k, n);
      for (int pos = a.cut[k]; pos <= n; ++pos)
        a.p_r[order.relay_at(k, pos)][k] = rng.uniform(0.0, 1.0);
    }
  }
  auto rescale = [&](double target, auto&& get) {
    double sum = 0.0;
    for (int k = 0; k < k_count; ++k) sum += get(k);
    if (sum <= 0.0) return;
    const double f = target / sum;
    for (int k = 0; k < k_count; ++k) get(k) *= f;
  };
  rescale(rng.uniform(0.1, 1.0),
          [&](int k) -> double& { return a.p_s[k]; });
  for (int i = 0; i < n; ++i)
    rescale(rng.uniform(0.1, 1.0),
            [&](int k) -> double& { return a.p_r[i][k]; });
  return a;
}

// Single-subcarrier gains helper for per-subcarrier solver tests.
inline ChannelGains single_k_gains(double g_sd, std::vector<double> g_sr,
                                   std::vector<double> g_rd) {
  ChannelGains g;
  const int n = static_cast<int>(g_sr.size());
  g.g_sd = {g_sd};
  g.g_sr.resize(n);
  g.g_rd.resize(n);
  for (int i = 0; i < n; ++i) {
    g.g_sr[i] = {g_sr[i]};
    g.g_rd[i] = {g_rd[i]};
  }
  return g;
}

}  // namespace dfra::testutil

#endif  // DFRA_TESTS_TESTUTIL_HPP_
