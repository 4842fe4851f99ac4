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

#include "dfra/iterative.hpp"

#include <cassert>
#include <cmath>
#include <limits>

#include "dfra/errors.hpp"
#include "dfra/persubcarrier.hpp"

namespace dfra {

std::vector<int> compute_d_set(const ChannelGains& gains,
                               const RelayOrder& order) {
  const int k_count = gains.num_subcarriers();
  const int n = gains.num_relays();
  std::vector<int> d;
  for (int k = 0; k < k_count; ++k) {
    const double best_sr = gains.g_sr[order.relay_at(k, n)][k];
    if (best_sr <= gains.g_sd[k]) d.push_back(k);
  }
  return d;
}

ModeState init_modes(const ChannelGains& gains, const RelayOrder& order) {
  const int k_count = gains.num_subcarriers();
  const int n = gains.num_relays();
  ModeState st;
  st.d_set = compute_d_set(gains, order);
  st.mode.assign(k_count, 1);
  st.cut.assign(k_count, n);
  for (int k : st.d_set) {
    st.mode[k] = 0;
    st.cut[k] = 0;
  }
  st.iteration = 1;
  return st;
}

ModeState update_modes(const ModeState& state, const Allocation& alloc,
                       const ChannelGains& gains, const RelayOrder& order) {
  const int k_count = gains.num_subcarriers();
  const int n = gains.num_relays();
  if (alloc.num_subcarriers() != k_count || alloc.num_relays() != n ||
      static_cast<int>(state.mode.size()) != k_count)
    throw DimensionError("update_modes: state/alloc dimension mismatch");

  std::vector<char> in_d(k_count, 0);
  for (int k : state.d_set) in_d[k] = 1;

  ModeState next = state;
  next.iteration = state.iteration + 1;

  for (int k = 0; k < k_count; ++k) {
    if (in_d[k]) continue;
    if (state.mode[k] == 0) {
      next.mode[k] = 0;
      next.cut[k] = 0;
      continue;
    }
    const int b = state.cut[k];
#ifndef NDEBUG
    // The fixed-mode solver never powers relays outside the assisting set.
    for (int pos = 1; pos < b; ++pos)
      assert(alloc.p_r[order.relay_at(k, pos)][k] == 0.0);
#endif
    const double p_s = alloc.p_s[k];
    const double gamma = snr_mrc(alloc, gains, order, k, b);
    const double bottleneck = p_s * gains.g_sr[order.relay_at(k, b)][k];
    const double rate_r = log2_1p(std::min(gamma, bottleneck));
    const double rate_d = rate_direct(p_s, gains.g_sd[k]);
    if (rate_r < rate_d) {
      next.mode[k] = 0;
      next.cut[k] = 0;
      continue;
    }
    // Keep relay-aided; lower the cut to the largest assisting set whose
    // weakest decoder still supports the achieved SNR.
    next.mode[k] = 1;
    const int i_k = first_relay_position_above_direct(gains, order, k);
    int new_b = b;
    for (int pos = i_k; pos <= b; ++pos) {
      if (gamma <= p_s * gains.g_sr[order.relay_at(k, pos)][k]) {
        new_b = pos;
        break;
      }
    }
    next.cut[k] = new_b;
  }
  return next;
}

IterativeResult solve_iterative(const ChannelGains& gains,
                                const RelayOrder& order,
                                const SubgradientConfig& cfg) {
  cfg.validate();
  gains.validate();
  const int k_count = gains.num_subcarriers();
  const int n = gains.num_relays();
  const int cycle_guard = k_count * (n + 1) + 10;

  ModeState state = init_modes(gains, order);
  IterativeResult out;
  double best_rate = -std::numeric_limits<double>::infinity();
  Allocation best;

  for (int m = 1; m <= cycle_guard; ++m) {
    DualResult inner =
        solve_dual(gains, order, cfg, ModeSpec::fixed(state.mode, state.cut));
    const double rate = sum_rate(inner.alloc, gains, order).sum_rate;
    out.rate_trace.push_back(rate);
    out.inner_all_converged =
        out.inner_all_converged && inner.trace.converged;
    if (rate > best_rate) {
      best_rate = rate;
      best = inner.alloc;
    }

    ModeState next = update_modes(state, inner.alloc, gains, order);
    if (next.mode == state.mode && next.cut == state.cut) {
      out.alloc = std::move(inner.alloc);
      out.converged = true;
      out.outer_iterations = m;
      return out;
    }
    state = std::move(next);
  }

  // Cycle guard hit: hand back the best allocation seen, flagged.
  out.alloc = std::move(best);
  out.converged = false;
  out.outer_iterations = cycle_guard;
  return out;
}

}  // namespace dfra
