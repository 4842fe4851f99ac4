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

#include "dfra/persubcarrier.hpp"

#include <algorithm>
#include <cmath>

#include "dfra/errors.hpp"

namespace dfra {

namespace {

void check_kb(const ChannelGains& gains, int k, int b) {
  if (k < 0 || k >= gains.num_subcarriers())
    throw DimensionError("persubcarrier: k out of range");
  if (b < 1 || b > gains.num_relays())
    throw DimensionError("persubcarrier: b out of range");
}

void check_mu(const DualVector& mu, const ChannelGains& gains,
              double mu_floor) {
  if (mu.num_relays() != gains.num_relays())
    throw DimensionError("persubcarrier: multiplier count != relay count");
  if (!(mu.mu_s >= mu_floor))
    throw UnboundedDualError(
        "persubcarrier: mu_s below floor, Lagrangian unbounded");
}

// [log2(e)/price - 1/gain]^+, the waterfilling bracket.
double wf_bracket(double price, double gain) {
  if (gain <= 0.0) return 0.0;
  return std::max(kLog2E / price - 1.0 / gain, 0.0);
}

}  // namespace

DirectSolution solve_direct(double mu_s, double g_sd_k, double mu_floor) {
  if (!(mu_s >= mu_floor))
    throw UnboundedDualError(
        "solve_direct: mu_s below floor, Lagrangian unbounded");
  if (g_sd_k < 0.0) throw DomainError("solve_direct: negative gain");
  DirectSolution out;
  out.p_s = 2.0 * wf_bracket(mu_s, g_sd_k);
  out.lagrangian_value =
      2.0 * log2_1p(0.5 * out.p_s * g_sd_k) - mu_s * out.p_s;
  return out;
}

GbarResult gbar(const DualVector& mu, const ChannelGains& gains,
                const RelayOrder& order, int k, int b) {
  check_kb(gains, k, b);
  if (mu.num_relays() != gains.num_relays())
    throw DimensionError("gbar: multiplier count != relay count");
  GbarResult out;
  const int n = gains.num_relays();
  for (int pos = b; pos <= n; ++pos) {
    const int i = order.relay_at(k, pos);
    if (mu.mu_r[i] == 0.0) {
      out.mu_zero = true;
      out.value = 0.0;
      return out;
    }
    out.value += gains.g_rd[i][k] / mu.mu_r[i];
  }
  return out;
}

namespace detail {

RelayCandidate solve_relay_candidate(const DualVector& mu,
                                     const ChannelGains& gains,
                                     const RelayOrder& order, int k, int b,
                                     double mu_floor) {
  if (!(mu.mu_s >= mu_floor))
    throw UnboundedDualError(
        "solve_relay_fixed_b: mu_s below floor, Lagrangian unbounded");
  const double mu_s = mu.mu_s;
  const double g_sd = gains.g_sd[k];
  const int relay_b = order.relay_at(k, b);
  const double g_srb = gains.g_sr[relay_b][k];
  const double delta_g = g_srb - g_sd;

  RelayCandidate cand;

  if (delta_g <= 0.0) {
    // The decoding set's weakest source-relay link is at most as good as the
    // direct link, so the min() sits at p_s * g_srb no matter how much relay
    // power is spent: x = 0 and p_s waterfills g_srb.
    cand.p_s = wf_bracket(mu_s, g_srb);
    cand.x_opt = 0.0;
    cand.lagrangian_value = log2_1p(cand.p_s * g_srb) - mu_s * cand.p_s;
    cand.case_tag = PerSubcarrierCase::kRelayCase1;
    if (g_srb > 0.0) {
      cand.alpha = mu_s / g_srb;
      cand.beta = 0.0;
    }
    return cand;
  }

  // Scan the assisting set (positions b..N). Members with a zero multiplier
  // and a live relay-destination link route us into case 3; members with
  // g_rd = 0 are inert whatever their multiplier.
  const int n = gains.num_relays();
  bool has_free_live = false;
  double free_gain_sum = 0.0;  // sum of g_rd over zero-mu live members
  double gb = 0.0;             // sum of g_rd/mu over priced members
  for (int pos = b; pos <= n; ++pos) {
    const int i = order.relay_at(k, pos);
    const double g = gains.g_rd[i][k];
    if (mu.mu_r[i] == 0.0) {
      if (g > 0.0) {
        has_free_live = true;
        free_gain_sum += g;
      }
    } else {
      gb += g / mu.mu_r[i];
    }
  }

  if (has_free_live) {
    // Case 3: beta = 0 (relay amplitude is free), alpha = mu_s / g_sr(b).
    cand.case_tag = PerSubcarrierCase::kRelayCase3;
    cand.p_s = wf_bracket(mu_s, g_srb);
    cand.x_opt = delta_g * cand.p_s;  // the minimal x saturating both SNRs
    cand.zero_mu_gain_sum = free_gain_sum;
    cand.alpha = mu_s / g_srb;
    cand.beta = 0.0;
    cand.lagrangian_value = log2_1p(cand.p_s * g_srb) - mu_s * cand.p_s;
    return cand;
  }

  if (mu_s * gb <= g_sd) {
    // Case 1: relay power costs more than it contributes; the Lagrangian is
    // nonincreasing in x, so x = 0 and the direct constraint saturates.
    cand.case_tag = PerSubcarrierCase::kRelayCase1;
    cand.p_s = wf_bracket(mu_s, g_sd);
    cand.x_opt = 0.0;
    if (g_sd > 0.0) {
      cand.alpha = 0.0;
      cand.beta = mu_s / g_sd;
    } else {
      // Dead direct link and dead set: any split of the stationarity
      // identity along the active constraint works.
      cand.alpha = mu_s / g_srb;
      cand.beta = 0.0;
    }
    cand.lagrangian_value = log2_1p(cand.p_s * g_sd) - mu_s * cand.p_s;
    return cand;
  }

  // Case 2: beta = 1/G~ from the sensitivity condition, alpha from the
  // stationarity identity; both SNR constraints saturate, so
  // x = p_s (g_sr(b) - g_sd). Set members pay x/G~ in total.
  cand.case_tag = PerSubcarrierCase::kRelayCase2;
  cand.gbar = gb;
  cand.beta = 1.0 / gb;
  cand.alpha = (mu_s - g_sd / gb) / g_srb;
  cand.p_s = std::max(kLog2E / (mu_s + delta_g / gb) - 1.0 / g_srb, 0.0);
  cand.x_opt = cand.p_s * delta_g;
  cand.lagrangian_value =
      log2_1p(cand.p_s * g_srb) - mu_s * cand.p_s - cand.x_opt / gb;
  return cand;
}

void fill_relay_powers(const RelayCandidate& cand, const DualVector& mu,
                       const ChannelGains& gains, const RelayOrder& order,
                       int k, int b, double* p_r_out) {
  const int n = gains.num_relays();
  std::fill(p_r_out, p_r_out + n, 0.0);
  if (cand.x_opt <= 0.0) return;
  switch (cand.case_tag) {
    case PerSubcarrierCase::kRelayCase2: {
      for (int pos = b; pos <= n; ++pos) {
        const int i = order.relay_at(k, pos);
        const double denom = mu.mu_r[i] * cand.gbar;
        p_r_out[i] = gains.g_rd[i][k] / (denom * denom) * cand.x_opt;
      }
      break;
    }
    case PerSubcarrierCase::kRelayCase3: {
      const double s2 = cand.zero_mu_gain_sum * cand.zero_mu_gain_sum;
      for (int pos = b; pos <= n; ++pos) {
        const int i = order.relay_at(k, pos);
        if (mu.mu_r[i] == 0.0 && gains.g_rd[i][k] > 0.0)
          p_r_out[i] = gains.g_rd[i][k] * cand.x_opt / s2;
      }
      break;
    }
    default:
      break;  // cases with x = 0 carry no relay power
  }
}

}  // namespace detail

namespace {

// Assembles the public solution from a ranked candidate; the reported
// Lagrangian value is recomputed from the reconstructed powers so that it
// is exactly the objective of the returned point.
SubcarrierSolution materialize_relay(const detail::RelayCandidate& cand,
                                     const DualVector& mu,
                                     const ChannelGains& gains,
                                     const RelayOrder& order, int k, int b) {
  const int n = gains.num_relays();
  SubcarrierSolution sol;
  sol.t = 1;
  sol.b = b;
  sol.p_s = cand.p_s;
  sol.p_r.resize(n);
  detail::fill_relay_powers(cand, mu, gains, order, k, b, sol.p_r.data());
  sol.case_tag = cand.case_tag;
  sol.x_opt = cand.x_opt;
  sol.alpha = cand.alpha;
  sol.beta = cand.beta;

  double amp = 0.0;
  double penalty = mu.mu_s * sol.p_s;
  for (int pos = b; pos <= n; ++pos) {
    const int i = order.relay_at(k, pos);
    amp += std::sqrt(sol.p_r[i] * gains.g_rd[i][k]);
    penalty += mu.mu_r[i] * sol.p_r[i];
  }
  const double gamma = sol.p_s * gains.g_sd[k] + amp * amp;
  const double bottleneck = sol.p_s * gains.g_sr[order.relay_at(k, b)][k];
  sol.lagrangian_value = log2_1p(std::min(gamma, bottleneck)) - penalty;
  return sol;
}

SubcarrierSolution materialize_direct(const DirectSolution& dsol, int n) {
  SubcarrierSolution sol;
  sol.t = 0;
  sol.b = 0;
  sol.p_s = dsol.p_s;
  sol.p_r.assign(n, 0.0);
  sol.lagrangian_value = dsol.lagrangian_value;
  sol.case_tag = PerSubcarrierCase::kDirect;
  return sol;
}

}  // namespace

SubcarrierSolution solve_relay_fixed_b(const DualVector& mu,
                                       const ChannelGains& gains,
                                       const RelayOrder& order, int k, int b,
                                       double mu_floor) {
  check_kb(gains, k, b);
  check_mu(mu, gains, mu_floor);
  const auto cand =
      detail::solve_relay_candidate(mu, gains, order, k, b, mu_floor);
  return materialize_relay(cand, mu, gains, order, k, b);
}

int first_relay_position_above_direct(const ChannelGains& gains,
                                      const RelayOrder& order, int k) {
  const int n = gains.num_relays();
  const double g_sd = gains.g_sd[k];
  for (int pos = 1; pos <= n; ++pos)
    if (gains.g_sr[order.relay_at(k, pos)][k] > g_sd) return pos;
  return n + 1;
}

SubcarrierSolution solve_subcarrier(const DualVector& mu,
                                    const ChannelGains& gains,
                                    const RelayOrder& order, int k,
                                    double mu_floor) {
  check_kb(gains, k, 1);
  check_mu(mu, gains, mu_floor);
  const int n = gains.num_relays();
  const double g_sd = gains.g_sd[k];
  const DirectSolution dsol = solve_direct(mu.mu_s, g_sd, mu_floor);

  const int i_k = first_relay_position_above_direct(gains, order, k);
  if (i_k > n)  // no source-relay gain beats the direct link
    return materialize_direct(dsol, n);

  // Exhaustive search over the surviving cuts; smallest b wins ties so the
  // assisting set stays as large as possible.
  bool have_relay = false;
  int best_b = 0;
  detail::RelayCandidate best;
  for (int b = i_k; b <= n; ++b) {
    const auto cand =
        detail::solve_relay_candidate(mu, gains, order, k, b, mu_floor);
    if (!have_relay || cand.lagrangian_value > best.lagrangian_value) {
      have_relay = true;
      best = cand;
      best_b = b;
    }
  }
  if (dsol.lagrangian_value >= best.lagrangian_value)
    return materialize_direct(dsol, n);
  return materialize_relay(best, mu, gains, order, k, best_b);
}

}  // namespace dfra
