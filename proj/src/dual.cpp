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

#include "dfra/dual.hpp"

#include <algorithm>
#include <cmath>

#include "dfra/errors.hpp"

namespace dfra {

void SubgradientConfig::validate() const {
  if (!(epsilon > 0.0))
    throw DomainError("SubgradientConfig: epsilon must be positive");
  if (!(q_offset >= 1.0))
    throw DomainError("SubgradientConfig: q_offset must be >= 1");
  if (max_iterations < 1)
    throw DomainError("SubgradientConfig: max_iterations must be >= 1");
  if (!(mu_floor > 0.0))
    throw DomainError("SubgradientConfig: mu_floor must be positive");
}

DualVector subgradient_step(const DualVector& mu,
                            const std::vector<double>& slack, long q,
                            const SubgradientConfig& cfg) {
  if (static_cast<int>(slack.size()) != mu.num_relays() + 1)
    throw DimensionError("subgradient_step: slack length != N+1");
  if (q < 1) throw DomainError("subgradient_step: q must be >= 1");
  const double delta =
      (1.0 + cfg.q_offset) / (static_cast<double>(q) + cfg.q_offset);
  DualVector out;
  out.mu_s = std::max(mu.mu_s - delta * slack[0], cfg.mu_floor);
  out.mu_r.resize(mu.mu_r.size());
  for (std::size_t i = 0; i < mu.mu_r.size(); ++i)
    out.mu_r[i] = std::max(mu.mu_r[i] - delta * slack[i + 1], 0.0);
  return out;
}

namespace {

void validate_mode_spec(const ModeSpec& spec, int k_count, int n) {
  if (!spec.is_fixed) return;
  if (static_cast<int>(spec.mode.size()) != k_count ||
      static_cast<int>(spec.cut.size()) != k_count)
    throw DimensionError("ModeSpec: mode/cut length != K");
  for (int k = 0; k < k_count; ++k)
    if (spec.mode[k] && (spec.cut[k] < 1 || spec.cut[k] > n))
      throw DomainError("ModeSpec: cut out of 1..N on a relay-aided entry");
}

// In-place Lagrangian maximization; returns d(mu). `out` must be sized
// (K, N) already; every column is overwritten.
double maximize_into(const DualVector& mu, const ChannelGains& gains,
                     const RelayOrder& order, const ModeSpec& spec,
                     double mu_floor, Allocation& out) {
  const int k_count = gains.num_subcarriers();
  const int n = gains.num_relays();
  double lagrangian_sum = 0.0;
  std::vector<double> column(n);

  for (int k = 0; k < k_count; ++k) {
    int chosen_b = 0;  // 0 = direct
    detail::RelayCandidate relay_best;
    DirectSolution dsol;

    if (spec.is_fixed) {
      if (spec.mode[k]) {
        chosen_b = spec.cut[k];
        relay_best = detail::solve_relay_candidate(mu, gains, order, k,
                                                   chosen_b, mu_floor);
      } else {
        dsol = solve_direct(mu.mu_s, gains.g_sd[k], mu_floor);
      }
    } else {
      dsol = solve_direct(mu.mu_s, gains.g_sd[k], mu_floor);
      const int i_k = first_relay_position_above_direct(gains, order, k);
      if (i_k <= n) {
        bool have = false;
        for (int b = i_k; b <= n; ++b) {
          const auto cand =
              detail::solve_relay_candidate(mu, gains, order, k, b, mu_floor);
          if (!have || cand.lagrangian_value > relay_best.lagrangian_value) {
            have = true;
            relay_best = cand;
            chosen_b = b;
          }
        }
        // Exact ties resolve to the direct mode (fewer active devices).
        if (dsol.lagrangian_value >= relay_best.lagrangian_value)
          chosen_b = 0;
      }
    }

    for (int i = 0; i < n; ++i) out.p_r[i][k] = 0.0;
    if (chosen_b == 0) {
      out.mode[k] = 0;
      out.cut[k] = 0;
      out.p_s[k] = dsol.p_s;
      lagrangian_sum += dsol.lagrangian_value;
    } else {
      out.mode[k] = 1;
      out.cut[k] = chosen_b;
      out.p_s[k] = relay_best.p_s;
      detail::fill_relay_powers(relay_best, mu, gains, order, k, chosen_b,
                                column.data());
      for (int i = 0; i < n; ++i) out.p_r[i][k] = column[i];
      lagrangian_sum += relay_best.lagrangian_value;
    }
  }

  double mu_sum = mu.mu_s;
  for (double m : mu.mu_r) mu_sum += m;
  return lagrangian_sum + mu_sum;
}

// Per-device power sums of an allocation: sums[0] source, sums[1+i] relays.
void device_sums(const Allocation& alloc, std::vector<double>& sums) {
  const int k_count = alloc.num_subcarriers();
  const int n = alloc.num_relays();
  sums.assign(n + 1, 0.0);
  for (int k = 0; k < k_count; ++k) sums[0] += alloc.p_s[k];
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = 0; k < k_count; ++k) s += alloc.p_r[i][k];
    sums[i + 1] = s;
  }
}

}  // namespace

LagrangianMaxResult maximize_lagrangian(const DualVector& mu,
                                        const ChannelGains& gains,
                                        const RelayOrder& order,
                                        const ModeSpec& spec,
                                        double mu_floor) {
  gains.validate();
  if (mu.num_relays() != gains.num_relays())
    throw DimensionError("maximize_lagrangian: multiplier count != N");
  validate_mode_spec(spec, gains.num_subcarriers(), gains.num_relays());
  LagrangianMaxResult res;
  res.alloc = Allocation::zeros(gains.num_subcarriers(), gains.num_relays());
  res.dual_value = maximize_into(mu, gains, order, spec, mu_floor, res.alloc);
  return res;
}

DualResult solve_dual(const ChannelGains& gains, const RelayOrder& order,
                      const SubgradientConfig& cfg, const ModeSpec& spec) {
  cfg.validate();
  gains.validate();
  const int k_count = gains.num_subcarriers();
  const int n = gains.num_relays();
  validate_mode_spec(spec, k_count, n);

  DualVector mu = DualVector::ones(n);
  Allocation x = Allocation::zeros(k_count, n);
  DualTrace trace;
  trace.best_feasible = Allocation::zeros(k_count, n);
  trace.slack_gap_history.reserve(
      std::min<long>(cfg.max_iterations + 1, 1 << 20));

  std::vector<double> sums, slack(n + 1);
  double d = maximize_into(mu, gains, order, spec, cfg.mu_floor, x);

  long q = 0;
  while (true) {
    device_sums(x, sums);
    bool feasible = true;
    for (int i = 0; i <= n; ++i) {
      slack[i] = 1.0 - sums[i];
      if (sums[i] > 1.0) feasible = false;
    }
    double gap = mu.mu_s * slack[0];
    for (int i = 0; i < n; ++i) gap += mu.mu_r[i] * slack[i + 1];

    trace.slack_gap_history.push_back(gap);
    if (cfg.record_mu_history) trace.mu_history.push_back(mu);
    trace.best_dual_value = std::min(trace.best_dual_value, d);

    if (feasible) {
      // f(x_mu) = d(mu) - mu^T (1 - g(x_mu)) by the Lagrangian identity.
      const double rate = d - gap;
      trace.has_feasible = true;
      if (rate > trace.best_feasible_rate) {
        trace.best_feasible_rate = rate;
        trace.best_feasible = x;
      }
      if (gap < cfg.epsilon) {
        trace.converged = true;
        trace.iterations = q;
        trace.dual_value = d;
        return DualResult{x, std::move(trace)};
      }
    }

    if (q >= cfg.max_iterations) break;
    ++q;
    mu = subgradient_step(mu, slack, q, cfg);
    d = maximize_into(mu, gains, order, spec, cfg.mu_floor, x);
  }

  trace.converged = false;
  trace.iterations = q;
  trace.dual_value = d;
  if (!trace.has_feasible)
    throw SolverFailure("solve_dual: no feasible iterate within cap");
  Allocation best = trace.best_feasible;
  return DualResult{std::move(best), std::move(trace)};
}

GapProbe duality_gap_probe(const ChannelGains& gains, const RelayOrder& order,
                           const SubgradientConfig& cfg) {
  const DualResult res = solve_dual(gains, order, cfg, ModeSpec::free_modes());
  GapProbe probe;
  probe.dual_value = res.trace.best_dual_value;
  probe.best_primal = res.trace.best_feasible_rate;
  probe.gap = probe.dual_value - probe.best_primal;
  return probe;
}

}  // namespace dfra
