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

#include "dfra/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dfra/errors.hpp"

namespace dfra {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw DimensionError(what);
}

bool all_finite_nonneg(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x) && x >= 0.0; });
}

}  // namespace

void SystemConfig::validate() const {
  if (num_subcarriers < 1) throw DomainError("SystemConfig: K must be >= 1");
  if (num_relays < 1) throw DomainError("SystemConfig: N must be >= 1");
  if (!(source_power > 0.0))
    throw DomainError("SystemConfig: source power must be positive");
  if (static_cast<int>(relay_powers.size()) != num_relays)
    throw DimensionError("SystemConfig: relay_powers length != N");
  for (double p : relay_powers)
    if (!(p > 0.0))
      throw DomainError("SystemConfig: relay powers must be positive");
  if (!(noise_variance > 0.0))
    throw DomainError("SystemConfig: noise variance must be positive");
  if (!(slot_duration > 0.0))
    throw DomainError("SystemConfig: slot duration must be positive");
}

void ChannelGains::validate() const {
  const int k = num_subcarriers();
  const int n = num_relays();
  require(k >= 1, "ChannelGains: empty g_sd");
  require(static_cast<int>(g_rd.size()) == n,
          "ChannelGains: g_sr/g_rd relay counts differ");
  if (!all_finite_nonneg(g_sd))
    throw DomainError("ChannelGains: g_sd entries must be finite and >= 0");
  for (int i = 0; i < n; ++i) {
    require(static_cast<int>(g_sr[i].size()) == k,
            "ChannelGains: g_sr row length != K");
    require(static_cast<int>(g_rd[i].size()) == k,
            "ChannelGains: g_rd row length != K");
    if (!all_finite_nonneg(g_sr[i]) || !all_finite_nonneg(g_rd[i]))
      throw DomainError("ChannelGains: entries must be finite and >= 0");
  }
}

RelayOrder RelayOrder::build(const ChannelGains& gains) {
  const int k_count = gains.num_subcarriers();
  const int n = gains.num_relays();
  RelayOrder out;
  out.order.assign(k_count, std::vector<int>(n));
  for (int k = 0; k < k_count; ++k) {
    auto& perm = out.order[k];
    std::iota(perm.begin(), perm.end(), 0);
    // ascending gain; ties broken by ascending relay index
    std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) {
      return gains.g_sr[a][k] < gains.g_sr[b][k];
    });
  }
  return out;
}

Allocation Allocation::zeros(int num_subcarriers, int num_relays) {
  Allocation a;
  a.mode.assign(num_subcarriers, 0);
  a.cut.assign(num_subcarriers, 0);
  a.p_s.assign(num_subcarriers, 0.0);
  a.p_r.assign(num_relays, std::vector<double>(num_subcarriers, 0.0));
  return a;
}

ChannelGains normalize_gains(const LinkCoeffPower& coeffs,
                             const SystemConfig& config) {
  config.validate();
  const int k_count = config.num_subcarriers;
  const int n = config.num_relays;
  require(static_cast<int>(coeffs.sd.size()) == k_count,
          "normalize_gains: |C_sd|^2 length != K");
  require(static_cast<int>(coeffs.sr.size()) == n &&
              static_cast<int>(coeffs.rd.size()) == n,
          "normalize_gains: coefficient tables must have N rows");

  ChannelGains g;
  g.g_sd.resize(k_count);
  g.g_sr.assign(n, std::vector<double>(k_count));
  g.g_rd.assign(n, std::vector<double>(k_count));

  const double inv_nvar = 1.0 / config.noise_variance;
  for (int k = 0; k < k_count; ++k)
    g.g_sd[k] = config.source_power * coeffs.sd[k] * inv_nvar;
  for (int i = 0; i < n; ++i) {
    require(static_cast<int>(coeffs.sr[i].size()) == k_count &&
                static_cast<int>(coeffs.rd[i].size()) == k_count,
            "normalize_gains: coefficient row length != K");
    for (int k = 0; k < k_count; ++k) {
      g.g_sr[i][k] = config.source_power * coeffs.sr[i][k] * inv_nvar;
      g.g_rd[i][k] = config.relay_powers[i] * coeffs.rd[i][k] * inv_nvar;
    }
  }
  g.validate();
  return g;
}

double snr_mrc(const Allocation& alloc, const ChannelGains& gains,
               const RelayOrder& order, int k, int b) {
  const int n = gains.num_relays();
  require(k >= 0 && k < gains.num_subcarriers(), "snr_mrc: k out of range");
  require(b >= 1 && b <= n, "snr_mrc: b out of range");
  double amp = 0.0;
  for (int pos = b; pos <= n; ++pos) {
    const int i = order.relay_at(k, pos);
    amp += std::sqrt(alloc.p_r[i][k] * gains.g_rd[i][k]);
  }
  return alloc.p_s[k] * gains.g_sd[k] + amp * amp;
}

double rate_relay(const Allocation& alloc, const ChannelGains& gains,
                  const RelayOrder& order, int k, int b) {
  const double gamma = snr_mrc(alloc, gains, order, k, b);
  const double bottleneck =
      alloc.p_s[k] * gains.g_sr[order.relay_at(k, b)][k];
  return log2_1p(std::min(gamma, bottleneck));
}

double rate_direct(double p_s_k, double g_sd_k) {
  if (p_s_k < 0.0 || g_sd_k < 0.0)
    throw DomainError("rate_direct: negative input");
  return 2.0 * log2_1p(0.5 * p_s_k * g_sd_k);
}

RateReport sum_rate(const Allocation& alloc, const ChannelGains& gains,
                    const RelayOrder& order) {
  const int k_count = gains.num_subcarriers();
  require(alloc.num_subcarriers() == k_count &&
              alloc.num_relays() == gains.num_relays(),
          "sum_rate: allocation/gains dimension mismatch");
  RateReport report;
  report.per_subcarrier.resize(k_count);
  for (int k = 0; k < k_count; ++k) {
    const double r = alloc.mode[k]
                         ? rate_relay(alloc, gains, order, k, alloc.cut[k])
                         : rate_direct(alloc.p_s[k], gains.g_sd[k]);
    report.per_subcarrier[k] = r;
    report.sum_rate += r;
  }
  return report;
}

FeasibilityReport check_feasible(const Allocation& alloc) {
  const int k_count = alloc.num_subcarriers();
  const int n = alloc.num_relays();
  FeasibilityReport rep;
  rep.slack.resize(n + 1);
  rep.nonnegative = true;

  double sum_s = 0.0;
  for (int k = 0; k < k_count; ++k) {
    if (alloc.p_s[k] < 0.0) rep.nonnegative = false;
    sum_s += alloc.p_s[k];
  }
  rep.slack[0] = 1.0 - sum_s;
  for (int i = 0; i < n; ++i) {
    double sum_r = 0.0;
    for (int k = 0; k < k_count; ++k) {
      if (alloc.p_r[i][k] < 0.0) rep.nonnegative = false;
      sum_r += alloc.p_r[i][k];
    }
    rep.slack[i + 1] = 1.0 - sum_r;
  }
  rep.feasible = rep.nonnegative &&
                 std::all_of(rep.slack.begin(), rep.slack.end(),
                             [](double s) { return s >= 0.0; });
  return rep;
}

}  // namespace dfra
