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

#ifndef DFRA_MODEL_HPP_
#define DFRA_MODEL_HPP_

#include <cmath>
#include <cstdint>
#include <vector>

namespace dfra {

inline constexpr double kLog2E = 1.4426950408889634074;  // log2(e)

/// log2(1 + x), accurate for small x.
inline double log2_1p(double x) { return std::log1p(x) * kLog2E; }

/// System-wide physical parameters.
///
/// Powers are device sum powers in watts: the source spends at most
/// `source_power` summed over all subcarriers, relay i at most
/// `relay_powers[i]`. `noise_variance` is the receiver AWGN variance in
/// watts, identical at every node. A relay-aided transmission occupies a
/// frame of two slots of `slot_duration` seconds each.
struct SystemConfig {
  int num_subcarriers = 0;            // K
  int num_relays = 0;                 // N
  double source_power = 0.0;          // P_s [W]
  std::vector<double> relay_powers;   // P_ri [W], length N
  double noise_variance = 0.0;        // sigma^2 [W]
  double slot_duration = 1e-3;        // [s]

  /// Throws DomainError / DimensionError on invalid contents.
  void validate() const;
};

/// Squared channel coefficient magnitudes |C|^2 per link, before
/// normalization by transmit power and noise variance.
struct LinkCoeffPower {
  std::vector<double> sd;                // K: source -> destination
  std::vector<std::vector<double>> sr;   // N x K: source -> relay i
  std::vector<std::vector<double>> rd;   // N x K: relay i -> destination
};

/// Normalized channel power gains. Every solver consumes these; raw
/// coefficients never travel past normalize_gains().
///
///   g_sd[k]    = P_s  |C_sd,k|^2  / sigma^2
///   g_sr[i][k] = P_s  |C_sri,k|^2 / sigma^2
///   g_rd[i][k] = P_ri |C_rid,k|^2 / sigma^2
struct ChannelGains {
  std::vector<double> g_sd;               // K
  std::vector<std::vector<double>> g_sr;  // N x K
  std::vector<std::vector<double>> g_rd;  // N x K

  int num_subcarriers() const { return static_cast<int>(g_sd.size()); }
  int num_relays() const { return static_cast<int>(g_sr.size()); }

  /// Throws DimensionError / DomainError if shapes disagree or entries are
  /// negative / non-finite.
  void validate() const;
};

/// Per-subcarrier relay ordering by ascending source-relay gain.
///
/// `order[k]` is a permutation of relay indices 0..N-1 with
/// g_sr[order[k][j]][k] nondecreasing in j. Ties are broken by ascending
/// relay index. Cut positions b are 1-based: the assisting set for cut b is
/// the relays at positions b..N, i.e. order[k][b-1..N-1].
struct RelayOrder {
  std::vector<std::vector<int>> order;

  static RelayOrder build(const ChannelGains& gains);

  /// Relay index at 1-based sorted position b of subcarrier k.
  int relay_at(int k, int b) const { return order[k][b - 1]; }
  int num_subcarriers() const { return static_cast<int>(order.size()); }
};

/// A complete resource allocation: transmission mode, cut index, and power
/// fractions for every subcarrier.
///
/// mode[k] = 1 selects the relay-aided mode with assisting set given by
/// cut[k] (1-based position into the relay order); mode[k] = 0 selects the
/// direct mode and cut[k] is 0. Power entries are fractions of the owning
/// device's sum power. Feasibility means every per-device fraction sum is
/// <= 1; direct-mode subcarriers carry no relay power, and relay-aided ones
/// carry none outside the assisting set.
struct Allocation {
  std::vector<std::uint8_t> mode;         // t_k, length K
  std::vector<int> cut;                   // b_k in 1..N where mode=1, else 0
  std::vector<double> p_s;                // psi_s,k, length K
  std::vector<std::vector<double>> p_r;   // psi_ri,k, N x K

  static Allocation zeros(int num_subcarriers, int num_relays);

  int num_subcarriers() const { return static_cast<int>(p_s.size()); }
  int num_relays() const { return static_cast<int>(p_r.size()); }
};

/// Rates in bits per two-slot frame (bpts).
struct RateReport {
  std::vector<double> per_subcarrier;
  double sum_rate = 0.0;
};

/// Result of check_feasible(): slack[0] is the source constraint slack
/// 1 - sum_k p_s[k]; slack[i] for i >= 1 is relay i-1's. `feasible` also
/// requires elementwise nonnegativity (reported in `nonnegative`).
struct FeasibilityReport {
  bool feasible = false;
  bool nonnegative = false;
  std::vector<double> slack;  // length N+1
};

/// Normalizes raw |C|^2 tables into ChannelGains (see ChannelGains docs).
/// Throws DimensionError on shape mismatch and DomainError on nonpositive
/// noise variance or negative entries.
ChannelGains normalize_gains(const LinkCoeffPower& coeffs,
                             const SystemConfig& config);

/// MRC SNR at the destination for subcarrier k under cut b:
///
///   gamma_k = p_s[k] g_sd[k] + (sum_{relays at positions b..N}
///             sqrt(p_r[i][k] g_rd[i][k]))^2
///
/// Monotone nondecreasing in every power fraction. Throws DimensionError on
/// out-of-range k or b.
double snr_mrc(const Allocation& alloc, const ChannelGains& gains,
               const RelayOrder& order, int k, int b);

/// Relay-aided rate log2(1 + min(gamma_k, p_s[k] g_sr[srk(b)][k])) in bpts.
double rate_relay(const Allocation& alloc, const ChannelGains& gains,
                  const RelayOrder& order, int k, int b);

/// Direct-mode rate 2 log2(1 + p_s_k g_sd_k / 2) in bpts: the source sends
/// an independent symbol in each of the two slots, at half power each.
/// Throws DomainError on negative input.
double rate_direct(double p_s_k, double g_sd_k);

/// The objective: per-subcarrier rates (direct or relay-aided per mode[k])
/// and their sum.
RateReport sum_rate(const Allocation& alloc, const ChannelGains& gains,
                    const RelayOrder& order);

/// Validates the per-device sum-power constraints and nonnegativity.
FeasibilityReport check_feasible(const Allocation& alloc);

}  // namespace dfra

#endif  // DFRA_MODEL_HPP_
