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

#ifndef DFRA_PERSUBCARRIER_HPP_
#define DFRA_PERSUBCARRIER_HPP_

#include <vector>

#include "dfra/model.hpp"

namespace dfra {

/// Any mu_s below this floor is treated as an unbounded-dual error: the
/// per-subcarrier Lagrangian grows without bound as mu_s -> 0, and surfacing
/// the condition beats silently producing astronomic powers.
inline constexpr double kDefaultMuFloor = 1e-12;

/// Nonnegative multipliers for the per-device sum-power constraints.
/// The fixed-mode solver's nu variables reuse this type.
struct DualVector {
  double mu_s = 0.0;
  std::vector<double> mu_r;  // length N

  int num_relays() const { return static_cast<int>(mu_r.size()); }
  static DualVector ones(int num_relays) {
    return DualVector{1.0, std::vector<double>(num_relays, 1.0)};
  }
};

/// Which closed-form branch produced a per-subcarrier solution.
enum class PerSubcarrierCase {
  kDirect,      // t = 0, water-filling on the direct link
  kRelayCase1,  // all mu_ri > 0 in the set and relaying is not worth paying
  kRelayCase2,  // all mu_ri > 0 in the set, interior relay split
  kRelayCase3,  // some mu_ri = 0 in the set, free relays carry the split
};

/// The Lagrangian-optimal per-subcarrier decision and its diagnostics.
///
/// x_opt is the squared coherent relay amplitude at the optimum (the
/// contribution of the assisting set to the MRC SNR); alpha and beta are the
/// multipliers of the two SNR constraints in the inner convex program, so
/// the stationarity identity mu_s = g_sr(b) * alpha + g_sd * beta holds at
/// every relay-aided output.
struct SubcarrierSolution {
  int t = 0;
  int b = 0;  // 1-based cut position, valid iff t = 1
  double p_s = 0.0;
  std::vector<double> p_r;  // length N
  double lagrangian_value = 0.0;
  PerSubcarrierCase case_tag = PerSubcarrierCase::kDirect;
  double x_opt = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

struct DirectSolution {
  double p_s = 0.0;
  double lagrangian_value = 0.0;
};

/// Direct-mode KKT solution for subcarrier gain g_sd_k at price mu_s:
///
///   p_s = 2 [log2(e)/mu_s - 1/g_sd_k]^+
///
/// The returned value is the full Lagrangian term
/// rate_direct(p_s, g_sd_k) - mu_s p_s (penalty included; the mode
/// comparison against relay candidates is only valid on full Lagrangian
/// values). Throws UnboundedDualError when mu_s < mu_floor.
DirectSolution solve_direct(double mu_s, double g_sd_k,
                            double mu_floor = kDefaultMuFloor);

/// Result of gbar(): either the aggregate gain-to-price ratio of the
/// assisting set, or a flag that some member has a zero multiplier.
struct GbarResult {
  bool mu_zero = false;  // some relay in the set has mu_ri = 0
  double value = 0.0;    // sum over the set of g_rd / mu_ri (valid if !mu_zero)
};

/// G~_b,k = sum over relays at positions b..N of g_rd[i][k] / mu_r[i],
/// or the mu-zero flag if any member's multiplier is zero.
GbarResult gbar(const DualVector& mu, const ChannelGains& gains,
                const RelayOrder& order, int k, int b);

/// Maximizes the per-subcarrier Lagrangian for fixed (t=1, b) in closed form
/// via sensitivity analysis. Three cases, with G~ = gbar over the set and
/// dG = g_sr(b) - g_sd:
///
///  1. all mu_ri > 0 and mu_s/g_sd <= 1/G~: relay power is not worth its
///     price; x = 0 and p_s water-fills the direct link.
///  2. all mu_ri > 0 and mu_s/g_sd > 1/G~: both SNR constraints saturate;
///     p_s = [log2(e)/(mu_s + dG/G~) - 1/g_sr(b)]^+, x = p_s dG, and each
///     set member gets p_ri = g_rd / (mu_ri G~)^2 * x.
///  3. some mu_ri = 0 in the set: the free relays absorb the whole split
///     x~ = dG p_s with p_s = [log2(e)/mu_s - 1/g_sr(b)]^+, shared as
///     p_ri = g_rd x~ / (sum of free g_rd)^2 (the minimum-sum-power split
///     meeting the amplitude constraint); priced relays get zero.
///
/// When g_sr(b) <= g_sd the relay link is the unconditional bottleneck;
/// the optimum then has x = 0 with p_s water-filling g_sr(b) (callers
/// normally prune these cuts, but the result is still the exact optimum).
///
/// At every output the MRC SNR never exceeds p_s g_sr(b): the source-relay
/// link is never the strict bottleneck at the optimum.
SubcarrierSolution solve_relay_fixed_b(const DualVector& mu,
                                       const ChannelGains& gains,
                                       const RelayOrder& order, int k, int b,
                                       double mu_floor = kDefaultMuFloor);

/// i_k: the smallest 1-based position in subcarrier k's relay order whose
/// source-relay gain strictly exceeds the direct gain, or N+1 if none does
/// (in which case the subcarrier belongs to the forced-direct set).
int first_relay_position_above_direct(const ChannelGains& gains,
                                      const RelayOrder& order, int k);

/// Full per-subcarrier maximization: prunes to the direct mode when no
/// source-relay gain beats the direct gain; otherwise compares the direct
/// solution against every cut b in {i_k..N} where i_k is the first position
/// with g_sr > g_sd. Ties resolve to the direct mode, and among relay cuts
/// to the smallest b (largest assisting set).
SubcarrierSolution solve_subcarrier(const DualVector& mu,
                                    const ChannelGains& gains,
                                    const RelayOrder& order, int k,
                                    double mu_floor = kDefaultMuFloor);

namespace detail {

/// Allocation-free core of solve_relay_fixed_b: everything needed to rank
/// candidates and to reconstruct relay powers later.
struct RelayCandidate {
  double lagrangian_value = 0.0;
  double p_s = 0.0;
  double x_opt = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gbar = 0.0;           // valid in case 2
  double zero_mu_gain_sum = 0.0;  // valid in case 3
  PerSubcarrierCase case_tag = PerSubcarrierCase::kRelayCase1;
};

RelayCandidate solve_relay_candidate(const DualVector& mu,
                                     const ChannelGains& gains,
                                     const RelayOrder& order, int k, int b,
                                     double mu_floor);

/// Writes the candidate's relay powers into p_r_out[0..N-1] (zeroing the
/// rest). p_r_out must have length N.
void fill_relay_powers(const RelayCandidate& cand, const DualVector& mu,
                       const ChannelGains& gains, const RelayOrder& order,
                       int k, int b, double* p_r_out);

}  // namespace detail

}  // namespace dfra

#endif  // DFRA_PERSUBCARRIER_HPP_
