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

#ifndef DFRA_DUAL_HPP_
#define DFRA_DUAL_HPP_

#include <cstdint>
#include <limits>
#include <vector>

#include "dfra/model.hpp"
#include "dfra/persubcarrier.hpp"

namespace dfra {

/// Subgradient loop parameters. Step sizes follow the harmonic-like
/// schedule delta_q = (1 + q_offset) / (q + q_offset), which diminishes to
/// zero while its series diverges.
struct SubgradientConfig {
  double epsilon = 0.1;        // termination threshold on mu^T (1 - g)
  double q_offset = 50.0;      // Q1/Q2 step-size constant
  long max_iterations = 20000; // subgradient step cap
  double mu_floor = 1e-12;     // smallest admissible mu_s
  bool record_mu_history = false;

  void validate() const;
};

/// Diagnostics of one dual solve.
///
/// `dual_value` is d(mu) at the final iterate; `best_dual_value` the
/// smallest d(mu) seen over the run (the tightest upper bound on the primal
/// optimum). `best_feasible` tracks the feasible iterate with the highest
/// sum rate, returned by solve_dual on nonconvergence: the subgradient dual
/// value is not monotone, so the last iterate is not necessarily the best.
struct DualTrace {
  long iterations = 0;
  bool converged = false;
  std::vector<DualVector> mu_history;     // filled iff record_mu_history
  std::vector<double> slack_gap_history;  // mu^T (1 - g) per iterate
  Allocation best_feasible;
  double best_feasible_rate = -std::numeric_limits<double>::infinity();
  bool has_feasible = false;
  double dual_value = 0.0;
  double best_dual_value = std::numeric_limits<double>::infinity();
};

/// Which Lagrangian maximization to run: free per-subcarrier mode/cut
/// search, or modes and cuts pinned to given arrays (the fixed-mode solver
/// of the coordinate-ascent loop, where the multipliers play the role of
/// the nu variables).
struct ModeSpec {
  bool is_fixed = false;
  std::vector<std::uint8_t> mode;  // used iff is_fixed
  std::vector<int> cut;            // 1..N where mode=1

  static ModeSpec free_modes() { return ModeSpec{}; }
  static ModeSpec fixed(std::vector<std::uint8_t> mode_in,
                        std::vector<int> cut_in) {
    return ModeSpec{true, std::move(mode_in), std::move(cut_in)};
  }
};

/// One projected subgradient step:
///   mu' = [mu - delta_q * slack]^+ with delta_q = (1+Q)/(q+Q),
/// where slack = 1 - g(x_mu). The source component is additionally floored
/// at cfg.mu_floor.
DualVector subgradient_step(const DualVector& mu,
                            const std::vector<double>& slack, long q,
                            const SubgradientConfig& cfg);

struct LagrangianMaxResult {
  Allocation alloc;
  double dual_value = 0.0;  // d(mu) = sum_k L_k + mu^T 1
};

/// Maximizes the Lagrangian at fixed mu, per subcarrier: the free flavor
/// runs the full mode/cut search, the fixed flavor uses solve_relay_fixed_b
/// where mode=1 and solve_direct elsewhere.
LagrangianMaxResult maximize_lagrangian(const DualVector& mu,
                                        const ChannelGains& gains,
                                        const RelayOrder& order,
                                        const ModeSpec& spec,
                                        double mu_floor = kDefaultMuFloor);

struct DualResult {
  Allocation alloc;
  DualTrace trace;
};

/// The subgradient dual solver. mu starts at all-ones; each iteration steps
/// mu using the previous iterate's constraint slack, then re-solves the
/// Lagrangian maximization. Terminates as soon as the iterate is feasible
/// with mu^T (1 - g) < epsilon, which certifies f(x_mu) >= f* - epsilon.
/// On hitting max_iterations the best feasible iterate is returned with
/// trace.converged = false. Throws SolverFailure if no feasible iterate was
/// ever seen.
DualResult solve_dual(const ChannelGains& gains, const RelayOrder& order,
                      const SubgradientConfig& cfg,
                      const ModeSpec& spec = ModeSpec::free_modes());

/// Empirical duality-gap probe: gap = (tightest dual bound) - (best primal
/// rate found). Weak duality keeps the gap nonnegative up to rounding; it
/// approaches zero as the subcarrier count grows.
struct GapProbe {
  double dual_value = 0.0;
  double best_primal = 0.0;
  double gap = 0.0;
};

GapProbe duality_gap_probe(const ChannelGains& gains, const RelayOrder& order,
                           const SubgradientConfig& cfg);

}  // namespace dfra

#endif  // DFRA_DUAL_HPP_
