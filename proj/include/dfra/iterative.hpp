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

#ifndef DFRA_ITERATIVE_HPP_
#define DFRA_ITERATIVE_HPP_

#include <vector>

#include "dfra/dual.hpp"
#include "dfra/model.hpp"

namespace dfra {

/// Mode/cut assignment state of the coordinate-ascent loop.
///
/// Subcarriers whose best source-relay gain does not beat the direct gain
/// live in d_set and stay direct forever. Elsewhere mode/cut evolve across
/// outer iterations: modes only ever switch 1 -> 0, and cuts never grow
/// while a subcarrier stays relay-aided.
struct ModeState {
  std::vector<int> d_set;          // ascending subcarrier indices
  std::vector<std::uint8_t> mode;  // t_k, length K
  std::vector<int> cut;            // b_k in 1..N where mode=1, else 0
  int iteration = 1;               // m
};

/// D = { k : max_i g_sr[i][k] <= g_sd[k] } (inclusive boundary).
std::vector<int> compute_d_set(const ChannelGains& gains,
                               const RelayOrder& order);

/// Initial assignment: direct inside D; relay-aided with cut N (only the
/// strongest source-relay link decodes) everywhere else.
ModeState init_modes(const ChannelGains& gains, const RelayOrder& order);

/// One mode/cut update given the optimal powers for the current fixed
/// assignment: direct subcarriers stay direct; a relay-aided subcarrier
/// switches to direct iff its direct rate strictly beats its relay rate at
/// the solved powers, and otherwise keeps mode 1 with the cut lowered to
/// the first position i (>= i_k) whose source-relay gain supports the
/// achieved MRC SNR: gamma <= p_s g_sr(srk(i)).
ModeState update_modes(const ModeState& state, const Allocation& alloc,
                       const ChannelGains& gains, const RelayOrder& order);

struct IterativeResult {
  Allocation alloc;
  std::vector<double> rate_trace;  // sum rate per outer iteration
  bool converged = false;          // mode/cut fixpoint reached
  int outer_iterations = 0;
  bool inner_all_converged = true;  // every fixed-mode dual solve terminated
};

/// Coordinate-ascent resource allocation: alternates the fixed-mode dual
/// power solve with per-subcarrier mode/cut updates until the assignment
/// repeats. The rate trace is nondecreasing up to twice the inner solver's
/// epsilon. A cycle guard of K(N+1)+10 outer iterations converts any
/// pathology into a flagged best-so-far result.
IterativeResult solve_iterative(const ChannelGains& gains,
                                const RelayOrder& order,
                                const SubgradientConfig& cfg);

}  // namespace dfra

#endif  // DFRA_ITERATIVE_HPP_
