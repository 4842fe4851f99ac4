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

#ifndef DFRA_BASELINE_HPP_
#define DFRA_BASELINE_HPP_

#include <vector>

#include "dfra/model.hpp"
#include "dfra/persubcarrier.hpp"

namespace dfra {

/// The comparison heuristic: uniform source power 1/K everywhere; each
/// subcarrier outside the forced-direct set is claimed by the relay with
/// the best source-relay gain (ties to the lowest relay index), which then
/// splits its budget uniformly over its claimed subcarriers. Per subcarrier
/// the direct rate is compared against the single-best-relay rate at those
/// fixed powers; the direct mode wins ties, and a subcarrier that ends up
/// direct carries no relay power.
Allocation heuristic_ra(const ChannelGains& gains, const RelayOrder& order);

struct OracleSmallResult {
  Allocation alloc;
  double sum_rate = 0.0;
};

/// Exhaustive desk-scale oracle: maximizes the sum rate over every
/// per-subcarrier mode/cut choice crossed with per-device power grids of
/// resolution grid_step (dynamic programming over the joint device
/// budgets). The result is a feasible allocation whose rate lower-bounds
/// the true optimum to within O(grid_step).
///
/// Guards: K <= 4, N <= 2, grid_step in [0.01, 0.25]. Steps below 0.02 get
/// slow at the full K=4, N=2 size.
OracleSmallResult oracle_small(const ChannelGains& gains,
                               const RelayOrder& order, double grid_step);

struct ConvexFixedResult {
  Allocation alloc;
  double sum_rate = 0.0;
  bool converged = false;
};

/// Projected-gradient oracle for the fixed-mode primal problem: maximizes
/// the sum rate over powers with modes/cuts pinned, under the per-device
/// sum constraints (capped-simplex projection per device, backtracking line
/// search, minimum-norm subgradient blending at rate kinks). Flags
/// nonconvergence instead of guessing.
ConvexFixedResult oracle_convex_fixed(const ChannelGains& gains,
                                      const RelayOrder& order,
                                      const std::vector<std::uint8_t>& mode,
                                      const std::vector<int>& cut,
                                      double tolerance);

struct LagrangianOracleResult {
  double value = 0.0;  // maximum of the penalized per-subcarrier objective
  double p_s = 0.0;
  double x = 0.0;             // squared coherent relay amplitude at the max
  std::vector<double> p_r;    // length N
};

/// Penalized flavor of the convex oracle: independently maximizes the
/// per-subcarrier Lagrangian for fixed (t=1, b) at multipliers mu, i.e.
///
///   log2(1 + min(p_s g_sr(b), p_s g_sd + x)) - mu_s p_s - cost(x)
///
/// over p_s, x >= 0, where cost(x) is the cheapest relay split delivering
/// squared amplitude x (a one-line quadratic program over the assisting
/// set). The 2-D search is nested golden section, which needs nothing from
/// the sensitivity-analysis closed forms it is used to check.
LagrangianOracleResult oracle_lagrangian_fixed_b(const DualVector& mu,
                                                 const ChannelGains& gains,
                                                 const RelayOrder& order,
                                                 int k, int b,
                                                 double tolerance);

/// 1-D golden-section maximizer of the penalized direct-mode objective
/// 2 log2(1 + p g / 2) - mu_s p over p >= 0; the independent check for
/// solve_direct. Returns the maximum value; *p_out gets the argmax.
double oracle_lagrangian_direct(double mu_s, double g_sd_k, double tolerance,
                                double* p_out = nullptr);

}  // namespace dfra

#endif  // DFRA_BASELINE_HPP_
