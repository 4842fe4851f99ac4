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

#ifndef DFRA_SIMKIT_HPP_
#define DFRA_SIMKIT_HPP_

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "dfra/dual.hpp"
#include "dfra/model.hpp"

namespace dfra {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Geometry and statistics of the simulated channels.
///
/// Each link is a tap_count-tap delay line with exponentially decaying tap
/// variances e^{-tap_decay * l}, normalized to unit total so that the mean
/// link power is exactly (shadowing) * distance^{-pathloss_exponent}.
/// Shadowing is log-normal, drawn once per link per realization:
/// 10 log10(xi) ~ N(0, shadowing_sigma_db^2).
struct Scenario {
  Vec2 source_pos{0.0, 0.0};
  Vec2 dest_pos{0.0, -15.0};
  std::vector<Vec2> relay_pos;
  double pathloss_exponent = 3.0;
  double shadowing_sigma_db = 1.0;
  int tap_count = 6;
  double tap_decay = 3.0;
  int num_subcarriers = 256;
  std::uint64_t seed = 1;

  int num_relays() const { return static_cast<int>(relay_pos.size()); }
  void validate() const;
};

/// The geometry used throughout the comparative experiments: source at the
/// origin, destination at (0,-15), six relays on the line y = -7 at
/// x in {-6,-4,-2,2,4,6} (meters).
Scenario paper_scenario(int num_subcarriers = 256, std::uint64_t seed = 1);

/// Frequency response of one link: taps are drawn zero-mean circularly
/// Gaussian from the decay profile, scaled by path loss and shadowing, and
/// transformed directly (tap counts are tiny, no FFT needed):
///   H[k] = sum_l h_l exp(-j 2 pi k l / K).
/// Deterministic given (scenario.seed, stream): the same pair always
/// reproduces the same response bit for bit.
std::vector<std::complex<double>> gen_channel(const Scenario& scenario,
                                              const Vec2& from, const Vec2& to,
                                              std::uint64_t stream);

/// All 2N+1 link coefficient powers |H[k]|^2 of one channel realization,
/// with per-link streams derived from (seed, realization, link index) so
/// realizations are independent work units.
LinkCoeffPower draw_link_coeffs(const Scenario& scenario,
                                std::uint64_t realization);

/// Total energy of the source and the relays per delivered information bit:
///   tetib = slot_duration * (P_s sum_k p_s[k] + sum_i P_ri sum_k p_r[i][k])
///           / sum_rate.
/// (A direct-mode subcarrier spends P_s p_s/2 in each of the two slots, a
/// relay-aided one P_s p_s in the broadcast slot alone; both integrate to
/// P_s p_s per frame.) Throws DomainError on a nonpositive sum rate.
double tetib(const Allocation& alloc, const RateReport& rates,
             const SystemConfig& config);

double dbw_to_watts(double dbw);

struct MetricsRow {
  std::string solver;
  double ps_dbw = 0.0;
  int realization = 0;
  double sum_rate_bpts = 0.0;
  double tetib_j_per_bit = 0.0;
  bool converged = false;
};

struct SummaryRow {
  std::string solver;
  double ps_dbw = 0.0;
  double mean_sum_rate_bpts = 0.0;
  double mean_tetib_j_per_bit = 0.0;
  int realizations = 0;
  int converged_count = 0;
};

/// A comparative study: a power sweep with P_s = P_ri at every point,
/// `realizations` independent channel draws, and any subset of the solvers
/// {"dual", "iterative", "heuristic"} run on every instance.
struct ExperimentSpec {
  Scenario scenario;
  std::vector<double> ps_dbw;
  int realizations = 1;
  std::vector<std::string> solvers;
  SubgradientConfig solver_cfg;
  double noise_variance = 1e-5;  // -50 dBW
  double slot_duration = 1e-3;
  int threads = 0;  // 0 = hardware concurrency
};

/// Runs the experiment. Realizations execute concurrently with per-unit
/// RNG streams, so results are independent of thread scheduling; rows come
/// back ordered by (solver, power, realization) as listed in the spec.
std::vector<MetricsRow> run_experiment(const ExperimentSpec& spec);

/// Per (solver, power) averages in the order first encountered.
std::vector<SummaryRow> summarize(const std::vector<MetricsRow>& rows);

/// CSV with header
/// solver,ps_dbw,realization,sum_rate_bpts,tetib_j_per_bit,converged
/// and floats at 12 significant digits.
std::string metrics_csv(const std::vector<MetricsRow>& rows);
std::string summary_csv(const std::vector<SummaryRow>& rows);

}  // namespace dfra

#endif  // DFRA_SIMKIT_HPP_
