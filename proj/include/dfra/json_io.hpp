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

#ifndef DFRA_JSON_IO_HPP_
#define DFRA_JSON_IO_HPP_

#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "dfra/dual.hpp"
#include "dfra/model.hpp"
#include "dfra/simkit.hpp"

namespace dfra {

/// Parsed configuration file. Sections:
///   scenario   — geometry/statistics (fields of Scenario)
///   system     — device powers and noise (fields of SystemConfig)
///   solver     — subgradient parameters (fields of SubgradientConfig)
///   experiment — ps_dbw, realizations, solvers
/// All but `scenario` are optional and default sensibly.
struct FileConfig {
  Scenario scenario;
  SystemConfig system;
  bool has_system = false;
  SubgradientConfig solver;
  std::vector<double> ps_dbw;
  int realizations = 1;
  std::vector<std::string> solvers;
  bool has_experiment = false;
};

FileConfig load_config(const std::string& path);

/// Gains files carry g_sd (K array) plus g_sr and g_rd (N x K arrays).
ChannelGains load_gains(const std::string& path);
void save_gains(const ChannelGains& gains, const std::string& path);

/// Allocation dump: mode/cut/p_s/p_r plus feasibility flags, the achieved
/// sum rate, and any solver diagnostics handed in.
nlohmann::json allocation_to_json(const Allocation& alloc,
                                  const ChannelGains& gains,
                                  const RelayOrder& order);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace dfra

#endif  // DFRA_JSON_IO_HPP_
