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

#include "dfra/json_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dfra/errors.hpp"

namespace dfra {

using nlohmann::json;

namespace {

Vec2 parse_vec2(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2)
    throw DomainError(std::string("config: ") + what +
                      " must be a [x, y] pair");
  return Vec2{j[0].get<double>(), j[1].get<double>()};
}

template <typename T>
void maybe(const json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open file for writing: " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

FileConfig load_config(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw DomainError(std::string("config: malformed JSON: ") + e.what());
  }
  FileConfig cfg;
  try {
    if (!j.contains("scenario"))
      throw DomainError("config: missing 'scenario' section");
    const json& sc = j.at("scenario");
    if (sc.contains("source_pos"))
      cfg.scenario.source_pos = parse_vec2(sc["source_pos"], "source_pos");
    if (sc.contains("dest_pos"))
      cfg.scenario.dest_pos = parse_vec2(sc["dest_pos"], "dest_pos");
    if (sc.contains("relay_pos")) {
      cfg.scenario.relay_pos.clear();
      for (const auto& rp : sc.at("relay_pos"))
        cfg.scenario.relay_pos.push_back(parse_vec2(rp, "relay_pos entry"));
    } else {
      cfg.scenario.relay_pos = paper_scenario().relay_pos;
    }
    maybe(sc, "pathloss_exponent", cfg.scenario.pathloss_exponent);
    maybe(sc, "shadowing_sigma_db", cfg.scenario.shadowing_sigma_db);
    maybe(sc, "tap_count", cfg.scenario.tap_count);
    maybe(sc, "tap_decay", cfg.scenario.tap_decay);
    maybe(sc, "K", cfg.scenario.num_subcarriers);
    maybe(sc, "seed", cfg.scenario.seed);
    cfg.scenario.validate();

    if (j.contains("system")) {
      cfg.has_system = true;
      const json& sys = j.at("system");
      cfg.system.num_subcarriers = cfg.scenario.num_subcarriers;
      cfg.system.num_relays = cfg.scenario.num_relays();
      maybe(sys, "K", cfg.system.num_subcarriers);
      maybe(sys, "N", cfg.system.num_relays);
      maybe(sys, "source_power", cfg.system.source_power);
      if (sys.contains("relay_powers")) {
        cfg.system.relay_powers =
            sys.at("relay_powers").get<std::vector<double>>();
      } else {
        cfg.system.relay_powers.assign(cfg.system.num_relays,
                                       cfg.system.source_power);
      }
      maybe(sys, "noise_variance", cfg.system.noise_variance);
      maybe(sys, "slot_duration", cfg.system.slot_duration);
      if (cfg.system.num_subcarriers != cfg.scenario.num_subcarriers)
        throw DimensionError("config: system.K != scenario.K");
      if (cfg.system.num_relays != cfg.scenario.num_relays())
        throw DimensionError("config: system.N != number of relay positions");
      cfg.system.validate();
    }

    if (j.contains("solver")) {
      const json& so = j.at("solver");
      maybe(so, "epsilon", cfg.solver.epsilon);
      maybe(so, "q_offset", cfg.solver.q_offset);
      maybe(so, "max_iterations", cfg.solver.max_iterations);
      maybe(so, "mu_floor", cfg.solver.mu_floor);
      cfg.solver.validate();
    }

    if (j.contains("experiment")) {
      cfg.has_experiment = true;
      const json& ex = j.at("experiment");
      cfg.ps_dbw = ex.at("ps_dbw").get<std::vector<double>>();
      maybe(ex, "realizations", cfg.realizations);
      if (ex.contains("solvers"))
        cfg.solvers = ex.at("solvers").get<std::vector<std::string>>();
      else
        cfg.solvers = {"dual", "iterative", "heuristic"};
    }
  } catch (const json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
  return cfg;
}

ChannelGains load_gains(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw DomainError(std::string("gains: malformed JSON: ") + e.what());
  }
  ChannelGains g;
  try {
    g.g_sd = j.at("g_sd").get<std::vector<double>>();
    g.g_sr = j.at("g_sr").get<std::vector<std::vector<double>>>();
    g.g_rd = j.at("g_rd").get<std::vector<std::vector<double>>>();
  } catch (const json::exception& e) {
    throw DomainError(std::string("gains: ") + e.what());
  }
  g.validate();
  return g;
}

void save_gains(const ChannelGains& gains, const std::string& path) {
  json j;
  j["g_sd"] = gains.g_sd;
  j["g_sr"] = gains.g_sr;
  j["g_rd"] = gains.g_rd;
  write_text_file(path, j.dump(2) + "\n");
}

json allocation_to_json(const Allocation& alloc, const ChannelGains& gains,
                        const RelayOrder& order) {
  const FeasibilityReport feas = check_feasible(alloc);
  const RateReport rates = sum_rate(alloc, gains, order);
  json j;
  j["K"] = alloc.num_subcarriers();
  j["N"] = alloc.num_relays();
  j["mode"] = alloc.mode;
  j["cut"] = alloc.cut;
  j["p_s"] = alloc.p_s;
  j["p_r"] = alloc.p_r;
  j["feasible"] = feas.feasible;
  j["nonnegative"] = feas.nonnegative;
  j["slack"] = feas.slack;
  j["sum_rate_bpts"] = rates.sum_rate;
  j["rate_per_subcarrier_bpts"] = rates.per_subcarrier;
  return j;
}

}  // namespace dfra
