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

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dfra/baseline.hpp"
#include "dfra/errors.hpp"
#include "dfra/iterative.hpp"
#include "dfra/json_io.hpp"
#include "dfra/simkit.hpp"

namespace {

// Distinct exit codes so scripts can tell failure classes apart.
enum ExitCode {
  kOk = 0,
  kGenericError = 1,
  kConfigError = 2,
  kDimensionError = 3,
  kSolverFailure = 4,
  kInstanceTooLarge = 5,
};

using nlohmann::json;

struct SolveInputs {
  dfra::ChannelGains gains;
  dfra::RelayOrder order;
  dfra::SubgradientConfig solver;
  std::optional<dfra::SystemConfig> system;
};

struct CommonOpts {
  std::string config_path;
  std::string gains_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  int realization = 0;
};

SolveInputs load_inputs(const CommonOpts& opts) {
  SolveInputs in;
  if (!opts.gains_path.empty()) {
    in.gains = dfra::load_gains(opts.gains_path);
    if (!opts.config_path.empty()) {
      dfra::FileConfig cfg = dfra::load_config(opts.config_path);
      in.solver = cfg.solver;
      if (cfg.has_system) in.system = cfg.system;
    }
  } else if (!opts.config_path.empty()) {
    dfra::FileConfig cfg = dfra::load_config(opts.config_path);
    if (opts.seed) cfg.scenario.seed = *opts.seed;
    if (!cfg.has_system)
      throw dfra::DomainError(
          "config: a 'system' section is required to generate channels");
    const dfra::LinkCoeffPower coeffs =
        dfra::draw_link_coeffs(cfg.scenario, opts.realization);
    in.gains = dfra::normalize_gains(coeffs, cfg.system);
    in.solver = cfg.solver;
    in.system = cfg.system;
  } else {
    throw dfra::DomainError("either --gains or --config is required");
  }
  in.gains.validate();
  in.order = dfra::RelayOrder::build(in.gains);
  return in;
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty())
    std::cout << j.dump(2) << "\n";
  else
    dfra::write_text_file(out_path, j.dump(2) + "\n");
}

void attach_metrics(json& j, const dfra::Allocation& alloc,
                    const SolveInputs& in) {
  if (!in.system) return;
  const dfra::RateReport rates =
      dfra::sum_rate(alloc, in.gains, in.order);
  if (rates.sum_rate > 0.0)
    j["tetib_j_per_bit"] = dfra::tetib(alloc, rates, *in.system);
}

int run_solve_dual(const CommonOpts& opts) {
  SolveInputs in = load_inputs(opts);
  dfra::DualResult res = dfra::solve_dual(in.gains, in.order, in.solver);
  json j = dfra::allocation_to_json(res.alloc, in.gains, in.order);
  j["converged"] = res.trace.converged;
  j["iterations"] = res.trace.iterations;
  j["dual_value"] = res.trace.dual_value;
  j["best_dual_value"] = res.trace.best_dual_value;
  attach_metrics(j, res.alloc, in);
  emit(j, opts.out_path);
  return kOk;
}

int run_solve_iterative(const CommonOpts& opts) {
  SolveInputs in = load_inputs(opts);
  dfra::IterativeResult res =
      dfra::solve_iterative(in.gains, in.order, in.solver);
  json j = dfra::allocation_to_json(res.alloc, in.gains, in.order);
  j["converged"] = res.converged;
  j["outer_iterations"] = res.outer_iterations;
  j["rate_trace"] = res.rate_trace;
  j["inner_all_converged"] = res.inner_all_converged;
  attach_metrics(j, res.alloc, in);
  emit(j, opts.out_path);
  return kOk;
}

int run_heuristic(const CommonOpts& opts) {
  SolveInputs in = load_inputs(opts);
  const dfra::Allocation alloc = dfra::heuristic_ra(in.gains, in.order);
  json j = dfra::allocation_to_json(alloc, in.gains, in.order);
  attach_metrics(j, alloc, in);
  emit(j, opts.out_path);
  return kOk;
}

int run_gen_channel(const CommonOpts& opts) {
  if (opts.config_path.empty())
    throw dfra::DomainError("gen-channel: --config is required");
  dfra::FileConfig cfg = dfra::load_config(opts.config_path);
  if (opts.seed) cfg.scenario.seed = *opts.seed;
  if (!cfg.has_system)
    throw dfra::DomainError("gen-channel: config needs a 'system' section");
  const dfra::LinkCoeffPower coeffs =
      dfra::draw_link_coeffs(cfg.scenario, opts.realization);
  const dfra::ChannelGains gains = dfra::normalize_gains(coeffs, cfg.system);
  if (opts.out_path.empty())
    throw dfra::DomainError("gen-channel: --out is required");
  dfra::save_gains(gains, opts.out_path);
  std::cout << "wrote " << opts.out_path << " (K=" << gains.num_subcarriers()
            << ", N=" << gains.num_relays() << ")\n";
  return kOk;
}

int run_experiment_cmd(const CommonOpts& opts, int threads) {
  if (opts.config_path.empty())
    throw dfra::DomainError("experiment: --config is required");
  dfra::FileConfig cfg = dfra::load_config(opts.config_path);
  if (opts.seed) cfg.scenario.seed = *opts.seed;
  if (!cfg.has_experiment)
    throw dfra::DomainError("experiment: config needs an 'experiment' section");

  dfra::ExperimentSpec spec;
  spec.scenario = cfg.scenario;
  spec.ps_dbw = cfg.ps_dbw;
  spec.realizations = cfg.realizations;
  spec.solvers = cfg.solvers;
  spec.solver_cfg = cfg.solver;
  if (cfg.has_system) {
    spec.noise_variance = cfg.system.noise_variance;
    spec.slot_duration = cfg.system.slot_duration;
  }
  spec.threads = threads;

  const auto rows = dfra::run_experiment(spec);
  const std::string csv = dfra::metrics_csv(rows);
  if (opts.out_path.empty()) {
    std::cout << csv;
  } else {
    dfra::write_text_file(opts.out_path, csv);
    dfra::write_text_file(opts.out_path + ".summary.csv",
                          dfra::summary_csv(dfra::summarize(rows)));
    std::cout << "wrote " << opts.out_path << " and " << opts.out_path
              << ".summary.csv\n";
  }
  return kOk;
}

// Random desk-scale instance; prints oracle vs solver rates and a verdict.
int run_oracle_check(int k_count, int n, std::uint64_t seed, double grid) {
  if (k_count < 1 || k_count > 4 || n < 1 || n > 2)
    throw dfra::InstanceTooLarge("oracle-check: need 1<=K<=4, 1<=N<=2");
  dfra::Scenario sc;
  sc.relay_pos.assign(n, dfra::Vec2{});
  for (int i = 0; i < n; ++i)
    sc.relay_pos[i] = {-3.0 + 6.0 * i / std::max(1, n - 1), -7.0};
  sc.num_subcarriers = std::max(k_count, 6);
  sc.seed = seed;
  dfra::SystemConfig sys;
  sys.num_subcarriers = sc.num_subcarriers;
  sys.num_relays = n;
  sys.source_power = 100.0;
  sys.relay_powers.assign(n, 100.0);
  sys.noise_variance = 1e-5;
  const dfra::LinkCoeffPower coeffs = dfra::draw_link_coeffs(sc, 0);
  dfra::ChannelGains gains = dfra::normalize_gains(coeffs, sys);
  // keep only the first K subcarriers at desk scale
  gains.g_sd.resize(k_count);
  for (int i = 0; i < n; ++i) {
    gains.g_sr[i].resize(k_count);
    gains.g_rd[i].resize(k_count);
  }
  const dfra::RelayOrder order = dfra::RelayOrder::build(gains);

  dfra::SubgradientConfig cfg;
  const auto oracle = dfra::oracle_small(gains, order, grid);
  const auto dual = dfra::solve_dual(gains, order, cfg);
  const auto iter = dfra::solve_iterative(gains, order, cfg);
  const auto heur = dfra::heuristic_ra(gains, order);
  const double dual_rate =
      dfra::sum_rate(dual.alloc, gains, order).sum_rate;
  const double iter_rate = dfra::sum_rate(iter.alloc, gains, order).sum_rate;
  const double heur_rate = dfra::sum_rate(heur, gains, order).sum_rate;

  std::printf("oracle_small (grid %.3g): %.9g bpts\n", grid,
              oracle.sum_rate);
  std::printf("dual:      %.9g bpts (converged=%d, dual value %.9g)\n",
              dual_rate, dual.trace.converged ? 1 : 0,
              dual.trace.dual_value);
  std::printf("iterative: %.9g bpts (converged=%d)\n", iter_rate,
              iter.converged ? 1 : 0);
  std::printf("heuristic: %.9g bpts\n", heur_rate);

  bool ok = oracle.sum_rate <= dual.trace.dual_value + 1e-6;
  ok = ok && heur_rate <= oracle.sum_rate + 1e-6;
  if (dual.trace.converged)
    ok = ok && dual_rate >= oracle.sum_rate - cfg.epsilon - 1e-6;
  std::printf("%s\n", ok ? "PASS" : "FAIL");
  return ok ? kOk : kSolverFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sum-rate maximizing resource allocation for DF-relay-aided "
               "OFDM links"};
  app.require_subcommand(1);

  CommonOpts opts;
  int threads = 0;
  int oc_k = 2, oc_n = 1;
  std::uint64_t oc_seed = 7;
  double oc_grid = 0.05;
  std::uint64_t seed_value = 0;
  bool seed_set = false;

  auto add_common = [&](CLI::App* cmd, bool with_gains) {
    cmd->add_option("--config", opts.config_path, "JSON configuration file");
    if (with_gains)
      cmd->add_option("--gains", opts.gains_path, "JSON gains file");
    cmd->add_option("--out", opts.out_path, "output path");
    cmd->add_option("--seed", seed_value, "override scenario seed")
        ->each([&](const std::string&) { seed_set = true; });
    cmd->add_option("--realization", opts.realization,
                    "channel realization index");
  };

  CLI::App* c_dual = app.add_subcommand(
      "solve-dual", "duality-based RA (globally optimal at large K)");
  add_common(c_dual, true);
  CLI::App* c_iter = app.add_subcommand(
      "solve-iterative", "coordinate-ascent RA (always applicable)");
  add_common(c_iter, true);
  CLI::App* c_heur =
      app.add_subcommand("heuristic", "uniform-power comparison heuristic");
  add_common(c_heur, true);
  CLI::App* c_gen =
      app.add_subcommand("gen-channel", "draw a channel realization");
  add_common(c_gen, false);
  CLI::App* c_exp =
      app.add_subcommand("experiment", "power sweep over realizations");
  add_common(c_exp, false);
  c_exp->add_option("--threads", threads, "worker threads (0 = auto)");
  CLI::App* c_oracle = app.add_subcommand(
      "oracle-check", "compare solvers against the exhaustive oracle");
  c_oracle->add_option("--k", oc_k, "subcarriers (<= 4)");
  c_oracle->add_option("--n", oc_n, "relays (<= 2)");
  c_oracle->add_option("--seed", oc_seed, "instance seed");
  c_oracle->add_option("--grid", oc_grid, "power grid step");

  CLI11_PARSE(app, argc, argv);
  if (seed_set) opts.seed = seed_value;

  try {
    if (c_dual->parsed()) return run_solve_dual(opts);
    if (c_iter->parsed()) return run_solve_iterative(opts);
    if (c_heur->parsed()) return run_heuristic(opts);
    if (c_gen->parsed()) return run_gen_channel(opts);
    if (c_exp->parsed()) return run_experiment_cmd(opts, threads);
    if (c_oracle->parsed())
      return run_oracle_check(oc_k, oc_n, oc_seed, oc_grid);
  } catch (const dfra::DimensionError& e) {
    std::cerr << "dimension error: " << e.what() << "\n";
    return kDimensionError;
  } catch (const dfra::InstanceTooLarge& e) {
    std::cerr << "instance too large: " << e.what() << "\n";
    return kInstanceTooLarge;
  } catch (const dfra::UnboundedDualError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const dfra::SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const dfra::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kGenericError;
  }
  return kGenericError;
}
