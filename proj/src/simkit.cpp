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

#include "dfra/simkit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include "dfra/baseline.hpp"
#include "dfra/errors.hpp"
#include "dfra/iterative.hpp"

namespace dfra {

namespace {

constexpr double kPi = 3.14159265358979323846;

// splitmix64 finalizer; the whole RNG story is hand-rolled so outputs are
// bit-identical across standard libraries.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  // uniform in (0,1)
  double u01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }
};

// Box-Muller pairs on explicit uniforms.
struct GaussianStream {
  SplitMix64 rng;
  bool have_spare = false;
  double spare = 0.0;
  double next() {
    if (have_spare) {
      have_spare = false;
      return spare;
    }
    const double u1 = rng.u01();
    const double u2 = rng.u01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare = r * std::sin(2.0 * kPi * u2);
    have_spare = true;
    return r * std::cos(2.0 * kPi * u2);
  }
};

std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a,
                            std::uint64_t b) {
  return mix64(seed ^ mix64(a ^ mix64(b)));
}

double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace

void Scenario::validate() const {
  if (tap_count < 1) throw DomainError("Scenario: tap_count must be >= 1");
  if (num_subcarriers < tap_count)
    throw DomainError("Scenario: K must be >= tap_count");
  if (relay_pos.empty()) throw DomainError("Scenario: no relays");
  if (!(shadowing_sigma_db >= 0.0))
    throw DomainError("Scenario: shadowing sigma must be >= 0");
  auto finite = [](const Vec2& v) {
    return std::isfinite(v.x) && std::isfinite(v.y);
  };
  if (!finite(source_pos) || !finite(dest_pos))
    throw DomainError("Scenario: nonfinite position");
  for (const Vec2& p : relay_pos)
    if (!finite(p)) throw DomainError("Scenario: nonfinite relay position");
}

Scenario paper_scenario(int num_subcarriers, std::uint64_t seed) {
  Scenario sc;
  sc.source_pos = {0.0, 0.0};
  sc.dest_pos = {0.0, -15.0};
  sc.relay_pos = {{-6.0, -7.0}, {-4.0, -7.0}, {-2.0, -7.0},
                  {2.0, -7.0},  {4.0, -7.0},  {6.0, -7.0}};
  sc.num_subcarriers = num_subcarriers;
  sc.seed = seed;
  return sc;
}

std::vector<std::complex<double>> gen_channel(const Scenario& scenario,
                                              const Vec2& from, const Vec2& to,
                                              std::uint64_t stream) {
  scenario.validate();
  const double d = distance(from, to);
  if (!(d > 0.0)) throw DomainError("gen_channel: coincident link endpoints");

  const int taps = scenario.tap_count;
  const int k_count = scenario.num_subcarriers;

  // Tap variances e^{-decay*l}, normalized to unit sum.
  std::vector<double> var(taps);
  double var_sum = 0.0;
  for (int l = 0; l < taps; ++l) {
    var[l] = std::exp(-scenario.tap_decay * l);
    var_sum += var[l];
  }
  for (double& v : var) v /= var_sum;

  GaussianStream gauss{SplitMix64{derive_stream(scenario.seed, stream, 0)}};

  // One shadowing draw per link: 10 log10(xi) ~ N(0, sigma_db^2).
  const double shadow_db = scenario.shadowing_sigma_db * gauss.next();
  const double xi = std::pow(10.0, shadow_db / 10.0);
  const double scale =
      std::sqrt(xi * std::pow(d, -scenario.pathloss_exponent));

  std::vector<std::complex<double>> taps_c(taps);
  for (int l = 0; l < taps; ++l) {
    const double s = std::sqrt(0.5 * var[l]);
    taps_c[l] = {s * gauss.next(), s * gauss.next()};
  }

  std::vector<std::complex<double>> response(k_count);
  for (int k = 0; k < k_count; ++k) {
    std::complex<double> h{0.0, 0.0};
    for (int l = 0; l < taps; ++l) {
      const double phase = -2.0 * kPi * k * l / k_count;
      h += taps_c[l] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    response[k] = scale * h;
  }
  return response;
}

LinkCoeffPower draw_link_coeffs(const Scenario& scenario,
                                std::uint64_t realization) {
  const int n = scenario.num_relays();
  const int k_count = scenario.num_subcarriers;
  LinkCoeffPower out;
  out.sd.resize(k_count);
  out.sr.assign(n, std::vector<double>(k_count));
  out.rd.assign(n, std::vector<double>(k_count));

  auto power = [&](const Vec2& a, const Vec2& b, std::uint64_t link,
                   std::vector<double>& dst) {
    const auto h =
        gen_channel(scenario, a, b, derive_stream(realization, link, 1));
    for (int k = 0; k < k_count; ++k) dst[k] = std::norm(h[k]);
  };
  power(scenario.source_pos, scenario.dest_pos, 0, out.sd);
  for (int i = 0; i < n; ++i) {
    power(scenario.source_pos, scenario.relay_pos[i], 1 + i, out.sr[i]);
    power(scenario.relay_pos[i], scenario.dest_pos, 1 + n + i, out.rd[i]);
  }
  return out;
}

double tetib(const Allocation& alloc, const RateReport& rates,
             const SystemConfig& config) {
  if (!(rates.sum_rate > 0.0))
    throw DomainError("tetib: undefined at zero sum rate");
  double energy = 0.0;
  double sum_s = 0.0;
  for (double p : alloc.p_s) sum_s += p;
  energy += config.source_power * sum_s;
  for (int i = 0; i < alloc.num_relays(); ++i) {
    double sum_r = 0.0;
    for (double p : alloc.p_r[i]) sum_r += p;
    energy += config.relay_powers[i] * sum_r;
  }
  return config.slot_duration * energy / rates.sum_rate;
}

double dbw_to_watts(double dbw) { return std::pow(10.0, dbw / 10.0); }

namespace {

struct CellResult {
  double sum_rate = 0.0;
  double tetib_val = 0.0;
  bool converged = false;
};

CellResult run_solver(const std::string& solver, const ChannelGains& gains,
                      const RelayOrder& order, const SubgradientConfig& cfg,
                      const SystemConfig& sys) {
  CellResult cell;
  Allocation alloc;
  if (solver == "heuristic") {
    alloc = heuristic_ra(gains, order);
    cell.converged = true;
  } else if (solver == "dual") {
    DualResult res = solve_dual(gains, order, cfg);
    cell.converged = res.trace.converged;
    alloc = std::move(res.alloc);
  } else if (solver == "iterative") {
    IterativeResult res = solve_iterative(gains, order, cfg);
    cell.converged = res.converged && res.inner_all_converged;
    alloc = std::move(res.alloc);
  } else {
    throw DomainError("run_experiment: unknown solver '" + solver + "'");
  }
  const RateReport rates = sum_rate(alloc, gains, order);
  cell.sum_rate = rates.sum_rate;
  cell.tetib_val = rates.sum_rate > 0.0
                       ? tetib(alloc, rates, sys)
                       : std::numeric_limits<double>::quiet_NaN();
  return cell;
}

}  // namespace

std::vector<MetricsRow> run_experiment(const ExperimentSpec& spec) {
  spec.scenario.validate();
  spec.solver_cfg.validate();
  if (spec.realizations < 1)
    throw DomainError("run_experiment: realizations must be >= 1");
  if (spec.ps_dbw.empty())
    throw DomainError("run_experiment: empty power sweep");
  if (spec.solvers.empty())
    throw DomainError("run_experiment: no solvers selected");
  for (const auto& s : spec.solvers)
    if (s != "dual" && s != "iterative" && s != "heuristic")
      throw DomainError("run_experiment: unknown solver '" + s + "'");

  const int n = spec.scenario.num_relays();
  const int n_real = spec.realizations;
  const int n_pow = static_cast<int>(spec.ps_dbw.size());
  const int n_sol = static_cast<int>(spec.solvers.size());

  std::vector<CellResult> cells(
      static_cast<std::size_t>(n_real) * n_pow * n_sol);

  auto work = [&](int r) {
    const LinkCoeffPower coeffs = draw_link_coeffs(spec.scenario, r);
    for (int p = 0; p < n_pow; ++p) {
      SystemConfig sys;
      sys.num_subcarriers = spec.scenario.num_subcarriers;
      sys.num_relays = n;
      sys.source_power = dbw_to_watts(spec.ps_dbw[p]);
      sys.relay_powers.assign(n, sys.source_power);  // P_s = P_ri
      sys.noise_variance = spec.noise_variance;
      sys.slot_duration = spec.slot_duration;
      const ChannelGains gains = normalize_gains(coeffs, sys);
      const RelayOrder order = RelayOrder::build(gains);
      for (int s = 0; s < n_sol; ++s) {
        cells[(static_cast<std::size_t>(r) * n_pow + p) * n_sol + s] =
            run_solver(spec.solvers[s], gains, order, spec.solver_cfg, sys);
      }
    }
  };

  unsigned hw = std::thread::hardware_concurrency();
  int threads = spec.threads > 0 ? spec.threads
                                 : static_cast<int>(std::max(1u, hw));
  threads = std::min(threads, n_real);
  if (threads <= 1) {
    for (int r = 0; r < n_real; ++r) work(r);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&]() {
        for (int r = next.fetch_add(1); r < n_real; r = next.fetch_add(1))
          work(r);
      });
    for (auto& th : pool) th.join();
  }

  std::vector<MetricsRow> rows;
  rows.reserve(cells.size());
  for (int s = 0; s < n_sol; ++s)
    for (int p = 0; p < n_pow; ++p)
      for (int r = 0; r < n_real; ++r) {
        const CellResult& c =
            cells[(static_cast<std::size_t>(r) * n_pow + p) * n_sol + s];
        rows.push_back(MetricsRow{spec.solvers[s], spec.ps_dbw[p], r,
                                  c.sum_rate, c.tetib_val, c.converged});
      }
  return rows;
}

std::vector<SummaryRow> summarize(const std::vector<MetricsRow>& rows) {
  std::vector<SummaryRow> out;
  auto find = [&](const std::string& solver, double ps) -> SummaryRow& {
    for (auto& s : out)
      if (s.solver == solver && s.ps_dbw == ps) return s;
    out.push_back(SummaryRow{solver, ps, 0.0, 0.0, 0, 0});
    return out.back();
  };
  for (const auto& r : rows) {
    SummaryRow& s = find(r.solver, r.ps_dbw);
    s.mean_sum_rate_bpts += r.sum_rate_bpts;
    s.mean_tetib_j_per_bit += r.tetib_j_per_bit;
    s.realizations += 1;
    s.converged_count += r.converged ? 1 : 0;
  }
  for (auto& s : out) {
    s.mean_sum_rate_bpts /= s.realizations;
    s.mean_tetib_j_per_bit /= s.realizations;
  }
  return out;
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

std::string metrics_csv(const std::vector<MetricsRow>& rows) {
  std::string out =
      "solver,ps_dbw,realization,sum_rate_bpts,tetib_j_per_bit,converged\n";
  for (const auto& r : rows) {
    out += r.solver;
    out += ',';
    out += fmt_double(r.ps_dbw);
    out += ',';
    out += std::to_string(r.realization);
    out += ',';
    out += fmt_double(r.sum_rate_bpts);
    out += ',';
    out += fmt_double(r.tetib_j_per_bit);
    out += ',';
    out += r.converged ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out =
      "solver,ps_dbw,mean_sum_rate_bpts,mean_tetib_j_per_bit,realizations,"
      "converged_count\n";
  for (const auto& r : rows) {
    out += r.solver;
    out += ',';
    out += fmt_double(r.ps_dbw);
    out += ',';
    out += fmt_double(r.mean_sum_rate_bpts);
    out += ',';
    out += fmt_double(r.mean_tetib_j_per_bit);
    out += ',';
    out += std::to_string(r.realizations);
    out += ',';
    out += std::to_string(r.converged_count);
    out += '\n';
  }
  return out;
}

}  // namespace dfra
