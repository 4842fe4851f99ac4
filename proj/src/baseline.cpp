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

#include "dfra/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <limits>
#include <thread>

#include "dfra/errors.hpp"

namespace dfra {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Golden-section search (maximization of a unimodal function on [lo, hi]).

template <typename F>
std::pair<double, double> golden_max(F&& f, double lo, double hi,
                                     double tol) {
  constexpr double inv_phi = 0.61803398874989484820;
  constexpr double inv_phi2 = 0.38196601125010515180;
  double a = lo, b = hi;
  double h = b - a;
  double c = a + inv_phi2 * h;
  double d = a + inv_phi * h;
  double fc = f(c);
  double fd = f(d);
  while (h > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      h = b - a;
      c = a + inv_phi2 * h;
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      h = b - a;
      d = a + inv_phi * h;
      fd = f(d);
    }
  }
  const double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

// ---------------------------------------------------------------------------
// Cheapest relay split delivering squared coherent amplitude x.
//
// minimize sum_i mu_i p_i  s.t.  sum_{i in set} sqrt(p_i g_i) = sqrt(x).
// In amplitude variables a_i = sqrt(p_i g_i) this is a diagonal QP on a
// hyperplane: zero-price members absorb everything for free; otherwise
// a_i proportional to g_i/mu_i, at cost x / sum(g_i/mu_i).

struct RelaySplit {
  bool any_free = false;        // zero-mu member with positive gain
  double free_gain_sum = 0.0;   // sum of g over those
  double priced_ratio = 0.0;    // sum of g/mu over priced members

  bool can_deliver() const { return any_free || priced_ratio > 0.0; }
  double cost(double x) const {
    if (x <= 0.0 || any_free) return 0.0;
    return x / priced_ratio;
  }
};

RelaySplit scan_split(const DualVector& mu, const ChannelGains& gains,
                      const RelayOrder& order, int k, int b) {
  RelaySplit s;
  const int n = gains.num_relays();
  for (int pos = b; pos <= n; ++pos) {
    const int i = order.relay_at(k, pos);
    const double g = gains.g_rd[i][k];
    if (g <= 0.0) continue;
    if (mu.mu_r[i] == 0.0) {
      s.any_free = true;
      s.free_gain_sum += g;
    } else {
      s.priced_ratio += g / mu.mu_r[i];
    }
  }
  return s;
}

void split_powers(const RelaySplit& s, const DualVector& mu,
                  const ChannelGains& gains, const RelayOrder& order, int k,
                  int b, double x, std::vector<double>& p_r) {
  const int n = gains.num_relays();
  p_r.assign(n, 0.0);
  if (x <= 0.0) return;
  for (int pos = b; pos <= n; ++pos) {
    const int i = order.relay_at(k, pos);
    const double g = gains.g_rd[i][k];
    if (g <= 0.0) continue;
    if (s.any_free) {
      if (mu.mu_r[i] == 0.0)
        p_r[i] = g * x / (s.free_gain_sum * s.free_gain_sum);
    } else {
      const double denom = mu.mu_r[i] * s.priced_ratio;
      p_r[i] = g / (denom * denom) * x;
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Heuristic

Allocation heuristic_ra(const ChannelGains& gains, const RelayOrder& order) {
  gains.validate();
  const int k_count = gains.num_subcarriers();
  const int n = gains.num_relays();
  Allocation a = Allocation::zeros(k_count, n);

  for (int k = 0; k < k_count; ++k) a.p_s[k] = 1.0 / k_count;

  // Claim each non-D subcarrier for its best source-relay link.
  std::vector<int> owner(k_count, -1);
  std::vector<int> claimed(n, 0);
  for (int k = 0; k < k_count; ++k) {
    int best = 0;
    for (int i = 1; i < n; ++i)
      if (gains.g_sr[i][k] > gains.g_sr[best][k]) best = i;
    if (gains.g_sr[best][k] <= gains.g_sd[k]) continue;  // D set
    owner[k] = best;
    ++claimed[best];
  }

  for (int k = 0; k < k_count; ++k) {
    const int i = owner[k];
    if (i < 0) continue;  // forced direct
    const double p_relay = 1.0 / claimed[i];
    const double p_s = a.p_s[k];
    const double gamma = p_s * gains.g_sd[k] + p_relay * gains.g_rd[i][k];
    const double rate_r =
        log2_1p(std::min(gamma, p_s * gains.g_sr[i][k]));
    const double rate_d = rate_direct(p_s, gains.g_sd[k]);
    if (rate_d >= rate_r) continue;  // direct wins ties; no relay spend
    a.mode[k] = 1;
    a.p_r[i][k] = p_relay;
    // 1-based position of the claiming relay in the sorted order.
    for (int pos = 1; pos <= n; ++pos)
      if (order.relay_at(k, pos) == i) {
        a.cut[k] = pos;
        break;
      }
  }
  return a;
}

// ---------------------------------------------------------------------------
// Penalized per-subcarrier oracle (nested golden section)

double oracle_lagrangian_direct(double mu_s, double g_sd_k, double tolerance,
                                double* p_out) {
  if (!(mu_s > 0.0)) throw DomainError("oracle: mu_s must be positive");
  const double hi = 2.0 * kLog2E / mu_s + 1.0;
  auto f = [&](double p) {
    return 2.0 * log2_1p(0.5 * p * g_sd_k) - mu_s * p;
  };
  auto [p, v] = golden_max(f, 0.0, hi, tolerance * (1.0 + hi) * 1e-3);
  if (p_out) *p_out = p;
  return v;
}

LagrangianOracleResult oracle_lagrangian_fixed_b(const DualVector& mu,
                                                 const ChannelGains& gains,
                                                 const RelayOrder& order,
                                                 int k, int b,
                                                 double tolerance) {
  gains.validate();
  const int n = gains.num_relays();
  if (k < 0 || k >= gains.num_subcarriers() || b < 1 || b > n)
    throw DimensionError("oracle_lagrangian_fixed_b: k or b out of range");
  if (mu.num_relays() != n)
    throw DimensionError("oracle_lagrangian_fixed_b: multiplier count != N");
  if (!(mu.mu_s > 0.0))
    throw UnboundedDualError("oracle_lagrangian_fixed_b: mu_s must be > 0");

  const double g_sd = gains.g_sd[k];
  const double g_srb = gains.g_sr[order.relay_at(k, b)][k];
  const double mu_s = mu.mu_s;
  const RelaySplit split = scan_split(mu, gains, order, k, b);

  const double ps_hi = 2.0 * kLog2E / mu_s + 1.0;
  const double ps_tol = tolerance * 1e-4 * (1.0 + ps_hi);

  auto value_at = [&](double p_s, double x) {
    const double snr = std::min(p_s * g_srb, p_s * g_sd + x);
    return log2_1p(snr) - mu_s * p_s - split.cost(x);
  };
  auto best_ps_for = [&](double x) {
    return golden_max([&](double p) { return value_at(p, x); }, 0.0, ps_hi,
                      ps_tol);
  };

  LagrangianOracleResult out;
  if (!split.can_deliver()) {
    auto [p, v] = best_ps_for(0.0);
    out.value = v;
    out.p_s = p;
    out.x = 0.0;
    out.p_r.assign(n, 0.0);
    return out;
  }

  const double delta_g = std::max(g_srb - g_sd, 0.0);
  double x_hi = split.any_free ? ps_hi * delta_g + 1.0
                               : split.priced_ratio * kLog2E + 1.0;
  auto [x_best, v_best] =
      golden_max([&](double x) { return best_ps_for(x).second; }, 0.0, x_hi,
                 tolerance * 1e-4 * (1.0 + x_hi));
  auto [p_best, v_check] = best_ps_for(x_best);
  out.value = std::max(v_best, v_check);
  out.p_s = p_best;
  out.x = x_best;
  split_powers(split, mu, gains, order, k, b, x_best, out.p_r);
  return out;
}

// ---------------------------------------------------------------------------
// Projected-gradient oracle for the fixed-mode primal problem

namespace {

// Euclidean projection onto { x >= 0, sum x <= 1 }.
void project_capped_simplex(std::vector<double>& x) {
  double s = 0.0;
  for (double& v : x) s += std::max(v, 0.0);
  if (s <= 1.0) {
    for (double& v : x) v = std::max(v, 0.0);
    return;
  }
  std::vector<double> u(x);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, tau = 0.0;
  int rho = 0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cum += u[j];
    const double t = (cum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) {
      rho = static_cast<int>(j + 1);
      tau = t;
    }
  }
  (void)rho;
  for (double& v : x) v = std::max(v - tau, 0.0);
}

struct FixedModeProblem {
  const ChannelGains* gains;
  const RelayOrder* order;
  const std::vector<std::uint8_t>* mode;
  const std::vector<int>* cut;
  int k_count, n;
  std::vector<std::vector<char>> free_slot;  // [relay][k]

  double value(const std::vector<double>& ps,
               const std::vector<std::vector<double>>& pr) const {
    double total = 0.0;
    for (int k = 0; k < k_count; ++k) {
      if (!(*mode)[k]) {
        total += 2.0 * log2_1p(0.5 * ps[k] * gains->g_sd[k]);
        continue;
      }
      const int b = (*cut)[k];
      double amp = 0.0;
      for (int pos = b; pos <= n; ++pos) {
        const int i = order->relay_at(k, pos);
        amp += std::sqrt(pr[i][k] * gains->g_rd[i][k]);
      }
      const double gamma = ps[k] * gains->g_sd[k] + amp * amp;
      const double bott = ps[k] * gains->g_sr[order->relay_at(k, b)][k];
      total += log2_1p(std::min(gamma, bott));
    }
    return total;
  }

  void gradient(const std::vector<double>& ps,
                const std::vector<std::vector<double>>& pr,
                std::vector<double>& gps,
                std::vector<std::vector<double>>& gpr) const {
    constexpr double kPowerFloor = 1e-12;
    for (int i = 0; i < n; ++i)
      std::fill(gpr[i].begin(), gpr[i].end(), 0.0);
    for (int k = 0; k < k_count; ++k) {
      if (!(*mode)[k]) {
        gps[k] = kLog2E * gains->g_sd[k] /
                 (1.0 + 0.5 * ps[k] * gains->g_sd[k]);
        continue;
      }
      const int b = (*cut)[k];
      const double g_srb = gains->g_sr[order->relay_at(k, b)][k];
      double amp = 0.0;
      for (int pos = b; pos <= n; ++pos) {
        const int i = order->relay_at(k, pos);
        amp += std::sqrt(pr[i][k] * gains->g_rd[i][k]);
      }
      const double gamma = ps[k] * gains->g_sd[k] + amp * amp;
      const double bott = ps[k] * g_srb;
      const double tie_band = 1e-9 * (1.0 + gamma + bott);

      // gamma-branch slice
      const double cg = kLog2E / (1.0 + gamma);
      const double a_ps = cg * gains->g_sd[k];
      // bottleneck-branch slice
      const double cb = kLog2E / (1.0 + bott);
      const double c_ps = cb * g_srb;

      if (gamma < bott - tie_band) {
        gps[k] = a_ps;
        for (int pos = b; pos <= n; ++pos) {
          const int i = order->relay_at(k, pos);
          const double g = gains->g_rd[i][k];
          if (g > 0.0)
            gpr[i][k] =
                cg * amp * std::sqrt(g / std::max(pr[i][k], kPowerFloor));
        }
      } else if (gamma > bott + tie_band) {
        gps[k] = c_ps;
      } else {
        // Tie: minimum-norm convex combination of the two branch
        // subgradients over this subcarrier's slice.
        double dot_bb = c_ps * c_ps;
        double dot_ba = c_ps * a_ps;
        double dot_aa = a_ps * a_ps;
        std::vector<double> arel(n, 0.0);
        for (int pos = b; pos <= n; ++pos) {
          const int i = order->relay_at(k, pos);
          const double g = gains->g_rd[i][k];
          if (g > 0.0) {
            arel[i] =
                cg * amp * std::sqrt(g / std::max(pr[i][k], kPowerFloor));
            dot_aa += arel[i] * arel[i];
          }
        }
        const double denom = dot_aa - 2.0 * dot_ba + dot_bb;
        double lam = denom > 0.0 ? (dot_bb - dot_ba) / denom : 0.5;
        lam = std::clamp(lam, 0.0, 1.0);
        gps[k] = lam * a_ps + (1.0 - lam) * c_ps;
        for (int pos = b; pos <= n; ++pos) {
          const int i = order->relay_at(k, pos);
          gpr[i][k] = lam * arel[i];
        }
      }
    }
  }
};

}  // namespace

ConvexFixedResult oracle_convex_fixed(const ChannelGains& gains,
                                      const RelayOrder& order,
                                      const std::vector<std::uint8_t>& mode,
                                      const std::vector<int>& cut,
                                      double tolerance) {
  gains.validate();
  const int k_count = gains.num_subcarriers();
  const int n = gains.num_relays();
  if (static_cast<int>(mode.size()) != k_count ||
      static_cast<int>(cut.size()) != k_count)
    throw DimensionError("oracle_convex_fixed: mode/cut length != K");
  for (int k = 0; k < k_count; ++k)
    if (mode[k] && (cut[k] < 1 || cut[k] > n))
      throw DomainError("oracle_convex_fixed: cut out of range");
  if (!(tolerance > 0.0))
    throw DomainError("oracle_convex_fixed: tolerance must be positive");

  FixedModeProblem prob{&gains, &order, &mode, &cut, k_count, n, {}};
  prob.free_slot.assign(n, std::vector<char>(k_count, 0));
  std::vector<int> slots(n, 0);
  for (int k = 0; k < k_count; ++k) {
    if (!mode[k]) continue;
    for (int pos = cut[k]; pos <= n; ++pos) {
      const int i = order.relay_at(k, pos);
      prob.free_slot[i][k] = 1;
      ++slots[i];
    }
  }

  std::vector<double> ps(k_count, 0.5 / k_count);
  std::vector<std::vector<double>> pr(n, std::vector<double>(k_count, 0.0));
  for (int i = 0; i < n; ++i)
    if (slots[i] > 0)
      for (int k = 0; k < k_count; ++k)
        if (prob.free_slot[i][k]) pr[i][k] = 0.5 / slots[i];

  std::vector<double> gps(k_count);
  std::vector<std::vector<double>> gpr(n, std::vector<double>(k_count, 0.0));
  std::vector<double> cand_ps, scratch;
  std::vector<std::vector<double>> cand_pr = pr;

  double f_cur = prob.value(ps, pr);
  double step = 1.0;
  const int max_iters = 200000;
  const int window = 100;
  std::vector<double> recent;
  recent.reserve(max_iters + 1);
  recent.push_back(f_cur);
  bool converged = false;

  for (int it = 0; it < max_iters; ++it) {
    prob.gradient(ps, pr, gps, gpr);

    bool accepted = false;
    for (int trial = 0; trial < 60 && !accepted; ++trial) {
      cand_ps = ps;
      for (int k = 0; k < k_count; ++k) cand_ps[k] += step * gps[k];
      project_capped_simplex(cand_ps);
      for (int i = 0; i < n; ++i) {
        if (slots[i] == 0) continue;
        // project only the free coordinates of relay i
        scratch.clear();
        for (int k = 0; k < k_count; ++k)
          if (prob.free_slot[i][k])
            scratch.push_back(pr[i][k] + step * gpr[i][k]);
        project_capped_simplex(scratch);
        int idx = 0;
        for (int k = 0; k < k_count; ++k)
          cand_pr[i][k] = prob.free_slot[i][k] ? scratch[idx++] : 0.0;
      }
      const double f_new = prob.value(cand_ps, cand_pr);
      double lin = 0.0;
      for (int k = 0; k < k_count; ++k) lin += gps[k] * (cand_ps[k] - ps[k]);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < k_count; ++k)
          lin += gpr[i][k] * (cand_pr[i][k] - pr[i][k]);
      if (f_new >= f_cur + 1e-4 * lin && f_new >= f_cur - 1e-15) {
        ps.swap(cand_ps);
        pr.swap(cand_pr);
        f_cur = f_new;
        step = std::min(step * 1.25, 1e6);
        accepted = true;
      } else {
        step *= 0.5;
      }
    }
    if (!accepted) step = 1.0;  // restart the step after a stall

    recent.push_back(f_cur);
    if (static_cast<int>(recent.size()) > window) {
      const double past = recent[recent.size() - window - 1];
      if (f_cur - past <= tolerance * 1e-2 * (1.0 + std::fabs(f_cur))) {
        converged = true;
        break;
      }
    }
  }

  ConvexFixedResult res;
  res.converged = converged;
  res.alloc = Allocation::zeros(k_count, n);
  for (int k = 0; k < k_count; ++k) {
    res.alloc.mode[k] = mode[k];
    res.alloc.cut[k] = mode[k] ? cut[k] : 0;
    res.alloc.p_s[k] = ps[k];
    for (int i = 0; i < n; ++i) res.alloc.p_r[i][k] = pr[i][k];
  }
  res.sum_rate = sum_rate(res.alloc, gains, order).sum_rate;
  return res;
}

// ---------------------------------------------------------------------------
// Exhaustive grid oracle (dynamic programming over joint device budgets)

namespace {

struct GridSpend {
  int a, u1, u2;
  double rate;
  std::uint8_t tag;  // 0 = direct, else cut b
};

}  // namespace

OracleSmallResult oracle_small(const ChannelGains& gains,
                               const RelayOrder& order, double grid_step) {
  gains.validate();
  const int k_count = gains.num_subcarriers();
  const int n = gains.num_relays();
  if (k_count > 4 || n > 2)
    throw InstanceTooLarge("oracle_small: requires K <= 4 and N <= 2");
  if (!(grid_step >= 0.01 - 1e-12 && grid_step <= 0.25 + 1e-12))
    throw DomainError("oracle_small: grid_step outside [0.01, 0.25]");

  const int units = static_cast<int>(std::floor(1.0 / grid_step + 1e-9));
  const double h = grid_step;
  const int w = units + 1;
  const long stride1 = (n == 2) ? w : 1;       // relay at global index 0
  const long stride_a = (n == 2) ? long(w) * w : w;
  const long stride2 = 1;                      // relay at global index 1
  const long states = stride_a * w;

  std::vector<double> cube(states);
  std::vector<std::uint8_t> cube_tag(states);
  std::vector<double> value(states, 0.0), next_value(states);
  std::vector<std::vector<std::uint32_t>> choice(
      k_count, std::vector<std::uint32_t>(states, 0));
  std::vector<GridSpend> spends;

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int nthreads = static_cast<int>(std::min<unsigned>(hw, 8));

  auto cell = [&](int a, int u1, int u2) {
    return a * stride_a + u1 * stride1 + u2 * stride2;
  };

  for (int k = 0; k < k_count; ++k) {
    std::fill(cube.begin(), cube.end(), kNegInf);
    std::fill(cube_tag.begin(), cube_tag.end(), 0);

    // Direct line: relay spends contribute nothing.
    for (int a = 0; a <= units; ++a) {
      const long c = cell(a, 0, 0);
      cube[c] = rate_direct(a * h, gains.g_sd[k]);
      cube_tag[c] = 0;
    }

    const int i_k = first_relay_position_above_direct(gains, order, k);
    for (int b = i_k; b <= n; ++b) {
      const double g_srb = gains.g_sr[order.relay_at(k, b)][k];
      const double g_sd = gains.g_sd[k];
      if (n - b + 1 == 1) {
        const int i = order.relay_at(k, n);
        const double g = gains.g_rd[i][k];
        for (int u = 0; u <= units; ++u) {
          const double y = u * h * g;
          for (int a = 0; a <= units; ++a) {
            const double r =
                log2_1p(std::min(a * h * g_srb, a * h * g_sd + y));
            const long c = (i == 0) ? cell(a, u, 0) : cell(a, 0, u);
            if (r > cube[c]) {
              cube[c] = r;
              cube_tag[c] = static_cast<std::uint8_t>(b);
            }
          }
        }
      } else {
        // both relays decode (n == 2, b == 1); dims are global indices
        const double g0 = gains.g_rd[0][k];
        const double g1 = gains.g_rd[1][k];
        for (int u1 = 0; u1 <= units; ++u1) {
          const double amp1 = std::sqrt(u1 * h * g0);
          for (int u2 = 0; u2 <= units; ++u2) {
            const double amp = amp1 + std::sqrt(u2 * h * g1);
            const double y = amp * amp;
            for (int a = 0; a <= units; ++a) {
              const double r =
                  log2_1p(std::min(a * h * g_srb, a * h * g_sd + y));
              const long c = cell(a, u1, u2);
              if (r > cube[c]) {
                cube[c] = r;
                cube_tag[c] = static_cast<std::uint8_t>(b);
              }
            }
          }
        }
      }
    }

    // Keep only spends that strictly improve on every one-unit reduction:
    // anything else is dominated (same rate, more leftover budget).
    spends.clear();
    for (int a = 0; a <= units; ++a)
      for (int u1 = 0; u1 <= (n == 2 ? units : (n == 1 ? units : 0)); ++u1)
        for (int u2 = 0; u2 <= (n == 2 ? units : 0); ++u2) {
          const long c = cell(a, u1, u2);
          const double r = cube[c];
          if (r == kNegInf) continue;
          if (a > 0 && !(r > cube[c - stride_a])) continue;
          if (u1 > 0 && !(r > cube[c - stride1])) continue;
          if (u2 > 0 && !(r > cube[c - stride2])) continue;
          spends.push_back({a, u1, u2, r, cube_tag[c]});
        }

    // DP sweep, parallel over disjoint slices of the leading coordinate.
    std::fill(next_value.begin(), next_value.end(), kNegInf);
    auto sweep = [&](int sa_lo, int sa_hi) {
      for (int sa = sa_lo; sa < sa_hi; ++sa) {
        for (const GridSpend& sp : spends) {
          if (sp.a > sa) continue;
          const std::uint32_t code =
              static_cast<std::uint32_t>(sp.a) |
              (static_cast<std::uint32_t>(sp.u1) << 7) |
              (static_cast<std::uint32_t>(sp.u2) << 14) |
              (static_cast<std::uint32_t>(sp.tag) << 21);
          const long off =
              sp.a * stride_a + sp.u1 * stride1 + sp.u2 * stride2;
          const int u1_max = (n >= 1) ? units : 0;
          const int u2_max = (n == 2) ? units : 0;
          for (int s1 = sp.u1; s1 <= (n == 2 ? u1_max : (n == 1 ? u1_max : 0));
               ++s1) {
            const long base = sa * stride_a + s1 * stride1;
            for (int s2 = sp.u2; s2 <= u2_max; ++s2) {
              const long idx = base + s2 * stride2;
              const double cand = sp.rate + value[idx - off];
              if (cand > next_value[idx]) {
                next_value[idx] = cand;
                choice[k][idx] = code;
              }
            }
          }
        }
      }
    };
    if (nthreads > 1 && states > 4096) {
      std::vector<std::thread> pool;
      const int chunk = (units + nthreads) / nthreads;
      for (int t = 0; t < nthreads; ++t) {
        const int lo = t * chunk;
        const int hi = std::min(units + 1, lo + chunk);
        if (lo < hi) pool.emplace_back(sweep, lo, hi);
      }
      for (auto& th : pool) th.join();
    } else {
      sweep(0, units + 1);
    }
    value.swap(next_value);
  }

  // Backtrack from the full-budget corner.
  Allocation alloc = Allocation::zeros(k_count, n);
  int sa = units, s1 = (n >= 1) ? units : 0, s2 = (n == 2) ? units : 0;
  for (int k = k_count - 1; k >= 0; --k) {
    const std::uint32_t code = choice[k][cell(sa, s1, s2)];
    const int a = code & 0x7F;
    const int u1 = (code >> 7) & 0x7F;
    const int u2 = (code >> 14) & 0x7F;
    const int tag = code >> 21;
    alloc.p_s[k] = a * h;
    if (tag == 0) {
      alloc.mode[k] = 0;
      alloc.cut[k] = 0;
    } else {
      alloc.mode[k] = 1;
      alloc.cut[k] = tag;
      if (n >= 1) alloc.p_r[0][k] = u1 * h;
      if (n == 2) alloc.p_r[1][k] = u2 * h;
    }
    sa -= a;
    s1 -= u1;
    s2 -= u2;
  }

  OracleSmallResult out;
  out.sum_rate = sum_rate(alloc, gains, order).sum_rate;
  out.alloc = std::move(alloc);
  return out;
}

}  // namespace dfra
