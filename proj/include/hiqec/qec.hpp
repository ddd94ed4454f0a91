#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "hiqec/errors.hpp"
#include "hiqec/noise.hpp"

namespace hiqec {

// Surface-code model constants and the error budget. The empirical defaults
// c0 = 0.03 and p_th = 0.0057 come with the per-cycle logical X-error fit
//   P_L = c0 (p / p_th)^((d+1)/2)   for odd d, p < p_th.
struct SurfaceCodeParams {
  double p = 1e-3;       // physical per-step error rate
  double p_th = 0.0057;  // threshold
  double c0 = 0.03;      // prefactor
  long n_cycles = 1;     // code cycles contributing to the budget
  double epsilon = 1e-2; // target fractional error after n_cycles
  int d_min = 3;
  int d_max = 51;

  void validate() const {
    if (!(p > 0.0) || !(p < p_th)) {
      throw ParameterError("physical error rate p must satisfy 0 < p < p_th");
    }
    if (!(c0 > 0.0)) {
      throw ParameterError("prefactor c0 must be positive");
    }
    if (n_cycles < 1) {
      throw ParameterError("n_cycles must be at least 1");
    }
    if (!(epsilon > 0.0)) {
      throw ParameterError("target error epsilon must be positive");
    }
    if (d_min < 1 || d_min % 2 == 0 || d_max < d_min || d_max % 2 == 0) {
      throw ParameterError("distance bounds must be odd with d_min <= d_max");
    }
  }

  double eps_per_cycle() const {
    return epsilon / static_cast<double>(n_cycles);
  }

  double cbar0() const { return static_cast<double>(n_cycles) * c0; }
};

// P_L(d) = c0 (p/p_th)^((d+1)/2). The exponent floor((d+1)/2) is exact for
// odd d, the only distances this model uses.
inline double logical_error_rate(int d, const SurfaceCodeParams &params) {
  if (!(params.p > 0.0) || !(params.p < params.p_th)) {
    throw ParameterError("logical error rate formula requires 0 < p < p_th");
  }
  if (d < 1 || d % 2 == 0) {
    throw ParameterError("code distance must be a positive odd integer, got " +
                         std::to_string(d));
  }
  const int exponent = (d + 1) / 2;
  return params.c0 * std::pow(params.p / params.p_th, exponent);
}

// Per-logical-qubit surface-code side lengths, indexed like the sensitivity
// profile (qubit 0 = most UV). The q-th logical qubit costs d_q^2 physical
// qubits.
struct DistanceAssignment {
  std::vector<int> d;
  long long total_physical = 0;            // sum of d_q^2
  double achieved_error_per_cycle = 0.0;   // sum |gamma_q| P_L(d_q)

  std::vector<int> ir_first() const {
    return std::vector<int>(d.rbegin(), d.rend());
  }
};

namespace detail {

inline long double achieved_error(const std::vector<double> &gamma,
                                  const std::vector<int> &d,
                                  const SurfaceCodeParams &params) {
  long double acc = 0.0L;
  for (std::size_t q = 0; q < gamma.size(); ++q) {
    acc += std::abs(gamma[q]) *
           static_cast<long double>(logical_error_rate(d[q], params));
  }
  return acc;
}

inline DistanceAssignment finish_assignment(const std::vector<double> &gamma,
                                            std::vector<int> d,
                                            const SurfaceCodeParams &params) {
  DistanceAssignment out;
  out.total_physical = 0;
  for (int dq : d) {
    out.total_physical += static_cast<long long>(dq) * dq;
  }
  out.achieved_error_per_cycle =
      static_cast<double>(achieved_error(gamma, d, params));
  out.d = std::move(d);
  return out;
}

// Smallest odd d with c0 (p/p_th)^((d+1)/2) <= budget_ratio * (p/p_th)^0,
// i.e. d = 2 ceil(log(x) / log(p/p_th)) - 1 for x = budget / (cbar0 * weight),
// clamped below at d_min. Throws when it exceeds d_max.
inline int required_distance(double x, const SurfaceCodeParams &params,
                             int binding_qubit) {
  const double ratio = std::log(x) / std::log(params.p / params.p_th);
  const int d = 2 * static_cast<int>(std::ceil(ratio)) - 1;
  const int clamped = std::max(d, params.d_min);
  if (clamped > params.d_max) {
    throw InfeasibleError("required distance " + std::to_string(clamped) +
                              " exceeds d_max = " +
                              std::to_string(params.d_max),
                          binding_qubit);
  }
  return clamped;
}

inline int largest_sensitivity_qubit(const std::vector<double> &gamma) {
  int arg = 0;
  for (std::size_t q = 1; q < gamma.size(); ++q) {
    if (std::abs(gamma[q]) > std::abs(gamma[static_cast<std::size_t>(arg)])) {
      arg = static_cast<int>(q);
    }
  }
  return arg;
}

} // namespace detail

// One distance for every logical qubit:
//   d = 2 ceil( log(eps / (cbar0 sum_q |gamma_q|)) / log(p/p_th) ) - 1.
// A profile with no noise sensitivity at all gets d_min everywhere.
inline DistanceAssignment homogeneous_distance(const SensitivityProfile &g,
                                               const SurfaceCodeParams &params) {
  params.validate();
  const int n = g.num_qubits();
  double total_gamma = 0.0;
  for (double v : g.gamma) {
    total_gamma += std::abs(v);
  }
  int d = params.d_min;
  if (total_gamma > 0.0) {
    const double x = params.epsilon / (params.cbar0() * total_gamma);
    d = detail::required_distance(x, params,
                                  detail::largest_sensitivity_qubit(g.gamma));
  }
  return detail::finish_assignment(
      g.gamma, std::vector<int>(static_cast<std::size_t>(n), d), params);
}

// Distances chosen so each logical qubit contributes the same share of the
// error budget:
//   d_q = 2 ceil( log(eps / (n cbar0 |gamma_q|)) / log(p/p_th) ) - 1,
// with insensitive qubits (gamma_q = 0) at d_min.
inline DistanceAssignment
uniform_error_distances(const SensitivityProfile &g,
                        const SurfaceCodeParams &params) {
  params.validate();
  const int n = g.num_qubits();
  std::vector<int> d(static_cast<std::size_t>(n), params.d_min);
  for (int q = 0; q < n; ++q) {
    const double gq = std::abs(g.gamma[static_cast<std::size_t>(q)]);
    if (gq > 0.0) {
      const double x =
          params.epsilon / (static_cast<double>(n) * params.cbar0() * gq);
      d[static_cast<std::size_t>(q)] = detail::required_distance(x, params, q);
    }
  }
  return detail::finish_assignment(g.gamma, std::move(d), params);
}

// Minimizes sum_q d_q^2 subject to sum_q |gamma_q| P_L(d_q) <= eps/n_cycles
// with every d_q odd in [d_min, d_max]. An optimal assignment always exists
// with d sorted like |gamma| (swapping distances between qubits a, b with
// gamma_a >= gamma_b and d_a < d_b never raises the error at equal cost),
// so the search enumerates nonincreasing sequences along qubits sorted by
// descending |gamma|, with branch-and-bound pruning on partial cost and on
// the best error still reachable. Ties in total cost resolve to the
// smallest achieved error, then the lexicographically smallest IR-first
// distance vector.
inline DistanceAssignment optimize_distances(const SensitivityProfile &g,
                                             const SurfaceCodeParams &params) {
  params.validate();
  const int n = g.num_qubits();
  const std::size_t nn = static_cast<std::size_t>(n);

  std::vector<int> order(nn);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&g](int a, int b) {
    const double ga = std::abs(g.gamma[static_cast<std::size_t>(a)]);
    const double gb = std::abs(g.gamma[static_cast<std::size_t>(b)]);
    if (ga != gb) {
      return ga > gb;
    }
    return a < b; // equal weights: UV qubit first, so it takes the larger d
  });
  std::vector<double> sorted_gamma(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    sorted_gamma[i] = std::abs(g.gamma[static_cast<std::size_t>(order[i])]);
  }

  // suffix[i] = sum of sorted |gamma| from i onward
  std::vector<long double> suffix(nn + 1, 0.0L);
  for (std::size_t i = nn; i-- > 0;) {
    suffix[i] = suffix[i + 1] + sorted_gamma[i];
  }

  const long double budget = params.eps_per_cycle();
  if (suffix[0] == 0.0L) {
    return detail::finish_assignment(
        g.gamma, std::vector<int>(nn, params.d_min), params);
  }

  // P_L for every candidate distance, indexed by (d - d_min) / 2
  const std::size_t levels =
      static_cast<std::size_t>((params.d_max - params.d_min) / 2 + 1);
  std::vector<long double> pl(levels);
  for (std::size_t k = 0; k < levels; ++k) {
    pl[k] = logical_error_rate(params.d_min + 2 * static_cast<int>(k), params);
  }
  auto pl_of = [&](int d) {
    return pl[static_cast<std::size_t>((d - params.d_min) / 2)];
  };

  if (suffix[0] * pl_of(params.d_max) > budget) {
    throw InfeasibleError(
        "error budget unreachable even at d_max everywhere",
        detail::largest_sensitivity_qubit(g.gamma));
  }

  const long long dmin_cost =
      static_cast<long long>(params.d_min) * params.d_min;
  std::vector<int> seq(nn, 0);
  long long best_cost = -1;
  long double best_err = 0.0L;
  std::vector<int> best_ir; // IR-first vector of the incumbent

  auto materialize_ir_first = [&](const std::vector<int> &s) {
    std::vector<int> by_qubit(nn);
    for (std::size_t i = 0; i < nn; ++i) {
      by_qubit[static_cast<std::size_t>(order[i])] = s[i];
    }
    return std::vector<int>(by_qubit.rbegin(), by_qubit.rend());
  };

  auto consider_leaf = [&](long long cost, long double err) {
    if (best_cost >= 0) {
      if (cost > best_cost) {
        return;
      }
      if (cost == best_cost) {
        if (err > best_err) {
          return;
        }
        if (err == best_err) {
          std::vector<int> ir = materialize_ir_first(seq);
          if (!(ir < best_ir)) {
            return;
          }
          best_ir = std::move(ir);
          return;
        }
      }
    }
    best_cost = cost;
    best_err = err;
    best_ir = materialize_ir_first(seq);
  };

  // depth-first over nonincreasing distance sequences
  auto dfs = [&](auto &&self, std::size_t i, int d_prev, long long cost,
                 long double err) -> void {
    if (i == nn) {
      consider_leaf(cost, err);
      return;
    }
    for (int d = std::min(d_prev, params.d_max); d >= params.d_min; d -= 2) {
      const long double err_here = err + sorted_gamma[i] * pl_of(d);
      // remaining qubits are capped at d; even at that cap the subtree is
      // infeasible once this bound crosses the budget, and smaller d only
      // raise it
      if (err_here + suffix[i + 1] * pl_of(d) > budget) {
        break;
      }
      const long long cost_here = cost + static_cast<long long>(d) * d;
      if (best_cost >= 0 &&
          cost_here + static_cast<long long>(nn - i - 1) * dmin_cost >
              best_cost) {
        continue; // too expensive, but smaller d may still fit
      }
      seq[i] = d;
      self(self, i + 1, d, cost_here, err_here);
    }
  };
  dfs(dfs, 0, params.d_max, 0, 0.0L);

  if (best_cost < 0) {
    throw InfeasibleError("no feasible distance assignment found",
                          detail::largest_sensitivity_qubit(g.gamma));
  }
  std::vector<int> d_by_qubit(best_ir.rbegin(), best_ir.rend());
  return detail::finish_assignment(g.gamma, std::move(d_by_qubit), params);
}

// One grid point of a reduction sweep. Missing values mark schemes that are
// infeasible at this budget.
struct SweepRow {
  double eps_per_cycle = 0.0;
  std::optional<long long> homogeneous_qubits;
  std::optional<long long> uniform_qubits;
  std::optional<long long> optimized_qubits;
  std::optional<double> reduction_uniform_pct;
  std::optional<double> reduction_optimized_pct;
};

// Homogeneous / uniform-error / optimized totals and the percent reductions
// 100 (1 - heterogeneous / homogeneous) across a grid of per-cycle budgets.
inline std::vector<SweepRow>
reduction_sweep(const SensitivityProfile &g, const SurfaceCodeParams &params,
                const std::vector<double> &eps_per_cycle_grid) {
  std::vector<SweepRow> rows;
  rows.reserve(eps_per_cycle_grid.size());
  for (double eps_pc : eps_per_cycle_grid) {
    if (!(eps_pc > 0.0) || !(eps_pc < 1.0)) {
      throw ParameterError("per-cycle error targets must lie in (0, 1)");
    }
    SurfaceCodeParams point = params;
    point.epsilon = eps_pc;
    point.n_cycles = 1;
    SweepRow row;
    row.eps_per_cycle = eps_pc;
    try {
      row.homogeneous_qubits = homogeneous_distance(g, point).total_physical;
    } catch (const InfeasibleError &) {
    }
    try {
      row.uniform_qubits = uniform_error_distances(g, point).total_physical;
    } catch (const InfeasibleError &) {
    }
    try {
      row.optimized_qubits = optimize_distances(g, point).total_physical;
    } catch (const InfeasibleError &) {
    }
    if (row.homogeneous_qubits && row.uniform_qubits) {
      row.reduction_uniform_pct =
          100.0 * (1.0 - static_cast<double>(*row.uniform_qubits) /
                             static_cast<double>(*row.homogeneous_qubits));
    }
    if (row.homogeneous_qubits && row.optimized_qubits) {
      row.reduction_optimized_pct =
          100.0 * (1.0 - static_cast<double>(*row.optimized_qubits) /
                             static_cast<double>(*row.homogeneous_qubits));
    }
    rows.push_back(row);
  }
  return rows;
}

// Logarithmically spaced grid from lo to hi (inclusive endpoints).
inline std::vector<double> log_grid(double lo, double hi,
                                    int points_per_decade) {
  if (!(lo > 0.0) || !(hi > lo)) {
    throw ParameterError("log grid needs 0 < lo < hi");
  }
  if (points_per_decade < 1) {
    throw ParameterError("points_per_decade must be at least 1");
  }
  const double decades = std::log10(hi / lo);
  const int count = std::max(
      2, static_cast<int>(std::lround(decades * points_per_decade)) + 1);
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    grid[static_cast<std::size_t>(i)] =
        lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

} // namespace hiqec
