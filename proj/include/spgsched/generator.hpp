#pragma once

// Seeded random task-graph generation. Layered construction: every task gets
// a layer, every non-first-layer task draws predecessors from strictly
// smaller layers, so acyclicity holds by construction. All randomness flows
// through portable samplers over one mt19937_64 stream, making identical
// (params, seed) pairs bit-identical across platforms.

#include <cstdint>
#include <random>
#include <vector>

#include "spgsched/ccr.hpp"
#include "spgsched/graph.hpp"
#include "spgsched/network.hpp"

namespace spgsched {

// Unbiased integer in [0, n) via rejection below the largest multiple of n.
inline std::uint64_t rng_u64(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) throw error("rng_u64: empty range");
  const std::uint64_t bound = UINT64_MAX / n * n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= bound);
  return x % n;
}

// Uniform double in [lo, hi) from the top 53 bits of one draw.
inline double rng_real(std::mt19937_64& rng, double lo, double hi) {
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + unit * (hi - lo);
}

struct GeneratorParams {
  int task_count = 10;
  int max_in_degree = 2;
  int max_out_degree = 3;
  int min_entry = 2;
  int min_exit = 2;
  double weight_min = 5.0;
  double weight_max = 25.0;
  double ccr = 1.0;
  bool constrain_outdegree = false;
  std::uint64_t seed = 0;
};

namespace detail {

// Layer count grows slowly with task count so mid-size graphs stay shallow.
inline int layer_count(int n) {
  if (n < 30) return 3;
  if (n < 45) return 4;
  return 5;
}

inline void check_params(const GeneratorParams& p) {
  if (p.task_count < 1) throw error("generator: task_count must be >= 1");
  if (p.max_in_degree < 1 || p.max_out_degree < 1)
    throw error("generator: degree bounds must be >= 1");
  if (p.min_entry < 1 || p.min_exit < 1)
    throw error("generator: entry/exit minimums must be >= 1");
  if (!(p.weight_min > 0.0) || p.weight_max < p.weight_min)
    throw error("generator: weight range must be positive and ordered");
  if (p.ccr <= 0.0) throw error("generator: ccr must be positive");
  const bool single_ok = p.task_count == 1 && p.min_entry == 1 && p.min_exit == 1;
  if (p.min_entry + p.min_exit > p.task_count && !single_ok)
    throw error("generator: min_entry + min_exit exceeds task_count");
}

}  // namespace detail

// Generates a valid task graph: acyclic, degree bounds respected, at least
// min_entry entries and min_exit exits, weights in range, edge volumes scaled
// to the target CCR against the given topology. With constrain_outdegree the
// result additionally satisfies outd(pred) >= outd(succ) on every edge.
inline TaskGraph generate_random(const GeneratorParams& params, const Topology& topo) {
  detail::check_params(params);
  std::mt19937_64 rng(params.seed);
  const int n = params.task_count;
  const int depth_layers = detail::layer_count(n);

  std::vector<int> layer(n);
  for (int i = 0; i < n; ++i) {
    if (i < params.min_entry) layer[i] = 1;
    else if (i >= n - params.min_exit) layer[i] = depth_layers;
    else layer[i] = 1 + static_cast<int>(rng_u64(rng, static_cast<std::uint64_t>(depth_layers)));
  }

  std::vector<std::vector<int>> succ(n);
  std::vector<int> outd(n, 0);
  std::vector<std::pair<int, int>> edges;

  for (int layer_at = 2; layer_at <= depth_layers; ++layer_at) {
    for (int u = 0; u < n; ++u) {
      if (layer[u] != layer_at) continue;
      std::vector<int> candidates;
      for (int v = 0; v < n; ++v)
        if (layer[v] < layer_at && outd[v] < params.max_out_degree) candidates.push_back(v);
      if (candidates.empty()) {
        layer[u] = 1;  // no capacity upstream: the task becomes an entry
        continue;
      }
      std::uint64_t want = 1 + rng_u64(rng, static_cast<std::uint64_t>(params.max_in_degree));
      while (want-- > 0 && !candidates.empty()) {
        const std::size_t pick = rng_u64(rng, candidates.size());
        const int v = candidates[pick];
        candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));
        edges.push_back({v, u});
        succ[v].push_back(u);
        ++outd[v];
      }
    }
  }

  if (params.constrain_outdegree) {
    // Repair pass: while some edge (p,s) has outd(p) < outd(s), shed one of
    // s's out-edges — the one whose head keeps the most other predecessors.
    std::vector<int> ind(n, 0);
    for (const auto& [a, b] : edges) ++ind[b];
    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (std::size_t i = 0; i < edges.size() && !dirty; ++i) {
        const int p = edges[i].first, s = edges[i].second;
        if (outd[p] >= outd[s]) continue;
        std::size_t drop = edges.size();
        for (std::size_t j = 0; j < edges.size(); ++j) {
          if (edges[j].first != s) continue;
          if (drop == edges.size() || ind[edges[j].second] > ind[edges[drop].second]) drop = j;
        }
        --outd[s];
        --ind[edges[drop].second];
        edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(drop));
        dirty = true;
      }
    }
  }

  TaskGraph g;
  for (int i = 0; i < n; ++i) {
    Task t;
    t.id = "n" + std::to_string(i + 1);
    t.weight = rng_real(rng, params.weight_min, params.weight_max);
    g.tasks.push_back(std::move(t));
  }
  for (const auto& [a, b] : edges)
    g.edges.push_back({g.tasks[a].id, g.tasks[b].id, 0.0});
  g.sort_canonical();
  for (auto& e : g.edges) e.volume = rng_real(rng, params.weight_min, params.weight_max);

  if (!g.edges.empty()) g = apply_ccr(std::move(g), topo, params.ccr);
  g.period = default_period(g, topo);
  return g;
}

}  // namespace spgsched
