#pragma once

// Schedule quality metrics: critical path, schedule length ratio, speedup,
// load balance, and the batch failure rate.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "spgsched/graph.hpp"
#include "spgsched/network.hpp"
#include "spgsched/scheduler.hpp"

namespace spgsched {

inline double min_comp_over_procs(const Topology& topo, double weight) {
  double best = 0.0;
  for (std::size_t p = 0; p < topo.processors.size(); ++p) {
    const double c = comp_time(weight, topo.processors[p].rate);
    if (p == 0 || c < best) best = c;
  }
  return best;
}

// Entry-to-exit path maximizing the sum of per-task minimum computation
// times; communication is excluded. Among maximizing paths the one choosing
// the naturally-smallest task id at every branch point is returned.
inline std::vector<std::string> critical_path(const TaskGraph& g, const StructureIndex& st,
                                              const Topology& topo) {
  const std::size_t n = g.tasks.size();
  std::vector<double> minc(n), down(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) minc[i] = min_comp_over_procs(topo, g.tasks[i].weight);

  for (auto it = st.topo_order.rbegin(); it != st.topo_order.rend(); ++it) {
    const int u = *it;
    double best = 0.0;
    for (int s : st.succ[u]) best = std::max(best, down[s]);
    down[u] = minc[u] + best;
  }

  auto pick = [&](const std::vector<int>& candidates) {
    int best = -1;
    for (int c : candidates) {
      if (best < 0 || down[c] > down[best] ||
          (down[c] == down[best] && natural_less(g.tasks[c].id, g.tasks[best].id)))
        best = c;
    }
    return best;
  };

  std::vector<std::string> path;
  int cur = pick(st.entries);
  while (cur >= 0) {
    path.push_back(g.tasks[cur].id);
    if (st.succ[cur].empty()) break;
    cur = pick(st.succ[cur]);
  }
  return path;
}

inline double critical_path_min_sum(const TaskGraph& g, const StructureIndex& st,
                                    const Topology& topo) {
  double sum = 0.0;
  for (const auto& id : critical_path(g, st, topo))
    sum += min_comp_over_procs(topo, g.tasks[g.task_index(id)].weight);
  return sum;
}

// Makespan normalized by the minimum computation time along the critical path.
inline double slr(const Schedule& s, const TaskGraph& g, const StructureIndex& st,
                  const Topology& topo) {
  const double denom = critical_path_min_sum(g, st, topo);
  if (denom <= 0.0) throw error("slr: critical path has zero computation");
  return s.makespan / denom;
}

// Best sequential execution time over any single processor, divided by the
// schedule's makespan.
inline double speedup(const Schedule& s, const TaskGraph& g, const Topology& topo) {
  if (s.makespan <= 0.0) throw error("speedup: zero makespan");
  double best = 0.0;
  for (std::size_t p = 0; p < topo.processors.size(); ++p) {
    double total = 0.0;
    for (const auto& t : g.tasks) total += comp_time(t.weight, topo.processors[p].rate);
    if (p == 0 || total < best) best = total;
  }
  return best / s.makespan;
}

// Mean busy time across all processors of the topology (idle ones count).
inline double avg_busy(const Schedule& s) {
  if (s.processors.empty()) throw error("avg_busy: schedule lists no processors");
  double total = 0.0;
  for (const auto& t : s.tasks) total += t.finish - t.start;
  return total / static_cast<double>(s.processors.size());
}

// Load balance: makespan over mean busy time; 1.0 is perfect balance.
inline double lb(const Schedule& s) {
  const double avg = avg_busy(s);
  if (avg <= 0.0) throw error("lb: zero average busy time");
  return s.makespan / avg;
}

inline double sfr(int failed, int total) {
  if (total <= 0) throw error("sfr: empty batch");
  return 100.0 * static_cast<double>(failed) / static_cast<double>(total);
}

struct MetricsReport {
  double makespan = 0.0;
  double slr = 0.0;
  double speedup = 0.0;
  double lb = 0.0;
  double avg = 0.0;
  std::vector<std::string> critical_path;
};

inline MetricsReport compute_metrics(const Schedule& s, const TaskGraph& g,
                                     const StructureIndex& st, const Topology& topo) {
  MetricsReport r;
  r.makespan = s.makespan;
  r.critical_path = critical_path(g, st, topo);
  r.slr = slr(s, g, st, topo);
  r.speedup = speedup(s, g, topo);
  r.avg = avg_busy(s);
  r.lb = lb(s);
  return r;
}

}  // namespace spgsched
