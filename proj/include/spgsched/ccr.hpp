#pragma once

// Communication-to-computation ratio calibration. The ratio compares the mean
// message time (each edge averaged over all source processors' data transfer
// speeds) against the mean computation time (each task averaged over all
// processors). Volumes scale by one common factor, so any target ratio is hit
// exactly by a single multiplication.

#include "spgsched/graph.hpp"
#include "spgsched/network.hpp"
#include "spgsched/scheduler.hpp"

namespace spgsched {

inline double mean_comp_time(const TaskGraph& g, const Topology& topo) {
  if (g.tasks.empty()) throw error("mean_comp_time: no tasks");
  double total = 0.0;
  for (const auto& t : g.tasks)
    for (const auto& p : topo.processors) total += comp_time(t.weight, p.rate);
  return total / (static_cast<double>(g.tasks.size()) * static_cast<double>(topo.processors.size()));
}

inline double mean_comm_time(const TaskGraph& g, const Topology& topo) {
  if (g.edges.empty()) throw error("mean_comm_time: no edges");
  if (!topo.routes_built()) throw network_error("mean_comm_time: routes not built");
  double total = 0.0;
  for (const auto& e : g.edges)
    for (std::size_t p = 0; p < topo.processors.size(); ++p)
      total += e.volume / topo.proc_speeds[p];
  return total / (static_cast<double>(g.edges.size()) * static_cast<double>(topo.processors.size()));
}

inline double measure_ccr(const TaskGraph& g, const Topology& topo) {
  const double comp = mean_comp_time(g, topo);
  if (comp <= 0.0) throw error("measure_ccr: zero mean computation time");
  return mean_comm_time(g, topo) / comp;
}

// Rescales all edge volumes by one scalar so the measured ratio equals ccr.
inline TaskGraph apply_ccr(TaskGraph g, const Topology& topo, double ccr) {
  if (ccr <= 0.0) throw error("apply_ccr: ccr must be positive");
  const double current = measure_ccr(g, topo);
  if (current <= 0.0) throw error("apply_ccr: all edge volumes are zero, cannot scale");
  const double scale = ccr / current;
  for (auto& e : g.edges) e.volume *= scale;
  return g;
}

// Default graph period: the total computation volume if work were spread at
// the mean processor rate — every task's mean computation time, summed.
inline double default_period(const TaskGraph& g, const Topology& topo) {
  double total = 0.0;
  for (const auto& t : g.tasks) {
    double mean = 0.0;
    for (const auto& p : topo.processors) mean += comp_time(t.weight, p.rate);
    total += mean / static_cast<double>(topo.processors.size());
  }
  return total;
}

}  // namespace spgsched
