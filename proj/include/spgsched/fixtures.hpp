#pragma once

// Built-in reference instances. The topology reproduces the published
// three-processor switched network; the ten-task graphs reproduce the
// published stream-processing example with its two computation-time tables.
// Edge volumes are repo-chosen (scaled so the measured CCR is exactly 1) —
// the published example never prints them.

#include "spgsched/ccr.hpp"
#include "spgsched/graph.hpp"
#include "spgsched/network.hpp"

namespace spgsched {
namespace fixtures {

// Three heterogeneous processors around one switch plus a direct p2-p3 cable.
// Processor rates are the exact fractions behind the published 0.67/1.0/0.83.
inline Topology reference_topology() {
  Topology t;
  t.processors = {{"p1", 2.0 / 3.0}, {"p2", 1.0}, {"p3", 5.0 / 6.0}};
  t.switches = {{"s1"}};
  t.links = {{"l1", "p1", "s1", 1.0},
             {"l2", "s1", "p2", 1.0},
             {"l3", "p2", "p3", 3.0},
             {"l4", "s1", "p3", 2.0}};
  build_routes(t);
  return t;
}

// Two processors joined both directly and through a switch: the smallest
// network with a real route choice.
inline Topology two_proc_topology(double rate_a = 1.0, double rate_b = 1.0) {
  Topology t;
  t.processors = {{"pa", rate_a}, {"pb", rate_b}};
  t.switches = {{"s1"}};
  t.links = {{"l1", "pa", "s1", 1.0}, {"l2", "s1", "pb", 1.0}, {"l3", "pa", "pb", 2.0}};
  build_routes(t);
  return t;
}

// Same shape with distinct link names, used by hand-simulated tests.
inline Topology diamond_topology() {
  Topology t;
  t.processors = {{"pa", 1.0}, {"pb", 1.0}};
  t.switches = {{"s1"}};
  t.links = {{"k1", "pa", "s1", 1.0}, {"k2", "s1", "pb", 1.0}, {"k3", "pa", "pb", 2.0}};
  build_routes(t);
  return t;
}

inline std::vector<Edge> stream_example_edges() {
  // Volumes are placeholders; callers scale them to a target CCR.
  return {{"n1", "n4", 0.0}, {"n1", "n5", 0.0}, {"n2", "n4", 0.0}, {"n2", "n5", 0.0},
          {"n3", "n5", 0.0}, {"n3", "n6", 0.0}, {"n4", "n7", 0.0}, {"n4", "n9", 0.0},
          {"n5", "n7", 0.0}, {"n5", "n8", 0.0}, {"n6", "n9", 0.0}, {"n7", "n10", 0.0},
          {"n8", "n9", 0.0}};
}

inline TaskGraph stream_example(const std::vector<double>& weights, const Topology& topo) {
  TaskGraph g;
  for (std::size_t i = 0; i < weights.size(); ++i)
    g.tasks.push_back({"n" + std::to_string(i + 1), weights[i]});
  g.edges = stream_example_edges();
  for (auto& e : g.edges) {
    e.volume = g.tasks[g.task_index(e.src)].weight;
  }
  g = apply_ccr(std::move(g), topo, 1.0);
  g.period = default_period(g, topo);
  g.sort_canonical();
  return g;
}

// The ten-task example with the first published computation-time table.
inline TaskGraph reference_graph(const Topology& topo) {
  return stream_example({12, 8, 8, 14, 6, 10, 17, 9, 13, 10}, topo);
}

// The same graph shape with the second weight set; n2 and n5 follow the
// imprecise-computation model (mandatory part = full scheduled time). Edge
// volumes are frozen at a measured communication-to-computation ratio of 1
// and were picked so the resulting schedule leaves deferral slack (schedule
// holes) behind the imprecise tasks, giving the precision simulation a
// meaningful operating range.
inline TaskGraph imprecise_graph(const Topology& topo) {
  TaskGraph g;
  const std::vector<double> weights = {17, 17, 9, 8, 11, 20, 6, 18, 18, 20};
  for (std::size_t i = 0; i < weights.size(); ++i)
    g.tasks.push_back({"n" + std::to_string(i + 1), weights[i]});
  g.edges = {{"n1", "n4", 48.268026488072749},
             {"n1", "n5", 19.949539781849172},
             {"n2", "n4", 39.77775645140202},
             {"n2", "n5", 54.499901024838174},
             {"n3", "n5", 6.8521153768504668},
             {"n3", "n6", 10.794888027718931},
             {"n4", "n7", 3.2152637562711583},
             {"n4", "n9", 7.179170175111703},
             {"n5", "n7", 22.605182799786697},
             {"n5", "n8", 5.3888899779929256},
             {"n6", "n9", 50.366722613167902},
             {"n7", "n10", 19.426757435930238},
             {"n8", "n9", 8.5215003767221216}};
  g.period = default_period(g, topo);
  g.sort_canonical();
  for (auto& t : g.tasks)
    if (t.id == "n2" || t.id == "n5") t.imprecise = true;
  return g;
}

// Four-task diamond used by the hand-simulated scheduling test.
inline TaskGraph diamond_graph() {
  TaskGraph g;
  g.period = 11.0;
  g.tasks = {{"t1", 2}, {"t2", 3}, {"t3", 4}, {"t4", 2}};
  g.edges = {{"t1", "t2", 3}, {"t1", "t3", 6}, {"t2", "t4", 3}, {"t3", "t4", 3}};
  return g;
}

}  // namespace fixtures
}  // namespace spgsched
