#pragma once

// Independent schedule validity checker. Recomputes every property from the
// schedule data, the graph, and the topology alone — none of the scheduler's
// placement logic is reused — so a scheduler bug cannot hide itself here.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "spgsched/graph.hpp"
#include "spgsched/network.hpp"
#include "spgsched/scheduler.hpp"

namespace spgsched {

inline std::vector<std::string> validate_schedule(const Schedule& s, const TaskGraph& g,
                                                  const StructureIndex& st, const Topology& topo,
                                                  double tol = 1e-9) {
  std::vector<std::string> bad;
  auto complain = [&](std::string msg) { bad.push_back(std::move(msg)); };

  // Task placement sanity: each task exactly once, on a real processor, with
  // duration equal to its computation time there.
  std::map<std::string, const ScheduledTask*> placed;
  for (const auto& t : s.tasks) {
    if (placed.count(t.id)) complain("task " + t.id + " scheduled more than once");
    placed[t.id] = &t;
    int pi = -1;
    for (std::size_t p = 0; p < topo.processors.size(); ++p)
      if (topo.processors[p].id == t.processor) pi = static_cast<int>(p);
    if (pi < 0) {
      complain("task " + t.id + " on unknown processor " + t.processor);
      continue;
    }
    if (t.start < -tol) complain("task " + t.id + " starts before time 0");
    const double comp = g.tasks[g.task_index(t.id)].weight / topo.processors[pi].rate;
    if (std::abs((t.finish - t.start) - comp) > tol)
      complain("task " + t.id + " duration differs from its computation time");
  }
  for (const auto& task : g.tasks)
    if (!placed.count(task.id)) complain("task " + task.id + " missing from schedule");

  // Processor non-overlap.
  std::map<std::string, std::vector<std::pair<double, double>>> proc_busy;
  for (const auto& t : s.tasks) proc_busy[t.processor].push_back({t.start, t.finish});
  for (auto& [p, v] : proc_busy) {
    std::sort(v.begin(), v.end());
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i].first < v[i - 1].second - tol)
        complain("overlapping tasks on processor " + p);
  }

  // Link non-overlap over reserved (positive-length) intervals.
  std::map<std::string, std::vector<std::pair<double, double>>> link_busy;
  for (const auto& m : s.messages)
    for (const auto& iv : m.links)
      if (iv.finish > iv.start + tol) link_busy[iv.link].push_back({iv.start, iv.finish});
  for (auto& [l, v] : link_busy) {
    std::sort(v.begin(), v.end());
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i].first < v[i - 1].second - tol) complain("overlapping reservations on link " + l);
  }

  // Message structure: each route is a connected link path from the source
  // task's processor to the destination task's processor, link start times
  // never decrease along it, and finish times follow start + transmission
  // time folded with the previous link's finish.
  for (const auto& m : s.messages) {
    const ScheduledTask* src = placed.count(m.src) ? placed[m.src] : nullptr;
    const ScheduledTask* dst = placed.count(m.dst) ? placed[m.dst] : nullptr;
    const std::string tag = "message " + m.src + "->" + m.dst;
    if (!src || !dst) {
      complain(tag + " references unscheduled tasks");
      continue;
    }
    if (src->processor != m.src_proc || dst->processor != m.dst_proc)
      complain(tag + " processor labels disagree with task placement");
    if (m.route.size() != m.links.size() || m.route.empty()) {
      complain(tag + " has inconsistent route/link lists");
      continue;
    }

    std::string at = m.src_proc;
    bool walk_ok = true;
    for (std::size_t x = 0; x < m.route.size(); ++x) {
      if (m.route[x] != m.links[x].link) walk_ok = false;
      int li = -1;
      try {
        li = topo.link_index(m.route[x]);
      } catch (const error&) {
        walk_ok = false;
        break;
      }
      const Link& link = topo.links[li];
      if (link.a == at) at = link.b;
      else if (link.b == at) at = link.a;
      else walk_ok = false;
    }
    if (!walk_ok || at != m.dst_proc) complain(tag + " route is not a path src->dst");

    if (m.links.front().start < src->finish - tol)
      complain(tag + " enters its first link before the source task finishes");
    double prev_start = -1.0, prev_finish = 0.0;
    for (std::size_t x = 0; x < m.links.size(); ++x) {
      const auto& iv = m.links[x];
      if (x > 0 && iv.start < prev_start - tol)
        complain(tag + " link start times decrease along the route");
      double expect = iv.start + ctml(topo, topo.link_index(iv.link), m.volume);
      if (x > 0) expect = std::max(expect, prev_finish);
      if (std::abs(iv.finish - expect) > tol)
        complain(tag + " link finish time inconsistent on " + iv.link);
      prev_start = iv.start;
      prev_finish = iv.finish;
    }
    if (dst->start < m.links.back().finish - tol)
      complain(tag + " arrives after its destination task starts");
  }

  // Precedence for every graph edge.
  for (const auto& e : g.edges) {
    if (!placed.count(e.src) || !placed.count(e.dst)) continue;
    const auto* u = placed[e.src];
    const auto* v = placed[e.dst];
    if (u->processor == v->processor) {
      if (v->start < u->finish - tol)
        complain("edge " + e.src + "->" + e.dst + " violated on shared processor");
    } else if (!s.find_message(e.src, e.dst)) {
      complain("edge " + e.src + "->" + e.dst + " crosses processors without a message");
    }
  }

  // Makespan equals the latest exit-task finish.
  double mk = 0.0;
  for (int e : st.exits)
    if (placed.count(g.tasks[e].id)) mk = std::max(mk, placed[g.tasks[e].id]->finish);
  if (std::abs(mk - s.makespan) > tol) complain("makespan does not match exit finishes");

  return bad;
}

}  // namespace spgsched
