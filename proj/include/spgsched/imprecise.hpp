#pragma once

// Schedule-hole detection and imprecise-computation precision simulation.
//
// A task's hole is the largest extension of its computation that leaves the
// rest of the schedule untouched: every other task keeps its start, every
// message keeps its arrival time, no link reservation is disturbed, and the
// makespan stays put. Holes bound how much optional work a task with varying
// input volume can absorb in place.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spgsched/graph.hpp"
#include "spgsched/network.hpp"
#include "spgsched/scheduler.hpp"

namespace spgsched {

struct HoleInfo {
  std::string task;
  double hole = 0.0;
  std::optional<double> condition1;  // same-processor successor bound
  std::optional<double> condition2;  // cross-processor successor bound
};

struct HoleReport {
  std::vector<HoleInfo> holes;  // sorted by natural task id

  const HoleInfo* find(std::string_view id) const {
    for (const auto& h : holes)
      if (h.task == id) return &h;
    return nullptr;
  }
};

namespace detail {

// Latest admissible start of a message's first link such that the message,
// slid later as a chain (each link start = max(first start, original start)),
// still fits in front of the next reservation on every non-final link and
// still arrives exactly at its original final-link finish time.
inline double message_deferral_limit(const MessageSchedule& m, const Topology& topo,
                                     const std::map<std::string, std::vector<std::pair<double, double>>>&
                                         other_reservations) {
  const std::size_t nlinks = m.links.size();
  if (nlinks == 0) return std::numeric_limits<double>::infinity();

  const double arrival = m.links.back().finish;
  std::vector<double> ctml_per_link(nlinks);
  for (std::size_t x = 0; x < nlinks; ++x) {
    const int li = topo.link_index(m.links[x].link);
    ctml_per_link[x] = ctml(topo, li, m.volume);
  }

  auto next_other_start = [&](std::size_t x) {
    const auto it = other_reservations.find(m.links[x].link);
    if (it == other_reservations.end()) return std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [s, f] : it->second) {
      (void)f;
      if (s >= m.links[x].start - 1e-12 && s < best) best = s;
    }
    return best;
  };

  // Reverse scan: the final link is capped by the pinned arrival alone; each
  // earlier link is additionally capped by every downstream non-final link's
  // next reservation (finish times propagate forward via the running max).
  double cap = arrival - ctml_per_link[nlinks - 1];
  double barrier = arrival;
  for (std::size_t x = nlinks - 1; x-- > 0;) {
    barrier = std::min(barrier, next_other_start(x));
    cap = std::min(cap, barrier - ctml_per_link[x]);
  }
  return cap;
}

}  // namespace detail

// Computes the exploitable hole behind every scheduled task.
inline HoleReport find_holes(const Schedule& s, const TaskGraph& g, const StructureIndex& st,
                             const Topology& topo) {
  constexpr double inf = std::numeric_limits<double>::infinity();

  // Next task start per processor, in time order.
  std::map<std::string, std::vector<const ScheduledTask*>> by_proc;
  for (const auto& t : s.tasks) by_proc[t.processor].push_back(&t);
  for (auto& [p, v] : by_proc)
    std::sort(v.begin(), v.end(),
              [](const ScheduledTask* a, const ScheduledTask* b) { return a->start < b->start; });

  auto next_on_proc = [&](const ScheduledTask& t) {
    const auto& v = by_proc[t.processor];
    double best = inf;
    for (const auto* other : v)
      if (other != &t && other->start >= t.finish - 1e-12) best = std::min(best, other->start);
    return best;
  };

  // Per-link reservation lists keyed by owning message, used as frozen
  // obstacles when sliding one message later.
  std::map<std::string, std::vector<std::pair<double, double>>> all_res;
  for (const auto& m : s.messages)
    for (const auto& iv : m.links)
      if (iv.finish > iv.start) all_res[iv.link].push_back({iv.start, iv.finish});

  HoleReport report;
  for (const auto& t : s.tasks) {
    const int ti = g.task_index(t.id);
    HoleInfo info;
    info.task = t.id;

    const double next_start = next_on_proc(t);
    double cond1 = inf, cond2 = inf;
    bool has1 = false, has2 = false;

    for (int sidx : st.succ[ti]) {
      const ScheduledTask* succ = s.find_task(g.tasks[sidx].id);
      if (!succ) continue;
      if (succ->processor == t.processor) {
        has1 = true;
        cond1 = std::min(cond1, std::min(succ->start, next_start) - t.finish);
      } else {
        has2 = true;
        const MessageSchedule* m = s.find_message(t.id, succ->id);
        double lst2 = inf;
        if (m) {
          // Obstacles: every reserved interval except this message's own.
          auto others = all_res;
          for (const auto& iv : m->links) {
            if (iv.finish <= iv.start) continue;
            auto& v = others[iv.link];
            for (auto it = v.begin(); it != v.end(); ++it) {
              if (std::abs(it->first - iv.start) < 1e-12 && std::abs(it->second - iv.finish) < 1e-12) {
                v.erase(it);
                break;
              }
            }
          }
          lst2 = detail::message_deferral_limit(*m, topo, others);
        }
        cond2 = std::min(cond2, std::min({succ->start, next_start, lst2}) - t.finish);
      }
    }

    double bound = std::min(next_start, s.makespan) - t.finish;
    if (has1) {
      info.condition1 = cond1;
      bound = std::min(bound, cond1);
    }
    if (has2) {
      info.condition2 = cond2;
      bound = std::min(bound, cond2);
    }
    info.hole = std::max(0.0, bound);
    report.holes.push_back(std::move(info));
  }

  std::sort(report.holes.begin(), report.holes.end(),
            [](const HoleInfo& a, const HoleInfo& b) { return natural_less(a.task, b.task); });
  return report;
}

struct PrecisionRow {
  std::string task;
  double lambda = 1.0;
  bool ic = false;     // true: holes exploited; false: mandatory part only
  double mp = 0.0;      // mandatory computation time
  double requested = 0.0;
  double executed = 0.0;
  double precision = 0.0;  // percent
};

// Precision of every imprecise task under inflated input arrival rates. The
// requested time grows as lambda * mp; with hole exploitation the optional
// part runs for up to the task's hole, without it only the mandatory part
// executes. No task or message time changes in either mode.
inline std::vector<PrecisionRow> simulate_precision(const Schedule& s, const TaskGraph& g,
                                                    const HoleReport& holes,
                                                    const std::vector<double>& lambdas) {
  for (double l : lambdas)
    if (l < 1.0) throw error("simulate_precision: lambda must be >= 1");

  std::vector<PrecisionRow> rows;
  for (const auto& task : g.tasks) {
    if (!task.imprecise) continue;
    const ScheduledTask* t = s.find_task(task.id);
    if (!t) continue;
    const HoleInfo* h = holes.find(task.id);
    const double hole = h ? h->hole : 0.0;
    const double mp = task.mandatory_fraction * (t->finish - t->start);
    if (mp <= 0.0) throw error("simulate_precision: zero mandatory part for " + task.id);

    for (double lambda : lambdas) {
      for (bool ic : {false, true}) {
        PrecisionRow r;
        r.task = task.id;
        r.lambda = lambda;
        r.ic = ic;
        r.mp = mp;
        r.requested = lambda * mp;
        r.executed = ic ? mp + std::min((lambda - 1.0) * mp, hole) : mp;
        r.precision = 100.0 * r.executed / r.requested;
        rows.push_back(r);
      }
    }
  }
  return rows;
}

}  // namespace spgsched
