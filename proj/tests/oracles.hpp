#pragma once

// Reference computations that deliberately avoid the library's algorithms:
// plain recursive definitions, exhaustive enumeration, and replay-based
// feasibility search. Tests and the acceptance gate compare library output
// against these.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "spgsched/graph.hpp"
#include "spgsched/network.hpp"
#include "spgsched/scheduler.hpp"

namespace oracle {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Adjacency rebuilt straight from the edge list, independent of
// derive_structure.
struct Adj {
  std::vector<std::vector<int>> pred, succ;
  std::vector<std::vector<int>> out_edges;  // edge indices per source task
};

inline Adj build_adj(const spgsched::TaskGraph& g) {
  Adj a;
  a.pred.resize(g.tasks.size());
  a.succ.resize(g.tasks.size());
  a.out_edges.resize(g.tasks.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const int u = g.task_index(g.edges[e].src);
    const int v = g.task_index(g.edges[e].dst);
    a.succ[u].push_back(v);
    a.pred[v].push_back(u);
    a.out_edges[u].push_back(static_cast<int>(e));
  }
  return a;
}

// Depth by direct recursion: 1 for entry tasks, else 1 + max predecessor depth.
inline std::vector<int> depths(const spgsched::TaskGraph& g) {
  const Adj a = build_adj(g);
  std::vector<int> memo(g.tasks.size(), 0);
  auto rec = [&](auto&& self, int u) -> int {
    if (memo[u] > 0) return memo[u];
    int d = 1;
    for (int p : a.pred[u]) d = std::max(d, self(self, p) + 1);
    return memo[u] = d;
  };
  std::vector<int> out(g.tasks.size());
  for (std::size_t i = 0; i < g.tasks.size(); ++i) out[i] = rec(rec, static_cast<int>(i));
  return out;
}

// Upward rank by direct recursion for one (rate, outgoing speed) pair.
inline std::vector<double> ranks_brute(const spgsched::TaskGraph& g, double rate, double speed) {
  const Adj a = build_adj(g);
  std::vector<double> memo(g.tasks.size(), -1.0);
  auto rec = [&](auto&& self, int u) -> double {
    if (memo[u] >= 0.0) return memo[u];
    double best = 0.0;
    for (int e : a.out_edges[u]) {
      const int v = g.task_index(g.edges[e].dst);
      const double comm = g.edges[e].volume == 0.0 ? 0.0 : g.edges[e].volume / speed;
      best = std::max(best, self(self, v) + comm);
    }
    return memo[u] = g.tasks[u].weight / rate + best;
  };
  std::vector<double> out(g.tasks.size());
  for (std::size_t i = 0; i < g.tasks.size(); ++i) out[i] = rec(rec, static_cast<int>(i));
  return out;
}

struct CpResult {
  double min_sum = 0.0;
  std::vector<std::string> path;
};

inline bool id_seq_less(const std::vector<std::string>& x, const std::vector<std::string>& y) {
  const std::size_t m = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < m; ++i)
    if (int c = spgsched::natural_compare(x[i], y[i]); c != 0) return c < 0;
  return x.size() < y.size();
}

// Critical path by exhaustive entry-to-exit path enumeration: maximum total
// best-case computation time, ties resolved to the naturally smallest id
// sequence.
inline CpResult cp_enumerate(const spgsched::TaskGraph& g, const spgsched::Topology& topo) {
  const Adj a = build_adj(g);
  std::vector<double> mincomp(g.tasks.size());
  for (std::size_t i = 0; i < g.tasks.size(); ++i) {
    double best = kInf;
    for (const auto& p : topo.processors) best = std::min(best, g.tasks[i].weight / p.rate);
    mincomp[i] = best;
  }

  CpResult best;
  best.min_sum = -kInf;
  std::vector<int> path;
  auto dfs = [&](auto&& self, int u, double sum) -> void {
    path.push_back(u);
    sum += mincomp[u];
    if (a.succ[u].empty()) {
      std::vector<std::string> ids;
      for (int t : path) ids.push_back(g.tasks[t].id);
      if (sum > best.min_sum + 1e-12 ||
          (std::abs(sum - best.min_sum) <= 1e-12 && id_seq_less(ids, best.path))) {
        best.min_sum = sum;
        best.path = std::move(ids);
      }
    } else {
      for (int v : a.succ[u]) self(self, v, sum);
    }
    path.pop_back();
  };
  for (std::size_t i = 0; i < g.tasks.size(); ++i)
    if (a.pred[i].empty()) dfs(dfs, static_cast<int>(i), 0.0);
  return best;
}

// Replay feasibility of extending one task's execution by delta while the rest
// of the schedule stays frozen: every other task keeps its start, every
// message of the extended task is slid later as a chain against all other
// link reservations in their original positions, and must still arrive at its
// original time. Holes are the suprema of the feasible deltas.
inline bool hole_feasible(const spgsched::Schedule& s, const spgsched::TaskGraph& g,
                          const spgsched::StructureIndex& st, const spgsched::Topology& topo,
                          const std::string& id, double delta) {
  const double tol = 1e-9;
  const spgsched::ScheduledTask* t = s.find_task(id);
  if (!t) return false;
  const int ti = g.task_index(id);
  const double nf = t->finish + delta;

  if (nf > s.makespan + tol) return false;
  for (const auto& o : s.tasks)
    if (&o != t && o.processor == t->processor && o.start >= t->finish - 1e-12 &&
        nf > o.start + tol)
      return false;

  for (int sv : st.succ[ti]) {
    const spgsched::ScheduledTask* succ = s.find_task(g.tasks[sv].id);
    if (!succ) continue;
    if (succ->processor == t->processor) {
      if (nf > succ->start + tol) return false;
      continue;
    }
    const spgsched::MessageSchedule* m = s.find_message(id, succ->id);
    if (!m || m->links.empty()) {
      if (nf > succ->start + tol) return false;
      continue;
    }
    double lst = 0.0, lft = 0.0;
    for (std::size_t x = 0; x < m->links.size(); ++x) {
      const int li = topo.link_index(m->links[x].link);
      const double c = spgsched::ctml(topo, li, m->volume);
      const double s2 = x == 0 ? std::max(nf, m->links[x].start) : std::max(lst, m->links[x].start);
      const double f2 = x == 0 ? s2 + c : std::max(lft, s2 + c);
      lst = s2;
      lft = f2;
      for (const auto& om : s.messages) {
        if (&om == m) continue;
        for (const auto& iv : om.links)
          if (iv.link == m->links[x].link && iv.finish > iv.start && s2 < iv.finish - tol &&
              iv.start < f2 - tol)
            return false;
      }
    }
    if (lft > m->links.back().finish + tol) return false;
  }
  return true;
}

inline double hole_by_search(const spgsched::Schedule& s, const spgsched::TaskGraph& g,
                             const spgsched::StructureIndex& st, const spgsched::Topology& topo,
                             const std::string& id) {
  if (!hole_feasible(s, g, st, topo, id, 0.0)) return 0.0;
  const spgsched::ScheduledTask* t = s.find_task(id);
  double lo = 0.0;
  double hi = std::max(s.makespan - t->finish, 0.0) + 1.0;  // over the makespan cap
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (hole_feasible(s, g, st, topo, id, mid) ? lo : hi) = mid;
  }
  return lo;
}

namespace detail {

inline void opt_search(const spgsched::ScheduleBuilder& b, const std::vector<int>& order,
                       std::size_t k, const spgsched::TaskGraph& g,
                       const spgsched::StructureIndex& st, const spgsched::Topology& topo,
                       double& best) {
  if (k == order.size()) {
    double mk = 0.0;
    for (int e : st.exits) mk = std::max(mk, b.finish_of(e));
    best = std::min(best, mk);
    return;
  }
  const int task = order[k];
  const int nproc = static_cast<int>(topo.processors.size());
  for (int proc = 0; proc < nproc; ++proc) {
    const auto cross = b.cross_preds(task, proc);
    std::vector<int> combo(cross.size(), 0);
    std::vector<int> limits(cross.size());
    for (std::size_t i = 0; i < cross.size(); ++i)
      limits[i] = b.route_count(b.proc_of(cross[i]), proc);
    bool done = false;
    while (!done) {
      const spgsched::Candidate c = b.evaluate(task, proc, combo);
      if (c.eft < best) {  // every later finish is at least this one
        spgsched::ScheduleBuilder nb = b;
        nb.commit(c);
        opt_search(nb, order, k + 1, g, st, topo, best);
      }
      done = true;
      for (int i = static_cast<int>(combo.size()) - 1; i >= 0; --i) {
        if (++combo[i] < limits[i]) {
          done = false;
          break;
        }
        combo[i] = 0;
      }
      if (combo.empty()) break;
    }
  }
}

}  // namespace detail

// Best achievable makespan over every topological order, processor assignment
// and route choice, under the same timing semantics the scheduler commits
// with. Exponential; intended for instances of up to ~5 tasks.
inline double optimal_makespan(const spgsched::TaskGraph& g, const spgsched::StructureIndex& st,
                               const spgsched::Topology& topo) {
  const int n = static_cast<int>(g.tasks.size());
  const Adj a = build_adj(g);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  double best = kInf;
  do {
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[order[i]] = i;
    bool topological = true;
    for (int u = 0; u < n && topological; ++u)
      for (int v : a.succ[u])
        if (pos[u] > pos[v]) {
          topological = false;
          break;
        }
    if (!topological) continue;
    spgsched::ScheduleBuilder b(g, st, topo, order);
    detail::opt_search(b, order, 0, g, st, topo, best);
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

// Communication-to-computation ratio of a graph on the built-in reference
// network, recomputed from frozen first-principles constants.
inline double reference_ccr(const spgsched::TaskGraph& g) {
  const double rates[3] = {2.0 / 3.0, 1.0, 5.0 / 6.0};
  const double speeds[3] = {1.0, 1.5, 1.5};
  double comp = 0.0;
  for (const auto& t : g.tasks)
    for (double r : rates) comp += t.weight / r;
  comp /= 3.0 * static_cast<double>(g.tasks.size());
  double comm = 0.0;
  for (const auto& e : g.edges)
    for (double sp : speeds) comm += e.volume / sp;
  comm /= 3.0 * static_cast<double>(g.edges.size());
  return comm / comp;
}

}  // namespace oracle
