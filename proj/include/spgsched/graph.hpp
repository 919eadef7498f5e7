#pragma once

// Task graph model for stream-processing applications: a DAG of tasks with
// computation weights and edge payload volumes, executed once per period.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace spgsched {

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class graph_error : public error {
 public:
  using error::error;
};

class parse_error : public error {
 public:
  using error::error;
};

// Identifier order used for every deterministic tie-break in the toolkit:
// digit runs compare numerically ("n2" < "n10"), everything else bytewise.
inline int natural_compare(std::string_view a, std::string_view b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
    const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
    if (da && db) {
      std::size_t i0 = i, j0 = j;
      while (i < a.size() && std::isdigit(static_cast<unsigned char>(a[i]))) ++i;
      while (j < b.size() && std::isdigit(static_cast<unsigned char>(b[j]))) ++j;
      std::string_view na = a.substr(i0, i - i0);
      std::string_view nb = b.substr(j0, j - j0);
      na.remove_prefix(std::min(na.find_first_not_of('0'), na.size()));
      nb.remove_prefix(std::min(nb.find_first_not_of('0'), nb.size()));
      if (na.size() != nb.size()) return na.size() < nb.size() ? -1 : 1;
      if (int c = na.compare(nb); c != 0) return c < 0 ? -1 : 1;
    } else {
      if (a[i] != b[j]) return a[i] < b[j] ? -1 : 1;
      ++i;
      ++j;
    }
  }
  if (i < a.size()) return 1;
  if (j < b.size()) return -1;
  // Numerically equal but not byte-equal (e.g. "07" vs "7"): fall back to a
  // bytewise compare so the order stays strict-weak.
  return a.compare(b) < 0 ? -1 : (a == b ? 0 : 1);
}

inline bool natural_less(std::string_view a, std::string_view b) {
  return natural_compare(a, b) < 0;
}

struct NaturalLess {
  bool operator()(std::string_view a, std::string_view b) const { return natural_less(a, b); }
};

struct Task {
  std::string id;
  double weight = 0.0;
  bool imprecise = false;
  double mandatory_fraction = 1.0;  // share of the computation that is mandatory
};

struct Edge {
  std::string src;
  std::string dst;
  double volume = 0.0;  // payload size transferred once per activation
};

struct TaskGraph {
  double period = 0.0;  // activation period, also the end-to-end deadline
  std::vector<Task> tasks;
  std::vector<Edge> edges;

  int task_index(std::string_view id) const {
    for (std::size_t i = 0; i < tasks.size(); ++i)
      if (tasks[i].id == id) return static_cast<int>(i);
    return -1;
  }

  // Canonical order: tasks by natural id, edges by (src, dst).
  void sort_canonical() {
    std::sort(tasks.begin(), tasks.end(),
              [](const Task& x, const Task& y) { return natural_less(x.id, y.id); });
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
      if (int c = natural_compare(x.src, y.src); c != 0) return c < 0;
      return natural_less(x.dst, y.dst);
    });
  }
};

// Derived adjacency and level data, indexed by task position in the graph.
struct StructureIndex {
  std::vector<std::vector<int>> pred;
  std::vector<std::vector<int>> succ;
  std::vector<std::vector<int>> in_edges;   // edge indices ending at task
  std::vector<std::vector<int>> out_edges;  // edge indices leaving task
  std::vector<int> ind;
  std::vector<int> outd;
  std::vector<int> depth;       // entry tasks have depth 1
  std::vector<int> topo_order;  // task indices, deterministic
  std::vector<int> entries;
  std::vector<int> exits;
  int max_outd = 0;

  bool is_exit(int task) const { return outd[task] == 0; }
  bool is_entry(int task) const { return ind[task] == 0; }
};

namespace detail {

inline std::unordered_map<std::string_view, int> id_map(const TaskGraph& g) {
  std::unordered_map<std::string_view, int> m;
  m.reserve(g.tasks.size());
  for (std::size_t i = 0; i < g.tasks.size(); ++i) m.emplace(g.tasks[i].id, static_cast<int>(i));
  return m;
}

}  // namespace detail

// Builds predecessor/successor lists, degrees, depths and a topological order.
// Throws graph_error on a cycle, naming one task on it. Assumes edge endpoints
// reference existing tasks (see validate for the full diagnostic pass).
inline StructureIndex derive_structure(const TaskGraph& g) {
  const int n = static_cast<int>(g.tasks.size());
  StructureIndex st;
  st.pred.resize(n);
  st.succ.resize(n);
  st.in_edges.resize(n);
  st.out_edges.resize(n);
  st.ind.assign(n, 0);
  st.outd.assign(n, 0);
  st.depth.assign(n, 0);

  auto ids = detail::id_map(g);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    auto is = ids.find(g.edges[e].src);
    auto id_ = ids.find(g.edges[e].dst);
    if (is == ids.end() || id_ == ids.end())
      throw graph_error("edge references unknown task '" +
                        (is == ids.end() ? g.edges[e].src : g.edges[e].dst) + "'");
    const int u = is->second, v = id_->second;
    st.succ[u].push_back(v);
    st.pred[v].push_back(u);
    st.out_edges[u].push_back(static_cast<int>(e));
    st.in_edges[v].push_back(static_cast<int>(e));
    ++st.outd[u];
    ++st.ind[v];
  }

  auto by_id = [&](int a, int b) { return natural_less(g.tasks[a].id, g.tasks[b].id); };
  for (int i = 0; i < n; ++i) {
    std::sort(st.pred[i].begin(), st.pred[i].end(), by_id);
    std::sort(st.succ[i].begin(), st.succ[i].end(), by_id);
  }

  // Kahn's algorithm with a natural-id frontier keeps the order deterministic.
  std::vector<int> remaining = st.ind;
  std::vector<int> frontier;
  for (int i = 0; i < n; ++i)
    if (remaining[i] == 0) frontier.push_back(i);
  std::sort(frontier.begin(), frontier.end(), by_id);

  st.topo_order.reserve(n);
  while (!frontier.empty()) {
    std::pop_heap(frontier.begin(), frontier.end(), [&](int a, int b) { return by_id(b, a); });
    const int u = frontier.back();
    frontier.pop_back();
    st.topo_order.push_back(u);
    st.depth[u] = 1;
    for (int p : st.pred[u]) st.depth[u] = std::max(st.depth[u], st.depth[p] + 1);
    for (int v : st.succ[u]) {
      if (--remaining[v] == 0) {
        frontier.push_back(v);
        std::push_heap(frontier.begin(), frontier.end(), [&](int a, int b) { return by_id(b, a); });
      }
    }
  }
  if (static_cast<int>(st.topo_order.size()) != n) {
    int culprit = -1;
    for (int i = 0; i < n; ++i)
      if (remaining[i] > 0 && (culprit < 0 || by_id(i, culprit))) culprit = i;
    throw graph_error("task graph has a cycle involving task '" + g.tasks[culprit].id + "'");
  }

  for (int i = 0; i < n; ++i) {
    if (st.ind[i] == 0) st.entries.push_back(i);
    if (st.outd[i] == 0) st.exits.push_back(i);
    st.max_outd = std::max(st.max_outd, st.outd[i]);
  }
  std::sort(st.entries.begin(), st.entries.end(), by_id);
  std::sort(st.exits.begin(), st.exits.end(), by_id);
  return st;
}

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Full diagnostic pass over the graph invariants. Never throws; every problem
// found is reported as one human-readable line.
inline ValidationReport validate(const TaskGraph& g) {
  ValidationReport r;
  auto add = [&](std::string msg) { r.violations.push_back(std::move(msg)); };

  if (!(g.period > 0.0)) add("period must be positive");

  std::unordered_map<std::string_view, int> seen;
  for (const auto& t : g.tasks) {
    if (t.id.empty()) add("task with empty id");
    if (++seen[t.id] == 2) add("duplicate task id '" + t.id + "'");
    if (t.weight < 0.0) add("task '" + t.id + "' has negative weight");
    if (!(t.mandatory_fraction > 0.0) || t.mandatory_fraction > 1.0)
      add("task '" + t.id + "' mandatory_fraction outside (0,1]");
  }

  std::unordered_set<std::string> edge_keys;
  std::vector<Edge> usable;
  for (const auto& e : g.edges) {
    bool broken = false;
    if (!seen.count(e.src)) {
      add("edge references unknown task '" + e.src + "'");
      broken = true;
    }
    if (!seen.count(e.dst)) {
      add("edge references unknown task '" + e.dst + "'");
      broken = true;
    }
    if (!broken && e.src == e.dst) {
      add("self-edge on task '" + e.src + "'");
      broken = true;
    }
    if (e.volume < 0.0) add("edge " + e.src + "->" + e.dst + " has negative volume");
    if (!broken && !edge_keys.insert(e.src + "\x1f" + e.dst).second) {
      add("duplicate edge " + e.src + "->" + e.dst);
      broken = true;
    }
    if (!broken) usable.push_back(e);
  }

  if (g.tasks.empty()) {
    add("graph has no entry task");
    add("graph has no exit task");
    return r;
  }

  // Acyclicity and entry/exit existence on the structurally usable subset.
  TaskGraph probe;
  probe.period = 1.0;
  probe.tasks = g.tasks;
  // Drop duplicate-id tasks so derive_structure sees unique ids.
  {
    std::unordered_set<std::string_view> kept;
    std::vector<Task> unique_tasks;
    for (const auto& t : probe.tasks)
      if (kept.insert(t.id).second) unique_tasks.push_back(t);
    probe.tasks = std::move(unique_tasks);
  }
  probe.edges = std::move(usable);
  try {
    StructureIndex st = derive_structure(probe);
    if (st.entries.empty()) add("graph has no entry task");
    if (st.exits.empty()) add("graph has no exit task");
  } catch (const graph_error& ge) {
    add(ge.what());
  }
  return r;
}

}  // namespace spgsched
