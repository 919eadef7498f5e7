#pragma once

// Heterogeneous switched network: processors and switches joined by
// full-duplex links of differing speeds. Communication cost between two
// processors is averaged over every simple route between them, each route
// rated by its slowest link.

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "spgsched/graph.hpp"

namespace spgsched {

class network_error : public error {
 public:
  using error::error;
};

struct Processor {
  std::string id;
  double rate = 1.0;  // execution rate mu; comp time = weight / rate
};

struct Switch {
  std::string id;
};

struct Link {
  std::string id;
  std::string a;
  std::string b;
  double speed = 1.0;
};

struct Topology {
  std::vector<Processor> processors;
  std::vector<Switch> switches;
  std::vector<Link> links;

  // Populated by build_routes(): routes[src][dst] is the list of simple
  // routes (link index sequences) between two processors, lexicographically
  // ordered by link ids.
  std::vector<std::vector<std::vector<std::vector<int>>>> routes;
  std::vector<std::vector<double>> pair_speeds;  // mean route speed per pair
  std::vector<double> proc_speeds;               // mean pair speed per source

  int proc_index(std::string_view id) const {
    for (std::size_t i = 0; i < processors.size(); ++i)
      if (processors[i].id == id) return static_cast<int>(i);
    return -1;
  }
  int link_index(std::string_view id) const {
    for (std::size_t i = 0; i < links.size(); ++i)
      if (links[i].id == id) return static_cast<int>(i);
    return -1;
  }
  bool routes_built() const { return !routes.empty(); }
};

namespace detail {

// Node numbering: processors first, then switches.
inline int node_index(const Topology& t, std::string_view id) {
  for (std::size_t i = 0; i < t.processors.size(); ++i)
    if (t.processors[i].id == id) return static_cast<int>(i);
  for (std::size_t i = 0; i < t.switches.size(); ++i)
    if (t.switches[i].id == id) return static_cast<int>(t.processors.size() + i);
  return -1;
}

struct Adjacency {
  // per node: (link index, neighbour node), sorted by natural link id
  std::vector<std::vector<std::pair<int, int>>> out;
};

inline Adjacency build_adjacency(const Topology& t) {
  Adjacency adj;
  adj.out.resize(t.processors.size() + t.switches.size());
  for (std::size_t l = 0; l < t.links.size(); ++l) {
    const int na = node_index(t, t.links[l].a);
    const int nb = node_index(t, t.links[l].b);
    if (na < 0 || nb < 0)
      throw network_error("link '" + t.links[l].id + "' references unknown node");
    adj.out[na].emplace_back(static_cast<int>(l), nb);
    adj.out[nb].emplace_back(static_cast<int>(l), na);
  }
  for (auto& v : adj.out)
    std::sort(v.begin(), v.end(), [&](const auto& x, const auto& y) {
      return natural_less(t.links[x.first].id, t.links[y.first].id);
    });
  return adj;
}

inline bool route_id_less(const Topology& t, const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t m = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < m; ++i)
    if (int c = natural_compare(t.links[a[i]].id, t.links[b[i]].id); c != 0) return c < 0;
  return a.size() < b.size();
}

}  // namespace detail

// All simple routes between two distinct processors, ordered lexicographically
// by link ids. Routes may pass through intermediate processors as well as
// switches. Errors if the pair is disconnected.
inline std::vector<std::vector<int>> enumerate_routes(const Topology& t, std::string_view src,
                                                      std::string_view dst) {
  const int s = detail::node_index(t, src);
  const int d = detail::node_index(t, dst);
  if (s < 0 || static_cast<std::size_t>(s) >= t.processors.size())
    throw network_error("unknown source processor '" + std::string(src) + "'");
  if (d < 0 || static_cast<std::size_t>(d) >= t.processors.size())
    throw network_error("unknown destination processor '" + std::string(dst) + "'");
  if (s == d) throw network_error("route endpoints must differ");

  const auto adj = detail::build_adjacency(t);
  std::vector<std::vector<int>> found;
  std::vector<int> path;
  std::vector<char> visited(adj.out.size(), 0);

  auto dfs = [&](auto&& self, int node) -> void {
    if (node == d) {
      found.push_back(path);
      return;
    }
    visited[node] = 1;
    for (const auto& [link, next] : adj.out[node]) {
      if (visited[next]) continue;
      path.push_back(link);
      self(self, next);
      path.pop_back();
    }
    visited[node] = 0;
  };
  dfs(dfs, s);

  if (found.empty())
    throw network_error("no route between '" + std::string(src) + "' and '" + std::string(dst) +
                        "'");
  std::sort(found.begin(), found.end(),
            [&](const auto& a, const auto& b) { return detail::route_id_less(t, a, b); });
  return found;
}

// A route is as fast as its slowest link.
inline double route_speed(const Topology& t, const std::vector<int>& route) {
  if (route.empty()) throw network_error("empty route");
  double s = t.links[route[0]].speed;
  for (int l : route) s = std::min(s, t.links[l].speed);
  return s;
}

// Fills routes, per-pair mean speeds and per-processor mean speeds.
inline void build_routes(Topology& t) {
  const std::size_t p = t.processors.size();
  t.routes.assign(p, std::vector<std::vector<std::vector<int>>>(p));
  t.pair_speeds.assign(p, std::vector<double>(p, 0.0));
  t.proc_speeds.assign(p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      if (i == j) continue;
      auto rs = enumerate_routes(t, t.processors[i].id, t.processors[j].id);
      double sum = 0.0;
      for (const auto& r : rs) sum += route_speed(t, r);
      t.pair_speeds[i][j] = sum / static_cast<double>(rs.size());
      t.routes[i][j] = std::move(rs);
    }
  }
  for (std::size_t i = 0; i < p; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < p; ++j)
      if (j != i) sum += t.pair_speeds[i][j];
    t.proc_speeds[i] = p > 1 ? sum / static_cast<double>(p - 1) : 0.0;
  }
}

inline double pair_speed(const Topology& t, std::string_view src, std::string_view dst) {
  const int i = t.proc_index(src);
  const int j = t.proc_index(dst);
  if (i < 0 || j < 0 || i == j) throw network_error("pair_speed: bad processor pair");
  if (!t.routes_built()) throw network_error("pair_speed: routes not built");
  return t.pair_speeds[i][j];
}

// Mean communication speed from one processor to every other one. This is the
// pre-assignment speed estimate used by rank and comm_time.
inline double processor_speed(const Topology& t, std::string_view src) {
  const int i = t.proc_index(src);
  if (i < 0) throw network_error("unknown processor '" + std::string(src) + "'");
  if (t.processors.size() < 2)
    throw network_error("processor_speed needs at least two processors");
  if (!t.routes_built()) throw network_error("processor_speed: routes not built");
  return t.proc_speeds[i];
}

// Estimated transfer time of a payload leaving src, before the destination is
// known. Zero-volume payloads cost nothing; intra-processor traffic never
// reaches this helper.
inline double comm_time(const Topology& t, std::string_view src, double volume) {
  if (volume == 0.0) return 0.0;
  return volume / processor_speed(t, src);
}

// Transmission time of one payload on one specific link.
inline double ctml(const Topology& t, int link_index, double volume) {
  return volume / t.links[link_index].speed;
}

struct Reservation {
  std::string label;
  double start = 0.0;
  double finish = 0.0;
};

// Per-link reservation ledger. Links are held exclusively and
// non-preemptively; the scheduler only ever appends at or after avail().
class LinkCalendar {
 public:
  explicit LinkCalendar(std::size_t num_links) : by_link_(num_links), avail_(num_links, 0.0) {}

  double avail(int link) const { return avail_[link]; }
  const std::vector<double>& avails() const { return avail_; }
  const std::vector<Reservation>& reservations(int link) const { return by_link_[link]; }

  void reserve(int link, std::string label, double start, double finish) {
    if (!(finish > start)) throw network_error("reservation must have positive length");
    auto& v = by_link_[link];
    auto it = std::lower_bound(v.begin(), v.end(), start,
                               [](const Reservation& r, double s) { return r.start < s; });
    if (it != v.end() && it->start < finish)
      throw network_error("link '" + std::to_string(link) + "' reservation overlap");
    if (it != v.begin() && std::prev(it)->finish > start)
      throw network_error("link '" + std::to_string(link) + "' reservation overlap");
    v.insert(it, Reservation{std::move(label), start, finish});
    avail_[link] = std::max(avail_[link], finish);
  }

 private:
  std::vector<std::vector<Reservation>> by_link_;
  std::vector<double> avail_;
};

}  // namespace spgsched
