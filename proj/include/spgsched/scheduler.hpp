#pragma once

// Contention-aware list scheduling. Two phases per run: a task prioritizing
// phase that orders tasks by a heterogeneous priority rank value, and a
// processor selection phase that evaluates every (processor, route choice)
// candidate for the dequeued task and commits the one minimizing the variant's
// selection value. Link use is modelled explicitly: each inter-processor
// message reserves every link of its route for its own transmission window.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "spgsched/graph.hpp"
#include "spgsched/network.hpp"

namespace spgsched {

enum class RoundingMode { exact, integer };

inline double comp_time(double weight, double rate) { return weight / rate; }

// Integer mode rounds half up, which reproduces the published per-processor
// computation-time tables when rates are exact fractions.
inline double comp_time(double weight, double rate, RoundingMode mode) {
  const double c = weight / rate;
  return mode == RoundingMode::integer ? std::floor(c + 0.5) : c;
}

enum class Variant { hsv_cc, hvlb_cc_a, hvlb_cc_b };

inline const char* variant_name(Variant v) {
  switch (v) {
    case Variant::hsv_cc: return "HSV_CC";
    case Variant::hvlb_cc_a: return "HVLB_CC_A";
    case Variant::hvlb_cc_b: return "HVLB_CC_B";
  }
  return "?";
}

inline std::optional<Variant> variant_from_name(std::string_view s) {
  if (s == "HSV_CC" || s == "hsv" || s == "hsv_cc") return Variant::hsv_cc;
  if (s == "HVLB_CC_A" || s == "hvlb-a" || s == "hvlb_cc_a") return Variant::hvlb_cc_a;
  if (s == "HVLB_CC_B" || s == "hvlb-b" || s == "hvlb_cc_b") return Variant::hvlb_cc_b;
  return std::nullopt;
}

// Upward rank of every task as seen from one source processor: computation at
// that processor's rate plus communication charged at its mean outgoing speed.
inline std::vector<double> compute_rank(const TaskGraph& g, const StructureIndex& st,
                                        const Topology& topo, int proc) {
  const double rate = topo.processors[proc].rate;
  const double speed = topo.proc_speeds[proc];
  std::vector<double> rank(g.tasks.size(), 0.0);
  for (auto it = st.topo_order.rbegin(); it != st.topo_order.rend(); ++it) {
    const int u = *it;
    double best = 0.0;
    for (int e : st.out_edges[u]) {
      const int v = g.task_index(g.edges[e].dst);
      const double comm = g.edges[e].volume == 0.0 ? 0.0 : g.edges[e].volume / speed;
      best = std::max(best, rank[v] + comm);
    }
    rank[u] = comp_time(g.tasks[u].weight, rate) + best;
  }
  return rank;
}

inline std::vector<std::vector<double>> compute_rank_table(const TaskGraph& g,
                                                           const StructureIndex& st,
                                                           const Topology& topo) {
  std::vector<std::vector<double>> table;
  table.reserve(topo.processors.size());
  for (std::size_t p = 0; p < topo.processors.size(); ++p)
    table.push_back(compute_rank(g, st, topo, static_cast<int>(p)));
  return table;
}

// Heterogeneous rank: mean of the per-processor ranks.
inline std::vector<double> compute_hrank(const std::vector<std::vector<double>>& rank_table) {
  if (rank_table.empty()) throw error("compute_hrank: empty rank table");
  std::vector<double> h(rank_table[0].size(), 0.0);
  for (const auto& row : rank_table)
    for (std::size_t i = 0; i < h.size(); ++i) h[i] += row[i];
  for (auto& v : h) v /= static_cast<double>(rank_table.size());
  return h;
}

struct PriorityTable {
  std::vector<std::vector<double>> rank;  // [processor][task]
  std::vector<double> hrank;
  std::vector<double> hprv;
  std::vector<int> order;  // dequeue order: non-increasing hprv, then id
};

// Priority rank value per task. The baseline and variant A weigh hrank by
// out-degree; variant B additionally normalizes by the graph's maximum
// out-degree and divides by depth^depth_power (default 2). Exit tasks get 0.
inline std::vector<double> compute_hprv(const StructureIndex& st, const std::vector<double>& hrank,
                                        Variant variant, double depth_power = 2.0) {
  std::vector<double> hprv(hrank.size(), 0.0);
  for (std::size_t i = 0; i < hrank.size(); ++i) {
    if (st.outd[i] == 0) continue;
    if (variant == Variant::hvlb_cc_b) {
      const double d = static_cast<double>(st.depth[i]);
      hprv[i] = hrank[i] * (static_cast<double>(st.outd[i]) / st.max_outd) /
                std::pow(d, depth_power);
    } else {
      hprv[i] = hrank[i] * static_cast<double>(st.outd[i]);
    }
  }
  return hprv;
}

inline PriorityTable compute_priority(const TaskGraph& g, const StructureIndex& st,
                                      const Topology& topo, Variant variant,
                                      double depth_power = 2.0) {
  PriorityTable pt;
  pt.rank = compute_rank_table(g, st, topo);
  pt.hrank = compute_hrank(pt.rank);
  pt.hprv = compute_hprv(st, pt.hrank, variant, depth_power);
  pt.order.resize(g.tasks.size());
  for (std::size_t i = 0; i < pt.order.size(); ++i) pt.order[i] = static_cast<int>(i);
  std::sort(pt.order.begin(), pt.order.end(), [&](int a, int b) {
    if (pt.hprv[a] != pt.hprv[b]) return pt.hprv[a] > pt.hprv[b];
    return natural_less(g.tasks[a].id, g.tasks[b].id);
  });
  return pt;
}

// Locally-dependent execution time: the rank minus the task's own computation,
// i.e. the downstream work still ahead of it. Exit tasks use 1.0 so the
// selection value reduces to the finish time alone.
inline double ldet_cc(double rank, double comp, bool is_exit) {
  return is_exit ? 1.0 : rank - comp;
}

// Busy-processor penalty: grows with the load already committed to the
// destination, scaled by the balancing knob alpha.
inline double bp(double assigned_load, double period, double alpha) {
  return 1.0 + (assigned_load / period) * alpha;
}

struct LinkIntervalPlan {
  int link = -1;
  double start = 0.0;
  double finish = 0.0;
};

struct MessagePlan {
  int edge = -1;       // edge index in the graph
  int pred = -1;       // source task index
  std::vector<int> route;
  std::vector<LinkIntervalPlan> intervals;
  double arrival() const { return intervals.empty() ? 0.0 : intervals.back().finish; }
};

struct Candidate {
  int task = -1;
  int proc = -1;
  double est = 0.0;
  double eft = 0.0;
  std::vector<int> route_combo;  // route index per cross predecessor
  std::vector<MessagePlan> messages;
};

struct ScheduledTask {
  std::string id;
  std::string processor;
  double start = 0.0;
  double finish = 0.0;
};

struct LinkInterval {
  std::string link;
  double start = 0.0;
  double finish = 0.0;
};

struct MessageSchedule {
  std::string src;
  std::string dst;
  std::string src_proc;
  std::string dst_proc;
  double volume = 0.0;
  std::vector<std::string> route;
  std::vector<LinkInterval> links;
  double arrival() const { return links.empty() ? 0.0 : links.back().finish; }
};

struct Schedule {
  std::vector<ScheduledTask> tasks;      // canonical: sorted by natural id
  std::vector<MessageSchedule> messages; // canonical: sorted by (src, dst)
  std::vector<std::string> processors;   // full processor set of the topology
  std::vector<std::string> commit_order; // in-memory only, not serialized
  double makespan = 0.0;
  double alpha = 0.0;

  const ScheduledTask* find_task(std::string_view id) const {
    for (const auto& t : tasks)
      if (t.id == id) return &t;
    return nullptr;
  }
  const MessageSchedule* find_message(std::string_view src, std::string_view dst) const {
    for (const auto& m : messages)
      if (m.src == src && m.dst == dst) return &m;
    return nullptr;
  }
};

struct ScheduleOutcome {
  std::optional<Schedule> schedule;
  std::string failed_task;  // set when a dequeued task had an unscheduled pred
  bool ok() const { return schedule.has_value(); }
};

// Incremental schedule state plus the pure candidate query. Tests drive it
// directly; schedule_once is the production loop on top.
class ScheduleBuilder {
 public:
  ScheduleBuilder(const TaskGraph& g, const StructureIndex& st, const Topology& topo,
                  std::vector<int> queue_order)
      : g_(&g),
        st_(&st),
        topo_(&topo),
        calendar_(topo.links.size()),
        queue_pos_(g.tasks.size(), -1),
        proc_of_(g.tasks.size(), -1),
        start_(g.tasks.size(), 0.0),
        finish_(g.tasks.size(), 0.0),
        avail_proc_(topo.processors.size(), 0.0),
        load_proc_(topo.processors.size(), 0.0) {
    if (!topo.routes_built()) throw network_error("scheduler needs built routes");
    for (std::size_t k = 0; k < queue_order.size(); ++k) queue_pos_[queue_order[k]] = static_cast<int>(k);
    order_ = std::move(queue_order);
  }

  bool scheduled(int task) const { return proc_of_[task] >= 0; }
  int proc_of(int task) const { return proc_of_[task]; }
  double start_of(int task) const { return start_[task]; }
  double finish_of(int task) const { return finish_[task]; }
  double avail_proc(int proc) const { return avail_proc_[proc]; }
  double load_proc(int proc) const { return load_proc_[proc]; }
  const LinkCalendar& calendar() const { return calendar_; }

  // Cross-processor predecessors of a task for a given destination, in queue
  // (priority) order. Their messages are laid onto links in this order.
  std::vector<int> cross_preds(int task, int proc) const {
    std::vector<int> out;
    for (int p : st_->pred[task])
      if (proc_of_[p] != proc) out.push_back(p);
    std::sort(out.begin(), out.end(), [&](int a, int b) { return queue_pos_[a] < queue_pos_[b]; });
    return out;
  }

  int route_count(int src_proc, int dst_proc) const {
    return static_cast<int>(topo_->routes[src_proc][dst_proc].size());
  }

  // Earliest start/finish query for placing `task` on `proc` with the given
  // route choice per cross predecessor. Pure: the builder is not modified.
  // Every predecessor must already be scheduled.
  Candidate evaluate(int task, int proc, const std::vector<int>& combo) const {
    Candidate c;
    c.task = task;
    c.proc = proc;
    c.route_combo = combo;

    scratch_avail_ = calendar_.avails();
    double est = 0.0;

    const auto cross = cross_preds(task, proc);
    if (combo.size() != cross.size())
      throw error("evaluate: route combo size mismatch");

    for (int p : st_->pred[task])
      if (proc_of_[p] == proc) est = std::max(est, finish_[p]);

    for (std::size_t k = 0; k < cross.size(); ++k) {
      const int pred = cross[k];
      const auto& route = topo_->routes[proc_of_[pred]][proc][combo[k]];
      MessagePlan mp;
      mp.pred = pred;
      mp.edge = edge_between(pred, task);
      mp.route = route;
      const double volume = g_->edges[mp.edge].volume;

      double lst = 0.0, lft = 0.0;
      for (std::size_t x = 0; x < route.size(); ++x) {
        const int l = route[x];
        const double t = ctml(*topo_, l, volume);
        if (x == 0) {
          lst = std::max(finish_[pred], scratch_avail_[l]);
          lft = lst + t;
        } else {
          lst = std::max(lst, scratch_avail_[l]);
          lft = std::max(lft, lst + t);
        }
        scratch_avail_[l] = lft;
        mp.intervals.push_back({l, lst, lft});
      }
      est = std::max(est, mp.arrival());
      c.messages.push_back(std::move(mp));
    }

    c.est = std::max(est, avail_proc_[proc]);
    if (st_->pred[task].empty()) c.est = std::max(c.est, 0.0);
    c.eft = c.est + comp_time(g_->tasks[task].weight, topo_->processors[proc].rate);
    return c;
  }

  // Greedy route choice for tasks with many cross predecessors: each message
  // takes the route minimizing its own arrival given the choices made so far.
  std::vector<int> greedy_combo(int task, int proc) const {
    const auto cross = cross_preds(task, proc);
    std::vector<int> combo;
    combo.reserve(cross.size());
    for (std::size_t k = 0; k < cross.size(); ++k) {
      int best = 0;
      double best_arrival = 0.0;
      const int nroutes = route_count(proc_of_[cross[k]], proc);
      for (int r = 0; r < nroutes; ++r) {
        combo.push_back(r);
        Candidate probe = evaluate_prefix(task, proc, cross, combo);
        combo.pop_back();
        const double arrival = probe.messages.back().arrival();
        if (r == 0 || arrival < best_arrival) {
          best = r;
          best_arrival = arrival;
        }
      }
      combo.push_back(best);
    }
    return combo;
  }

  void commit(const Candidate& c) {
    place_task(c.task, c.proc, c.est, c.eft);
    for (const auto& m : c.messages) {
      const std::string label = g_->edges[m.edge].src + "->" + g_->edges[m.edge].dst;
      for (const auto& iv : m.intervals)
        if (iv.finish > iv.start) calendar_.reserve(iv.link, label, iv.start, iv.finish);
    }
    committed_messages_.push_back({});
    auto& stored = committed_messages_.back();
    stored = c.messages;
  }

  // Low-level placement, also used to pin tasks in tests.
  void place_task(int task, int proc, double start, double finish) {
    proc_of_[task] = proc;
    start_[task] = start;
    finish_[task] = finish;
    avail_proc_[proc] = finish;
    load_proc_[proc] += finish - start;
    commit_sequence_.push_back(task);
  }

  Schedule finalize(double alpha) const {
    Schedule s;
    s.alpha = alpha;
    for (const auto& p : topo_->processors) s.processors.push_back(p.id);
    for (std::size_t i = 0; i < g_->tasks.size(); ++i) {
      if (proc_of_[i] < 0) continue;
      s.tasks.push_back({g_->tasks[i].id, topo_->processors[proc_of_[i]].id, start_[i], finish_[i]});
    }
    std::sort(s.tasks.begin(), s.tasks.end(),
              [](const ScheduledTask& a, const ScheduledTask& b) { return natural_less(a.id, b.id); });
    for (const auto& msgs : committed_messages_) {
      for (const auto& m : msgs) {
        MessageSchedule ms;
        ms.src = g_->edges[m.edge].src;
        ms.dst = g_->edges[m.edge].dst;
        ms.src_proc = topo_->processors[proc_of_[g_->task_index(ms.src)]].id;
        ms.dst_proc = topo_->processors[proc_of_[g_->task_index(ms.dst)]].id;
        ms.volume = g_->edges[m.edge].volume;
        for (int l : m.route) ms.route.push_back(topo_->links[l].id);
        for (const auto& iv : m.intervals)
          ms.links.push_back({topo_->links[iv.link].id, iv.start, iv.finish});
        s.messages.push_back(std::move(ms));
      }
    }
    std::sort(s.messages.begin(), s.messages.end(),
              [](const MessageSchedule& a, const MessageSchedule& b) {
                if (int c = natural_compare(a.src, b.src); c != 0) return c < 0;
                return natural_less(a.dst, b.dst);
              });
    for (int t : commit_sequence_) s.commit_order.push_back(g_->tasks[t].id);
    double mk = 0.0;
    for (int e : st_->exits)
      if (proc_of_[e] >= 0) mk = std::max(mk, finish_[e]);
    s.makespan = mk;
    return s;
  }

 private:
  // Like evaluate() but only lays out the first combo.size() messages; used by
  // the greedy per-predecessor route search.
  Candidate evaluate_prefix(int task, int proc, const std::vector<int>& cross,
                            const std::vector<int>& combo) const {
    Candidate c;
    c.task = task;
    c.proc = proc;
    scratch_avail_ = calendar_.avails();
    for (std::size_t k = 0; k < combo.size(); ++k) {
      const int pred = cross[k];
      const auto& route = topo_->routes[proc_of_[pred]][proc][combo[k]];
      MessagePlan mp;
      mp.pred = pred;
      mp.edge = edge_between(pred, task);
      mp.route = route;
      const double volume = g_->edges[mp.edge].volume;
      double lst = 0.0, lft = 0.0;
      for (std::size_t x = 0; x < route.size(); ++x) {
        const int l = route[x];
        const double t = ctml(*topo_, l, volume);
        if (x == 0) {
          lst = std::max(finish_[pred], scratch_avail_[l]);
          lft = lst + t;
        } else {
          lst = std::max(lst, scratch_avail_[l]);
          lft = std::max(lft, lst + t);
        }
        scratch_avail_[l] = lft;
        mp.intervals.push_back({l, lst, lft});
      }
      c.messages.push_back(std::move(mp));
    }
    return c;
  }

  int edge_between(int src, int dst) const {
    for (int e : st_->out_edges[src])
      if (g_->task_index(g_->edges[e].dst) == dst) return e;
    throw error("no edge between tasks");
  }

  const TaskGraph* g_;
  const StructureIndex* st_;
  const Topology* topo_;
  LinkCalendar calendar_;
  std::vector<int> order_;
  std::vector<int> queue_pos_;
  std::vector<int> proc_of_;
  std::vector<double> start_;
  std::vector<double> finish_;
  std::vector<double> avail_proc_;
  std::vector<double> load_proc_;
  std::vector<int> commit_sequence_;
  std::vector<std::vector<MessagePlan>> committed_messages_;
  mutable std::vector<double> scratch_avail_;
};

// Selection value of one candidate. The baseline multiplies finish time by
// the locally-dependent execution time; the load-balanced variants add the
// busy-processor penalty. Exit tasks reduce to the finish time alone in all
// variants, which keeps the alpha=0 runs of variant A bit-identical to the
// baseline.
inline double selection_value(Variant variant, double eft, double ldet, double bp_value,
                              bool is_exit) {
  double v = eft * (is_exit ? 1.0 : ldet);
  if (variant != Variant::hsv_cc && !is_exit) v *= bp_value;
  return v;
}

// One full scheduling pass at a fixed alpha. Fails (without throwing) when a
// dequeued task still has an unscheduled predecessor, which happens when the
// priority order is not topological.
inline ScheduleOutcome schedule_once(const TaskGraph& g, const StructureIndex& st,
                                     const Topology& topo, Variant variant, double alpha,
                                     const PriorityTable* precomputed = nullptr,
                                     double depth_power = 2.0) {
  PriorityTable local;
  const PriorityTable* pt = precomputed;
  if (!pt) {
    local = compute_priority(g, st, topo, variant, depth_power);
    pt = &local;
  }

  ScheduleBuilder b(g, st, topo, pt->order);
  const int nproc = static_cast<int>(topo.processors.size());

  for (int task : pt->order) {
    for (int p : st.pred[task]) {
      if (!b.scheduled(p)) {
        ScheduleOutcome out;
        out.failed_task = g.tasks[task].id;
        return out;
      }
    }

    const bool is_exit = st.is_exit(task);
    bool have_best = false;
    double best_value = 0.0;
    Candidate best;

    for (int proc = 0; proc < nproc; ++proc) {
      const auto cross = b.cross_preds(task, proc);
      const double comp = comp_time(g.tasks[task].weight, topo.processors[proc].rate);
      const double ldet = ldet_cc(pt->rank[proc][task], comp, is_exit);
      const double bpv = bp(b.load_proc(proc), g.period, alpha);

      auto consider = [&](const std::vector<int>& combo) {
        Candidate c = b.evaluate(task, proc, combo);
        const double v = selection_value(variant, c.eft, ldet, bpv, is_exit);
        if (!have_best || v < best_value) {
          have_best = true;
          best_value = v;
          best = std::move(c);
        }
      };

      if (cross.size() <= 2) {
        // Exhaustive route product; candidates are visited in lexicographic
        // combo order so the first minimum wins ties deterministically.
        std::vector<int> combo(cross.size(), 0);
        std::vector<int> limits(cross.size());
        for (std::size_t k = 0; k < cross.size(); ++k)
          limits[k] = b.route_count(b.proc_of(cross[k]), proc);
        bool done = false;
        while (!done) {
          consider(combo);
          done = true;
          for (int k = static_cast<int>(combo.size()) - 1; k >= 0; --k) {
            if (++combo[k] < limits[k]) {
              done = false;
              break;
            }
            combo[k] = 0;
          }
          if (combo.empty()) break;
        }
      } else {
        consider(b.greedy_combo(task, proc));
      }
    }

    if (!have_best) throw error("no candidate placement for task " + g.tasks[task].id);
    b.commit(best);
  }

  ScheduleOutcome out;
  out.schedule = b.finalize(alpha);
  return out;
}

struct AlphaGrid {
  double start = 0.0;
  double stop = 20.0;
  double step = 0.01;

  std::vector<double> points() const {
    if (step <= 0.0) throw error("alpha grid step must be positive");
    if (stop < start) throw error("alpha grid stop before start");
    std::vector<double> pts;
    const int n = static_cast<int>(std::floor((stop - start) / step + 1e-9));
    pts.reserve(n + 1);
    for (int i = 0; i <= n; ++i) pts.push_back(start + step * i);
    return pts;
  }
};

struct SweepPoint {
  double alpha = 0.0;
  double makespan = 0.0;
  bool ok = false;
};

struct SweepResult {
  ScheduleOutcome best;
  double best_alpha = 0.0;
  std::vector<SweepPoint> curve;
};

// Alpha sweep for the load-balanced variants: schedules once per grid point
// and keeps the minimum-makespan schedule (ties resolve to the smallest
// alpha). The grid must contain alpha=0 so the sweep can never do worse than
// the baseline reduction. Fails only if every grid point fails, which is
// all-or-nothing since failures depend on the priority order alone.
inline SweepResult schedule_sweep(const TaskGraph& g, const StructureIndex& st,
                                  const Topology& topo, Variant variant, const AlphaGrid& grid,
                                  double depth_power = 2.0) {
  if (variant == Variant::hsv_cc) throw error("schedule_sweep: baseline carries no alpha grid");
  const auto pts = grid.points();
  if (pts.empty() || pts.front() != 0.0)
    throw error("alpha grid must be non-empty and include alpha=0");

  const PriorityTable pt = compute_priority(g, st, topo, variant, depth_power);

  SweepResult res;
  bool have_best = false;
  for (double a : pts) {
    ScheduleOutcome o = schedule_once(g, st, topo, variant, a, &pt, depth_power);
    SweepPoint p;
    p.alpha = a;
    p.ok = o.ok();
    if (o.ok()) {
      p.makespan = o.schedule->makespan;
      if (!have_best || p.makespan < res.best.schedule->makespan) {
        have_best = true;
        res.best = std::move(o);
        res.best_alpha = a;
      }
    } else if (!have_best && res.best.failed_task.empty()) {
      res.best.failed_task = o.failed_task;
    }
    res.curve.push_back(p);
  }
  return res;
}

}  // namespace spgsched
