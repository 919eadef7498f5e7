#pragma once

// Desk-scale experiment reproduction. Every cell is seeded, cells run on a
// small thread pool into preallocated result slots, and aggregation happens
// single-threaded afterwards — so results are bit-identical no matter how
// many workers run. Outputs are CSV tables plus SVG curve charts.

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "spgsched/charts.hpp"
#include "spgsched/fixtures.hpp"
#include "spgsched/gantt.hpp"
#include "spgsched/generator.hpp"
#include "spgsched/imprecise.hpp"
#include "spgsched/io.hpp"
#include "spgsched/metrics.hpp"
#include "spgsched/scheduler.hpp"
#include "spgsched/validate_schedule.hpp"

namespace spgsched {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t cell_seed(std::uint64_t base, std::uint64_t exp, std::uint64_t cell,
                               std::uint64_t graph) {
  return splitmix64(splitmix64(splitmix64(base ^ (0x53504700ull + exp)) + cell) + graph);
}

struct ExperimentOptions {
  std::string out_dir = ".";
  int graphs_per_cell = 100;
  int exp4_graphs = 1000;
  std::uint64_t seed = 42;
  double alpha_stop = 20.0;
  double alpha_step = 0.1;
  int workers = 0;  // 0: SPGSCHED_WORKERS env var, else hardware concurrency
};

inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SPGSCHED_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace detail {

// Runs fn(0..jobs-1) on `workers` threads; each job writes only its own slot.
template <typename Fn>
void parallel_for(int jobs, int workers, Fn&& fn) {
  if (jobs <= 0) return;
  workers = std::min(workers, jobs);
  if (workers <= 1) {
    for (int i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= jobs) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

inline const std::vector<std::array<double, 3>>& rate_permutations() {
  static const std::vector<std::array<double, 3>> perms = {
      {2.0 / 3.0, 1.0, 5.0 / 6.0}, {2.0 / 3.0, 5.0 / 6.0, 1.0}, {1.0, 2.0 / 3.0, 5.0 / 6.0},
      {1.0, 5.0 / 6.0, 2.0 / 3.0}, {5.0 / 6.0, 2.0 / 3.0, 1.0}, {5.0 / 6.0, 1.0, 2.0 / 3.0}};
  return perms;
}

inline std::string rate_label(const std::array<double, 3>& r) {
  auto one = [](double v) {
    if (v == 1.0) return std::string("1");
    if (v == 2.0 / 3.0) return std::string("2/3");
    if (v == 5.0 / 6.0) return std::string("5/6");
    return format_number(v);
  };
  return one(r[0]) + "|" + one(r[1]) + "|" + one(r[2]);
}

inline Topology rate_topology(const std::array<double, 3>& rates) {
  Topology t = fixtures::reference_topology();
  for (int i = 0; i < 3; ++i) t.processors[i].rate = rates[i];
  build_routes(t);
  return t;
}

struct SchemeMetrics {
  bool ok = false;
  double slr = 0.0, speedup = 0.0, lb = 0.0, makespan = 0.0, alpha = 0.0;
};

struct InstanceResult {
  SchemeMetrics hsv, a, b;
};

inline SchemeMetrics pack_metrics(const ScheduleOutcome& o, const TaskGraph& g,
                                  const StructureIndex& st, const Topology& topo, double alpha) {
  SchemeMetrics m;
  if (!o.ok()) return m;
  const MetricsReport r = compute_metrics(*o.schedule, g, st, topo);
  m.ok = true;
  m.slr = r.slr;
  m.speedup = r.speedup;
  m.lb = r.lb;
  m.makespan = r.makespan;
  m.alpha = alpha;
  return m;
}

// One generated instance, all three schemes.
inline InstanceResult run_instance(const GeneratorParams& gp, const Topology& topo,
                                   const AlphaGrid& grid) {
  const TaskGraph g = generate_random(gp, topo);
  const StructureIndex st = derive_structure(g);
  InstanceResult r;
  ScheduleOutcome hsv = schedule_once(g, st, topo, Variant::hsv_cc, 0.0);
  r.hsv = pack_metrics(hsv, g, st, topo, 0.0);
  SweepResult a = schedule_sweep(g, st, topo, Variant::hvlb_cc_a, grid);
  r.a = pack_metrics(a.best, g, st, topo, a.best_alpha);
  SweepResult b = schedule_sweep(g, st, topo, Variant::hvlb_cc_b, grid);
  r.b = pack_metrics(b.best, g, st, topo, b.best_alpha);
  return r;
}

struct CellSpec {
  std::string label;       // e.g. "n=20" or "ccr=5"
  GeneratorParams gp;      // seed filled per graph
  Topology topo;
  double x = 0.0;          // x-axis value for charts
};

struct CellAggregate {
  int ok_all = 0;  // instances where every scheme succeeded
  double slr[3] = {0, 0, 0};
  double speedup[3] = {0, 0, 0};
  double lb[3] = {0, 0, 0};
};

inline CellAggregate aggregate(const std::vector<InstanceResult>& rs) {
  CellAggregate agg;
  for (const auto& r : rs) {
    if (!r.hsv.ok || !r.a.ok || !r.b.ok) continue;
    ++agg.ok_all;
    const SchemeMetrics* m[3] = {&r.hsv, &r.a, &r.b};
    for (int v = 0; v < 3; ++v) {
      agg.slr[v] += m[v]->slr;
      agg.speedup[v] += m[v]->speedup;
      agg.lb[v] += m[v]->lb;
    }
  }
  if (agg.ok_all > 0) {
    for (int v = 0; v < 3; ++v) {
      agg.slr[v] /= agg.ok_all;
      agg.speedup[v] /= agg.ok_all;
      agg.lb[v] /= agg.ok_all;
    }
  }
  return agg;
}

// Runs a batch of cells in parallel and returns per-cell aggregates.
inline std::vector<CellAggregate> run_cells(const std::vector<CellSpec>& cells,
                                            const ExperimentOptions& opt, std::uint64_t exp_id) {
  const int per_cell = opt.graphs_per_cell;
  const AlphaGrid grid{0.0, opt.alpha_stop, opt.alpha_step};
  std::vector<std::vector<InstanceResult>> results(cells.size());
  for (auto& v : results) v.resize(per_cell);

  const int jobs = static_cast<int>(cells.size()) * per_cell;
  parallel_for(jobs, resolve_workers(opt.workers), [&](int j) {
    const int c = j / per_cell;
    const int i = j % per_cell;
    GeneratorParams gp = cells[c].gp;
    gp.seed = cell_seed(opt.seed, exp_id, static_cast<std::uint64_t>(c),
                        static_cast<std::uint64_t>(i));
    results[c][i] = run_instance(gp, cells[c].topo, grid);
  });

  std::vector<CellAggregate> out;
  out.reserve(cells.size());
  for (const auto& rs : results) out.push_back(aggregate(rs));
  return out;
}

inline const char* scheme_name(int v) {
  return v == 0 ? "HSV_CC" : (v == 1 ? "HVLB_CC_A" : "HVLB_CC_B");
}

}  // namespace detail

// Experiment 1: SLR and speedup versus task count over all six processor-rate
// permutations (constrained graphs, CCR=1).
inline std::string run_exp1(const ExperimentOptions& opt) {
  std::vector<detail::CellSpec> cells;
  const auto& perms = detail::rate_permutations();
  for (int n : {10, 20, 30, 40, 50}) {
    for (std::size_t p = 0; p < perms.size(); ++p) {
      detail::CellSpec c;
      c.gp.task_count = n;
      c.gp.constrain_outdegree = true;
      c.topo = detail::rate_topology(perms[p]);
      c.label = "n=" + std::to_string(n) + ",rates=" + detail::rate_label(perms[p]);
      c.x = n;
      cells.push_back(std::move(c));
    }
  }
  const auto aggs = detail::run_cells(cells, opt, 1);

  std::string csv = "n,rates,variant,instances,mean_slr,mean_speedup\n";
  std::vector<CurveSeries> slr_series(3), speedup_series(3);
  for (int v = 0; v < 3; ++v) slr_series[v].name = speedup_series[v].name = detail::scheme_name(v);
  for (int ni = 0; ni < 5; ++ni) {
    const int n = 10 + 10 * ni;
    double slr_sum[3] = {0, 0, 0}, sp_sum[3] = {0, 0, 0};
    int cells_ok = 0;
    for (std::size_t p = 0; p < perms.size(); ++p) {
      const auto& agg = aggs[ni * perms.size() + p];
      for (int v = 0; v < 3; ++v) {
        csv += csv_row({std::to_string(n), detail::rate_label(perms[p]), detail::scheme_name(v),
                        std::to_string(agg.ok_all), format_number(agg.slr[v]),
                        format_number(agg.speedup[v])});
        slr_sum[v] += agg.slr[v];
        sp_sum[v] += agg.speedup[v];
      }
      if (agg.ok_all > 0) ++cells_ok;
    }
    (void)cells_ok;
    for (int v = 0; v < 3; ++v) {
      slr_series[v].points.push_back({double(n), slr_sum[v] / perms.size()});
      speedup_series[v].points.push_back({double(n), sp_sum[v] / perms.size()});
    }
  }
  store_text(csv, opt.out_dir + "/exp1_metrics.csv");
  store_text(render_curves(slr_series, "Mean SLR vs task count", "tasks", "SLR"),
             opt.out_dir + "/exp1_slr.svg");
  store_text(render_curves(speedup_series, "Mean speedup vs task count", "tasks", "speedup"),
             opt.out_dir + "/exp1_speedup.svg");
  return "exp1: wrote exp1_metrics.csv, exp1_slr.svg, exp1_speedup.svg";
}

// Experiment 2: load balance versus task count (reference rates).
inline std::string run_exp2(const ExperimentOptions& opt) {
  std::vector<detail::CellSpec> cells;
  for (int n : {10, 20, 30, 40, 50}) {
    detail::CellSpec c;
    c.gp.task_count = n;
    c.gp.constrain_outdegree = true;
    c.topo = fixtures::reference_topology();
    c.label = "n=" + std::to_string(n);
    c.x = n;
    cells.push_back(std::move(c));
  }
  const auto aggs = detail::run_cells(cells, opt, 2);

  std::string csv = "n,variant,instances,mean_lb\n";
  std::vector<CurveSeries> series(3);
  for (int v = 0; v < 3; ++v) series[v].name = detail::scheme_name(v);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (int v = 0; v < 3; ++v) {
      csv += csv_row({std::to_string(int(cells[c].x)), detail::scheme_name(v),
                      std::to_string(aggs[c].ok_all), format_number(aggs[c].lb[v])});
      series[v].points.push_back({cells[c].x, aggs[c].lb[v]});
    }
  }
  store_text(csv, opt.out_dir + "/exp2_metrics.csv");
  store_text(render_curves(series, "Mean load balance vs task count", "tasks", "LB"),
             opt.out_dir + "/exp2_lb.svg");
  return "exp2: wrote exp2_metrics.csv, exp2_lb.svg";
}

// Experiment 3: SLR versus CCR at n=20 (reference rates).
inline std::string run_exp3(const ExperimentOptions& opt) {
  std::vector<detail::CellSpec> cells;
  for (double ccr : {0.1, 0.5, 1.0, 5.0, 10.0}) {
    detail::CellSpec c;
    c.gp.task_count = 20;
    c.gp.ccr = ccr;
    c.gp.constrain_outdegree = true;
    c.topo = fixtures::reference_topology();
    c.label = "ccr=" + format_number(ccr);
    c.x = ccr;
    cells.push_back(std::move(c));
  }
  const auto aggs = detail::run_cells(cells, opt, 3);

  std::string csv = "ccr,variant,instances,mean_slr\n";
  std::vector<CurveSeries> series(3);
  for (int v = 0; v < 3; ++v) series[v].name = detail::scheme_name(v);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (int v = 0; v < 3; ++v) {
      csv += csv_row({format_number(cells[c].x), detail::scheme_name(v),
                      std::to_string(aggs[c].ok_all), format_number(aggs[c].slr[v])});
      series[v].points.push_back({cells[c].x, aggs[c].slr[v]});
    }
  }
  store_text(csv, opt.out_dir + "/exp3_metrics.csv");
  store_text(render_curves(series, "Mean SLR vs CCR (n=20)", "CCR", "SLR"),
             opt.out_dir + "/exp3_slr.svg");
  return "exp3: wrote exp3_metrics.csv, exp3_slr.svg";
}

// Experiment 4: scheduling failure rate of the three prioritization schemes
// over unconstrained random DAGs.
inline std::string run_exp4(const ExperimentOptions& opt) {
  const Topology topo = fixtures::reference_topology();
  const int total = opt.exp4_graphs;
  struct Flags {
    bool hsv = false, depth1 = false, depth2 = false;
  };
  std::vector<Flags> failed(total);

  detail::parallel_for(total, resolve_workers(opt.workers), [&](int i) {
    GeneratorParams gp;
    gp.task_count = 20;
    gp.constrain_outdegree = false;
    gp.seed = cell_seed(opt.seed, 4, 0, static_cast<std::uint64_t>(i));
    const TaskGraph g = generate_random(gp, topo);
    const StructureIndex st = derive_structure(g);
    failed[i].hsv = !schedule_once(g, st, topo, Variant::hsv_cc, 0.0).ok();
    failed[i].depth1 = !schedule_once(g, st, topo, Variant::hvlb_cc_b, 0.0, nullptr, 1.0).ok();
    failed[i].depth2 = !schedule_once(g, st, topo, Variant::hvlb_cc_b, 0.0, nullptr, 2.0).ok();
  });

  int f_hsv = 0, f_d1 = 0, f_d2 = 0;
  for (const auto& f : failed) {
    f_hsv += f.hsv;
    f_d1 += f.depth1;
    f_d2 += f.depth2;
  }
  std::string csv = "scheme,failed,total,sfr_percent\n";
  csv += csv_row({"HSV_CC", std::to_string(f_hsv), std::to_string(total),
                  format_number(sfr(f_hsv, total))});
  csv += csv_row({"HVLB_CC_depth", std::to_string(f_d1), std::to_string(total),
                  format_number(sfr(f_d1, total))});
  csv += csv_row({"HVLB_CC_depth2", std::to_string(f_d2), std::to_string(total),
                  format_number(sfr(f_d2, total))});
  store_text(csv, opt.out_dir + "/exp4_sfr.csv");

  std::vector<CurveSeries> series(1);
  series[0].name = "SFR";
  series[0].points = {{0.0, sfr(f_hsv, total)}, {1.0, sfr(f_d1, total)}, {2.0, sfr(f_d2, total)}};
  store_text(render_curves(series, "Failure rate: HSV(0) depth(1) depth2(2)", "scheme", "SFR %"),
             opt.out_dir + "/exp4_sfr.svg");
  return "exp4: SFR " + format_number(sfr(f_hsv, total)) + "% / " + format_number(sfr(f_d1, total)) +
         "% / " + format_number(sfr(f_d2, total)) + "% (HSV/depth/depth2), wrote exp4_sfr.csv";
}

// Experiment 5: data precision with and without hole exploitation on the
// built-in imprecise instance.
inline std::string run_exp5(const ExperimentOptions& opt) {
  const Topology topo = fixtures::reference_topology();
  const TaskGraph g = fixtures::imprecise_graph(topo);
  const StructureIndex st = derive_structure(g);
  const AlphaGrid grid{0.0, opt.alpha_stop, opt.alpha_step};
  const SweepResult sweep = schedule_sweep(g, st, topo, Variant::hvlb_cc_a, grid);
  if (!sweep.best.ok()) throw error("exp5: scheduling failed on the built-in instance");
  const Schedule& s = *sweep.best.schedule;

  const auto violations = validate_schedule(s, g, st, topo);
  if (!violations.empty()) throw error("exp5: invalid schedule: " + violations.front());

  const HoleReport holes = find_holes(s, g, st, topo);
  std::string holes_csv = "task,hole,condition1,condition2\n";
  for (const auto& h : holes.holes) {
    holes_csv += csv_row({h.task, format_number(h.hole),
                          h.condition1 ? format_number(*h.condition1) : "",
                          h.condition2 ? format_number(*h.condition2) : ""});
  }
  store_text(holes_csv, opt.out_dir + "/exp5_holes.csv");

  std::vector<double> lambdas;
  for (int i = 0; i <= 10; ++i) lambdas.push_back(1.0 + 0.1 * i);
  const auto rows = simulate_precision(s, g, holes, lambdas);
  std::string csv = "task,lambda,mode,precision\n";
  std::vector<CurveSeries> series;
  for (const auto& r : rows) {
    const std::string mode = r.ic ? "IC" : "no-IC";
    csv += csv_row({r.task, format_number(r.lambda), mode, format_number(r.precision)});
    const std::string name = r.task + " " + mode;
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const CurveSeries& cs) { return cs.name == name; });
    if (it == series.end()) {
      series.push_back({name, {}});
      it = series.end() - 1;
    }
    it->points.push_back({r.lambda, r.precision});
  }
  store_text(csv, opt.out_dir + "/exp5_precision.csv");
  store_text(render_curves(series, "Data precision vs arrival rate", "lambda", "precision %"),
             opt.out_dir + "/exp5_precision.svg");
  store_schedule(s, opt.out_dir + "/exp5_schedule.json");
  store_text(render_gantt(s), opt.out_dir + "/exp5_gantt.svg");

  std::string hole_note;
  for (const auto& h : holes.holes)
    if (h.task == "n2" || h.task == "n5" || h.task == "n8")
      hole_note += " " + h.task + "=" + format_number(h.hole);
  return "exp5: alpha=" + format_number(sweep.best_alpha) + ", holes" + hole_note +
         ", wrote exp5_holes.csv, exp5_precision.csv";
}

inline std::string run_experiment(const std::string& id, const ExperimentOptions& opt) {
  if (id == "exp1") return run_exp1(opt);
  if (id == "exp2") return run_exp2(opt);
  if (id == "exp3") return run_exp3(opt);
  if (id == "exp4") return run_exp4(opt);
  if (id == "exp5") return run_exp5(opt);
  throw error("unknown experiment '" + id + "' (expected exp1..exp5)");
}

}  // namespace spgsched
