// spgsched command line front end.
//
// Exit codes: 0 success, 1 usage or input error, 2 scheduling failure or
// invalid schedule, 3 internal invariant breach.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spgsched/experiments.hpp"
#include "spgsched/fixtures.hpp"
#include "spgsched/gantt.hpp"
#include "spgsched/generator.hpp"
#include "spgsched/io.hpp"
#include "spgsched/metrics.hpp"
#include "spgsched/scheduler.hpp"
#include "spgsched/validate_schedule.hpp"

namespace {

struct usage_error : spgsched::error {
  using spgsched::error::error;
};

spgsched::Topology load_or_default_topology(const std::string& path) {
  if (path.empty()) return spgsched::fixtures::reference_topology();
  return spgsched::load_topology(path);
}

spgsched::Variant parse_variant(const std::string& name) {
  const auto v = spgsched::variant_from_name(name);
  if (!v) throw usage_error("unknown variant '" + name + "' (HSV_CC, HVLB_CC_A, HVLB_CC_B)");
  return *v;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw usage_error("cannot create output directory '" + dir + "': " + ec.message());
}

void ensure_parent_dir(const std::string& file_path) {
  const std::filesystem::path parent = std::filesystem::path(file_path).parent_path();
  if (!parent.empty()) ensure_dir(parent.string());
}

int cmd_generate(const spgsched::GeneratorParams& params, const std::string& topology_path,
                 const std::string& out_path) {
  if (params.ccr <= 0.0) throw usage_error("--ccr must be positive");
  if (params.weight_min <= 0.0 || params.weight_max < params.weight_min)
    throw usage_error("weight range must be positive and ordered");
  const spgsched::Topology topo = load_or_default_topology(topology_path);
  spgsched::TaskGraph g;
  try {
    g = spgsched::generate_random(params, topo);
  } catch (const spgsched::error& e) {
    throw usage_error(e.what());  // every generator failure is a parameter problem
  }
  ensure_parent_dir(out_path);
  spgsched::store_graph(g, out_path);
  std::printf("wrote %s (%zu tasks, %zu edges)\n", out_path.c_str(), g.tasks.size(),
              g.edges.size());
  return 0;
}

int cmd_schedule(const std::string& graph_path, const std::string& topology_path,
                 const std::string& variant_name, double alpha_stop, double alpha_step,
                 bool grid_given, const std::string& out_dir) {
  const spgsched::Variant variant = parse_variant(variant_name);
  if (variant == spgsched::Variant::hsv_cc && grid_given)
    throw usage_error("HSV_CC carries no load-pressure parameter; alpha grid options are invalid");
  if (alpha_step <= 0.0) throw usage_error("--alpha-step must be positive");
  if (alpha_stop < 0.0) throw usage_error("--alpha-stop must be >= 0");
  ensure_dir(out_dir);

  const spgsched::Topology topo = load_or_default_topology(topology_path);
  const spgsched::TaskGraph g = spgsched::load_graph(graph_path);
  const spgsched::StructureIndex st = spgsched::derive_structure(g);

  spgsched::ScheduleOutcome best;
  std::string sweep_csv = "alpha,makespan\n";
  double best_alpha = 0.0;
  if (variant == spgsched::Variant::hsv_cc) {
    best = spgsched::schedule_once(g, st, topo, variant, 0.0);
    if (best.ok())
      sweep_csv += spgsched::csv_row({"0", spgsched::format_number(best.schedule->makespan)});
  } else {
    const spgsched::AlphaGrid grid{0.0, alpha_stop, alpha_step};
    const spgsched::SweepResult sweep = spgsched::schedule_sweep(g, st, topo, variant, grid);
    best = sweep.best;
    best_alpha = sweep.best_alpha;
    for (const auto& pt : sweep.curve)
      sweep_csv += spgsched::csv_row(
          {spgsched::format_number(pt.alpha), spgsched::format_number(pt.makespan)});
  }
  if (!best.ok()) {
    std::fprintf(stderr, "scheduling failure: task '%s' dequeued before a predecessor\n",
                 best.failed_task.c_str());
    return 2;
  }

  const spgsched::Schedule& s = *best.schedule;
  const spgsched::MetricsReport m = spgsched::compute_metrics(s, g, st, topo);
  std::string metrics_csv = "graph,variant,alpha,makespan,slr,speedup,lb\n";
  metrics_csv += spgsched::csv_row(
      {graph_path, spgsched::variant_name(variant), spgsched::format_number(best_alpha),
       spgsched::format_number(m.makespan), spgsched::format_number(m.slr),
       spgsched::format_number(m.speedup), spgsched::format_number(m.lb)});

  spgsched::store_schedule(s, out_dir + "/schedule.json");
  spgsched::store_text(sweep_csv, out_dir + "/sweep.csv");
  spgsched::store_text(metrics_csv, out_dir + "/metrics.csv");
  spgsched::store_text(spgsched::render_gantt(s), out_dir + "/gantt.svg");
  std::printf("makespan %s at alpha %s; wrote schedule.json, sweep.csv, metrics.csv, gantt.svg\n",
              spgsched::format_number(m.makespan).c_str(),
              spgsched::format_number(best_alpha).c_str());
  return 0;
}

int cmd_experiment(const std::string& id, const spgsched::ExperimentOptions& opt) {
  ensure_dir(opt.out_dir);
  const std::string summary = spgsched::run_experiment(id, opt);
  std::printf("%s\n", summary.c_str());
  return 0;
}

int cmd_gantt(const std::string& schedule_path, const std::string& out_path) {
  const spgsched::Schedule s = spgsched::load_schedule(schedule_path);
  ensure_parent_dir(out_path);
  spgsched::store_text(spgsched::render_gantt(s), out_path);
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

int cmd_validate(const std::string& schedule_path, const std::string& graph_path,
                 const std::string& topology_path) {
  const spgsched::Topology topo = load_or_default_topology(topology_path);
  const spgsched::TaskGraph g = spgsched::load_graph(graph_path);
  const spgsched::StructureIndex st = spgsched::derive_structure(g);
  const spgsched::Schedule s = spgsched::load_schedule(schedule_path);
  const std::vector<std::string> violations = spgsched::validate_schedule(s, g, st, topo);
  if (!violations.empty()) {
    for (const auto& v : violations) std::fprintf(stderr, "violation: %s\n", v.c_str());
    return 2;
  }
  std::printf("OK: %zu tasks, %zu messages, makespan %s\n", s.tasks.size(), s.messages.size(),
              spgsched::format_number(s.makespan).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spgsched: contention-aware static scheduling for stream task graphs"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a random layered task graph");
  spgsched::GeneratorParams params;
  std::string gen_topology, gen_out = "graph.json";
  std::uint64_t gen_seed = 0;
  gen->add_option("-n,--tasks", params.task_count, "number of tasks")->capture_default_str();
  gen->add_option("--seed", gen_seed, "random seed")->capture_default_str();
  gen->add_option("--max-in", params.max_in_degree, "max in-degree")->capture_default_str();
  gen->add_option("--max-out", params.max_out_degree, "max out-degree")->capture_default_str();
  gen->add_option("--min-entry", params.min_entry, "minimum entry tasks")->capture_default_str();
  gen->add_option("--min-exit", params.min_exit, "minimum exit tasks")->capture_default_str();
  gen->add_option("--weight-min", params.weight_min, "minimum task weight")->capture_default_str();
  gen->add_option("--weight-max", params.weight_max, "maximum task weight")->capture_default_str();
  gen->add_option("--ccr", params.ccr, "communication-to-computation ratio")
      ->capture_default_str();
  gen->add_flag("--constrain", params.constrain_outdegree,
                "enforce out-degree(pred) >= out-degree(succ) on every edge");
  gen->add_option("-t,--topology", gen_topology, "topology JSON (default: built-in reference)");
  gen->add_option("-o,--out", gen_out, "output graph JSON")->capture_default_str();

  // schedule
  auto* sch = app.add_subcommand("schedule", "Schedule a task graph onto a topology");
  std::string sch_graph, sch_topology, sch_variant = "HVLB_CC_B", sch_out_dir = ".";
  double alpha_stop = 20.0, alpha_step = 0.01;
  sch->add_option("-g,--graph", sch_graph, "task graph JSON")->required();
  sch->add_option("-t,--topology", sch_topology, "topology JSON (default: built-in reference)");
  sch->add_option("--variant", sch_variant, "HSV_CC | HVLB_CC_A | HVLB_CC_B")
      ->capture_default_str();
  auto* stop_opt = sch->add_option("--alpha-stop", alpha_stop, "alpha sweep upper bound")
                       ->capture_default_str();
  auto* step_opt = sch->add_option("--alpha-step", alpha_step, "alpha sweep step")
                       ->capture_default_str();
  sch->add_option("-o,--out-dir", sch_out_dir, "output directory")->capture_default_str();

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a built-in experiment (exp1..exp5)");
  std::string exp_id;
  spgsched::ExperimentOptions opt;
  opt.alpha_step = 0.1;  // coarser default grid for batch runs
  exp->add_option("id", exp_id, "experiment id: exp1 exp2 exp3 exp4 exp5")->required();
  exp->add_option("-o,--out-dir", opt.out_dir, "output directory")->capture_default_str();
  exp->add_option("--graphs-per-cell", opt.graphs_per_cell, "random graphs per cell")
      ->capture_default_str();
  exp->add_option("--batch", opt.exp4_graphs, "graph count for the failure-rate experiment")
      ->capture_default_str();
  exp->add_option("--seed", opt.seed, "base seed")->capture_default_str();
  exp->add_option("--alpha-stop", opt.alpha_stop, "alpha sweep upper bound")
      ->capture_default_str();
  exp->add_option("--alpha-step", opt.alpha_step, "alpha sweep step")->capture_default_str();
  exp->add_option("--workers", opt.workers, "worker threads (0: SPGSCHED_WORKERS or all cores)")
      ->capture_default_str();

  // gantt
  auto* gan = app.add_subcommand("gantt", "Render a schedule JSON as an SVG gantt chart");
  std::string gantt_schedule, gantt_out = "gantt.svg";
  gan->add_option("-s,--schedule", gantt_schedule, "schedule JSON")->required();
  gan->add_option("-o,--out", gantt_out, "output SVG")->capture_default_str();

  // validate
  auto* val = app.add_subcommand("validate", "Check a schedule against graph and topology");
  std::string val_schedule, val_graph, val_topology;
  val->add_option("-s,--schedule", val_schedule, "schedule JSON")->required();
  val->add_option("-g,--graph", val_graph, "task graph JSON")->required();
  val->add_option("-t,--topology", val_topology, "topology JSON (default: built-in reference)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // help/version exit 0, any parse problem exits 1
  }

  try {
    if (gen->parsed()) {
      params.seed = gen_seed;
      return cmd_generate(params, gen_topology, gen_out);
    }
    if (sch->parsed()) {
      const bool grid_given = stop_opt->count() > 0 || step_opt->count() > 0;
      return cmd_schedule(sch_graph, sch_topology, sch_variant, alpha_stop, alpha_step, grid_given,
                          sch_out_dir);
    }
    if (exp->parsed()) {
      if (opt.graphs_per_cell < 1 || opt.exp4_graphs < 1)
        throw usage_error("cell and batch sizes must be >= 1");
      if (opt.alpha_step <= 0.0) throw usage_error("--alpha-step must be positive");
      if (exp_id != "exp1" && exp_id != "exp2" && exp_id != "exp3" && exp_id != "exp4" &&
          exp_id != "exp5")
        throw usage_error("unknown experiment '" + exp_id + "' (expected exp1..exp5)");
      return cmd_experiment(exp_id, opt);
    }
    if (gan->parsed()) return cmd_gantt(gantt_schedule, gantt_out);
    if (val->parsed()) return cmd_validate(val_schedule, val_graph, val_topology);
    std::fprintf(stderr, "no subcommand\n");
    return 1;
  } catch (const usage_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const spgsched::parse_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const spgsched::graph_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const spgsched::network_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const spgsched::error& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  }
}
