#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "spgsched/fixtures.hpp"
#include "spgsched/generator.hpp"
#include "spgsched/graph.hpp"
#include "spgsched/metrics.hpp"
#include "spgsched/network.hpp"
#include "spgsched/scheduler.hpp"

using namespace spgsched;

TEST_CASE("diamond metrics by hand") {
  const Topology topo = fixtures::diamond_topology();
  TaskGraph g = fixtures::diamond_graph();
  g.sort_canonical();
  const StructureIndex st = derive_structure(g);

  const std::vector<std::string> cp = critical_path(g, st, topo);
  CHECK(cp == std::vector<std::string>{"t1", "t3", "t4"});
  CHECK(critical_path_min_sum(g, st, topo) == doctest::Approx(8.0).epsilon(1e-12));

  const ScheduleOutcome out = schedule_once(g, st, topo, Variant::hsv_cc, 0.0);
  REQUIRE(out.ok());
  const MetricsReport r = compute_metrics(*out.schedule, g, st, topo);
  CHECK(r.makespan == doctest::Approx(9.5).epsilon(1e-12));
  CHECK(r.slr == doctest::Approx(9.5 / 8.0).epsilon(1e-12));        // 1.1875
  CHECK(r.speedup == doctest::Approx(11.0 / 9.5).epsilon(1e-12));   // one proc does all 11
  CHECK(r.avg == doctest::Approx(11.0 / 2.0).epsilon(1e-12));       // total busy over 2 procs
  CHECK(r.lb == doctest::Approx(9.5 / 5.5).epsilon(1e-12));         // 19/11
  CHECK(r.critical_path == cp);
}

TEST_CASE("frozen metrics of the ten-task example") {
  const Topology topo = fixtures::reference_topology();
  const TaskGraph g = fixtures::reference_graph(topo);
  const StructureIndex st = derive_structure(g);
  const ScheduleOutcome out = schedule_once(g, st, topo, Variant::hsv_cc, 0.0);
  REQUIRE(out.ok());
  const MetricsReport r = compute_metrics(*out.schedule, g, st, topo);
  CHECK(r.makespan == doctest::Approx(63.798030303030).epsilon(1e-9));
  CHECK(r.slr == doctest::Approx(1.203736420812).epsilon(1e-9));
  CHECK(r.speedup == doctest::Approx(1.677167766650).epsilon(1e-9));
  CHECK(r.lb == doctest::Approx(1.568804023845).epsilon(1e-9));
}

TEST_CASE("critical path matches exhaustive enumeration") {
  const Topology topo = fixtures::reference_topology();

  {
    const TaskGraph g = fixtures::reference_graph(topo);
    const StructureIndex st = derive_structure(g);
    const oracle::CpResult want = oracle::cp_enumerate(g, topo);
    CHECK(critical_path(g, st, topo) == want.path);
    CHECK(critical_path_min_sum(g, st, topo) == doctest::Approx(want.min_sum).epsilon(1e-9));
  }

  for (std::uint64_t seed : {3u, 11u, 27u, 58u, 91u}) {
    GeneratorParams params;
    params.task_count = 12;
    params.seed = seed;
    params.constrain_outdegree = (seed % 2 == 1);
    const TaskGraph g = generate_random(params, topo);
    const StructureIndex st = derive_structure(g);
    const oracle::CpResult want = oracle::cp_enumerate(g, topo);
    CAPTURE(seed);
    CHECK(critical_path(g, st, topo) == want.path);
    CHECK(critical_path_min_sum(g, st, topo) == doctest::Approx(want.min_sum).epsilon(1e-9));
  }
}

TEST_CASE("critical path breaks ties toward naturally smaller ids") {
  // Two equal-length branches; the natural order n2 < n10 decides.
  const Topology topo = fixtures::two_proc_topology();
  TaskGraph g;
  g.period = 100.0;
  g.tasks = {{"n1", 4}, {"n10", 6}, {"n2", 6}, {"n3", 4}};
  g.edges = {{"n1", "n10", 1}, {"n1", "n2", 1}, {"n10", "n3", 1}, {"n2", "n3", 1}};
  g.sort_canonical();
  const StructureIndex st = derive_structure(g);
  CHECK(critical_path(g, st, topo) == std::vector<std::string>{"n1", "n2", "n3"});
  CHECK(critical_path(g, st, topo) == oracle::cp_enumerate(g, topo).path);
}

TEST_CASE("metric identities hold on generated schedules") {
  const Topology topo = fixtures::reference_topology();
  const double nproc = static_cast<double>(topo.processors.size());
  int scheduled = 0;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    GeneratorParams params;
    params.task_count = 14;
    params.seed = 1000 + seed;
    params.constrain_outdegree = true;
    const TaskGraph g = generate_random(params, topo);
    const StructureIndex st = derive_structure(g);
    const ScheduleOutcome out = schedule_once(g, st, topo, Variant::hvlb_cc_b, 1.0);
    if (!out.ok()) continue;
    ++scheduled;
    const MetricsReport r = compute_metrics(*out.schedule, g, st, topo);
    CAPTURE(seed);
    CHECK(r.slr >= 1.0 - 1e-9);        // makespan covers the critical path
    CHECK(r.speedup <= nproc + 1e-9);  // bounded by processor count
    CHECK(r.speedup > 0.0);
    CHECK(r.lb >= 1.0 - 1e-9);         // makespan at least the mean busy time
    CHECK(r.avg > 0.0);
    CHECK(r.makespan == doctest::Approx(out.schedule->makespan));
  }
  CHECK(scheduled >= 8);  // the identity sweep must actually exercise schedules
}

TEST_CASE("batch failure rate") {
  CHECK(sfr(3, 8) == doctest::Approx(37.5).epsilon(1e-12));
  CHECK(sfr(0, 5) == doctest::Approx(0.0));
  CHECK(sfr(5, 5) == doctest::Approx(100.0).epsilon(1e-12));
  CHECK_THROWS_AS(sfr(1, 0), const error&);
}

TEST_CASE("degenerate inputs are rejected") {
  const Topology topo = fixtures::diamond_topology();
  TaskGraph g = fixtures::diamond_graph();
  g.sort_canonical();
  const StructureIndex st = derive_structure(g);
  const ScheduleOutcome out = schedule_once(g, st, topo, Variant::hsv_cc, 0.0);
  REQUIRE(out.ok());

  TaskGraph zero = g;
  for (auto& t : zero.tasks) t.weight = 0.0;
  const StructureIndex zst = derive_structure(zero);
  CHECK_THROWS_AS(slr(*out.schedule, zero, zst, topo), const error&);

  Schedule empty;
  CHECK_THROWS_AS(avg_busy(empty), const error&);
}
