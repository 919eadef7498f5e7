#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "spgsched/fixtures.hpp"
#include "spgsched/generator.hpp"
#include "spgsched/graph.hpp"
#include "spgsched/imprecise.hpp"
#include "spgsched/network.hpp"
#include "spgsched/scheduler.hpp"
#include "spgsched/validate_schedule.hpp"

using namespace spgsched;

TEST_CASE("diamond schedule holes by hand") {
  const Topology topo = fixtures::diamond_topology();
  const TaskGraph g = fixtures::diamond_graph();
  const StructureIndex st = derive_structure(g);
  const ScheduleOutcome out = schedule_once(g, st, topo, Variant::hsv_cc, 0.0);
  REQUIRE(out.ok());
  const Schedule& s = *out.schedule;

  const HoleReport hr = find_holes(s, g, st, topo);
  REQUIRE(hr.holes.size() == 4);
  CHECK(hr.find("t1")->hole == doctest::Approx(0.0));
  CHECK(hr.find("t2")->hole == doctest::Approx(1.0));  // gap before t4 on pb
  CHECK(hr.find("t3")->hole == doctest::Approx(0.0));  // its message is pinned
  CHECK(hr.find("t4")->hole == doctest::Approx(0.0));  // exit flush with makespan

  // t2's slack comes from the same-processor condition; no cross successor
  CHECK(hr.find("t2")->condition1.has_value());
  CHECK(hr.find("t2")->condition1.value() == doctest::Approx(1.0));
  CHECK_FALSE(hr.find("t2")->condition2.has_value());
  // t3's only successor is off-processor: condition 2 pins it at zero
  CHECK(hr.find("t3")->condition2.has_value());
  CHECK(hr.find("t3")->condition2.value() == doctest::Approx(0.0));
}

TEST_CASE("message deferral limit in a hand-built schedule") {
  // pa --m1(speed 2)-- s --m2(speed 1)-- pb, and pc --m3(speed 1)-- s.
  Topology topo;
  topo.processors = {{"pa", 1.0}, {"pb", 1.0}, {"pc", 1.0}};
  topo.switches = {{"s"}};
  topo.links = {{"m1", "pa", "s", 2.0}, {"m2", "s", "pb", 1.0}, {"m3", "pc", "s", 1.0}};
  build_routes(topo);

  TaskGraph g;
  g.period = 50.0;
  g.tasks = {{"u1", 2}, {"u2", 1}, {"v1", 0}, {"v2", 1}};
  g.edges = {{"u1", "u2", 4}, {"v1", "v2", 5}};
  g.sort_canonical();
  const StructureIndex st = derive_structure(g);

  Schedule s;
  s.alpha = 0.0;
  s.processors = {"pa", "pb", "pc"};
  s.tasks = {{"u1", "pa", 0.0, 2.0},
             {"u2", "pb", 9.0, 10.0},
             {"v1", "pc", 0.0, 0.0},
             {"v2", "pb", 5.0, 6.0}};
  s.messages = {{"u1", "u2", "pa", "pb", 4.0, {"m1", "m2"},
                 {{"m1", 2.0, 4.0}, {"m2", 5.0, 9.0}}},
                {"v1", "v2", "pc", "pb", 5.0, {"m3", "m2"},
                 {{"m3", 0.0, 5.0}, {"m2", 0.0, 5.0}}}};
  s.makespan = 10.0;
  REQUIRE(validate_schedule(s, g, st, topo).empty());

  const HoleReport hr = find_holes(s, g, st, topo);
  // u1 can defer its message chain until the final-link start hits 5, because
  // the arrival at 9 must not move: m2 needs 4 units, so LST'' = 9 - 4 = 5.
  CHECK(hr.find("u1")->hole == doctest::Approx(3.0));
  // v1's message already finishes exactly at v2's start with zero slack
  CHECK(hr.find("v1")->hole == doctest::Approx(0.0));
  // u2 is an exit flush with the makespan
  CHECK(hr.find("u2")->hole == doctest::Approx(0.0));
  // v2 runs until 6; the next task on pb starts at 9
  CHECK(hr.find("v2")->hole == doctest::Approx(3.0));

  // the re-simulation oracle agrees, and the boundary is sharp
  for (const auto& h : hr.holes) {
    CHECK(oracle::hole_by_search(s, g, st, topo, h.task) ==
          doctest::Approx(h.hole).epsilon(1e-6));
    CHECK(oracle::hole_feasible(s, g, st, topo, h.task, h.hole));
    CHECK_FALSE(oracle::hole_feasible(s, g, st, topo, h.task, h.hole + 1e-3));
  }
}

TEST_CASE("holes match the re-simulation oracle on generated schedules") {
  const Topology topo = fixtures::reference_topology();
  for (std::uint64_t seed : {2u, 9u, 31u, 44u}) {
    GeneratorParams params;
    params.task_count = 9;
    params.seed = seed;
    params.constrain_outdegree = true;
    const TaskGraph g = generate_random(params, topo);
    const StructureIndex st = derive_structure(g);
    const ScheduleOutcome out =
        schedule_once(g, st, topo, Variant::hvlb_cc_b, seed % 2 ? 1.5 : 0.0);
    REQUIRE(out.ok());
    const Schedule& s = *out.schedule;
    REQUIRE(validate_schedule(s, g, st, topo).empty());
    const HoleReport hr = find_holes(s, g, st, topo);
    for (const auto& h : hr.holes) {
      CAPTURE(seed);
      CAPTURE(h.task);
      CHECK(oracle::hole_by_search(s, g, st, topo, h.task) ==
            doctest::Approx(h.hole).epsilon(1e-6));
      CHECK(oracle::hole_feasible(s, g, st, topo, h.task, h.hole));
      if (h.hole > 1e-3)
        CHECK_FALSE(oracle::hole_feasible(s, g, st, topo, h.task, h.hole + 1e-3));
    }
  }
}

TEST_CASE("frozen holes of the imprecise ten-task example") {
  const Topology topo = fixtures::reference_topology();
  const TaskGraph g = fixtures::imprecise_graph(topo);
  const StructureIndex st = derive_structure(g);
  const ScheduleOutcome out = schedule_once(g, st, topo, Variant::hvlb_cc_b, 0.0);
  REQUIRE(out.ok());
  const Schedule& s = *out.schedule;
  REQUIRE(validate_schedule(s, g, st, topo).empty());
  CHECK(s.makespan == doctest::Approx(89.935910942292).epsilon(1e-9));

  // regression values computed from this repository's frozen fixture
  const HoleReport hr = find_holes(s, g, st, topo);
  CHECK(hr.find("n2")->hole == doctest::Approx(10.049846593950).epsilon(1e-9));
  CHECK(hr.find("n5")->hole == doctest::Approx(5.089342162691).epsilon(1e-9));
  CHECK(hr.find("n8")->hole == doctest::Approx(2.796722185651).epsilon(1e-9));
  CHECK(hr.find("n10")->hole == doctest::Approx(3.588907537723).epsilon(1e-9));
  for (const char* id : {"n1", "n3", "n4", "n6", "n7", "n9"})
    CHECK(hr.find(id)->hole == doctest::Approx(0.0));

  // the imprecise tasks sit on the unit-rate processor: mp 17 and 11
  CHECK(s.find_task("n2")->processor == "p2");
  CHECK(s.find_task("n5")->processor == "p2");
}

TEST_CASE("precision simulation on the diamond") {
  const Topology topo = fixtures::diamond_topology();
  TaskGraph g = fixtures::diamond_graph();
  for (auto& t : g.tasks)
    if (t.id == "t2") t.imprecise = true;
  const StructureIndex st = derive_structure(g);
  const ScheduleOutcome out = schedule_once(g, st, topo, Variant::hsv_cc, 0.0);
  REQUIRE(out.ok());
  const HoleReport hr = find_holes(*out.schedule, g, st, topo);

  auto precision = [&](double lambda, bool ic) {
    const auto rows = simulate_precision(*out.schedule, g, hr, {lambda});
    for (const auto& r : rows)
      if (r.task == "t2" && r.ic == ic) return r.precision;
    FAIL("row missing");
    return 0.0;
  };

  // t2: mp = 3, hole = 1, so full precision holds through lambda* = 4/3
  CHECK(precision(1.0, false) == doctest::Approx(100.0));
  CHECK(precision(1.0, true) == doctest::Approx(100.0));
  CHECK(precision(1.2, true) == doctest::Approx(100.0));
  CHECK(precision(1.2, false) == doctest::Approx(100.0 / 1.2).epsilon(1e-12));
  CHECK(precision(4.0 / 3.0, true) == doctest::Approx(100.0));
  CHECK(precision(1.5, true) == doctest::Approx(100.0 * 4.0 / 4.5).epsilon(1e-12));
  CHECK(precision(1.5, false) == doctest::Approx(100.0 / 1.5).epsilon(1e-12));
  CHECK(precision(2.0, true) == doctest::Approx(100.0 * 4.0 / 6.0).epsilon(1e-12));

  for (double lambda : {1.0, 1.1, 1.4, 1.7, 2.0})
    CHECK(precision(lambda, true) >= precision(lambda, false));

  CHECK_THROWS_AS(simulate_precision(*out.schedule, g, hr, {0.9}), const error&);
}

TEST_CASE("frozen precision curve of the imprecise ten-task example") {
  const Topology topo = fixtures::reference_topology();
  const TaskGraph g = fixtures::imprecise_graph(topo);
  const StructureIndex st = derive_structure(g);
  const ScheduleOutcome out = schedule_once(g, st, topo, Variant::hvlb_cc_b, 0.0);
  REQUIRE(out.ok());
  const HoleReport hr = find_holes(*out.schedule, g, st, topo);

  std::vector<double> lambdas;
  for (int i = 0; i <= 10; ++i) lambdas.push_back(1.0 + 0.1 * i);
  const auto rows = simulate_precision(*out.schedule, g, hr, lambdas);
  REQUIRE(rows.size() == 2 * 2 * lambdas.size());

  for (const auto& r : rows) {
    const double mp = r.task == "n2" ? 17.0 : 11.0;
    const double hole = hr.find(r.task)->hole;
    CHECK(r.mp == doctest::Approx(mp).epsilon(1e-12));
    const double want = r.ic ? 100.0 * std::min(r.lambda * mp, mp + hole) / (r.lambda * mp)
                             : 100.0 / r.lambda;
    CHECK(r.precision == doctest::Approx(want).epsilon(1e-9));
  }

  auto at = [&](const char* task, double lambda, bool ic) {
    for (const auto& r : rows)
      if (r.task == task && r.ic == ic && std::abs(r.lambda - lambda) < 1e-12)
        return r.precision;
    FAIL("row missing");
    return 0.0;
  };
  // n2 keeps full precision through lambda 1.5 and degrades from 1.6 on;
  // n5 keeps it through 1.4 and degrades from 1.5 on
  CHECK(at("n2", 1.5, true) == doctest::Approx(100.0));
  CHECK(at("n2", 1.6, true) < 100.0);
  CHECK(at("n5", 1.4, true) == doctest::Approx(100.0));
  CHECK(at("n5", 1.5, true) < 100.0);
  CHECK(at("n2", 2.0, true) == doctest::Approx(79.558372335146).epsilon(1e-9));
  CHECK(at("n5", 2.0, true) == doctest::Approx(73.133373466777).epsilon(1e-9));
  CHECK(at("n5", 1.5, true) == doctest::Approx(97.511164622369).epsilon(1e-9));
}

TEST_CASE("zero mandatory part is rejected") {
  const Topology topo = fixtures::diamond_topology();
  TaskGraph g = fixtures::diamond_graph();
  g.tasks.push_back({"t0", 0});
  g.tasks.back().imprecise = true;
  g.edges.push_back({"t0", "t1", 0.0});
  g.sort_canonical();
  const StructureIndex st = derive_structure(g);
  const ScheduleOutcome out = schedule_once(g, st, topo, Variant::hvlb_cc_b, 0.0);
  REQUIRE(out.ok());
  const HoleReport hr = find_holes(*out.schedule, g, st, topo);
  CHECK_THROWS_AS(simulate_precision(*out.schedule, g, hr, {1.5}), const error&);
}
