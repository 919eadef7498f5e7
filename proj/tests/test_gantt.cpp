#include "doctest.h"

#include <string>
#include <vector>

#include "spgsched/charts.hpp"
#include "spgsched/fixtures.hpp"
#include "spgsched/gantt.hpp"
#include "spgsched/graph.hpp"
#include "spgsched/network.hpp"
#include "spgsched/scheduler.hpp"

using namespace spgsched;

namespace {

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

int count_of(const std::string& haystack, const std::string& needle) {
  int n = 0;
  for (std::size_t at = haystack.find(needle); at != std::string::npos;
       at = haystack.find(needle, at + needle.size()))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("gantt svg contains every task, processor, and used link") {
  const Topology topo = fixtures::reference_topology();
  const TaskGraph g = fixtures::reference_graph(topo);
  const StructureIndex st = derive_structure(g);
  const ScheduleOutcome out = schedule_once(g, st, topo, Variant::hsv_cc, 0.0);
  REQUIRE(out.ok());
  const Schedule& s = *out.schedule;

  const std::string svg = render_gantt(s);
  CHECK(contains(svg, "<svg xmlns=\"http://www.w3.org/2000/svg\""));
  CHECK(contains(svg, "</svg>"));
  for (const auto& p : s.processors) CHECK(contains(svg, ">" + p + "</text>"));
  for (const auto& t : s.tasks) CHECK(contains(svg, ">" + t.id + "</text>"));
  for (const auto& m : s.messages)
    for (const auto& iv : m.links)
      if (iv.finish > iv.start) CHECK(contains(svg, ">" + iv.link + "</text>"));

  // One bar per task plus one per positive link reservation.
  int reservations = 0;
  for (const auto& m : s.messages)
    for (const auto& iv : m.links)
      if (iv.finish > iv.start) ++reservations;
  CHECK(count_of(svg, "class=\"bar\"") == static_cast<int>(s.tasks.size()) + reservations);

  CHECK(render_gantt(s) == svg);  // pure text generation, byte-identical
}

TEST_CASE("gantt escapes markup in identifiers") {
  Schedule s;
  s.makespan = 4.0;
  s.processors = {"p<a>&b"};
  s.tasks = {{"t<1>", "p<a>&b", 0.0, 4.0}};
  const std::string svg = render_gantt(s);
  CHECK(contains(svg, "p&lt;a&gt;&amp;b"));
  CHECK(contains(svg, "t&lt;1&gt;"));
  CHECK(!contains(svg, "p<a>"));
}

TEST_CASE("axis tick step stays readable") {
  CHECK(detail::tick_step(10.0) == doctest::Approx(10.0));
  CHECK(detail::tick_step(63.8) == doctest::Approx(10.0));
  CHECK(detail::tick_step(0.9) == doctest::Approx(0.1));
  CHECK(detail::tick_step(120.0) == doctest::Approx(100.0));
  CHECK(detail::tick_step(0.0) == doctest::Approx(1.0));
  for (double span : {0.3, 7.0, 55.0, 999.0}) {
    const double step = detail::tick_step(span);
    CHECK(span / step <= 12.0 + 1e-9);
  }
}

TEST_CASE("curve chart lists series names and axis labels") {
  std::vector<CurveSeries> series = {
      {"HSV_CC", {{10, 1.2}, {20, 1.4}, {30, 1.5}}},
      {"HVLB_CC_A", {{10, 1.1}, {20, 1.3}, {30, 1.45}}},
  };
  const std::string svg = render_curves(series, "Mean SLR vs task count", "tasks", "SLR");
  CHECK(contains(svg, "<svg"));
  CHECK(contains(svg, "Mean SLR vs task count"));
  CHECK(contains(svg, "HSV_CC"));
  CHECK(contains(svg, "HVLB_CC_A"));
  CHECK(contains(svg, ">tasks</text>"));
  CHECK(contains(svg, ">SLR</text>"));
  CHECK(count_of(svg, "<polyline") == 2);
  CHECK(render_curves(series, "Mean SLR vs task count", "tasks", "SLR") == svg);

  const std::string empty = render_curves({}, "t", "x", "y");
  CHECK(contains(empty, "</svg>"));
  CHECK(count_of(empty, "<polyline") == 0);
}
