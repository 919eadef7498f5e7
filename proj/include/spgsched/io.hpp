#pragma once

// File formats. Graphs, topologies, and schedules travel as JSON documents;
// canonical serialization (sorted tasks/edges, insertion-ordered keys,
// shortest round-trip numbers, trailing newline) makes store/load a byte-
// stable round trip. Metrics and sweep curves are CSV.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spgsched/graph.hpp"
#include "spgsched/network.hpp"
#include "spgsched/scheduler.hpp"

namespace spgsched {

using ordered_json = nlohmann::ordered_json;

inline std::string format_number(double v, const char* fmt = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw error(path + ": cannot write");
  out << body;
  if (!out) throw error(path + ": write failed");
}

inline ordered_json parse_json(const std::string& path) {
  try {
    return ordered_json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(path + ": " + e.what());
  }
}

template <typename T>
T require(const ordered_json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw parse_error(where + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(where + ": bad '" + key + "': " + e.what());
  }
}

// Rates and speeds accept plain numbers or exact fraction strings like "2/3",
// which keeps published rate sets exact instead of decimal approximations.
inline double number_or_fraction(const ordered_json& j, const std::string& key,
                                 const std::string& where) {
  if (!j.contains(key)) throw parse_error(where + ": missing '" + key + "'");
  const auto& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    const auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return std::stod(s);
      const double num = std::stod(s.substr(0, slash));
      const double den = std::stod(s.substr(slash + 1));
      if (den == 0.0) throw parse_error(where + ": zero denominator in '" + key + "'");
      return num / den;
    } catch (const std::invalid_argument&) {
      throw parse_error(where + ": unparsable number '" + s + "' in '" + key + "'");
    }
  }
  throw parse_error(where + ": '" + key + "' must be a number or fraction string");
}

}  // namespace detail

// ---- task graphs ----

inline ordered_json graph_to_json(const TaskGraph& g) {
  TaskGraph c = g;
  c.sort_canonical();
  ordered_json j;
  j["period"] = c.period;
  j["tasks"] = ordered_json::array();
  for (const auto& t : c.tasks) {
    ordered_json jt;
    jt["id"] = t.id;
    jt["weight"] = t.weight;
    if (t.imprecise) {
      jt["imprecise"] = true;
      jt["mandatory_fraction"] = t.mandatory_fraction;
    }
    j["tasks"].push_back(jt);
  }
  j["edges"] = ordered_json::array();
  for (const auto& e : c.edges) {
    ordered_json je;
    je["src"] = e.src;
    je["dst"] = e.dst;
    je["volume"] = e.volume;
    j["edges"].push_back(je);
  }
  return j;
}

inline TaskGraph graph_from_json(const ordered_json& j, const std::string& where) {
  TaskGraph g;
  g.period = detail::require<double>(j, "period", where);
  if (!j.contains("tasks") || !j.at("tasks").is_array())
    throw parse_error(where + ": missing 'tasks' array");
  int idx = 0;
  for (const auto& jt : j.at("tasks")) {
    const std::string at = where + ": task " + std::to_string(idx++);
    Task t;
    t.id = detail::require<std::string>(jt, "id", at);
    t.weight = detail::require<double>(jt, "weight", at);
    if (jt.contains("imprecise")) t.imprecise = jt.at("imprecise").get<bool>();
    if (jt.contains("mandatory_fraction"))
      t.mandatory_fraction = jt.at("mandatory_fraction").get<double>();
    g.tasks.push_back(std::move(t));
  }
  idx = 0;
  if (j.contains("edges")) {
    for (const auto& je : j.at("edges")) {
      const std::string at = where + ": edge " + std::to_string(idx++);
      Edge e;
      e.src = detail::require<std::string>(je, "src", at);
      e.dst = detail::require<std::string>(je, "dst", at);
      e.volume = detail::require<double>(je, "volume", at);
      if (g.task_index(e.src) < 0) throw parse_error(at + ": unknown task '" + e.src + "'");
      if (g.task_index(e.dst) < 0) throw parse_error(at + ": unknown task '" + e.dst + "'");
      g.edges.push_back(std::move(e));
    }
  }
  return g;
}

inline TaskGraph load_graph(const std::string& path) {
  return graph_from_json(detail::parse_json(path), path);
}

inline void store_graph(const TaskGraph& g, const std::string& path) {
  detail::write_file(path, graph_to_json(g).dump(2) + "\n");
}

// ---- topologies ----

inline ordered_json topology_to_json(const Topology& t) {
  ordered_json j;
  j["processors"] = ordered_json::array();
  for (const auto& p : t.processors) {
    ordered_json jp;
    jp["id"] = p.id;
    jp["rate"] = p.rate;
    j["processors"].push_back(jp);
  }
  j["switches"] = ordered_json::array();
  for (const auto& s : t.switches) {
    ordered_json js;
    js["id"] = s.id;
    j["switches"].push_back(js);
  }
  j["links"] = ordered_json::array();
  for (const auto& l : t.links) {
    ordered_json jl;
    jl["id"] = l.id;
    jl["a"] = l.a;
    jl["b"] = l.b;
    jl["speed"] = l.speed;
    j["links"].push_back(jl);
  }
  return j;
}

inline Topology topology_from_json(const ordered_json& j, const std::string& where) {
  Topology t;
  if (!j.contains("processors") || !j.at("processors").is_array())
    throw parse_error(where + ": missing 'processors' array");
  int idx = 0;
  for (const auto& jp : j.at("processors")) {
    const std::string at = where + ": processor " + std::to_string(idx++);
    Processor p;
    p.id = detail::require<std::string>(jp, "id", at);
    p.rate = detail::number_or_fraction(jp, "rate", at);
    t.processors.push_back(std::move(p));
  }
  if (j.contains("switches")) {
    idx = 0;
    for (const auto& js : j.at("switches")) {
      const std::string at = where + ": switch " + std::to_string(idx++);
      t.switches.push_back({detail::require<std::string>(js, "id", at)});
    }
  }
  idx = 0;
  if (j.contains("links")) {
    for (const auto& jl : j.at("links")) {
      const std::string at = where + ": link " + std::to_string(idx++);
      Link l;
      l.id = detail::require<std::string>(jl, "id", at);
      l.a = detail::require<std::string>(jl, "a", at);
      l.b = detail::require<std::string>(jl, "b", at);
      l.speed = detail::number_or_fraction(jl, "speed", at);
      t.links.push_back(std::move(l));
    }
  }
  return t;
}

inline Topology load_topology(const std::string& path) {
  Topology t = topology_from_json(detail::parse_json(path), path);
  build_routes(t);
  return t;
}

inline void store_topology(const Topology& t, const std::string& path) {
  detail::write_file(path, topology_to_json(t).dump(2) + "\n");
}

// ---- schedules ----

inline ordered_json schedule_to_json(const Schedule& s) {
  ordered_json j;
  j["alpha"] = s.alpha;
  j["makespan"] = s.makespan;
  j["processors"] = s.processors;
  j["tasks"] = ordered_json::array();
  for (const auto& t : s.tasks) {
    ordered_json jt;
    jt["id"] = t.id;
    jt["processor"] = t.processor;
    jt["start"] = t.start;
    jt["finish"] = t.finish;
    j["tasks"].push_back(jt);
  }
  j["messages"] = ordered_json::array();
  for (const auto& m : s.messages) {
    ordered_json jm;
    jm["src"] = m.src;
    jm["dst"] = m.dst;
    jm["src_proc"] = m.src_proc;
    jm["dst_proc"] = m.dst_proc;
    jm["volume"] = m.volume;
    jm["route"] = m.route;
    jm["links"] = ordered_json::array();
    for (const auto& iv : m.links) {
      ordered_json jl;
      jl["link"] = iv.link;
      jl["start"] = iv.start;
      jl["finish"] = iv.finish;
      jm["links"].push_back(jl);
    }
    j["messages"].push_back(jm);
  }
  return j;
}

inline Schedule schedule_from_json(const ordered_json& j, const std::string& where) {
  Schedule s;
  s.alpha = detail::require<double>(j, "alpha", where);
  s.makespan = detail::require<double>(j, "makespan", where);
  if (j.contains("processors")) s.processors = j.at("processors").get<std::vector<std::string>>();
  int idx = 0;
  if (j.contains("tasks")) {
    for (const auto& jt : j.at("tasks")) {
      const std::string at = where + ": task " + std::to_string(idx++);
      ScheduledTask t;
      t.id = detail::require<std::string>(jt, "id", at);
      t.processor = detail::require<std::string>(jt, "processor", at);
      t.start = detail::require<double>(jt, "start", at);
      t.finish = detail::require<double>(jt, "finish", at);
      s.tasks.push_back(std::move(t));
    }
  }
  idx = 0;
  if (j.contains("messages")) {
    for (const auto& jm : j.at("messages")) {
      const std::string at = where + ": message " + std::to_string(idx++);
      MessageSchedule m;
      m.src = detail::require<std::string>(jm, "src", at);
      m.dst = detail::require<std::string>(jm, "dst", at);
      m.src_proc = detail::require<std::string>(jm, "src_proc", at);
      m.dst_proc = detail::require<std::string>(jm, "dst_proc", at);
      m.volume = detail::require<double>(jm, "volume", at);
      if (jm.contains("route")) m.route = jm.at("route").get<std::vector<std::string>>();
      if (jm.contains("links")) {
        for (const auto& jl : jm.at("links")) {
          LinkInterval iv;
          iv.link = detail::require<std::string>(jl, "link", at);
          iv.start = detail::require<double>(jl, "start", at);
          iv.finish = detail::require<double>(jl, "finish", at);
          m.links.push_back(std::move(iv));
        }
      }
      s.messages.push_back(std::move(m));
    }
  }
  return s;
}

inline Schedule load_schedule(const std::string& path) {
  return schedule_from_json(detail::parse_json(path), path);
}

inline void store_schedule(const Schedule& s, const std::string& path) {
  detail::write_file(path, schedule_to_json(s).dump(2) + "\n");
}

// ---- CSV ----

inline std::string csv_row(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) row += ',';
    row += cells[i];
  }
  row += '\n';
  return row;
}

inline void store_text(const std::string& body, const std::string& path) {
  detail::write_file(path, body);
}

}  // namespace spgsched
