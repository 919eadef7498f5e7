#pragma once

// Gantt rendering: one SVG row per processor and per link, task and message
// reservations as bars on a shared time axis. Pure text generation — output
// is byte-identical for identical schedules.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "spgsched/io.hpp"
#include "spgsched/scheduler.hpp"

namespace spgsched {

namespace detail {

inline std::string svg_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

// Tick step of the form 1/2/5 * 10^k giving <= 12 ticks over span.
inline double tick_step(double span) {
  if (span <= 0.0) return 1.0;
  double step = std::pow(10.0, std::floor(std::log10(span)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (span / (step * m) <= 12.0) return step * m;
  }
  return step * 10.0;
}

}  // namespace detail

inline std::string render_gantt(const Schedule& s) {
  const double left = 90.0, top = 34.0, row_h = 26.0, row_gap = 6.0, plot_w = 840.0;
  const double span = std::max(s.makespan, 1e-9);
  const double scale = plot_w / span;

  std::vector<std::string> rows;  // processor rows then link rows
  for (const auto& p : s.processors) rows.push_back(p);
  std::vector<std::string> links;
  for (const auto& m : s.messages)
    for (const auto& iv : m.links)
      if (std::find(links.begin(), links.end(), iv.link) == links.end()) links.push_back(iv.link);
  std::sort(links.begin(), links.end(), NaturalLess{});
  const std::size_t proc_rows = rows.size();
  for (const auto& l : links) rows.push_back(l);

  auto row_y = [&](std::size_t r) { return top + static_cast<double>(r) * (row_h + row_gap); };
  const double height = row_y(rows.size()) + 24.0;

  std::string svg;
  auto num = [](double v) { return format_number(v, "%.6g"); };
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"" +
         num(height) + "\" viewBox=\"0 0 960 " + num(height) + "\" font-family=\"sans-serif\">\n";
  svg += "<rect width=\"960\" height=\"" + num(height) + "\" fill=\"#ffffff\"/>\n";

  // Time axis with ticks.
  const double axis_y = top - 8.0;
  svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(axis_y) + "\" x2=\"" + num(left + plot_w) +
         "\" y2=\"" + num(axis_y) + "\" stroke=\"#444444\"/>\n";
  const double step = detail::tick_step(span);
  for (double t = 0.0; t <= span + 1e-9; t += step) {
    const double x = left + t * scale;
    svg += "<line x1=\"" + num(x) + "\" y1=\"" + num(axis_y - 4) + "\" x2=\"" + num(x) +
           "\" y2=\"" + num(axis_y) + "\" stroke=\"#444444\"/>\n";
    svg += "<text x=\"" + num(x) + "\" y=\"" + num(axis_y - 7) +
           "\" font-size=\"10\" text-anchor=\"middle\" fill=\"#333333\">" + num(t) + "</text>\n";
  }

  // Row labels and baselines.
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double y = row_y(r);
    svg += "<text x=\"" + num(left - 8) + "\" y=\"" + num(y + row_h * 0.68) +
           "\" font-size=\"12\" text-anchor=\"end\" fill=\"#222222\">" +
           detail::svg_escape(rows[r]) + "</text>\n";
    svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(y + row_h) + "\" x2=\"" +
           num(left + plot_w) + "\" y2=\"" + num(y + row_h) + "\" stroke=\"#dddddd\"/>\n";
  }

  auto add_bar = [&](std::size_t row, double t0, double t1, const std::string& fill,
                     const std::string& label) {
    const double x = left + t0 * scale;
    const double w = std::max((t1 - t0) * scale, 0.5);
    const double y = row_y(row) + 3.0;
    svg += "<rect class=\"bar\" x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) +
           "\" height=\"" + num(row_h - 6.0) + "\" fill=\"" + fill +
           "\" stroke=\"#333333\" stroke-width=\"0.5\"/>\n";
    if ((t1 - t0) * scale > 18.0)
      svg += "<text x=\"" + num(x + w / 2.0) + "\" y=\"" + num(y + (row_h - 6.0) * 0.72) +
             "\" font-size=\"10\" text-anchor=\"middle\" fill=\"#ffffff\">" +
             detail::svg_escape(label) + "</text>\n";
  };

  for (const auto& t : s.tasks) {
    std::size_t row = 0;
    for (; row < proc_rows; ++row)
      if (rows[row] == t.processor) break;
    if (row < proc_rows) add_bar(row, t.start, t.finish, "#4e79a7", t.id);
  }
  for (const auto& m : s.messages) {
    for (const auto& iv : m.links) {
      if (iv.finish <= iv.start) continue;
      std::size_t row = proc_rows;
      for (; row < rows.size(); ++row)
        if (rows[row] == iv.link) break;
      if (row < rows.size()) add_bar(row, iv.start, iv.finish, "#f28e2b", m.src + ">" + m.dst);
    }
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace spgsched
