#pragma once

// Minimal deterministic SVG line charts for experiment curves
// (metric vs task count, makespan vs alpha, precision vs arrival rate).

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "spgsched/gantt.hpp"  // svg_escape, tick_step, format_number

namespace spgsched {

struct CurveSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

inline std::string render_curves(const std::vector<CurveSeries>& series, const std::string& title,
                                 const std::string& xlabel, const std::string& ylabel) {
  const double left = 70.0, top = 40.0, plot_w = 760.0, plot_h = 360.0;
  const double width = 960.0, height = top + plot_h + 60.0;

  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  bool first = true;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (first) {
        xmin = xmax = x;
        ymin = ymax = y;
        first = false;
      } else {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
    }
  }
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-12) ymax = ymin + 1.0;
  ymin = std::min(ymin, 0.0);

  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
  auto py = [&](double y) { return top + plot_h - (y - ymin) / (ymax - ymin) * plot_h; };
  auto num = [](double v) { return format_number(v, "%.6g"); };

  static const char* palette[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759",
                                  "#b07aa1", "#76b7b2", "#edc948", "#9c755f"};

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
         num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) +
         "\" font-family=\"sans-serif\">\n";
  svg += "<rect width=\"" + num(width) + "\" height=\"" + num(height) + "\" fill=\"#ffffff\"/>\n";
  svg += "<text x=\"" + num(left + plot_w / 2) + "\" y=\"22\" font-size=\"15\" text-anchor=\"middle\" fill=\"#111111\">" +
         detail::svg_escape(title) + "</text>\n";

  // Axes and ticks.
  svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top + plot_h) + "\" x2=\"" +
         num(left + plot_w) + "\" y2=\"" + num(top + plot_h) + "\" stroke=\"#444444\"/>\n";
  svg += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" +
         num(top + plot_h) + "\" stroke=\"#444444\"/>\n";
  const double xstep = detail::tick_step(xmax - xmin);
  for (double x = std::ceil(xmin / xstep) * xstep; x <= xmax + 1e-9; x += xstep) {
    svg += "<line x1=\"" + num(px(x)) + "\" y1=\"" + num(top + plot_h) + "\" x2=\"" + num(px(x)) +
           "\" y2=\"" + num(top + plot_h + 5) + "\" stroke=\"#444444\"/>\n";
    svg += "<text x=\"" + num(px(x)) + "\" y=\"" + num(top + plot_h + 18) +
           "\" font-size=\"10\" text-anchor=\"middle\" fill=\"#333333\">" + num(x) + "</text>\n";
  }
  const double ystep = detail::tick_step(ymax - ymin);
  for (double y = std::ceil(ymin / ystep) * ystep; y <= ymax + 1e-9; y += ystep) {
    svg += "<line x1=\"" + num(left - 5) + "\" y1=\"" + num(py(y)) + "\" x2=\"" + num(left) +
           "\" y2=\"" + num(py(y)) + "\" stroke=\"#444444\"/>\n";
    svg += "<text x=\"" + num(left - 8) + "\" y=\"" + num(py(y) + 3) +
           "\" font-size=\"10\" text-anchor=\"end\" fill=\"#333333\">" + num(y) + "</text>\n";
  }
  svg += "<text x=\"" + num(left + plot_w / 2) + "\" y=\"" + num(height - 16) +
         "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#222222\">" +
         detail::svg_escape(xlabel) + "</text>\n";
  svg += "<text x=\"16\" y=\"" + num(top + plot_h / 2) +
         "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#222222\" transform=\"rotate(-90 16 " +
         num(top + plot_h / 2) + ")\">" + detail::svg_escape(ylabel) + "</text>\n";

  // Series lines and legend.
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = palette[i % (sizeof(palette) / sizeof(palette[0]))];
    std::string pts;
    for (const auto& [x, y] : series[i].points) {
      if (!pts.empty()) pts += ' ';
      pts += num(px(x)) + "," + num(py(y));
    }
    if (!pts.empty())
      svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
             "\" stroke-width=\"1.5\"/>\n";
    const double ly = top + 8.0 + static_cast<double>(i) * 16.0;
    svg += "<line x1=\"" + num(left + plot_w - 150) + "\" y1=\"" + num(ly) + "\" x2=\"" +
           num(left + plot_w - 126) + "\" y2=\"" + num(ly) + "\" stroke=\"" + color +
           "\" stroke-width=\"1.5\"/>\n";
    svg += "<text x=\"" + num(left + plot_w - 120) + "\" y=\"" + num(ly + 4) +
           "\" font-size=\"11\" fill=\"#222222\">" + detail::svg_escape(series[i].name) +
           "</text>\n";
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace spgsched
