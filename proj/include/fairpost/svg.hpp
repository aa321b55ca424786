#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "fairpost/errors.hpp"
#include "fairpost/pareto.hpp"

namespace fairpost {

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace detail

// Renders the loss/disparity frontier as a standalone SVG: measured disparity
// on x, rms loss on y, one dot per grid point. When a certified minimum
// tolerance is given, the certified side (d >= d_min) is shaded and the raw
// value is attached as a data-dmin attribute so tooling can read it back.
inline void write_frontier_svg(const std::string& path,
                               const std::vector<ParetoPoint>& points,
                               std::optional<double> certified_d_min = {}) {
  if (points.empty()) throw ValidationError("no frontier points to plot");

  const double width = 720, height = 480;
  const double ml = 80, mr = 25, mt = 35, mb = 60;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double xmax = 0, ymax = 0;
  for (const auto& p : points) {
    xmax = std::max(xmax, p.measured_disparity);
    ymax = std::max(ymax, p.l2_loss);
  }
  if (certified_d_min && std::isfinite(*certified_d_min))
    xmax = std::max(xmax, *certified_d_min);
  if (xmax <= 0) xmax = 1;
  if (ymax <= 0) ymax = 1;
  xmax *= 1.05;
  ymax *= 1.08;

  auto sx = [&](double x) { return ml + x / xmax * pw; };
  auto sy = [&](double y) { return mt + ph - y / ymax * ph; };

  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";

  if (certified_d_min && std::isfinite(*certified_d_min)) {
    const double bx = std::clamp(sx(*certified_d_min), ml, ml + pw);
    out << "<rect class=\"certified\" data-dmin=\""
        << detail::format_double(*certified_d_min) << "\" x=\"" << bx
        << "\" y=\"" << mt << "\" width=\"" << (ml + pw - bx) << "\" height=\""
        << ph << "\" fill=\"#8fd19e\" fill-opacity=\"0.35\"/>\n";
  }

  // axes and ticks
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
      << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = xmax * i / 5.0;
    const double yv = ymax * i / 5.0;
    out << "<line x1=\"" << sx(xv) << "\" y1=\"" << mt + ph << "\" x2=\""
        << sx(xv) << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << sx(xv) << "\" y=\"" << mt + ph + 20
        << "\" font-size=\"11\" text-anchor=\"middle\">"
        << detail::svg_num(xv) << "</text>\n";
    out << "<line x1=\"" << ml - 5 << "\" y1=\"" << sy(yv) << "\" x2=\"" << ml
        << "\" y2=\"" << sy(yv) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << sy(yv) + 4
        << "\" font-size=\"11\" text-anchor=\"end\">" << detail::svg_num(yv)
        << "</text>\n";
  }
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 15
      << "\" font-size=\"13\" text-anchor=\"middle\">measured disparity"
      << "</text>\n";
  out << "<text x=\"18\" y=\"" << mt + ph / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << mt + ph / 2 << ")\">rms loss</text>\n";

  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" "
         "points=\"";
  for (const auto& p : points)
    out << detail::svg_num(sx(p.measured_disparity)) << ','
        << detail::svg_num(sy(p.l2_loss)) << ' ';
  out << "\"/>\n";
  for (const auto& p : points)
    out << "<circle cx=\"" << detail::svg_num(sx(p.measured_disparity))
        << "\" cy=\"" << detail::svg_num(sy(p.l2_loss))
        << "\" r=\"3\" fill=\"#1f77b4\"/>\n";

  out << "</svg>\n";
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace fairpost
