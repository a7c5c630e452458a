#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "ctop/instance.hpp"
#include "ctop/solution.hpp"

namespace ctop {

namespace svg_detail {

inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline const std::vector<std::string>& route_palette() {
  static const std::vector<std::string> colours = {
      "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
  };
  return colours;
}

}  // namespace svg_detail

// Renders the team's routes over the vertex lattice: one polyline per robot
// (carrying its vertex ids in a data attribute), dots for sampling vertices,
// distinct start/finish markers, and a caption with utility and wall time.
inline std::string render_solution_svg(const ProblemInstance& inst,
                                       const std::vector<std::vector<int>>& paths,
                                       double utility, double wall_time_s) {
  using svg_detail::num;
  const double view = 640.0;
  const double margin = 40.0;
  const double caption_height = 40.0;

  double min_x = inst.vertices.front().x, max_x = min_x;
  double min_y = inst.vertices.front().y, max_y = min_y;
  for (const Vertex& v : inst.vertices) {
    min_x = std::min(min_x, v.x);
    max_x = std::max(max_x, v.x);
    min_y = std::min(min_y, v.y);
    max_y = std::max(max_y, v.y);
  }
  const double span_x = std::max(max_x - min_x, 1e-9);
  const double span_y = std::max(max_y - min_y, 1e-9);
  const double scale = (view - 2.0 * margin) / std::max(span_x, span_y);

  const auto px = [&](double x) { return margin + (x - min_x) * scale; };
  // Flip the vertical axis so increasing world y points up in the image.
  const auto py = [&](double y) { return view - margin - (y - min_y) * scale; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(view) +
         "\" height=\"" + num(view + caption_height) + "\" viewBox=\"0 0 " +
         num(view) + " " + num(view + caption_height) + "\">\n";
  out += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (const Vertex& v : inst.vertices) {
    if (!inst.is_sampling(v.id)) continue;
    out += "  <circle cx=\"" + num(px(v.x)) + "\" cy=\"" + num(py(v.y)) +
           "\" r=\"4\" fill=\"#888888\"/>\n";
  }

  const auto& palette = svg_detail::route_palette();
  for (std::size_t k = 0; k < paths.size(); ++k) {
    const std::vector<int>& path = paths[k];
    if (path.empty()) continue;
    std::string points;
    std::string ids;
    for (std::size_t t = 0; t < path.size(); ++t) {
      const Vertex& v = inst.vertices[static_cast<std::size_t>(path[t])];
      if (t) {
        points += ' ';
        ids += ' ';
      }
      points += num(px(v.x)) + "," + num(py(v.y));
      ids += std::to_string(path[t]);
    }
    out += "  <polyline data-robot=\"" + std::to_string(k) +
           "\" data-vertex-ids=\"" + ids + "\" points=\"" + points +
           "\" fill=\"none\" stroke=\"" + palette[k % palette.size()] +
           "\" stroke-width=\"2.5\"/>\n";
  }

  const Vertex& start = inst.vertices[static_cast<std::size_t>(inst.start_id)];
  const Vertex& finish = inst.vertices[static_cast<std::size_t>(inst.finish_id)];
  out += "  <rect id=\"start-marker\" x=\"" + num(px(start.x) - 6.0) + "\" y=\"" +
         num(py(start.y) - 6.0) +
         "\" width=\"12\" height=\"12\" fill=\"#2ca02c\" stroke=\"black\"/>\n";
  out += "  <circle id=\"finish-marker\" cx=\"" + num(px(finish.x)) + "\" cy=\"" +
         num(py(finish.y)) + "\" r=\"7\" fill=\"#d62728\" stroke=\"black\"/>\n";

  out += "  <text x=\"" + num(margin) + "\" y=\"" + num(view + 25.0) +
         "\" font-family=\"sans-serif\" font-size=\"16\">The gathered utility is " +
         num(utility) + " and the time to calculate is " + num(wall_time_s) +
         " seconds.</text>\n";
  out += "</svg>\n";
  return out;
}

inline std::string render_solution_svg(const ProblemInstance& inst,
                                       const TeamSolution& sol,
                                       double wall_time_s) {
  return render_solution_svg(inst, sol.paths, sol.utility, wall_time_s);
}

// Pulls every polyline's vertex ids back out of a rendered image, in robot
// order. Used to confirm a plot matches the solution it was drawn from.
inline std::vector<std::vector<int>> svg_path_ids(const std::string& svg) {
  std::vector<std::vector<int>> out;
  const std::string marker = "data-vertex-ids=\"";
  std::size_t pos = 0;
  while ((pos = svg.find(marker, pos)) != std::string::npos) {
    pos += marker.size();
    const std::size_t end = svg.find('"', pos);
    std::vector<int> ids;
    std::size_t cursor = pos;
    while (cursor < end) {
      ids.push_back(std::stoi(svg.substr(cursor, end - cursor)));
      const std::size_t space = svg.find(' ', cursor);
      if (space == std::string::npos || space >= end) break;
      cursor = space + 1;
    }
    out.push_back(std::move(ids));
    pos = end;
  }
  return out;
}

}  // namespace ctop
