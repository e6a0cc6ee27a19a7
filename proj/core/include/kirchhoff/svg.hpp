#pragma once

#include <span>
#include <string>
#include <vector>

#include "kirchhoff/model.hpp"

namespace kirchhoff {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = true;
  bool log_y = true;
  int width = 720;
  int height = 480;
};

/// Static SVG line chart. Nonpositive or undefined points are dropped on log axes.
std::string line_chart_svg(std::span<const PlotSeries> series, const ChartOptions& options);

struct RegimeCell {
  double gamma;
  double p;
  RegimeTag tag;
};

/// Colored (gamma, p) lattice with the p_gamma curve overlaid.
std::string regime_map_svg(std::span<const RegimeCell> cells, const std::string& title);

}  // namespace kirchhoff
