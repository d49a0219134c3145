#pragma once

#include <string>
#include <vector>

namespace simploscore {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;  // scatter points instead of a polyline
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

// Standalone SVG document with axes, ticks, labels and a legend. No timestamps.
std::string render_svg(const PlotSpec& spec);

}  // namespace simploscore
