#pragma once

#include <string>
#include <vector>

namespace omdlab {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "x";
  std::string y_label = "y";
  bool log_x = false;
  bool log_y = false;
};

/// Renders a self-contained 800x600 SVG line plot: axes with tick labels,
/// one polyline per series, a small legend. Returns the document text.
std::string render_line_plot(const std::vector<PlotSeries>& series, const PlotOptions& options);

void write_line_plot(const std::string& path, const std::vector<PlotSeries>& series,
                     const PlotOptions& options);

}  // namespace omdlab
