#pragma once

#include <string>
#include <vector>

namespace robinlab::cli {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct Panel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  /// Plot log10 y when every finite value is positive.
  bool log_y = false;
};

/// Static SVG with the panels stacked vertically.
void write_svg(const std::string& path, const std::vector<Panel>& panels);

}  // namespace robinlab::cli
