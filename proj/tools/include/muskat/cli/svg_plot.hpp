#pragma once

#include <string>
#include <vector>

namespace muskat::cli {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartOptions {
  std::string title;
  std::string x_label = "t";
  std::string y_label;
  bool log_y = false;      ///< nonpositive values are dropped
  std::string annotation;  ///< drawn under the title
};

/// Self-contained SVG line chart. Degenerate ranges (a single point, a
/// constant series) are padded so every chart renders.
std::string render_line_chart(const std::vector<Series>& series, const ChartOptions& options);

}  // namespace muskat::cli
