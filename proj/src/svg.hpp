#pragma once

#include <string>
#include <vector>

namespace ringing::cli::detail {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
};

// Standalone SVG line plot with a framed axis box, five ticks per axis and a
// legend. Non-finite and (for log_y) nonpositive points break the line.
std::string render_svg(const std::vector<Series>& series, const PlotSpec& spec);

}  // namespace ringing::cli::detail
