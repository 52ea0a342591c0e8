#pragma once

#include "liek/verify.hpp"

#include <string>
#include <vector>

namespace liek {

struct PlotOptions {
  std::string title;
  std::string x_label = "x";
  std::string y_label = "y";
  bool log_x = false;
  bool log_y = false;
};

// Static SVG line chart of one or more series; points with nonpositive
// coordinates are dropped on log axes. Output is deterministic.
void write_svg_chart(const std::string& path,
                     const std::vector<Series>& series,
                     const PlotOptions& options);

}  // namespace liek
