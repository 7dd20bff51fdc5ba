#pragma once

#include <array>
#include <string>
#include <vector>

namespace trustconnect {

struct BarSeries {
  std::string name;
  std::string color;  // any SVG color literal
  std::vector<double> values;
};

/// Grouped vertical bar chart: one group per category, one bar per series.
/// Output depends only on the inputs (fixed-precision coordinates).
std::string render_grouped_bars(const std::string& title, const std::vector<std::string>& categories,
                                const std::vector<BarSeries>& series);

}  // namespace trustconnect
