#pragma once

#include <string>
#include <vector>

namespace spamlens::svg {

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

/// Simple line chart with axes and a legend; axis ranges are data-driven
/// unless fixed via the unit_square flag (ROC curves).
std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label,
                       const std::vector<Series>& series,
                       bool unit_square = false);

/// Horizontal bar chart, one bar per labeled value.
std::string bar_chart(const std::string& title,
                      const std::vector<std::pair<std::string, double>>& bars);

/// Grouped vertical bars: one group per label, one bar per series.
std::string grouped_bar_chart(const std::string& title,
                              const std::vector<std::string>& group_labels,
                              const std::vector<Series>& series);

}  // namespace spamlens::svg
