#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vaep/metrics.hpp"

// Minimal SVG 1.1 charts for reports. Coordinates are printed with fixed
// precision, so identical inputs give byte-identical files.
namespace vaep::svg {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct LabeledPoint {
  std::string label;
  double x = 0.0;
  double y = 0.0;
};

std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series);

std::string scatter_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                          const std::vector<LabeledPoint>& points);

// Reliability diagram: occupied bins against the diagonal.
std::string calibration_chart(const EvalReport& report, const std::string& title = "Calibration");

}  // namespace vaep::svg
