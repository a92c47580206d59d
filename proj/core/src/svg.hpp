#pragma once

#include <string>
#include <vector>

namespace kronfit::internal {

/// One x position with a central value and a shaded band around it; all
/// values must be positive (the chart is log-log).
struct SeriesPoint {
  double x = 0.0;
  double y = 0.0;
  double band_lo = 0.0;
  double band_hi = 0.0;
};

/// Minimal static log-log line chart (median line plus interquartile
/// band), rendered as a standalone SVG document.
std::string log_log_chart(const std::string& title,
                          const std::string& subtitle,
                          const std::string& x_label,
                          const std::string& y_label,
                          const std::vector<SeriesPoint>& points);

}  // namespace kronfit::internal
