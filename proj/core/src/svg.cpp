#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "kronfit/errors.hpp"

namespace kronfit::internal {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 440.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 50.0;
constexpr double kMarginBottom = 55.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return std::string(buf);
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return std::string(buf);
}

double safe_log10(double v) { return std::log10(std::max(v, 1e-300)); }

}  // namespace

std::string log_log_chart(const std::string& title,
                          const std::string& subtitle,
                          const std::string& x_label,
                          const std::string& y_label,
                          const std::vector<SeriesPoint>& points) {
  if (points.empty()) {
    throw InvalidInput("log_log_chart: need at least one point");
  }
  double x_lo = safe_log10(points.front().x), x_hi = x_lo;
  double y_lo = safe_log10(points.front().band_lo);
  double y_hi = safe_log10(points.front().band_hi);
  for (const SeriesPoint& p : points) {
    x_lo = std::min(x_lo, safe_log10(p.x));
    x_hi = std::max(x_hi, safe_log10(p.x));
    y_lo = std::min({y_lo, safe_log10(p.band_lo), safe_log10(p.y)});
    y_hi = std::max({y_hi, safe_log10(p.band_hi), safe_log10(p.y)});
  }
  const double x_pad = std::max(0.05 * (x_hi - x_lo), 0.05);
  const double y_pad = std::max(0.05 * (y_hi - y_lo), 0.05);
  x_lo -= x_pad;
  x_hi += x_pad;
  y_lo -= y_pad;
  y_hi += y_pad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const auto to_x = [&](double v) {
    return kMarginLeft + (safe_log10(v) - x_lo) / (x_hi - x_lo) * plot_w;
  };
  const auto to_y = [&](double v) {
    return kMarginTop + plot_h -
           (safe_log10(v) - y_lo) / (y_hi - y_lo) * plot_h;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" font-size=\"16\" "
         "text-anchor=\"middle\" font-family=\"sans-serif\">"
      << title << "</text>\n";
  svg << "<text x=\"" << num(kWidth / 2) << "\" y=\"40\" font-size=\"12\" "
         "text-anchor=\"middle\" font-family=\"sans-serif\" fill=\"#555\">"
      << subtitle << "</text>\n";

  // Axes and frame.
  svg << "<rect x=\"" << num(kMarginLeft) << "\" y=\"" << num(kMarginTop)
      << "\" width=\"" << num(plot_w) << "\" height=\"" << num(plot_h)
      << "\" fill=\"none\" stroke=\"#333\"/>\n";
  svg << "<text x=\"" << num(kMarginLeft + plot_w / 2) << "\" y=\""
      << num(kHeight - 14) << "\" font-size=\"12\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\">"
      << x_label << "</text>\n";
  svg << "<text x=\"16\" y=\"" << num(kMarginTop + plot_h / 2)
      << "\" font-size=\"12\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" transform=\"rotate(-90 16 "
      << num(kMarginTop + plot_h / 2) << ")\">" << y_label << "</text>\n";

  // Interquartile band.
  std::ostringstream band;
  for (const SeriesPoint& p : points) {
    band << num(to_x(p.x)) << "," << num(to_y(p.band_hi)) << " ";
  }
  for (auto it = points.rbegin(); it != points.rend(); ++it) {
    band << num(to_x(it->x)) << "," << num(to_y(it->band_lo)) << " ";
  }
  svg << "<polygon points=\"" << band.str()
      << "\" fill=\"#4a90d9\" fill-opacity=\"0.25\" stroke=\"none\"/>\n";

  // Median line and markers with tick labels.
  std::ostringstream line;
  for (const SeriesPoint& p : points) {
    line << num(to_x(p.x)) << "," << num(to_y(p.y)) << " ";
  }
  svg << "<polyline points=\"" << line.str()
      << "\" fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"2\"/>\n";
  for (const SeriesPoint& p : points) {
    svg << "<circle cx=\"" << num(to_x(p.x)) << "\" cy=\"" << num(to_y(p.y))
        << "\" r=\"3\" fill=\"#1f5fa8\"/>\n";
    svg << "<text x=\"" << num(to_x(p.x)) << "\" y=\""
        << num(kMarginTop + plot_h + 16)
        << "\" font-size=\"10\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\">"
        << sci(p.x) << "</text>\n";
  }
  svg << "<text x=\"" << num(kMarginLeft - 6) << "\" y=\""
      << num(to_y(std::pow(10.0, y_hi - 0.05)) + 4)
      << "\" font-size=\"10\" text-anchor=\"end\" "
         "font-family=\"sans-serif\">"
      << sci(std::pow(10.0, y_hi - 0.05)) << "</text>\n";
  svg << "<text x=\"" << num(kMarginLeft - 6) << "\" y=\""
      << num(to_y(std::pow(10.0, y_lo + 0.05)) + 4)
      << "\" font-size=\"10\" text-anchor=\"end\" "
         "font-family=\"sans-serif\">"
      << sci(std::pow(10.0, y_lo + 0.05)) << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace kronfit::internal
