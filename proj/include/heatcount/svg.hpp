#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "heatcount/io.hpp"

// Minimal quick-look line plots. Convenience output only; nothing downstream
// parses these.

namespace heatcount {

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
};

inline std::string render_svg_plot(const std::string& title,
                                   const std::string& x_label,
                                   const std::vector<PlotSeries>& series) {
  const double width = 900, height = 520;
  const double ml = 70, mr = 160, mt = 40, mb = 50;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b"};

  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size())
      throw std::invalid_argument("render_svg_plot: x/y size mismatch");
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      y_min = std::min(y_min, s.y[i]);
      y_max = std::max(y_max, s.y[i]);
    }
  }
  if (!(x_max > x_min)) x_max = x_min + 1.0;
  if (!(y_max > y_min)) y_max = y_min + 1.0;
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * (width - ml - mr); };
  auto py = [&](double y) { return height - mb - (y - y_min) / (y_max - y_min) * (height - mt - mb); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(int(width)) +
         "\" height=\"" + std::to_string(int(height)) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + std::to_string(int(width / 2)) + "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">" + title + "</text>\n";

  // frame and ticks
  svg += "<rect x=\"" + std::to_string(ml) + "\" y=\"" + std::to_string(mt) + "\" width=\"" +
         std::to_string(width - ml - mr) + "\" height=\"" + std::to_string(height - mt - mb) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    double xv = x_min + (x_max - x_min) * k / 4.0;
    double yv = y_min + (y_max - y_min) * k / 4.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", xv);
    svg += "<text x=\"" + std::to_string(px(xv)) + "\" y=\"" + std::to_string(height - mb + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + buf + "</text>\n";
    std::snprintf(buf, sizeof buf, "%.4g", yv);
    svg += "<text x=\"" + std::to_string(ml - 8) + "\" y=\"" + std::to_string(py(yv) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + buf + "</text>\n";
  }
  svg += "<text x=\"" + std::to_string(ml + (width - ml - mr) / 2) + "\" y=\"" +
         std::to_string(height - 12) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">" + x_label + "</text>\n";

  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = colors[s % 6];
    std::string pts;
    bool broken = true;
    for (size_t i = 0; i < series[s].x.size(); ++i) {
      if (!std::isfinite(series[s].x[i]) || !std::isfinite(series[s].y[i])) {
        broken = true;
        continue;
      }
      pts += broken ? "M" : "L";
      broken = false;
      pts += std::to_string(px(series[s].x[i])) + " " + std::to_string(py(series[s].y[i])) + " ";
    }
    svg += "<path d=\"" + pts + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.3\"/>\n";
    double ly = mt + 18.0 * double(s) + 10;
    svg += "<line x1=\"" + std::to_string(width - mr + 10) + "\" y1=\"" + std::to_string(ly) +
           "\" x2=\"" + std::to_string(width - mr + 34) + "\" y2=\"" + std::to_string(ly) +
           "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + std::to_string(width - mr + 40) + "\" y=\"" + std::to_string(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + series[s].label + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace heatcount
