#include "liek/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace liek {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 420;
constexpr int kLeft = 70, kRight = 24, kTop = 40, kBottom = 50;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                         "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;

  double coord(double v) const {
    const double t = log ? std::log10(v) : v;
    const double a = log ? std::log10(lo) : lo;
    const double b = log ? std::log10(hi) : hi;
    return b == a ? 0.5 : (t - a) / (b - a);
  }
};

}  // namespace

void write_svg_chart(const std::string& path,
                     const std::vector<Series>& series,
                     const PlotOptions& options) {
  // Collect plottable points.
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  auto usable = [&](double x, double y) {
    return (!options.log_x || x > 0.0) && (!options.log_y || y > 0.0) &&
           std::isfinite(x) && std::isfinite(y);
  };
  for (const auto& s : series)
    for (const auto& [x, y] : s.points)
      if (usable(x, y)) {
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
      }
  if (!(x_lo <= x_hi)) {  // nothing plottable
    x_lo = options.log_x ? 1.0 : 0.0;
    x_hi = options.log_x ? 10.0 : 1.0;
    y_lo = options.log_y ? 1.0 : 0.0;
    y_hi = options.log_y ? 10.0 : 1.0;
  }
  if (x_lo == x_hi) {
    x_lo = options.log_x ? x_lo / 2.0 : x_lo - 1.0;
    x_hi = options.log_x ? x_hi * 2.0 : x_hi + 1.0;
  }
  if (y_lo == y_hi) {
    y_lo = options.log_y ? y_lo / 2.0 : y_lo - 1.0;
    y_hi = options.log_y ? y_hi * 2.0 : y_hi + 1.0;
  }
  const Axis ax{x_lo, x_hi, options.log_x};
  const Axis ay{y_lo, y_hi, options.log_y};
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + ax.coord(x) * plot_w; };
  auto py = [&](double y) { return kTop + (1.0 - ay.coord(y)) * plot_h; };

  std::ofstream out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << options.title
      << "</text>\n";

  // Frame and ticks.
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
  const int n_ticks = 5;
  for (int i = 0; i < n_ticks; ++i) {
    const double f = i / static_cast<double>(n_ticks - 1);
    const double xv = options.log_x
                          ? std::pow(10.0, std::log10(x_lo) +
                                               f * (std::log10(x_hi) -
                                                    std::log10(x_lo)))
                          : x_lo + f * (x_hi - x_lo);
    const double yv = options.log_y
                          ? std::pow(10.0, std::log10(y_lo) +
                                               f * (std::log10(y_hi) -
                                                    std::log10(y_lo)))
                          : y_lo + f * (y_hi - y_lo);
    out << "<line x1=\"" << num(px(xv)) << "\" y1=\"" << kTop + plot_h
        << "\" x2=\"" << num(px(xv)) << "\" y2=\"" << kTop + plot_h + 5
        << "\" stroke=\"#444\"/>\n"
        << "<text x=\"" << num(px(xv)) << "\" y=\"" << kTop + plot_h + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"11\">" << num(xv) << "</text>\n"
        << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << num(py(yv)) << "\" x2=\""
        << kLeft << "\" y2=\"" << num(py(yv)) << "\" stroke=\"#444\"/>\n"
        << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(py(yv) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
        << "font-size=\"11\">" << num(yv) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"12\">" << options.x_label << "</text>\n"
      << "<text x=\"18\" y=\"" << kTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"12\" transform=\"rotate(-90 18 " << kTop + plot_h / 2
      << ")\">" << options.y_label << "</text>\n";

  // Series polylines, markers, legend.
  int color_idx = 0;
  int legend_y = kTop + 14;
  for (const auto& s : series) {
    const char* color = kColors[color_idx % 6];
    ++color_idx;
    std::string pts;
    for (const auto& [x, y] : s.points) {
      if (!usable(x, y)) continue;
      pts += num(px(x)) + "," + num(py(y)) + " ";
    }
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
    for (const auto& [x, y] : s.points) {
      if (!usable(x, y)) continue;
      out << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    out << "<rect x=\"" << kWidth - kRight - 150 << "\" y=\"" << legend_y - 9
        << "\" width=\"12\" height=\"4\" fill=\"" << color << "\"/>\n"
        << "<text x=\"" << kWidth - kRight - 132 << "\" y=\"" << legend_y - 2
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label
        << "</text>\n";
    legend_y += 16;
  }
  out << "</svg>\n";
}

}  // namespace liek
