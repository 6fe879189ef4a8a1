#include "omdlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "omdlab/errors.hpp"

namespace omdlab {

namespace {

constexpr double kWidth = 800.0, kHeight = 600.0;
constexpr double kLeft = 70.0, kRight = 770.0, kTop = 40.0, kBottom = 540.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;

  double to_unit(double v) const {
    const double a = log ? std::log10(v) : v;
    const double l = log ? std::log10(lo) : lo;
    const double h = log ? std::log10(hi) : hi;
    return h > l ? (a - l) / (h - l) : 0.5;
  }

  std::vector<double> ticks() const {
    std::vector<double> t;
    if (log) {
      const int e0 = static_cast<int>(std::floor(std::log10(lo)));
      const int e1 = static_cast<int>(std::ceil(std::log10(hi)));
      for (int e = e0; e <= e1; ++e) t.push_back(std::pow(10.0, e));
    } else {
      for (int i = 0; i <= 5; ++i) t.push_back(lo + (hi - lo) * i / 5.0);
    }
    return t;
  }
};

Axis fit_axis(const std::vector<PlotSeries>& series, bool take_x, bool log) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& s : series) {
    const auto& vals = take_x ? s.x : s.y;
    for (double v : vals) {
      if (!std::isfinite(v) || (log && !(v > 0.0))) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(lo <= hi)) {
    lo = log ? 0.1 : 0.0;
    hi = 1.0;
  }
  if (lo == hi) {
    lo -= log ? 0.0 : 0.5;
    hi += log ? 0.0 : 0.5;
    if (log) {
      lo *= 0.5;
      hi *= 2.0;
    }
  } else if (!log) {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  Axis axis;
  axis.lo = lo;
  axis.hi = hi;
  axis.log = log;
  return axis;
}

}  // namespace

std::string render_line_plot(const std::vector<PlotSeries>& series, const PlotOptions& options) {
  const Axis ax = fit_axis(series, true, options.log_x);
  const Axis ay = fit_axis(series, false, options.log_y);
  auto px = [&](double v) { return kLeft + (kRight - kLeft) * ax.to_unit(v); };
  auto py = [&](double v) { return kBottom - (kBottom - kTop) * ay.to_unit(v); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
      << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">"
      << options.title << "</text>\n";

  for (double t : ax.ticks()) {
    const double x = px(t);
    if (x < kLeft - 0.5 || x > kRight + 0.5) continue;
    svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << kTop << "\" x2=\"" << fmt(x) << "\" y2=\""
        << kBottom << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << fmt(x) << "\" y=\"" << kBottom + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(t)
        << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double y = py(t);
    if (y < kTop - 0.5 || y > kBottom + 0.5) continue;
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(y) << "\" x2=\"" << kRight << "\" y2=\""
        << fmt(y) << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(t)
        << "</text>\n";
  }
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kRight - kLeft
      << "\" height=\"" << kBottom - kTop << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kBottom + 42
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << options.x_label << "</text>\n"
      << "<text x=\"18\" y=\"" << (kTop + kBottom) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 "
      << (kTop + kBottom) / 2 << ")\">" << options.y_label << "</text>\n";

  for (size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (size_t k = 0; k < s.x.size() && k < s.y.size(); ++k) {
      if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) continue;
      if ((options.log_x && !(s.x[k] > 0.0)) || (options.log_y && !(s.y[k] > 0.0))) continue;
      svg << fmt(px(s.x[k])) << "," << fmt(py(s.y[k])) << " ";
    }
    svg << "\"/>\n";
    const double ly = kTop + 18.0 + 18.0 * static_cast<double>(i);
    svg << "<line x1=\"" << kRight - 150 << "\" y1=\"" << fmt(ly) << "\" x2=\"" << kRight - 120
        << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << kRight - 114 << "\" y=\"" << fmt(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_line_plot(const std::string& path, const std::vector<PlotSeries>& series,
                     const PlotOptions& options) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open '" + path + "' for writing");
  out << render_line_plot(series, options);
}

}  // namespace omdlab
