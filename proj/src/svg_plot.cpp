#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>

#include "capx/error.hpp"
#include "capx/studies.hpp"

namespace capx {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string lookup(const ConvergenceTable& t, const std::string& key) {
  for (const auto& [k, v] : t.metadata)
    if (k == key) return v;
  return {};
}

}  // namespace

std::string render_svg_plot(const ConvergenceTable& table, PlotAxis axis) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : table.records)
    if (r.sup_error > 0.0 && std::isfinite(r.sup_error) && r.index >= 0.0)
      pts.emplace_back(std::sqrt(r.index), std::log10(r.sup_error));
  if (pts.empty())
    throw UsageError("plot: every recorded error is zero, nothing to draw on a log axis");

  double xmin = pts.front().first, xmax = xmin, ymin = pts.front().second, ymax = ymin;
  for (const auto& [x, y] : pts) {
    xmin = std::min(xmin, x), xmax = std::max(xmax, x);
    ymin = std::min(ymin, y), ymax = std::max(ymax, y);
  }
  xmin = std::floor(xmin);
  xmax = std::ceil(xmax);
  if (xmax <= xmin) xmax = xmin + 1;
  ymin = std::floor(ymin);
  ymax = std::ceil(ymax);
  if (ymax <= ymin) ymax = ymin + 1;

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" +
         fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
         "\" fill=\"white\"/>\n";
  std::string title = lookup(table, "study");
  if (title.empty()) title = "convergence";
  svg += "<text x=\"" + fmt(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
         escape(title) + "</text>\n";

  // axes and decade ticks
  svg += "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  svg += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(pw) +
         "\" height=\"" + fmt(ph) + "\"/>\n";
  svg += "</g>\n<g font-size=\"11\">\n";
  const int ystep = std::max(1, static_cast<int>((ymax - ymin) / 10.0 + 0.999));
  for (double y = ymin; y <= ymax + 1e-9; y += ystep) {
    svg += "<line x1=\"" + fmt(kLeft - 4) + "\" y1=\"" + fmt(py(y)) + "\" x2=\"" + fmt(kLeft) +
           "\" y2=\"" + fmt(py(y)) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(py(y) + 4) +
           "\" text-anchor=\"end\">1e" + std::to_string(static_cast<int>(y)) + "</text>\n";
  }
  const int xstep = std::max(1, static_cast<int>((xmax - xmin) / 10.0 + 0.999));
  for (double x = xmin; x <= xmax + 1e-9; x += xstep) {
    svg += "<line x1=\"" + fmt(px(x)) + "\" y1=\"" + fmt(kTop + ph) + "\" x2=\"" + fmt(px(x)) +
           "\" y2=\"" + fmt(kTop + ph + 4) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt(px(x)) + "\" y=\"" + fmt(kTop + ph + 18) +
           "\" text-anchor=\"middle\">" + std::to_string(static_cast<int>(x)) + "</text>\n";
  }
  svg += "</g>\n";
  const char* xlabel = axis == PlotAxis::sqrt_n ? "sqrt(n)" : "sqrt(DOF)";
  svg += "<text x=\"" + fmt(kLeft + pw / 2) + "\" y=\"" + fmt(kHeight - 10) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + xlabel + "</text>\n";
  svg += "<text x=\"16\" y=\"" + fmt(kTop + ph / 2) + "\" text-anchor=\"middle\" font-size=\"13\" "
         "transform=\"rotate(-90 16 " + fmt(kTop + ph / 2) + ")\">" +
         escape(table.error_column) + " (log10)</text>\n";

  svg += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i)
    svg += (i ? " " : "") + fmt(px(pts[i].first)) + "," + fmt(py(pts[i].second));
  svg += "\"/>\n<g fill=\"#1f77b4\">\n";
  for (const auto& [x, y] : pts)
    svg += "<circle cx=\"" + fmt(px(x)) + "\" cy=\"" + fmt(py(y)) + "\" r=\"3\"/>\n";
  svg += "</g>\n";

  if (table.rate) {
    // log10 err = (log_intercept - C sqrt(n)) / ln 10, clipped to the frame
    const double a = table.rate->log_intercept / std::numbers::ln10;
    const double b = -table.rate->C / std::numbers::ln10;
    double x0 = xmin, x1 = xmax;
    auto clip = [&](double& x) {
      const double y = a + b * x;
      if (b != 0.0 && y > ymax) x = (ymax - a) / b;
      if (b != 0.0 && y < ymin) x = (ymin - a) / b;
      x = std::clamp(x, xmin, xmax);
    };
    clip(x0);
    clip(x1);
    svg += "<line x1=\"" + fmt(px(x0)) + "\" y1=\"" + fmt(py(a + b * x0)) + "\" x2=\"" +
           fmt(px(x1)) + "\" y2=\"" + fmt(py(a + b * x1)) +
           "\" stroke=\"#d62728\" stroke-dasharray=\"6,4\"/>\n";
    svg += "<text x=\"" + fmt(kLeft + pw - 6) + "\" y=\"" + fmt(kTop + 16) +
           "\" text-anchor=\"end\" font-size=\"12\" fill=\"#d62728\">C = " +
           fmt(table.rate->C) + ", r2 = " + fmt(table.rate->r_squared) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void write_svg_plot(const ConvergenceTable& table, const std::filesystem::path& path,
                    PlotAxis axis) {
  const std::string svg = render_svg_plot(table, axis);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << svg;
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace capx
