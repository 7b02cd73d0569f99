#include "fracbs/svg.hpp"

#include "fracbs/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace fracbs {

namespace {

constexpr double kWidth = 720, kHeight = 450;
constexpr double kLeft = 80, kRight = 170, kTop = 40, kBottom = 60;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
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

struct Range {
  double lo, hi;
};

/// Data range in plot coordinates (log10 on a log axis), padded when degenerate.
Range data_range(const std::vector<double>& v) {
  Range r{*std::min_element(v.begin(), v.end()), *std::max_element(v.begin(), v.end())};
  if (r.hi - r.lo <= 1e-12 * std::max(1.0, std::abs(r.hi))) {
    const double pad = std::max(1.0, std::abs(r.hi)) * 0.05;
    r.lo -= pad;
    r.hi += pad;
  }
  return r;
}

/// Tick positions in plot coordinates.
std::vector<double> ticks(Range r, AxisScale scale) {
  std::vector<double> t;
  if (scale == AxisScale::log) {
    const double lo = std::ceil(r.lo), hi = std::floor(r.hi);
    const double step = std::max(1.0, std::ceil((hi - lo) / 8.0));
    for (double e = lo; e <= hi + 1e-9; e += step)
      t.push_back(e);
    return t;
  }
  const double raw = (r.hi - r.lo) / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  for (double v = std::ceil(r.lo / step) * step; v <= r.hi + 1e-9 * step; v += step)
    t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return t;
}

std::string tick_label(double v, AxisScale scale) {
  return scale == AxisScale::log ? "1e" + fmt("%.0f", v) : fmt("%g", v);
}

} // namespace

std::string emit_svg(const std::vector<Curve>& curves, const Axes& axes) {
  if (curves.empty())
    throw DomainError("emit_svg: no curves");
  std::vector<double> xs, ys;
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const Curve& cv = curves[c];
    if (cv.x.size() != cv.y.size())
      throw DomainError("emit_svg: curve " + std::to_string(c) + " has mismatched x and y");
    if (cv.x.size() < 2)
      throw DomainError("emit_svg: curve " + std::to_string(c) + " needs at least 2 points");
    for (std::size_t i = 0; i < cv.x.size(); ++i) {
      const std::string where =
          "curve " + std::to_string(c) + " ('" + cv.label + "') point " + std::to_string(i);
      if (!std::isfinite(cv.x[i]) || !std::isfinite(cv.y[i]))
        throw DomainError("emit_svg: non-finite coordinate at " + where);
      if (axes.x_scale == AxisScale::log && !(cv.x[i] > 0.0))
        throw DomainError("emit_svg: x = " + fmt("%g", cv.x[i]) + " on a log axis at " + where);
      if (axes.y_scale == AxisScale::log && !(cv.y[i] > 0.0))
        throw DomainError("emit_svg: y = " + fmt("%g", cv.y[i]) + " on a log axis at " + where);
      xs.push_back(axes.x_scale == AxisScale::log ? std::log10(cv.x[i]) : cv.x[i]);
      ys.push_back(axes.y_scale == AxisScale::log ? std::log10(cv.y[i]) : cv.y[i]);
    }
  }
  const Range rx = data_range(xs), ry = data_range(ys);
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (v - rx.lo) / (rx.hi - rx.lo) * pw; };
  auto py = [&](double v) { return kTop + (ry.hi - v) / (ry.hi - ry.lo) * ph; };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", kWidth) +
       "\" height=\"" + fmt("%.0f", kHeight) + "\" viewBox=\"0 0 " + fmt("%.0f", kWidth) + " " +
       fmt("%.0f", kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!axes.title.empty())
    s += "<text class=\"title\" x=\"" + fmt("%.1f", kLeft + pw / 2) +
         "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" + escape(axes.title) +
         "</text>\n";

  s += "<g class=\"axes\" stroke=\"#444\" fill=\"none\">\n";
  s += "<rect x=\"" + fmt("%.1f", kLeft) + "\" y=\"" + fmt("%.1f", kTop) + "\" width=\"" +
       fmt("%.1f", pw) + "\" height=\"" + fmt("%.1f", ph) + "\"/>\n";
  s += "</g>\n<g class=\"ticks\" fill=\"#222\">\n";
  for (double t : ticks(rx, axes.x_scale)) {
    const std::string x = fmt("%.2f", px(t));
    s += "<line x1=\"" + x + "\" y1=\"" + fmt("%.1f", kTop + ph) + "\" x2=\"" + x + "\" y2=\"" +
         fmt("%.1f", kTop + ph + 5) + "\" stroke=\"#444\"/>\n";
    s += "<text x=\"" + x + "\" y=\"" + fmt("%.1f", kTop + ph + 19) +
         "\" text-anchor=\"middle\">" + tick_label(t, axes.x_scale) + "</text>\n";
  }
  for (double t : ticks(ry, axes.y_scale)) {
    const std::string y = fmt("%.2f", py(t));
    s += "<line x1=\"" + fmt("%.1f", kLeft - 5) + "\" y1=\"" + y + "\" x2=\"" +
         fmt("%.1f", kLeft) + "\" y2=\"" + y + "\" stroke=\"#444\"/>\n";
    s += "<text x=\"" + fmt("%.1f", kLeft - 8) + "\" y=\"" + y +
         "\" text-anchor=\"end\" dominant-baseline=\"middle\">" + tick_label(t, axes.y_scale) +
         "</text>\n";
  }
  s += "</g>\n";
  s += "<text class=\"xlabel\" x=\"" + fmt("%.1f", kLeft + pw / 2) + "\" y=\"" +
       fmt("%.1f", kHeight - 15) + "\" text-anchor=\"middle\">" + escape(axes.x_label) +
       "</text>\n";
  s += "<text class=\"ylabel\" transform=\"translate(20," + fmt("%.1f", kTop + ph / 2) +
       ") rotate(-90)\" text-anchor=\"middle\">" + escape(axes.y_label) + "</text>\n";

  std::size_t k = 0;
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char* color = kPalette[c % std::size(kPalette)];
    s += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
         "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < curves[c].x.size(); ++i, ++k)
      s += (i ? " " : "") + fmt("%.2f", px(xs[k])) + "," + fmt("%.2f", py(ys[k]));
    s += "\"/>\n";
  }

  s += "<g class=\"legend\">\n";
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const double y = kTop + 12 + 18.0 * c;
    const double x = kLeft + pw + 12;
    s += "<line x1=\"" + fmt("%.1f", x) + "\" y1=\"" + fmt("%.1f", y) + "\" x2=\"" +
         fmt("%.1f", x + 22) + "\" y2=\"" + fmt("%.1f", y) + "\" stroke=\"" +
         kPalette[c % std::size(kPalette)] + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + fmt("%.1f", x + 28) + "\" y=\"" + fmt("%.1f", y) +
         "\" dominant-baseline=\"middle\">" + escape(curves[c].label) + "</text>\n";
  }
  s += "</g>\n</svg>\n";
  return s;
}

} // namespace fracbs
