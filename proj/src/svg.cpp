#include "topicnet/svg.hpp"

#include <array>
#include <cmath>

#include <fmt/format.h>

namespace topicnet {

std::string xml_escape(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string svg_number(double v) {
  auto s = fmt::format("{:.4f}", v);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

PlotFrame PlotFrame::around(double x_lo, double x_hi, double y_lo, double y_hi, double pad) {
  auto widen = [pad](double& lo, double& hi) {
    if (!(hi > lo)) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double margin = (hi - lo) * pad;
    lo -= margin;
    hi += margin;
  };
  widen(x_lo, x_hi);
  widen(y_lo, y_hi);
  PlotFrame f;
  f.x_min = x_lo;
  f.x_max = x_hi;
  f.y_min = y_lo;
  f.y_max = y_hi;
  return f;
}

SvgDocument::SvgDocument(double width, double height) : width_(width), height_(height) {}

void SvgDocument::rect(double x, double y, double w, double h, std::string_view fill, std::string_view stroke) {
  body_ += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" stroke=\"{}\"/>\n", svg_number(x),
                       svg_number(y), svg_number(w), svg_number(h), fill, stroke);
}

void SvgDocument::line(double x1, double y1, double x2, double y2, std::string_view stroke, double stroke_width,
                       std::string_view dash) {
  body_ += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"{}\"", svg_number(x1),
                       svg_number(y1), svg_number(x2), svg_number(y2), stroke, svg_number(stroke_width));
  if (!dash.empty()) body_ += fmt::format(" stroke-dasharray=\"{}\"", dash);
  body_ += "/>\n";
}

void SvgDocument::polyline(const std::vector<std::pair<double, double>>& points, std::string_view stroke,
                           double stroke_width, bool arrow, std::string_view css_class) {
  std::string coords;
  for (const auto& [x, y] : points) {
    if (!coords.empty()) coords += ' ';
    coords += svg_number(x) + "," + svg_number(y);
  }
  body_ += "<polyline";
  if (!css_class.empty()) body_ += fmt::format(" class=\"{}\"", css_class);
  body_ += fmt::format(" points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"", coords, stroke,
                       svg_number(stroke_width));
  if (arrow) {
    body_ += " marker-end=\"url(#arrow)\"";
    uses_arrow_ = true;
  }
  body_ += "/>\n";
}

void SvgDocument::circle(double cx, double cy, double r, std::string_view fill, std::string_view css_class) {
  body_ += "<circle";
  if (!css_class.empty()) body_ += fmt::format(" class=\"{}\"", css_class);
  body_ += fmt::format(" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"/>\n", svg_number(cx), svg_number(cy), svg_number(r), fill);
}

void SvgDocument::text(double x, double y, std::string_view content, std::string_view anchor, double size) {
  body_ += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"{}\" font-size=\"{}\" font-family=\"sans-serif\">{}</text>\n",
                       svg_number(x), svg_number(y), anchor, svg_number(size), xml_escape(content));
}

void SvgDocument::axes(const PlotFrame& f, std::string_view x_label, std::string_view y_label, int ticks) {
  const double bottom = f.top + f.height;
  line(f.left, bottom, f.left + f.width, bottom, "#000000");
  line(f.left, f.top, f.left, bottom, "#000000");
  for (int t = 0; t <= ticks; ++t) {
    const double xv = f.x_min + (f.x_max - f.x_min) * t / ticks;
    const double yv = f.y_min + (f.y_max - f.y_min) * t / ticks;
    line(f.px(xv), bottom, f.px(xv), bottom + 4, "#000000");
    text(f.px(xv), bottom + 16, fmt::format("{:.3g}", xv), "middle", 10);
    line(f.left - 4, f.py(yv), f.left, f.py(yv), "#000000");
    text(f.left - 6, f.py(yv) + 3, fmt::format("{:.3g}", yv), "end", 10);
  }
  text(f.left + f.width / 2, bottom + 34, x_label, "middle", 12);
  body_ += fmt::format(
      "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"12.0000\" font-family=\"sans-serif\" "
      "transform=\"rotate(-90 {} {})\">{}</text>\n",
      svg_number(f.left - 42), svg_number(f.top + f.height / 2), svg_number(f.left - 42),
      svg_number(f.top + f.height / 2), xml_escape(y_label));
}

std::string SvgDocument::str() const {
  std::string out = fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
      svg_number(width_), svg_number(height_));
  if (uses_arrow_)
    out +=
        "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" "
        "orient=\"auto-start-reverse\"><path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"context-stroke\"/></marker></defs>\n";
  out += body_;
  out += "</svg>\n";
  return out;
}

std::string_view palette_color(std::size_t index) {
  static constexpr std::array<std::string_view, 10> colors{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return colors[index % colors.size()];
}

}  // namespace topicnet
