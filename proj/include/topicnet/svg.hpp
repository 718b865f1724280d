#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace topicnet {

std::string xml_escape(std::string_view raw);

/// Fixed 4-decimal coordinate formatting used in every SVG.
std::string svg_number(double v);

/// Linear map from a data window to a pixel rectangle (y grows downwards).
struct PlotFrame {
  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  double left = 60, top = 30, width = 600, height = 480;

  double px(double x) const { return left + (x - x_min) / (x_max - x_min) * width; }
  double py(double y) const { return top + (y_max - y) / (y_max - y_min) * height; }
  double data_x(double px_) const { return x_min + (px_ - left) / width * (x_max - x_min); }
  double data_y(double py_) const { return y_max - (py_ - top) / height * (y_max - y_min); }

  /// Window covering [lo, hi] on both axes with `pad` relative margin;
  /// degenerate ranges are widened to unit width.
  static PlotFrame around(double x_lo, double x_hi, double y_lo, double y_hi, double pad = 0.05);
};

/// Append-only SVG document.
class SvgDocument {
 public:
  SvgDocument(double width, double height);

  void rect(double x, double y, double w, double h, std::string_view fill, std::string_view stroke = "none");
  void line(double x1, double y1, double x2, double y2, std::string_view stroke, double stroke_width = 1.0,
            std::string_view dash = {});
  void polyline(const std::vector<std::pair<double, double>>& points, std::string_view stroke, double stroke_width = 1.0,
                bool arrow = false, std::string_view css_class = {});
  void circle(double cx, double cy, double r, std::string_view fill, std::string_view css_class = {});
  void text(double x, double y, std::string_view content, std::string_view anchor = "start", double size = 11.0);
  /// Axes, ticks and labels for `frame`.
  void axes(const PlotFrame& frame, std::string_view x_label, std::string_view y_label, int ticks = 5);

  std::string str() const;

 private:
  double width_, height_;
  bool uses_arrow_ = false;
  std::string body_;
};

/// Categorical palette (matplotlib tab10 order).
std::string_view palette_color(std::size_t index);

}  // namespace topicnet
