#pragma once

#include <string>
#include <utility>
#include <vector>

namespace loewner {

/// Minimal SVG scene writer used for cluster and trace renderings. World
/// coordinates are mapped into a fixed-width viewport with the y axis
/// flipped so that mathematical orientation is preserved.
class SvgWriter {
 public:
  /// The world window [min_x, max_x] x [min_y, max_y] is scaled to fit a
  /// viewport of the given pixel width (height follows the aspect ratio).
  SvgWriter(double min_x, double min_y, double max_x, double max_y,
            double pixel_width = 800.0);

  void add_rect(double x, double y, double width, double height, const std::string& fill);
  void add_circle(double cx, double cy, double radius, const std::string& fill);
  void add_polyline(const std::vector<std::pair<double, double>>& points,
                    const std::string& stroke, double stroke_width, bool closed = false);

  /// Writes the document. Throws std::runtime_error if the file cannot be
  /// written.
  void save(const std::string& path) const;

 private:
  double min_x_, min_y_, max_x_, max_y_;
  double scale_;
  double width_, height_;
  std::vector<std::string> elements_;

  double px(double x) const { return (x - min_x_) * scale_; }
  double py(double y) const { return (max_y_ - y) * scale_; }
};

/// Maps u in [0, 1] to a blue-to-red heat color; used to color cluster
/// sites by arrival time.
std::string heat_color(double u);

}  // namespace loewner
