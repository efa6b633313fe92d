#include "loewner/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace loewner {

namespace {

std::string fmt(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.4f", v);
  return buffer;
}

}  // namespace

SvgWriter::SvgWriter(double min_x, double min_y, double max_x, double max_y,
                     double pixel_width)
    : min_x_(min_x), min_y_(min_y), max_x_(max_x), max_y_(max_y) {
  if (!(max_x > min_x) || !(max_y > min_y)) {
    throw std::invalid_argument("svg world window must have positive extent");
  }
  if (!(pixel_width > 0.0)) {
    throw std::invalid_argument("svg pixel width must be positive");
  }
  scale_ = pixel_width / (max_x - min_x);
  width_ = pixel_width;
  height_ = (max_y - min_y) * scale_;
}

void SvgWriter::add_rect(double x, double y, double width, double height,
                         const std::string& fill) {
  // The rectangle's top edge in screen space is the world point y + height.
  elements_.push_back("<rect x=\"" + fmt(px(x)) + "\" y=\"" + fmt(py(y + height)) +
                      "\" width=\"" + fmt(width * scale_) + "\" height=\"" +
                      fmt(height * scale_) + "\" fill=\"" + fill + "\"/>");
}

void SvgWriter::add_circle(double cx, double cy, double radius, const std::string& fill) {
  elements_.push_back("<circle cx=\"" + fmt(px(cx)) + "\" cy=\"" + fmt(py(cy)) +
                      "\" r=\"" + fmt(radius * scale_) + "\" fill=\"" + fill + "\"/>");
}

void SvgWriter::add_polyline(const std::vector<std::pair<double, double>>& points,
                             const std::string& stroke, double stroke_width, bool closed) {
  if (points.empty()) return;
  std::string d = closed ? "<polygon points=\"" : "<polyline points=\"";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0) d += ' ';
    d += fmt(px(points[i].first)) + "," + fmt(py(points[i].second));
  }
  d += "\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
       fmt(stroke_width) + "\"/>";
  elements_.push_back(std::move(d));
}

void SvgWriter::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open file for writing: " + path);
  }
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width_)
      << "\" height=\"" << fmt(height_) << "\" viewBox=\"0 0 " << fmt(width_) << ' '
      << fmt(height_) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& element : elements_) {
    out << element << '\n';
  }
  out << "</svg>\n";
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

std::string heat_color(double u) {
  const double clamped = std::clamp(u, 0.0, 1.0);
  // Piecewise-linear blue -> cyan -> yellow -> red ramp.
  double r = 0.0, g = 0.0, b = 0.0;
  if (clamped < 1.0 / 3.0) {
    const double s = 3.0 * clamped;
    r = 0.0;
    g = s;
    b = 1.0;
  } else if (clamped < 2.0 / 3.0) {
    const double s = 3.0 * clamped - 1.0;
    r = s;
    g = 1.0;
    b = 1.0 - s;
  } else {
    const double s = 3.0 * clamped - 2.0;
    r = 1.0;
    g = 1.0 - s;
    b = 0.0;
  }
  char buffer[16];
  std::snprintf(buffer, sizeof(buffer), "#%02x%02x%02x", static_cast<int>(255.0 * r + 0.5),
                static_cast<int>(255.0 * g + 0.5), static_cast<int>(255.0 * b + 0.5));
  return buffer;
}

}  // namespace loewner
