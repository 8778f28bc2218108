#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "mmdd/experiment/image_io.hpp"

namespace mmdd {

using Rgb = std::array<std::uint8_t, 3>;

// RGB drawing surface with a built-in 5x7 bitmap font.
class Canvas {
 public:
  Canvas(int width, int height, Rgb background = {255, 255, 255});

  int width() const { return image_.width; }
  int height() const { return image_.height; }
  const RasterImage& image() const { return image_; }

  void set(int x, int y, Rgb c);
  void fill_rect(int x0, int y0, int x1, int y1, Rgb c);
  void draw_rect(int x0, int y0, int x1, int y1, Rgb c);
  void fill_circle(double cx, double cy, double r, Rgb c);
  // Draws printable ASCII; other characters render as '?'.
  void draw_text(int x, int y, const std::string& text, Rgb c, int scale = 1);
  static int text_width(const std::string& text, int scale = 1) {
    return static_cast<int>(text.size()) * 6 * scale;
  }

 private:
  RasterImage image_;
};

}  // namespace mmdd
