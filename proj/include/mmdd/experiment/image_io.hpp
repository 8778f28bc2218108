#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace mmdd {

// 8-bit interleaved raster.
struct RasterImage {
  int width = 0;
  int height = 0;
  int channels = 3;
  std::vector<std::uint8_t> pixels;
};

// Decodes PNG or JPEG (chosen by file signature) into RGB. Throws ingestion
// errors naming the file.
RasterImage read_image(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const RasterImage& image);

// Bilinear resize (pixel-centre aligned).
RasterImage resize_bilinear(const RasterImage& image, int width, int height);

}  // namespace mmdd
