#pragma once

#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <png.h>

#include "hadamark/image.hpp"

namespace hadamark {

/// Reads an 8-bit grayscale PNG. Color or 16-bit inputs are rejected; PNG
/// support is read-only, PGM is the canonical output format.
inline GrayImage load_png_gray(const std::string& path) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> fp(std::fopen(path.c_str(), "rb"), std::fclose);
  if (!fp) throw std::runtime_error("cannot open " + path);

  png_byte header[8];
  if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8))
    throw std::runtime_error(path + ": not a PNG file");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("libpng init failed");
  }

  // declared ahead of setjmp so their destructors run if libpng errors out
  std::vector<std::uint8_t> data;
  std::vector<png_bytep> rows;
  int w = 0, h = 0;
  std::string err;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error(path + ": libpng read error");
  }

  png_init_io(png, fp.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const int color_type = png_get_color_type(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  if (color_type != PNG_COLOR_TYPE_GRAY) {
    err = path + ": non-grayscale PNG";
  } else if (bit_depth != 8) {
    err = path + ": unsupported depth (need 8-bit grayscale)";
  }
  if (!err.empty()) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error(err);
  }

  w = static_cast<int>(png_get_image_width(png, info));
  h = static_cast<int>(png_get_image_height(png, info));
  data.resize(static_cast<std::size_t>(w) * h);
  rows.resize(h);
  for (int r = 0; r < h; ++r) rows[r] = data.data() + static_cast<std::size_t>(r) * w;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  return GrayImage::from_bytes(w, h, data);
}

}  // namespace hadamark
