#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include "hadamark/netpbm.hpp"
#include "hadamark/png_io.hpp"

namespace hadamark {
namespace detail {

inline std::string sniff_magic(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char m[2] = {0, 0};
  in.read(m, 2);
  return std::string(m, 2);
}

}  // namespace detail

/// Loads a grayscale cover image: binary PGM (P5, maxval 255) or 8-bit
/// grayscale PNG, dispatched on the file signature.
inline GrayImage load_gray(const std::string& path) {
  const std::string magic = detail::sniff_magic(path);
  if (magic == "P5") return load_pgm(path);
  if (magic[0] == '\x89' && magic[1] == 'P') return load_png_gray(path);
  throw std::runtime_error(path + ": unsupported image format (need P5 PGM or grayscale PNG)");
}

inline void save_gray(const GrayImage& img, const std::string& path) { save_pgm(img, path); }

/// Loads a binary watermark: P4 PBM, or any grayscale image thresholded at
/// 128 (pixel >= 128 -> white).
inline BinaryWatermark load_watermark(const std::string& path) {
  const std::string magic = detail::sniff_magic(path);
  if (magic == "P4") return load_pbm(path);
  const GrayImage img = load_gray(path);
  if (img.width != img.height) throw std::runtime_error(path + ": watermark must be square");
  std::vector<std::uint8_t> bits(img.pixels.size());
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    bits[i] = img.pixels[i] >= 128.0 ? 1 : 0;
  return BinaryWatermark(img.width, std::move(bits));
}

inline void save_watermark(const BinaryWatermark& wm, const std::string& path) {
  save_pbm(wm, path);
}

}  // namespace hadamark
