#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hadamark {

enum class Encoding { Byte, Real };

inline double pixel_range(Encoding e) { return e == Encoding::Byte ? 255.0 : 1.0; }

/// Round half away from zero, the pinned rule for all real->byte conversions.
inline double round_half_away(double x) { return std::round(x); }

inline double clamp_pixel(double v, Encoding e) {
  const double hi = pixel_range(e);
  if (v < 0.0) return 0.0;
  if (v > hi) return hi;
  return v;
}

/// Grayscale raster, row-major, top-left origin. Byte-encoded images hold
/// integer values 0..255, real-encoded images values in [0,1].
struct GrayImage {
  int width = 0;
  int height = 0;
  Encoding encoding = Encoding::Byte;
  std::vector<double> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, Encoding enc, double fill = 0.0)
      : width(w), height(h), encoding(enc), pixels(static_cast<std::size_t>(w) * h, fill) {
    if (w <= 0 || h <= 0) throw std::invalid_argument("GrayImage: dimensions must be positive");
  }

  double& at(int row, int col) { return pixels[static_cast<std::size_t>(row) * width + col]; }
  double at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * width + col]; }

  double range() const { return pixel_range(encoding); }
  bool square() const { return width == height; }

  static GrayImage from_bytes(int w, int h, const std::vector<std::uint8_t>& data) {
    GrayImage img(w, h, Encoding::Byte);
    if (data.size() != img.pixels.size())
      throw std::invalid_argument("GrayImage::from_bytes: size mismatch");
    for (std::size_t i = 0; i < data.size(); ++i) img.pixels[i] = data[i];
    return img;
  }

  std::vector<std::uint8_t> to_bytes() const {
    if (encoding != Encoding::Byte)
      throw std::runtime_error("GrayImage::to_bytes: image is real-encoded, convert first");
    std::vector<std::uint8_t> out(pixels.size());
    for (std::size_t i = 0; i < pixels.size(); ++i) {
      const double v = pixels[i];
      if (v < 0.0 || v > 255.0 || v != std::floor(v))
        throw std::runtime_error("GrayImage::to_bytes: non-integral byte pixel");
      out[i] = static_cast<std::uint8_t>(v);
    }
    return out;
  }
};

/// Byte -> real divides by 255; real -> byte multiplies by 255 and rounds
/// half away from zero, clamped to [0,255].
inline GrayImage convert_encoding(const GrayImage& img, Encoding target) {
  if (img.encoding == target) return img;
  GrayImage out(img.width, img.height, target);
  if (target == Encoding::Real) {
    for (std::size_t i = 0; i < img.pixels.size(); ++i) out.pixels[i] = img.pixels[i] / 255.0;
  } else {
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
      out.pixels[i] = clamp_pixel(round_half_away(img.pixels[i] * 255.0), Encoding::Byte);
  }
  return out;
}

/// Square binary watermark; bit 0 = black, 1 = white.
struct BinaryWatermark {
  int side = 0;
  std::vector<std::uint8_t> bits;

  BinaryWatermark() = default;
  BinaryWatermark(int m, std::vector<std::uint8_t> b) : side(m), bits(std::move(b)) {
    if (m <= 0) throw std::invalid_argument("BinaryWatermark: side must be positive");
    if (bits.size() != static_cast<std::size_t>(m) * m)
      throw std::invalid_argument("BinaryWatermark: bit count does not match side*side");
    for (auto v : bits)
      if (v > 1) throw std::invalid_argument("BinaryWatermark: bits must be 0 or 1");
  }

  std::uint8_t at(int row, int col) const { return bits[static_cast<std::size_t>(row) * side + col]; }

  int white_count() const {
    int k = 0;
    for (auto v : bits) k += v;
    return k;
  }
};

}  // namespace hadamark
