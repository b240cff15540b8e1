#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>

#include "hadamark/image.hpp"

namespace hadamark {

struct QualityReport {
  double mse = 0.0;
  double psnr = std::numeric_limits<double>::infinity();
  double nc = 1.0;
};

inline double mse(const GrayImage& a, const GrayImage& b) {
  if (a.width != b.width || a.height != b.height)
    throw std::invalid_argument("mse: dimension mismatch");
  if (a.encoding != b.encoding) throw std::invalid_argument("mse: encoding mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    const double d = a.pixels[i] - b.pixels[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.pixels.size());
}

/// PSNR = 10 log10(range^2 / MSE); +infinity for identical images.
inline double psnr(const GrayImage& a, const GrayImage& b) {
  const double m = mse(a, b);
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(a.range() * a.range() / m);
}

/// Normalized correlation of two nonnegative arrays,
/// sum(a*b) / (sqrt(sum a^2) * sqrt(sum b^2)). Undefined for an all-zero
/// operand.
inline double nc_arrays(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("nc: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0)
    throw std::invalid_argument("nc: undefined for an all-zero operand");
  // single square root of the product: exact when both norms agree, so
  // identical inputs give exactly 1
  return dot / std::sqrt(na * nb);
}

/// NC of two binary watermarks: |whites(w) & whites(ew)| / sqrt(k_w * k_ew).
inline double nc(const BinaryWatermark& w, const BinaryWatermark& ew) {
  if (w.side != ew.side) throw std::invalid_argument("nc: dimension mismatch");
  long overlap = 0, kw = 0, ke = 0;
  for (std::size_t i = 0; i < w.bits.size(); ++i) {
    kw += w.bits[i];
    ke += ew.bits[i];
    overlap += w.bits[i] & ew.bits[i];
  }
  if (kw == 0 || ke == 0)
    throw std::invalid_argument("nc: undefined for an all-zero watermark");
  return static_cast<double>(overlap) /
         std::sqrt(static_cast<double>(kw) * static_cast<double>(ke));
}

inline QualityReport quality(const GrayImage& a, const GrayImage& b) {
  QualityReport r;
  r.mse = mse(a, b);
  r.psnr = r.mse == 0.0 ? std::numeric_limits<double>::infinity()
                        : 10.0 * std::log10(a.range() * a.range() / r.mse);
  r.nc = nc_arrays(a.pixels, b.pixels);
  return r;
}

}  // namespace hadamark
