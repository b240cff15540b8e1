#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hadamark/codec.hpp"
#include "hadamark/format.hpp"
#include "hadamark/image.hpp"
#include "hadamark/jpeg_codec.hpp"
#include "hadamark/metrics.hpp"
#include "hadamark/rng.hpp"

namespace hadamark {

enum class AttackKind { Jpeg, Gaussian, SaltPepper };

/// Scale on which Gaussian mean/variance are read. ByteScale treats them as
/// pixel-value units (variance 0.001 -> sigma ~0.032 grey levels);
/// Normalized reads them on [0,1] and maps onto bytes (sigma = 255*sqrt(v)).
enum class NoiseScale { ByteScale, Normalized };

struct AttackSpec {
  AttackKind kind = AttackKind::Jpeg;
  int quality = 90;          // jpeg
  double mean = 0.0;         // gaussian
  double variance = 0.001;   // gaussian
  NoiseScale scale = NoiseScale::ByteScale;
  double density = 0.01;     // salt & pepper
  std::uint64_t rng_seed = 0;

  static AttackSpec jpeg(int quality) {
    AttackSpec s;
    s.kind = AttackKind::Jpeg;
    s.quality = quality;
    return s;
  }
  static AttackSpec gaussian(double mean, double variance, std::uint64_t seed,
                             NoiseScale scale = NoiseScale::ByteScale) {
    AttackSpec s;
    s.kind = AttackKind::Gaussian;
    s.mean = mean;
    s.variance = variance;
    s.scale = scale;
    s.rng_seed = seed;
    return s;
  }
  static AttackSpec salt_pepper(double density, std::uint64_t seed) {
    AttackSpec s;
    s.kind = AttackKind::SaltPepper;
    s.density = density;
    s.rng_seed = seed;
    return s;
  }

  std::string name() const {
    switch (kind) {
      case AttackKind::Jpeg: return "jpeg";
      case AttackKind::Gaussian: return "gaussian";
      case AttackKind::SaltPepper: return "salt_pepper";
    }
    throw std::logic_error("AttackSpec::name");
  }

  double param() const {
    switch (kind) {
      case AttackKind::Jpeg: return quality;
      case AttackKind::Gaussian: return variance;
      case AttackKind::SaltPepper: return density;
    }
    throw std::logic_error("AttackSpec::param");
  }
};

/// Applies one attack to a byte-encoded image. Deterministic given the
/// spec's rng_seed (JPEG unconditionally so).
inline GrayImage attack(const GrayImage& img, const AttackSpec& spec) {
  if (img.encoding != Encoding::Byte)
    throw std::invalid_argument("attack: byte-encoded image required");
  switch (spec.kind) {
    case AttackKind::Jpeg: {
      return decode_jpeg_gray(encode_jpeg_gray(img, spec.quality));
    }
    case AttackKind::Gaussian: {
      if (spec.variance < 0.0) throw std::invalid_argument("attack: variance must be >= 0");
      const double sigma = spec.scale == NoiseScale::Normalized
                               ? 255.0 * std::sqrt(spec.variance)
                               : std::sqrt(spec.variance);
      const double mean = spec.scale == NoiseScale::Normalized ? 255.0 * spec.mean : spec.mean;
      Rng rng(spec.rng_seed);
      GrayImage out = img;
      for (auto& px : out.pixels)
        px = clamp_pixel(round_half_away(px + rng.normal(mean, sigma)), Encoding::Byte);
      return out;
    }
    case AttackKind::SaltPepper: {
      if (spec.density < 0.0 || spec.density > 1.0)
        throw std::invalid_argument("attack: density must lie in [0,1]");
      const auto total = static_cast<std::int64_t>(img.pixels.size());
      const auto count = static_cast<std::int32_t>(std::floor(spec.density * total));
      Rng rng(spec.rng_seed);
      GrayImage out = img;
      for (auto idx : rng.sample(static_cast<std::int32_t>(total), count))
        out.pixels[idx] = rng.uniform_below(2) == 0 ? 0.0 : 255.0;
      return out;
    }
  }
  throw std::logic_error("attack");
}

struct RobustnessRow {
  std::string attack;
  double param = 0.0;
  double psnr = 0.0;  // cover vs attacked image
  double nc = 0.0;    // original watermark vs extraction from the attacked image
};

inline std::string robustness_csv(const std::vector<RobustnessRow>& rows) {
  std::string out = "attack,param,psnr,nc\n";
  for (const auto& row : rows)
    out += row.attack + "," + format_double(row.param) + "," + format_double(row.psnr) + "," +
           format_double(row.nc) + "\n";
  return out;
}

/// Embeds, attacks, extracts: one row per attack spec. The watermark is
/// permuted with the key's permutation before embedding and the extraction
/// inverts it, so nc always compares against the original mark.
inline std::vector<RobustnessRow> robustness_report(const GrayImage& cover,
                                                    const BinaryWatermark& wm,
                                                    const WatermarkKey& key,
                                                    const std::vector<AttackSpec>& specs) {
  const BinaryWatermark payload = key.perm.empty() ? wm : apply_permutation(wm, key.perm);
  const GrayImage marked = embed(cover, payload, key);
  std::vector<RobustnessRow> rows;
  rows.reserve(specs.size());
  for (const auto& spec : specs) {
    const GrayImage attacked = attack(marked, spec);
    RobustnessRow row;
    row.attack = spec.name();
    row.param = spec.param();
    row.psnr = psnr(cover, attacked);
    row.nc = nc(wm, extract(attacked, key));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace hadamark
