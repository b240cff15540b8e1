#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hadamark/ga.hpp"
#include "hadamark/hadamard.hpp"
#include "hadamark/image.hpp"

namespace hadamark {

/// Coefficient positions are 1-based (row, col) in the transformed block,
/// matching the usual matrix-entry convention. strict_margin widens blocks
/// whose coefficients already sit in the right order but closer than 2b;
/// off by default, where such blocks stay untouched.
struct EmbedParams {
  double b = 2.01;
  std::pair<int, int> coeff_a{3, 3};
  std::pair<int, int> coeff_b{3, 5};
  bool strict_margin = false;

  void validate(int order) const {
    auto inside = [order](std::pair<int, int> c) {
      return c.first >= 1 && c.first <= order && c.second >= 1 && c.second <= order;
    };
    if (!inside(coeff_a) || !inside(coeff_b))
      throw std::invalid_argument("EmbedParams: coefficient position outside the block");
    if (coeff_a == coeff_b)
      throw std::invalid_argument("EmbedParams: the two coefficients must differ");
    if (coeff_a == std::make_pair(1, 1) || coeff_b == std::make_pair(1, 1))
      throw std::invalid_argument("EmbedParams: (1,1) carries the block mean, pick AC coefficients");
    if (b < 0.0) throw std::invalid_argument("EmbedParams: b must be >= 0");
  }
};

/// Everything blind extraction needs. perm empty means identity.
struct WatermarkKey {
  int m = 0;           // watermark side
  int n = 0;           // cover side
  int order = 0;       // Hadamard order 4t
  int block_side = 0;  // floor(n/m)
  EmbedParams params;
  Perm perm;
  std::optional<std::uint64_t> rng_seed;

  void validate() const {
    if (m <= 0 || n <= 0) throw std::invalid_argument("WatermarkKey: bad dimensions");
    if (block_side != n / m) throw std::invalid_argument("WatermarkKey: block_side != floor(n/m)");
    if (static_cast<long>(m) * block_side > n)
      throw std::invalid_argument("WatermarkKey: blocks do not fit the cover");
    if (order > block_side)
      throw std::invalid_argument("WatermarkKey: Hadamard order exceeds the block side");
    params.validate(order);
    if (!perm.empty()) {
      if (perm.size() != static_cast<std::size_t>(m) * m)
        throw std::invalid_argument("WatermarkKey: permutation length != m^2");
      if (!is_permutation_of_n(perm))
        throw std::invalid_argument("WatermarkKey: permutation is not a bijection");
    }
  }
};

inline WatermarkKey make_key(int m, int n, int order, double b) {
  WatermarkKey key;
  key.m = m;
  key.n = n;
  key.order = order;
  key.block_side = n / m;
  key.params.b = b;
  key.validate();
  return key;
}

/// The recommended margin parameter: b just above t = order/4 for byte
/// images (a coefficient change must survive rounding to be noticeable), a
/// small constant for real-encoded images.
inline double default_b(int order, Encoding encoding) {
  if (encoding == Encoding::Real) return 0.01;
  return order / 4.0 + 0.01;
}

/// Embeds one bit into a transformed block by ordering the chosen
/// coefficient pair: bit 0 forces b2 > b1, bit 1 forces b2 < b1, each by the
/// margin 2b. Blocks whose coefficients already satisfy the ordering are
/// returned unchanged.
inline std::vector<double> embed_block(std::span<const double> block, int bit,
                                       const EmbedParams& params, const HadamardMatrix& h) {
  std::vector<double> coeffs = forward(h, block);
  const std::size_t ia =
      static_cast<std::size_t>(params.coeff_a.first - 1) * h.order + (params.coeff_a.second - 1);
  const std::size_t ib =
      static_cast<std::size_t>(params.coeff_b.first - 1) * h.order + (params.coeff_b.second - 1);
  const double b1 = coeffs[ia];
  const double b2 = coeffs[ib];
  const double d = std::abs(b1 - b2) / 2.0;
  if (bit == 0 && b2 <= b1) {
    coeffs[ia] = b1 - d - params.b;
    coeffs[ib] = b2 + d + params.b;
  } else if (bit == 1 && b2 >= b1) {
    coeffs[ia] = b1 + d + params.b;
    coeffs[ib] = b2 - d - params.b;
  } else if (params.strict_margin && std::abs(b1 - b2) < 2.0 * params.b) {
    // order already correct but the gap is thin; widen it to exactly 2b
    const double mid = (b1 + b2) / 2.0;
    coeffs[ia] = bit == 0 ? mid - params.b : mid + params.b;
    coeffs[ib] = bit == 0 ? mid + params.b : mid - params.b;
  } else {
    return std::vector<double>(block.begin(), block.end());
  }
  return inverse(h, coeffs);
}

/// Reads one bit back: 0 iff b2 > b1 (ties decode as 1).
inline int extract_block(std::span<const double> block, const EmbedParams& params,
                         const HadamardMatrix& h) {
  const std::vector<double> coeffs = forward(h, block);
  const double b1 = coeffs[static_cast<std::size_t>(params.coeff_a.first - 1) * h.order +
                           (params.coeff_a.second - 1)];
  const double b2 = coeffs[static_cast<std::size_t>(params.coeff_b.first - 1) * h.order +
                           (params.coeff_b.second - 1)];
  return b2 > b1 ? 0 : 1;
}

namespace detail {

inline void check_codec_geometry(const GrayImage& img, const WatermarkKey& key) {
  key.validate();
  if (!img.square()) throw std::invalid_argument("codec: cover image must be square");
  if (img.width != key.n) throw std::invalid_argument("codec: image side does not match the key");
}

inline std::vector<double> read_subblock(const GrayImage& img, int r0, int c0, int order) {
  std::vector<double> block(static_cast<std::size_t>(order) * order);
  for (int r = 0; r < order; ++r)
    for (int c = 0; c < order; ++c)
      block[static_cast<std::size_t>(r) * order + c] = img.at(r0 + r, c0 + c);
  return block;
}

}  // namespace detail

/// Embeds an m x m watermark into the cover: the cover is partitioned into
/// m^2 blocks of side floor(n/m) in row-major order, and bit i goes into the
/// order x order sub-block at the top-left corner of block i. Pixels outside
/// the sub-blocks are untouched. The watermark is expected already permuted
/// when the key carries a permutation.
inline GrayImage embed(const GrayImage& cover, const BinaryWatermark& wm, const WatermarkKey& key) {
  detail::check_codec_geometry(cover, key);
  if (wm.side != key.m) throw std::invalid_argument("embed: watermark side does not match the key");
  const HadamardMatrix h = sylvester(key.order);
  GrayImage out = cover;
  for (int bi = 0; bi < key.m; ++bi)
    for (int bj = 0; bj < key.m; ++bj) {
      const int r0 = bi * key.block_side;
      const int c0 = bj * key.block_side;
      const int bit = wm.at(bi, bj);
      const auto block = detail::read_subblock(out, r0, c0, key.order);
      const auto marked = embed_block(block, bit, key.params, h);
      for (int r = 0; r < key.order; ++r)
        for (int c = 0; c < key.order; ++c) {
          double v = marked[static_cast<std::size_t>(r) * key.order + c];
          if (out.encoding == Encoding::Byte) v = round_half_away(v);
          out.at(r0 + r, c0 + c) = clamp_pixel(v, out.encoding);
        }
    }
  return out;
}

/// Blind extraction: recovers the m^2 bits block-wise from the marked image
/// alone, then applies the key's inverse permutation to restore the original
/// watermark orientation.
inline BinaryWatermark extract(const GrayImage& img, const WatermarkKey& key) {
  detail::check_codec_geometry(img, key);
  const HadamardMatrix h = sylvester(key.order);
  std::vector<std::uint8_t> raw(static_cast<std::size_t>(key.m) * key.m);
  for (int bi = 0; bi < key.m; ++bi)
    for (int bj = 0; bj < key.m; ++bj) {
      const auto block =
          detail::read_subblock(img, bi * key.block_side, bj * key.block_side, key.order);
      raw[static_cast<std::size_t>(bi) * key.m + bj] =
          static_cast<std::uint8_t>(extract_block(block, key.params, h));
    }
  if (key.perm.empty()) return BinaryWatermark(key.m, std::move(raw));
  std::vector<std::uint8_t> bits(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) bits[i] = raw[key.perm[i]];
  return BinaryWatermark(key.m, std::move(bits));
}

}  // namespace hadamark
