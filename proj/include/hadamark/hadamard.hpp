#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace hadamark {

/// Normalized Hadamard matrix: +-1 entries, pairwise orthogonal rows
/// (H*H^T == order*I), first row and column all +1.
struct HadamardMatrix {
  int order = 0;
  std::vector<int> entries;  // row-major, values +1 / -1

  int at(int row, int col) const { return entries[static_cast<std::size_t>(row) * order + col]; }
};

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// Sylvester construction H_{2n} = [[H_n, H_n], [H_n, -H_n]] from H_1 = [1].
/// Normalized by construction.
inline HadamardMatrix sylvester(int order) {
  if (!is_power_of_two(order))
    throw std::invalid_argument("sylvester: order must be a power of two");
  HadamardMatrix h;
  h.order = order;
  h.entries.assign(static_cast<std::size_t>(order) * order, 1);
  for (int n = 1; n < order; n *= 2) {
    // copy the n x n block into the three remaining quadrants
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        const int v = h.entries[static_cast<std::size_t>(r) * order + c];
        h.entries[static_cast<std::size_t>(r) * order + (c + n)] = v;
        h.entries[static_cast<std::size_t>(r + n) * order + c] = v;
        h.entries[static_cast<std::size_t>(r + n) * order + (c + n)] = -v;
      }
  }
  return h;
}

/// Largest available Hadamard order (powers of two, >= 4) that fits inside a
/// partition block, so the transformed sub-block embeds in the block.
inline int select_order(int block_side) {
  if (block_side < 4)
    throw std::invalid_argument("select_order: no Hadamard order fits a block this small");
  int order = 4;
  while (order * 2 <= block_side) order *= 2;
  return order;
}

namespace detail {

inline void require_block(const HadamardMatrix& h, std::span<const double> block) {
  const auto expect = static_cast<std::size_t>(h.order) * h.order;
  if (block.size() != expect)
    throw std::invalid_argument("hadamard transform: block size does not match matrix order");
}

}  // namespace detail

/// Extended forward transform B = H * A * H^T / order.
inline std::vector<double> forward(const HadamardMatrix& h, std::span<const double> block) {
  detail::require_block(h, block);
  const int n = h.order;
  std::vector<double> tmp(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> out(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)  // tmp = H * A
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int p = 0; p < n; ++p) acc += h.at(i, p) * block[static_cast<std::size_t>(p) * n + j];
      tmp[static_cast<std::size_t>(i) * n + j] = acc;
    }
  for (int i = 0; i < n; ++i)  // out = tmp * H^T / n
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int p = 0; p < n; ++p) acc += tmp[static_cast<std::size_t>(i) * n + p] * h.at(j, p);
      out[static_cast<std::size_t>(i) * n + j] = acc / n;
    }
  return out;
}

/// Inverse transform A = H^T * B * H / order.
inline std::vector<double> inverse(const HadamardMatrix& h, std::span<const double> coeffs) {
  detail::require_block(h, coeffs);
  const int n = h.order;
  std::vector<double> tmp(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> out(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)  // tmp = H^T * B
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int p = 0; p < n; ++p) acc += h.at(p, i) * coeffs[static_cast<std::size_t>(p) * n + j];
      tmp[static_cast<std::size_t>(i) * n + j] = acc;
    }
  for (int i = 0; i < n; ++i)  // out = tmp * H / n
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int p = 0; p < n; ++p) acc += tmp[static_cast<std::size_t>(i) * n + p] * h.at(p, j);
      out[static_cast<std::size_t>(i) * n + j] = acc / n;
    }
  return out;
}

}  // namespace hadamark
