#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hadamark/image.hpp"

namespace hadamark {
namespace detail {

inline int pnm_getc(std::istream& in) {
  int c = in.get();
  if (c == '#') {  // comment runs to end of line
    while (c != '\n' && c != EOF) c = in.get();
  }
  return c;
}

inline int pnm_read_uint(std::istream& in) {
  int c = pnm_getc(in);
  while (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f') c = pnm_getc(in);
  if (c < '0' || c > '9') throw std::runtime_error("netpbm: malformed header");
  long v = 0;
  while (c >= '0' && c <= '9') {
    v = v * 10 + (c - '0');
    if (v > 1 << 24) throw std::runtime_error("netpbm: header value out of range");
    c = in.get();
  }
  return static_cast<int>(v);
}

inline std::string pnm_magic(std::istream& in) {
  char m[2];
  if (!in.read(m, 2)) throw std::runtime_error("netpbm: unreadable file");
  return std::string(m, 2);
}

}  // namespace detail

/// Binary PGM (P5, maxval 255) reader.
inline GrayImage load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  if (detail::pnm_magic(in) != "P5") throw std::runtime_error(path + ": not a binary PGM (P5)");
  const int w = detail::pnm_read_uint(in);
  const int h = detail::pnm_read_uint(in);
  const int maxval = detail::pnm_read_uint(in);
  if (maxval != 255) throw std::runtime_error(path + ": unsupported maxval (must be 255)");
  if (w <= 0 || h <= 0) throw std::runtime_error(path + ": bad dimensions");
  std::vector<std::uint8_t> data(static_cast<std::size_t>(w) * h);
  if (!in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size())))
    throw std::runtime_error(path + ": truncated pixel data");
  return GrayImage::from_bytes(w, h, data);
}

/// Bit-exact P5 writer; byte-encoded input only.
inline void save_pgm(const GrayImage& img, const std::string& path) {
  if (img.encoding != Encoding::Byte)
    throw std::runtime_error("save_pgm: real-encoded image, convert to byte first");
  const auto data = img.to_bytes();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw std::runtime_error("I/O failure writing " + path);
}

/// P4 PBM reader. PBM stores 1 = black; watermark bits use 1 = white, so
/// file bits are inverted on load.
inline BinaryWatermark load_pbm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  if (detail::pnm_magic(in) != "P4") throw std::runtime_error(path + ": not a binary PBM (P4)");
  const int w = detail::pnm_read_uint(in);
  const int h = detail::pnm_read_uint(in);
  if (w != h) throw std::runtime_error(path + ": watermark must be square");
  const int row_bytes = (w + 7) / 8;
  std::vector<std::uint8_t> packed(static_cast<std::size_t>(row_bytes) * h);
  if (!in.read(reinterpret_cast<char*>(packed.data()), static_cast<std::streamsize>(packed.size())))
    throw std::runtime_error(path + ": truncated pixel data");
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(w) * h);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const std::uint8_t byte = packed[static_cast<std::size_t>(r) * row_bytes + c / 8];
      const int black = (byte >> (7 - c % 8)) & 1;
      bits[static_cast<std::size_t>(r) * w + c] = static_cast<std::uint8_t>(1 - black);
    }
  return BinaryWatermark(w, std::move(bits));
}

inline void save_pbm(const BinaryWatermark& wm, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "P4\n" << wm.side << " " << wm.side << "\n";
  const int row_bytes = (wm.side + 7) / 8;
  std::vector<std::uint8_t> packed(static_cast<std::size_t>(row_bytes) * wm.side, 0);
  for (int r = 0; r < wm.side; ++r)
    for (int c = 0; c < wm.side; ++c)
      if (wm.at(r, c) == 0)  // black -> file bit 1
        packed[static_cast<std::size_t>(r) * row_bytes + c / 8] |=
            static_cast<std::uint8_t>(1u << (7 - c % 8));
  out.write(reinterpret_cast<const char*>(packed.data()), static_cast<std::streamsize>(packed.size()));
  if (!out) throw std::runtime_error("I/O failure writing " + path);
}

}  // namespace hadamark
