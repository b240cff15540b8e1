#pragma once

#include <csetjmp>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

extern "C" {
#include <jpeglib.h>
}

#include "hadamark/image.hpp"

namespace hadamark {
namespace detail {

struct JpegErr {
  jpeg_error_mgr mgr;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX] = {};
};

inline void jpeg_err_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErr*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

}  // namespace detail

/// Baseline JPEG encode of a byte grayscale image at the given quality.
inline std::vector<unsigned char> encode_jpeg_gray(const GrayImage& img, int quality) {
  if (quality < 1 || quality > 100)
    throw std::invalid_argument("encode_jpeg_gray: quality must be 1..100");
  const auto bytes = img.to_bytes();

  jpeg_compress_struct cinfo{};
  detail::JpegErr err{};
  cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = detail::jpeg_err_exit;

  unsigned char* buf = nullptr;
  unsigned long buf_len = 0;
  if (setjmp(err.jump)) {
    jpeg_destroy_compress(&cinfo);
    if (buf) std::free(buf);
    throw std::runtime_error(std::string("jpeg encode failed: ") + err.message);
  }

  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, &buf, &buf_len);
  cinfo.image_width = static_cast<JDIMENSION>(img.width);
  cinfo.image_height = static_cast<JDIMENSION>(img.height);
  cinfo.input_components = 1;
  cinfo.in_color_space = JCS_GRAYSCALE;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);  // TRUE keeps the tables baseline
  jpeg_start_compress(&cinfo, TRUE);
  while (cinfo.next_scanline < cinfo.image_height) {
    const JSAMPLE* row = bytes.data() + static_cast<std::size_t>(cinfo.next_scanline) * img.width;
    JSAMPROW rows[1] = {const_cast<JSAMPROW>(row)};
    jpeg_write_scanlines(&cinfo, rows, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);

  std::vector<unsigned char> out(buf, buf + buf_len);
  std::free(buf);
  return out;
}

inline GrayImage decode_jpeg_gray(const std::vector<unsigned char>& data) {
  jpeg_decompress_struct cinfo{};
  detail::JpegErr err{};
  cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = detail::jpeg_err_exit;

  std::vector<std::uint8_t> bytes;  // ahead of setjmp so it is released on error
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw std::runtime_error(std::string("jpeg decode failed: ") + err.message);
  }

  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, data.data(), static_cast<unsigned long>(data.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_GRAYSCALE;
  jpeg_start_decompress(&cinfo);

  const int w = static_cast<int>(cinfo.output_width);
  const int h = static_cast<int>(cinfo.output_height);
  bytes.resize(static_cast<std::size_t>(w) * h);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW rows[1] = {bytes.data() + static_cast<std::size_t>(cinfo.output_scanline) * w};
    jpeg_read_scanlines(&cinfo, rows, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);

  return GrayImage::from_bytes(w, h, bytes);
}

}  // namespace hadamark
