#include <catch2/catch.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "hadamark/image_io.hpp"

using namespace hadamark;

namespace {

const std::string kData = HADAMARK_DATA_DIR;

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("P5 load is an identity read") {
  const auto path = temp_path("t_2x2.pgm");
  write_file(path, std::string("P5\n2 2\n255\n") + '\x00' + '\xff' + '\x80' + '\x07');
  const GrayImage img = load_gray(path);
  CHECK(img.width == 2);
  CHECK(img.height == 2);
  CHECK(img.encoding == Encoding::Byte);
  CHECK(img.pixels == std::vector<double>{0, 255, 128, 7});
}

TEST_CASE("PGM header comments and whitespace are tolerated") {
  const auto path = temp_path("t_comment.pgm");
  write_file(path, std::string("P5\n# a comment\n 2\t2 # more\n255\n") + "\x01\x02\x03\x04");
  const GrayImage img = load_gray(path);
  CHECK(img.pixels == std::vector<double>{1, 2, 3, 4});
}

TEST_CASE("save then load round-trips bit-exactly") {
  GrayImage img(5, 3, Encoding::Byte);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) img.pixels[i] = (i * 37) % 256;
  const auto path = temp_path("t_roundtrip.pgm");
  save_gray(img, path);
  const GrayImage back = load_gray(path);
  CHECK(back.width == img.width);
  CHECK(back.height == img.height);
  CHECK(back.pixels == img.pixels);
}

TEST_CASE("all-zero image serializes to header plus zero bytes") {
  GrayImage img(4, 4, Encoding::Byte);
  const auto path = temp_path("t_zero.pgm");
  save_gray(img, path);
  std::ifstream in(path, std::ios::binary);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == std::string("P5\n4 4\n255\n") + std::string(16, '\0'));
}

TEST_CASE("saving a real-encoded image is an error") {
  GrayImage img(2, 2, Encoding::Real, 0.5);
  CHECK_THROWS(save_gray(img, temp_path("t_real.pgm")));
}

TEST_CASE("PGM error paths") {
  CHECK_THROWS(load_gray(temp_path("t_missing_file.pgm")));
  const auto bad_maxval = temp_path("t_maxval.pgm");
  write_file(bad_maxval, std::string("P5\n1 1\n65535\n") + "\x01\x01");
  CHECK_THROWS_WITH(load_gray(bad_maxval), Catch::Contains("maxval"));
  const auto truncated = temp_path("t_trunc.pgm");
  write_file(truncated, "P5\n4 4\n255\nxx");
  CHECK_THROWS(load_gray(truncated));
  const auto ascii = temp_path("t_ascii.pgm");
  write_file(ascii, "P2\n1 1\n255\n0\n");
  CHECK_THROWS(load_gray(ascii));
}

TEST_CASE("PNG grayscale loads with exact pixel values") {
  const GrayImage img = load_gray(kData + "/fixtures/gray8_4x4.png");
  REQUIRE(img.width == 4);
  REQUIRE(img.height == 4);
  for (int i = 0; i < 16; ++i) CHECK(img.pixels[i] == i * 16);
}

TEST_CASE("16-bit PNG is rejected as unsupported depth") {
  CHECK_THROWS_WITH(load_gray(kData + "/fixtures/gray16_4x4.png"), Catch::Contains("depth"));
}

TEST_CASE("color PNG is rejected as non-grayscale") {
  CHECK_THROWS_WITH(load_gray(kData + "/fixtures/rgb_4x4.png"), Catch::Contains("grayscale"));
}

TEST_CASE("P4 watermark loads with PBM black/white inverted to bits") {
  // PBM: 1 = black; watermark bits: 1 = white.
  // File bits 1,0,0,1 -> watermark 0,1,1,0 -> white_count 2.
  const auto path = temp_path("t_2x2.pbm");
  write_file(path, std::string("P4\n2 2\n") + '\x80' + '\x40');  // rows: 10, 01
  const BinaryWatermark wm = load_watermark(path);
  CHECK(wm.side == 2);
  CHECK(wm.bits == std::vector<std::uint8_t>{0, 1, 1, 0});
  CHECK(wm.white_count() == 2);
}

TEST_CASE("watermark round-trips through PBM") {
  BinaryWatermark wm(4, {1, 0, 0, 1, 0, 1, 1, 0, 1, 1, 0, 0, 0, 0, 1, 1});
  const auto path = temp_path("t_roundtrip.pbm");
  save_watermark(wm, path);
  const BinaryWatermark back = load_watermark(path);
  CHECK(back.side == wm.side);
  CHECK(back.bits == wm.bits);
}

TEST_CASE("grayscale watermark thresholds at 128") {
  GrayImage img(2, 2, Encoding::Byte);
  img.pixels = {200, 50, 128, 127};
  const auto path = temp_path("t_thresh.pgm");
  save_gray(img, path);
  const BinaryWatermark wm = load_watermark(path);
  CHECK(wm.bits == std::vector<std::uint8_t>{1, 0, 1, 0});
}

TEST_CASE("non-square watermark is rejected") {
  const auto path = temp_path("t_3x4.pbm");
  write_file(path, std::string("P4\n3 4\n") + std::string(4, '\0'));
  CHECK_THROWS_WITH(load_watermark(path), Catch::Contains("square"));
  const auto pgm = temp_path("t_3x4.pgm");
  write_file(pgm, std::string("P5\n3 4\n255\n") + std::string(12, '\0'));
  CHECK_THROWS_WITH(load_watermark(pgm), Catch::Contains("square"));
}

TEST_CASE("byte->real->byte is the identity for every byte value") {
  GrayImage img(16, 16, Encoding::Byte);
  for (int i = 0; i < 256; ++i) img.pixels[i] = i;
  const GrayImage back = convert_encoding(convert_encoding(img, Encoding::Real), Encoding::Byte);
  CHECK(back.pixels == img.pixels);
}

TEST_CASE("encoding conversion endpoints") {
  GrayImage img(1, 1, Encoding::Byte, 255);
  CHECK(convert_encoding(img, Encoding::Real).pixels[0] == 1.0);
  GrayImage half(1, 1, Encoding::Real, 0.5);
  // 127.5 rounds half away from zero -> 128
  CHECK(convert_encoding(half, Encoding::Byte).pixels[0] == 128.0);
  // conversion to the same encoding is a no-op
  CHECK(convert_encoding(img, Encoding::Byte).pixels == img.pixels);
}

TEST_CASE("white and black counts partition the watermark") {
  BinaryWatermark wm(3, {1, 0, 1, 0, 0, 1, 1, 1, 0});
  CHECK(wm.white_count() == 5);
  int black = 0;
  for (auto b : wm.bits) black += b == 0;
  CHECK(wm.white_count() + black == 9);
}

TEST_CASE("watermark construction validates its bits") {
  CHECK_THROWS(BinaryWatermark(2, {0, 1, 2, 1}));
  CHECK_THROWS(BinaryWatermark(2, {0, 1, 1}));
}
