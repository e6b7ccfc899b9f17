#pragma once

#include <cctype>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <png.h>

#include "error.hpp"
#include "turtle.hpp"

namespace ontoguard {

/// 8-bit RGB raster, row-major, 3 bytes per pixel.
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, std::uint8_t fill = 0) : width_(width), height_(height) {
    if (width < 1 || height < 1) throw ArgumentError("image dimensions must be >= 1");
    data_.assign(static_cast<std::size_t>(width) * height * 3, fill);
  }
  RasterImage(int width, int height, std::vector<std::uint8_t> data) : width_(width), height_(height), data_(std::move(data)) {
    if (width < 1 || height < 1) throw ArgumentError("image dimensions must be >= 1");
    if (data_.size() != static_cast<std::size_t>(width) * height * 3)
      throw ArgumentError("pixel buffer length must be width * height * 3");
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return data_.empty(); }

  std::uint8_t& at(int x, int y, int c) { return data_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c]; }
  std::uint8_t at(int x, int y, int c) const { return data_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c]; }

  void set_pixel(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    at(x, y, 0) = r;
    at(x, y, 1) = g;
    at(x, y, 2) = b;
  }

  std::vector<std::uint8_t>& data() noexcept { return data_; }
  const std::vector<std::uint8_t>& data() const noexcept { return data_; }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

// ---- PPM (binary P6, maxval 255) ----

inline std::string encode_ppm(const RasterImage& img) {
  std::string out = "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.data().data()), img.data().size());
  return out;
}

inline RasterImage decode_ppm(std::string_view bytes) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&]() -> long {
    skip_ws();
    long v = 0;
    std::size_t start = pos;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') v = v * 10 + (bytes[pos++] - '0');
    if (pos == start || v > 1 << 20) throw ParseError("malformed PPM header", 1, static_cast<int>(pos) + 1, "");
    return v;
  };
  if (bytes.substr(0, 2) != "P6") throw ParseError("not a binary PPM (P6) file", 1, 1, std::string(bytes.substr(0, 2)));
  pos = 2;
  long w = read_int(), h = read_int(), maxval = read_int();
  if (maxval != 255) throw ParseError("only maxval 255 is supported", 1, static_cast<int>(pos), std::to_string(maxval));
  ++pos;  // single whitespace byte before the raster
  const std::size_t n = static_cast<std::size_t>(w) * h * 3;
  if (bytes.size() < pos + n) throw ParseError("truncated PPM raster", 1, static_cast<int>(pos), "");
  std::vector<std::uint8_t> data(bytes.begin() + pos, bytes.begin() + pos + n);
  return RasterImage(static_cast<int>(w), static_cast<int>(h), std::move(data));
}

// ---- PNG via libpng ----

namespace detail {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace detail

inline void write_png(const std::string& path, const RasterImage& img) {
  detail::FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw Error("cannot write '" + path + "'");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error("libpng: out of memory");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("libpng: cannot encode '" + path + "'");
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, img.width(), img.height(), 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < img.height(); ++y)
    png_write_row(png, img.data().data() + static_cast<std::size_t>(y) * img.width() * 3);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

/// Reads any 8/16-bit PNG, converting to 8-bit RGB (alpha dropped).
inline RasterImage read_png(const std::string& path) {
  detail::FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw Error("cannot open '" + path + "'");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error("libpng: out of memory");
  }
  RasterImage out;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error("libpng: cannot decode '" + path + "'");
  }
  png_init_io(png, f.get());
  png_read_info(png, info);
  png_set_expand(png);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_gray_to_rgb(png);
  png_read_update_info(png, info);
  const int w = static_cast<int>(png_get_image_width(png, info));
  const int h = static_cast<int>(png_get_image_height(png, info));
  out = RasterImage(w, h);
  rows.resize(h);
  for (int y = 0; y < h; ++y) rows[y] = out.data().data() + static_cast<std::size_t>(y) * w * 3;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

/// Loads .png or .ppm by extension.
inline RasterImage read_image(const std::string& path) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".png") == 0) return read_png(path);
  return decode_ppm(read_text_file(path));
}

inline void write_image(const std::string& path, const RasterImage& img) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".png") == 0) return write_png(path, img);
  write_text_file(path, encode_ppm(img));
}

}  // namespace ontoguard
