// Copyright 2026 The logodet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "logodet/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstring>
#include <fstream>

namespace logodet {

void RgbaImage::fill(std::uint8_t r, std::uint8_t g, std::uint8_t b,
                     std::uint8_t a) {
  for (std::size_t i = 0; i < pixels.size(); i += 4) {
    pixels[i] = r;
    pixels[i + 1] = g;
    pixels[i + 2] = b;
    pixels[i + 3] = a;
  }
}

namespace {

struct PngReadState {
  const std::uint8_t* data;
  std::size_t len;
  std::size_t pos;
};

void png_read_from_memory(png_structp png, png_bytep out, png_size_t n) {
  auto* s = static_cast<PngReadState*>(png_get_io_ptr(png));
  if (s->pos + n > s->len) {
    png_error(png, "unexpected end of PNG data");
  }
  std::memcpy(out, s->data + s->pos, n);
  s->pos += n;
}

void png_write_to_vector(png_structp png, png_bytep data, png_size_t n) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + n);
}

void png_flush_noop(png_structp) {}

}  // namespace

RgbaImage decode_png(const std::uint8_t* data, std::size_t len) {
  if (len < 8 || png_sig_cmp(data, 0, 8) != 0) {
    throw FormatError("not a PNG stream");
  }
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("png_create_info_struct failed");
  }

  RgbaImage img;
  std::vector<png_bytep> rows;
  PngReadState state{data, len, 0};
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("corrupt PNG stream");
  }
  png_set_read_fn(png, &state, png_read_from_memory);
  png_read_info(png, info);

  // Normalize everything to 8-bit RGBA.
  png_set_expand(png);
  png_set_strip_16(png);
  png_set_gray_to_rgb(png);
  png_set_add_alpha(png, 0xFF, PNG_FILLER_AFTER);
  png_read_update_info(png, info);

  img.width = static_cast<int>(png_get_image_width(png, info));
  img.height = static_cast<int>(png_get_image_height(png, info));
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height * 4);
  rows.resize(img.height);
  for (int y = 0; y < img.height; ++y) {
    rows[y] = img.pixels.data() + static_cast<std::size_t>(y) * img.width * 4;
  }
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

std::vector<std::uint8_t> encode_png(const RgbaImage& img) {
  if (img.width <= 0 || img.height <= 0 ||
      img.pixels.size() != static_cast<std::size_t>(img.width) * img.height * 4) {
    throw FormatError("encode_png: invalid image");
  }
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw IoError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("png_create_info_struct failed");
  }

  std::vector<std::uint8_t> out;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG encode failed");
  }
  png_set_write_fn(png, &out, png_write_to_vector, png_flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
               static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_RGBA,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < img.height; ++y) {
    png_write_row(png, const_cast<png_bytep>(
                           img.pixels.data() +
                           static_cast<std::size_t>(y) * img.width * 4));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

RgbaImage read_png(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  return decode_png(data.data(), data.size());
}

void write_png(const RgbaImage& img, const std::string& path) {
  auto data = encode_png(img);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("write failed: " + path);
}

std::array<double, 4> sample_bilinear(const RgbaImage& img, double x,
                                      double y) {
  double gx = x - 0.5;
  double gy = y - 0.5;
  int x0 = static_cast<int>(std::floor(gx));
  int y0 = static_cast<int>(std::floor(gy));
  double fx = gx - x0;
  double fy = gy - y0;
  auto clampx = [&](int v) { return std::clamp(v, 0, img.width - 1); };
  auto clampy = [&](int v) { return std::clamp(v, 0, img.height - 1); };
  const std::uint8_t* p00 = img.at(clampx(x0), clampy(y0));
  const std::uint8_t* p10 = img.at(clampx(x0 + 1), clampy(y0));
  const std::uint8_t* p01 = img.at(clampx(x0), clampy(y0 + 1));
  const std::uint8_t* p11 = img.at(clampx(x0 + 1), clampy(y0 + 1));
  std::array<double, 4> out;
  for (int c = 0; c < 4; ++c) {
    double top = p00[c] * (1.0 - fx) + p10[c] * fx;
    double bottom = p01[c] * (1.0 - fx) + p11[c] * fx;
    out[c] = top * (1.0 - fy) + bottom * fy;
  }
  return out;
}

RgbaImage resize_bilinear(const RgbaImage& src, int out_w, int out_h) {
  if (out_w <= 0 || out_h <= 0) {
    throw FormatError("resize_bilinear: output size must be positive");
  }
  RgbaImage dst(out_w, out_h);
  const double sx = static_cast<double>(src.width) / out_w;
  const double sy = static_cast<double>(src.height) / out_h;
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      auto px = sample_bilinear(src, (x + 0.5) * sx, (y + 0.5) * sy);
      std::uint8_t* out = dst.at(x, y);
      for (int c = 0; c < 4; ++c) {
        out[c] = static_cast<std::uint8_t>(
            std::clamp<long>(std::llround(px[c]), 0, 255));
      }
    }
  }
  return dst;
}

std::vector<double> gaussian_kernel(double sigma) {
  if (sigma <= 0.0) return {1.0};
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    double v = std::exp(-0.5 * (i * i) / (sigma * sigma));
    kernel[i + radius] = v;
    sum += v;
  }
  for (double& v : kernel) v /= sum;
  return kernel;
}

std::vector<double> blur_gaussian(const std::vector<double>& channel,
                                  int width, int height, double sigma) {
  if (channel.size() != static_cast<std::size_t>(width) * height) {
    throw DimensionMismatch("blur_gaussian: channel size mismatch");
  }
  if (sigma <= 0.0) return channel;
  const auto kernel = gaussian_kernel(sigma);
  const int radius = static_cast<int>(kernel.size() / 2);

  std::vector<double> tmp(channel.size());
  for (int y = 0; y < height; ++y) {
    const double* row = channel.data() + static_cast<std::size_t>(y) * width;
    for (int x = 0; x < width; ++x) {
      double s = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        int xi = std::clamp(x + i, 0, width - 1);
        s += kernel[i + radius] * row[xi];
      }
      tmp[static_cast<std::size_t>(y) * width + x] = s;
    }
  }
  std::vector<double> out(channel.size());
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double s = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        int yi = std::clamp(y + i, 0, height - 1);
        s += kernel[i + radius] * tmp[static_cast<std::size_t>(yi) * width + x];
      }
      out[static_cast<std::size_t>(y) * width + x] = s;
    }
  }
  return out;
}

}  // namespace logodet
