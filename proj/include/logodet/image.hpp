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

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "logodet/errors.hpp"

namespace logodet {

// 8-bit RGBA raster, row-major from the top-left corner.
struct RgbaImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // 4 * width * height

  RgbaImage() = default;
  RgbaImage(int w, int h)
      : width(w), height(h),
        pixels(static_cast<std::size_t>(w) * h * 4, 0) {}

  const std::uint8_t* at(int x, int y) const {
    return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 4;
  }
  std::uint8_t* at(int x, int y) {
    return pixels.data() + (static_cast<std::size_t>(y) * width + x) * 4;
  }

  void fill(std::uint8_t r, std::uint8_t g, std::uint8_t b,
            std::uint8_t a = 255);
};

RgbaImage decode_png(const std::uint8_t* data, std::size_t len);
std::vector<std::uint8_t> encode_png(const RgbaImage& img);
RgbaImage read_png(const std::string& path);
void write_png(const RgbaImage& img, const std::string& path);

// Bilinear sample at continuous coordinates (pixel centers at i + 0.5),
// clamp-to-edge. Returns RGBA in [0, 255] doubles.
std::array<double, 4> sample_bilinear(const RgbaImage& img, double x, double y);

// Plain bilinear resize, aspect ratio not preserved.
RgbaImage resize_bilinear(const RgbaImage& src, int out_w, int out_h);

// Normalized 1-D Gaussian taps over [-radius, radius], radius = ceil(3*sigma).
// sigma <= 0 yields the identity kernel {1}.
std::vector<double> gaussian_kernel(double sigma);

// Separable Gaussian blur of one scalar channel with clamp-to-edge borders.
// Operates in doubles so repeated filtering does not accumulate rounding.
std::vector<double> blur_gaussian(const std::vector<double>& channel, int width,
                                  int height, double sigma);

}  // namespace logodet
