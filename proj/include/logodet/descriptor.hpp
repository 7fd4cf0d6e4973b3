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

#include <string>
#include <vector>

#include "logodet/errors.hpp"

namespace logodet {

// Fixed-length embedding vector. Math is done in f64; persisted formats
// store f32 (see io.hpp).
using Descriptor = std::vector<double>;

// Stand-in for the last convolutional layer of a CNN: a width x height grid
// of channel vectors, stored row-major (y, x, c).
struct FeatureMap {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<double> data;

  FeatureMap() = default;
  FeatureMap(int w, int h, int c)
      : width(w), height(h), channels(c),
        data(static_cast<std::size_t>(w) * h * c, 0.0) {}

  double at(int y, int x, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  double& at(int y, int x, int c) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  // Throws if dimensions are non-positive, sizes disagree or any entry is
  // non-finite.
  void validate() const;
};

// Learned linear embedding layer: out = W v + b.
struct AffineHead {
  int in_dim = 0;
  int out_dim = 0;
  std::vector<double> weights;  // row-major, out_dim x in_dim
  std::vector<double> bias;     // out_dim

  static AffineHead identity(int dim);

  double w(int row, int col) const {
    return weights[static_cast<std::size_t>(row) * in_dim + col];
  }
};

enum class Pooling { kMax, kAvg, kRmac };

Pooling pooling_from_string(const std::string& name);
std::string to_string(Pooling pooling);

double l2_norm(const Descriptor& v);

// v / ||v||. Throws ZeroVector when ||v|| < 1e-12.
Descriptor l2_normalize(const Descriptor& v);

// Per-channel max over all spatial cells.
Descriptor max_pool_global(const FeatureMap& fm);

// Per-channel mean over all spatial cells.
Descriptor avg_pool_global(const FeatureMap& fm);

// One R-MAC region: a square window [x, x+side) x [y, y+side) of cells.
struct RmacRegion {
  int x = 0;
  int y = 0;
  int side = 0;
};

// Region layout for R-MAC pooling. At scale l (1-based) the square side is
// round(2*min(W,H)/(l+1)) and regions are spaced evenly along each axis so
// that consecutive regions overlap by roughly 40% (stride <= 0.6 * side).
// For a square map, scale 1 is a single region covering the whole map.
std::vector<RmacRegion> rmac_regions(int width, int height, int levels);

// Sum of l2-normalized per-region max-pool vectors, l2-normalized again.
Descriptor rmac_pool(const FeatureMap& fm, int levels);

Descriptor apply_affine(const AffineHead& head, const Descriptor& v);

// Full embedding chain: l2(pool(fm)) -> affine -> l2. Output is unit norm.
Descriptor featurize(const FeatureMap& fm, const AffineHead& head,
                     Pooling pooling, int rmac_levels = 3);

// As featurize, but starting from an already pooled (not yet normalized)
// vector. This is the path used at training time.
Descriptor embed(const Descriptor& pooled, const AffineHead& head);

}  // namespace logodet
