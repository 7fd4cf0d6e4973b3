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

#include "logodet/descriptor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace logodet {

void FeatureMap::validate() const {
  if (width <= 0 || height <= 0 || channels <= 0) {
    throw DimensionMismatch("FeatureMap: dimensions must be positive");
  }
  if (data.size() != static_cast<std::size_t>(width) * height * channels) {
    throw DimensionMismatch("FeatureMap: data length does not match w*h*c");
  }
  for (double v : data) {
    if (!std::isfinite(v)) {
      throw FormatError("FeatureMap: non-finite entry");
    }
  }
}

AffineHead AffineHead::identity(int dim) {
  AffineHead head;
  head.in_dim = dim;
  head.out_dim = dim;
  head.weights.assign(static_cast<std::size_t>(dim) * dim, 0.0);
  head.bias.assign(dim, 0.0);
  for (int i = 0; i < dim; ++i) {
    head.weights[static_cast<std::size_t>(i) * dim + i] = 1.0;
  }
  return head;
}

Pooling pooling_from_string(const std::string& name) {
  if (name == "max") return Pooling::kMax;
  if (name == "avg") return Pooling::kAvg;
  if (name == "rmac") return Pooling::kRmac;
  throw FormatError("unknown pooling mode: " + name);
}

std::string to_string(Pooling pooling) {
  switch (pooling) {
    case Pooling::kMax: return "max";
    case Pooling::kAvg: return "avg";
    case Pooling::kRmac: return "rmac";
  }
  return "max";
}

double l2_norm(const Descriptor& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

Descriptor l2_normalize(const Descriptor& v) {
  double n = l2_norm(v);
  if (n < 1e-12) {
    throw ZeroVector("l2_normalize: cannot normalize a zero vector");
  }
  Descriptor out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / n;
  return out;
}

Descriptor max_pool_global(const FeatureMap& fm) {
  fm.validate();
  Descriptor out(fm.channels, -std::numeric_limits<double>::infinity());
  const int cells = fm.width * fm.height;
  for (int cell = 0; cell < cells; ++cell) {
    const double* p = fm.data.data() + static_cast<std::size_t>(cell) * fm.channels;
    for (int c = 0; c < fm.channels; ++c) {
      out[c] = std::max(out[c], p[c]);
    }
  }
  return out;
}

Descriptor avg_pool_global(const FeatureMap& fm) {
  fm.validate();
  Descriptor out(fm.channels, 0.0);
  const int cells = fm.width * fm.height;
  for (int cell = 0; cell < cells; ++cell) {
    const double* p = fm.data.data() + static_cast<std::size_t>(cell) * fm.channels;
    for (int c = 0; c < fm.channels; ++c) {
      out[c] += p[c];
    }
  }
  for (int c = 0; c < fm.channels; ++c) out[c] /= cells;
  return out;
}

namespace {

// Evenly spaced window offsets covering [0, extent) with the given side,
// spaced so that consecutive windows overlap by ~40% of the side.
std::vector<int> window_offsets(int extent, int side) {
  if (extent <= side) return {0};
  int n = std::max(
      2, static_cast<int>(std::ceil((extent - side) / (0.6 * side))) + 1);
  std::vector<int> offsets(n);
  for (int i = 0; i < n; ++i) {
    offsets[i] = static_cast<int>(
        std::llround(static_cast<double>(i) * (extent - side) / (n - 1)));
  }
  return offsets;
}

}  // namespace

std::vector<RmacRegion> rmac_regions(int width, int height, int levels) {
  if (levels < 1) {
    throw DimensionMismatch("rmac_regions: levels must be >= 1");
  }
  std::vector<RmacRegion> regions;
  const int short_side = std::min(width, height);
  for (int level = 1; level <= levels; ++level) {
    int side = std::max(
        1, static_cast<int>(std::llround(2.0 * short_side / (level + 1))));
    for (int y : window_offsets(height, side)) {
      for (int x : window_offsets(width, side)) {
        regions.push_back({x, y, side});
      }
    }
  }
  return regions;
}

Descriptor rmac_pool(const FeatureMap& fm, int levels) {
  fm.validate();
  Descriptor sum(fm.channels, 0.0);
  for (const RmacRegion& r : rmac_regions(fm.width, fm.height, levels)) {
    Descriptor pooled(fm.channels, -std::numeric_limits<double>::infinity());
    const int x1 = std::min(r.x + r.side, fm.width);
    const int y1 = std::min(r.y + r.side, fm.height);
    for (int y = r.y; y < y1; ++y) {
      for (int x = r.x; x < x1; ++x) {
        for (int c = 0; c < fm.channels; ++c) {
          pooled[c] = std::max(pooled[c], fm.at(y, x, c));
        }
      }
    }
    Descriptor unit = l2_normalize(pooled);
    for (int c = 0; c < fm.channels; ++c) sum[c] += unit[c];
  }
  return l2_normalize(sum);
}

Descriptor apply_affine(const AffineHead& head, const Descriptor& v) {
  if (static_cast<int>(v.size()) != head.in_dim) {
    throw DimensionMismatch("apply_affine: input dim " +
                            std::to_string(v.size()) + " != head in_dim " +
                            std::to_string(head.in_dim));
  }
  Descriptor out(head.out_dim);
  for (int row = 0; row < head.out_dim; ++row) {
    const double* w = head.weights.data() + static_cast<std::size_t>(row) * head.in_dim;
    double s = head.bias[row];
    for (int col = 0; col < head.in_dim; ++col) {
      s += w[col] * v[col];
    }
    out[row] = s;
  }
  return out;
}

Descriptor embed(const Descriptor& pooled, const AffineHead& head) {
  return l2_normalize(apply_affine(head, l2_normalize(pooled)));
}

Descriptor featurize(const FeatureMap& fm, const AffineHead& head,
                     Pooling pooling, int rmac_levels) {
  Descriptor pooled;
  switch (pooling) {
    case Pooling::kMax: pooled = max_pool_global(fm); break;
    case Pooling::kAvg: pooled = avg_pool_global(fm); break;
    case Pooling::kRmac: pooled = rmac_pool(fm, rmac_levels); break;
  }
  return embed(pooled, head);
}

}  // namespace logodet
