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

#include <tuple>

namespace logodet {

// Axis-aligned box in pixel coordinates, x_min < x_max and y_min < y_max.
struct BBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  bool valid() const { return x_min < x_max && y_min < y_max; }

  friend bool operator==(const BBox& a, const BBox& b) {
    return a.x_min == b.x_min && a.y_min == b.y_min && a.x_max == b.x_max &&
           a.y_max == b.y_max;
  }
  friend bool operator<(const BBox& a, const BBox& b) {
    return std::tie(a.x_min, a.y_min, a.x_max, a.y_max) <
           std::tie(b.x_min, b.y_min, b.x_max, b.y_max);
  }
};

}  // namespace logodet
