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

#include <vector>

#include "logodet/descriptor.hpp"

namespace logodet {

// PCA whitening transform: x -> P (x - mean). Rows of the projection are
// covariance eigenvectors scaled by 1/sqrt(lambda + eps), eigenvalues in
// descending order.
struct WhitenTransform {
  int in_dim = 0;
  int out_dim = 0;
  std::vector<double> mean;        // in_dim
  std::vector<double> projection;  // row-major, out_dim x in_dim
  double eps = 1e-10;
};

// Fits on >= 2 same-dimension samples; covariance uses the n-1 divisor.
// keep_dims < 1 keeps every dimension. Throws InsufficientData or, when all
// eigenvalues fall below eps, DegenerateCovariance.
WhitenTransform fit_whitening(const std::vector<Descriptor>& samples,
                              double eps = 1e-10, int keep_dims = -1);

Descriptor apply_whitening(const WhitenTransform& t, const Descriptor& v);

}  // namespace logodet
