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

#include "logodet/whitening.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace logodet {

WhitenTransform fit_whitening(const std::vector<Descriptor>& samples,
                              double eps, int keep_dims) {
  if (samples.size() < 2) {
    throw InsufficientData("fit_whitening: need at least 2 samples");
  }
  if (eps <= 0.0) {
    throw FormatError("fit_whitening: eps must be positive");
  }
  const int d = static_cast<int>(samples.front().size());
  for (const Descriptor& s : samples) {
    if (static_cast<int>(s.size()) != d) {
      throw DimensionMismatch("fit_whitening: samples have mixed dimensions");
    }
  }
  const int n = static_cast<int>(samples.size());

  Eigen::MatrixXd x(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) x(i, j) = samples[i][j];
  }
  Eigen::RowVectorXd mean = x.colwise().mean();
  Eigen::MatrixXd centered = x.rowwise() - mean;
  Eigen::MatrixXd cov = (centered.adjoint() * centered) / (n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw DegenerateCovariance("fit_whitening: eigendecomposition failed");
  }
  // Eigen returns eigenvalues in ascending order; we want descending.
  Eigen::VectorXd evals = solver.eigenvalues().reverse();
  Eigen::MatrixXd evecs = solver.eigenvectors().rowwise().reverse();

  if (evals.maxCoeff() < eps) {
    throw DegenerateCovariance("fit_whitening: all eigenvalues below eps");
  }

  const int out = (keep_dims < 1) ? d : std::min(keep_dims, d);
  WhitenTransform t;
  t.in_dim = d;
  t.out_dim = out;
  t.eps = eps;
  t.mean.assign(mean.data(), mean.data() + d);
  t.projection.resize(static_cast<std::size_t>(out) * d);
  for (int i = 0; i < out; ++i) {
    const double scale = 1.0 / std::sqrt(evals(i) + eps);
    for (int j = 0; j < d; ++j) {
      t.projection[static_cast<std::size_t>(i) * d + j] = evecs(j, i) * scale;
    }
  }
  return t;
}

Descriptor apply_whitening(const WhitenTransform& t, const Descriptor& v) {
  if (static_cast<int>(v.size()) != t.in_dim) {
    throw DimensionMismatch("apply_whitening: input dim " +
                            std::to_string(v.size()) + " != transform dim " +
                            std::to_string(t.in_dim));
  }
  Descriptor out(t.out_dim, 0.0);
  for (int i = 0; i < t.out_dim; ++i) {
    const double* row = t.projection.data() + static_cast<std::size_t>(i) * t.in_dim;
    double s = 0.0;
    for (int j = 0; j < t.in_dim; ++j) {
      s += row[j] * (v[j] - t.mean[j]);
    }
    out[i] = s;
  }
  return out;
}

}  // namespace logodet
