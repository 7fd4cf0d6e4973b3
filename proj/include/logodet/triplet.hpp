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

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "logodet/descriptor.hpp"
#include "logodet/rng.hpp"

namespace logodet {

// One training sample: the unit-norm pooled feature vector that feeds the
// embedding head, plus its class label.
struct TrainingSample {
  std::string class_id;
  Descriptor pooled_input;
};

// Indices of (query, positive, negative) into a sample vector.
struct Triplet {
  int q = 0;
  int p = 0;
  int n = 0;
};

enum class Mining { kRandom, kBatchHard };

struct TrainConfig {
  double margin = 0.6;
  double learning_rate = 1e-5;
  int epochs = 10;
  int batch_size = 64;
  Mining mining = Mining::kRandom;
  std::uint64_t seed = 0;
  // Overrides applied from the given epoch on (0-based), e.g. {{10, 1e-6}}.
  std::vector<std::pair<int, double>> lr_schedule;
  // 0 keeps the input dimension.
  int out_dim = 0;
};

struct AdamState {
  std::int64_t step = 0;
  std::vector<double> m_weights, v_weights;
  std::vector<double> m_bias, v_bias;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static AdamState for_head(const AffineHead& head);
};

struct HeadGradients {
  std::vector<double> weights;  // same layout as AffineHead::weights
  std::vector<double> bias;

  static HeadGradients zeros(const AffineHead& head);
  void add_scaled(const HeadGradients& other, double scale);
};

struct LossGrad {
  double loss = 0.0;
  bool active = false;
  HeadGradients grads;
};

struct EpochStats {
  int epoch = 0;
  double mean_loss = 0.0;
  double active_fraction = 0.0;
  double lr = 0.0;
};

struct TrainResult {
  AffineHead head;
  std::vector<EpochStats> log;
};

double squared_distance(const Descriptor& a, const Descriptor& b);

// max(0, m + ||fq-fp||^2 - ||fq-fn||^2); inputs are embedded descriptors.
double triplet_loss(const Descriptor& fq, const Descriptor& fp,
                    const Descriptor& fn, double margin);

// True iff the hinge argument is strictly positive, i.e. the triplet
// contributes gradient. The boundary case (argument exactly 0) is inactive.
bool is_active(const Descriptor& fq, const Descriptor& fp,
               const Descriptor& fn, double margin);

// Loss of one triplet of pooled inputs embedded through the head
// (affine + l2-normalization) together with the analytic gradient w.r.t.
// the head parameters. Gradients are zero for inactive triplets.
LossGrad loss_and_grad(const AffineHead& head, const Descriptor& q,
                       const Descriptor& p, const Descriptor& n,
                       double margin);

// Random triplets: anchor uniform over samples whose class has >= 2 members,
// positive uniform over the rest of the anchor class, negative uniform over
// all samples of other classes.
std::vector<Triplet> sample_triplets(const std::vector<TrainingSample>& dataset,
                                     int batch_size, Rng& rng);

// For each anchor in the batch: positive = same-class sample at maximal
// embedded distance, negative = other-class sample at minimal embedded
// distance (exhaustive within the batch). Anchors without a same-class
// partner are skipped. Ties resolve to the lowest index.
std::vector<Triplet> batch_hard_mine(const std::vector<TrainingSample>& batch,
                                     const AffineHead& head, double margin);

// One Adam update with bias correction; increments state.step.
void adam_step(AdamState& state, AffineHead& head, const HeadGradients& grads,
               double lr);

// Full training loop. Deterministic given config.seed: same seed, bitwise
// identical head.
TrainResult train_head(const std::vector<TrainingSample>& dataset,
                       const TrainConfig& config);

}  // namespace logodet
