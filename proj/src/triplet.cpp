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

#include "logodet/triplet.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace logodet {

double squared_distance(const Descriptor& a, const Descriptor& b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("squared_distance: dimensions differ");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double triplet_loss(const Descriptor& fq, const Descriptor& fp,
                    const Descriptor& fn, double margin) {
  double arg = margin + squared_distance(fq, fp) - squared_distance(fq, fn);
  return std::max(0.0, arg);
}

bool is_active(const Descriptor& fq, const Descriptor& fp,
               const Descriptor& fn, double margin) {
  return margin + squared_distance(fq, fp) - squared_distance(fq, fn) > 0.0;
}

HeadGradients HeadGradients::zeros(const AffineHead& head) {
  HeadGradients g;
  g.weights.assign(head.weights.size(), 0.0);
  g.bias.assign(head.bias.size(), 0.0);
  return g;
}

void HeadGradients::add_scaled(const HeadGradients& other, double scale) {
  for (std::size_t i = 0; i < weights.size(); ++i) {
    weights[i] += scale * other.weights[i];
  }
  for (std::size_t i = 0; i < bias.size(); ++i) {
    bias[i] += scale * other.bias[i];
  }
}

namespace {

struct Forward {
  Descriptor affine;  // a = W x + b
  double norm = 0.0;
  Descriptor unit;    // f = a / ||a||
};

Forward forward_branch(const AffineHead& head, const Descriptor& x) {
  Forward f;
  f.affine = apply_affine(head, x);
  f.norm = l2_norm(f.affine);
  if (f.norm < 1e-12) {
    throw ZeroVector("loss_and_grad: affine output has zero norm");
  }
  f.unit.resize(f.affine.size());
  for (std::size_t i = 0; i < f.affine.size(); ++i) {
    f.unit[i] = f.affine[i] / f.norm;
  }
  return f;
}

// Backprop dL/df through f = a/||a|| and accumulate dL/dW, dL/db. With
// g = dL/df: dL/da = (g - (f.g) f) / ||a||, dL/dW += dL/da x^T.
void backprop_branch(const Forward& f, const Descriptor& x,
                     const Descriptor& g, HeadGradients& grads) {
  const int out = static_cast<int>(f.unit.size());
  const int in = static_cast<int>(x.size());
  double fg = 0.0;
  for (int i = 0; i < out; ++i) fg += f.unit[i] * g[i];
  for (int i = 0; i < out; ++i) {
    double da = (g[i] - fg * f.unit[i]) / f.norm;
    grads.bias[i] += da;
    double* wrow = grads.weights.data() + static_cast<std::size_t>(i) * in;
    for (int j = 0; j < in; ++j) {
      wrow[j] += da * x[j];
    }
  }
}

}  // namespace

LossGrad loss_and_grad(const AffineHead& head, const Descriptor& q,
                       const Descriptor& p, const Descriptor& n,
                       double margin) {
  Forward fq = forward_branch(head, q);
  Forward fp = forward_branch(head, p);
  Forward fn = forward_branch(head, n);

  LossGrad result;
  result.grads = HeadGradients::zeros(head);
  double arg = margin + squared_distance(fq.unit, fp.unit) -
               squared_distance(fq.unit, fn.unit);
  if (arg <= 0.0) {
    return result;
  }
  result.loss = arg;
  result.active = true;

  const int out = head.out_dim;
  Descriptor gq(out), gp(out), gn(out);
  for (int i = 0; i < out; ++i) {
    gq[i] = 2.0 * (fn.unit[i] - fp.unit[i]);
    gp[i] = -2.0 * (fq.unit[i] - fp.unit[i]);
    gn[i] = 2.0 * (fq.unit[i] - fn.unit[i]);
  }
  backprop_branch(fq, q, gq, result.grads);
  backprop_branch(fp, p, gp, result.grads);
  backprop_branch(fn, n, gn, result.grads);
  return result;
}

namespace {

// class -> sample indices, keyed in sorted class order for determinism.
std::map<std::string, std::vector<int>> group_by_class(
    const std::vector<TrainingSample>& samples) {
  std::map<std::string, std::vector<int>> groups;
  for (int i = 0; i < static_cast<int>(samples.size()); ++i) {
    groups[samples[i].class_id].push_back(i);
  }
  return groups;
}

}  // namespace

std::vector<Triplet> sample_triplets(const std::vector<TrainingSample>& dataset,
                                     int batch_size, Rng& rng) {
  auto groups = group_by_class(dataset);
  if (groups.size() < 2) {
    throw InsufficientClasses("sample_triplets: need at least 2 classes");
  }
  // Anchors come only from classes with a positive partner available.
  std::vector<int> anchors;
  for (const auto& [cls, members] : groups) {
    if (members.size() >= 2) {
      anchors.insert(anchors.end(), members.begin(), members.end());
    }
  }
  if (anchors.empty()) {
    throw InsufficientPositives(
        "sample_triplets: no class has 2 or more samples");
  }

  std::vector<Triplet> triplets;
  triplets.reserve(batch_size);
  for (int t = 0; t < batch_size; ++t) {
    int q = anchors[rng.uniform_int(anchors.size())];
    const auto& cls = dataset[q].class_id;
    const auto& members = groups.at(cls);
    int p = q;
    while (p == q) {
      p = members[rng.uniform_int(members.size())];
    }
    int n = q;
    while (dataset[n].class_id == cls) {
      n = static_cast<int>(rng.uniform_int(dataset.size()));
    }
    triplets.push_back({q, p, n});
  }
  return triplets;
}

std::vector<Triplet> batch_hard_mine(const std::vector<TrainingSample>& batch,
                                     const AffineHead& head, double /*margin*/) {
  auto groups = group_by_class(batch);
  if (groups.size() < 2) {
    throw InsufficientClasses("batch_hard_mine: need at least 2 classes");
  }
  const int n = static_cast<int>(batch.size());
  std::vector<Descriptor> embedded(n);
  for (int i = 0; i < n; ++i) {
    embedded[i] = embed(batch[i].pooled_input, head);
  }
  std::vector<Triplet> triplets;
  for (int a = 0; a < n; ++a) {
    int best_p = -1, best_n = -1;
    double max_pos = -1.0, min_neg = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (j == a) continue;
      double d = squared_distance(embedded[a], embedded[j]);
      if (batch[j].class_id == batch[a].class_id) {
        if (d > max_pos) {
          max_pos = d;
          best_p = j;
        }
      } else if (d < min_neg) {
        min_neg = d;
        best_n = j;
      }
    }
    if (best_p >= 0 && best_n >= 0) {
      triplets.push_back({a, best_p, best_n});
    }
  }
  return triplets;
}

AdamState AdamState::for_head(const AffineHead& head) {
  AdamState s;
  s.m_weights.assign(head.weights.size(), 0.0);
  s.v_weights.assign(head.weights.size(), 0.0);
  s.m_bias.assign(head.bias.size(), 0.0);
  s.v_bias.assign(head.bias.size(), 0.0);
  return s;
}

namespace {

void adam_update(std::vector<double>& params, std::vector<double>& m,
                 std::vector<double>& v, const std::vector<double>& g,
                 double lr, double beta1, double beta2, double eps,
                 double corr1, double corr2) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    double mhat = m[i] / corr1;
    double vhat = v[i] / corr2;
    params[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

}  // namespace

void adam_step(AdamState& state, AffineHead& head, const HeadGradients& grads,
               double lr) {
  if (grads.weights.size() != head.weights.size() ||
      grads.bias.size() != head.bias.size() ||
      state.m_weights.size() != head.weights.size()) {
    throw DimensionMismatch("adam_step: buffer shapes do not match head");
  }
  state.step += 1;
  double corr1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  double corr2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  adam_update(head.weights, state.m_weights, state.v_weights, grads.weights,
              lr, state.beta1, state.beta2, state.eps, corr1, corr2);
  adam_update(head.bias, state.m_bias, state.v_bias, grads.bias, lr,
              state.beta1, state.beta2, state.eps, corr1, corr2);
}

namespace {

// Truncated random orthogonal initialization for non-square heads: QR of a
// seeded Gaussian matrix, sign-fixed so the factorization is unique, then
// cropped to out_dim x in_dim.
AffineHead orthogonal_head(int in_dim, int out_dim, Rng& rng) {
  const int dim = std::max(in_dim, out_dim);
  Eigen::MatrixXd gauss(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) gauss(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  AffineHead head;
  head.in_dim = in_dim;
  head.out_dim = out_dim;
  head.weights.resize(static_cast<std::size_t>(out_dim) * in_dim);
  head.bias.assign(out_dim, 0.0);
  for (int i = 0; i < out_dim; ++i) {
    for (int j = 0; j < in_dim; ++j) {
      head.weights[static_cast<std::size_t>(i) * in_dim + j] = q(j, i);
    }
  }
  return head;
}

double lr_for_epoch(const TrainConfig& config, int epoch) {
  double lr = config.learning_rate;
  for (const auto& [from_epoch, rate] : config.lr_schedule) {
    if (epoch >= from_epoch) lr = rate;
  }
  return lr;
}

}  // namespace

TrainResult train_head(const std::vector<TrainingSample>& dataset,
                       const TrainConfig& config) {
  if (config.margin < -4.0 || config.margin > 4.0) {
    throw FormatError("train_head: margin must lie in [-4, 4]");
  }
  if (config.batch_size < 1 || config.epochs < 0) {
    throw FormatError("train_head: bad batch_size/epochs");
  }
  if (dataset.empty()) {
    throw InsufficientData("train_head: empty dataset");
  }
  const int in_dim = static_cast<int>(dataset.front().pooled_input.size());
  const int out_dim = config.out_dim > 0 ? config.out_dim : in_dim;
  for (const auto& s : dataset) {
    if (static_cast<int>(s.pooled_input.size()) != in_dim) {
      throw DimensionMismatch("train_head: samples have mixed dimensions");
    }
  }

  Rng rng(derive_seed(config.seed, 0x7261696eULL));
  TrainResult result;
  result.head = (out_dim == in_dim) ? AffineHead::identity(in_dim)
                                    : orthogonal_head(in_dim, out_dim, rng);
  AdamState adam = AdamState::for_head(result.head);

  const int batches_per_epoch = std::max(
      1, static_cast<int>((dataset.size() + config.batch_size - 1) /
                          config.batch_size));

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = lr_for_epoch(config, epoch);
    double loss_sum = 0.0;
    std::int64_t triplet_count = 0, active_count = 0;

    for (int b = 0; b < batches_per_epoch; ++b) {
      std::vector<Triplet> triplets;
      const std::vector<TrainingSample>* pool = &dataset;
      std::vector<TrainingSample> batch;
      if (config.mining == Mining::kRandom) {
        triplets = sample_triplets(dataset, config.batch_size, rng);
      } else {
        // Draw a random subset, then mine the hard cases inside it.
        std::vector<int> idx(dataset.size());
        std::iota(idx.begin(), idx.end(), 0);
        const int take =
            std::min<int>(config.batch_size, static_cast<int>(idx.size()));
        for (int i = 0; i < take; ++i) {
          std::swap(idx[i], idx[i + rng.uniform_int(idx.size() - i)]);
        }
        batch.reserve(take);
        for (int i = 0; i < take; ++i) batch.push_back(dataset[idx[i]]);
        pool = &batch;
        triplets = batch_hard_mine(batch, result.head, config.margin);
        if (triplets.empty()) continue;
      }

      HeadGradients total = HeadGradients::zeros(result.head);
      double batch_loss = 0.0;
      for (const Triplet& t : triplets) {
        LossGrad lg = loss_and_grad(result.head, (*pool)[t.q].pooled_input,
                                    (*pool)[t.p].pooled_input,
                                    (*pool)[t.n].pooled_input, config.margin);
        batch_loss += lg.loss;
        if (lg.active) {
          total.add_scaled(lg.grads, 1.0);
          ++active_count;
        }
        ++triplet_count;
      }
      // Average over the batch so lr keeps per-sample semantics.
      const double inv = 1.0 / static_cast<double>(triplets.size());
      for (auto& w : total.weights) w *= inv;
      for (auto& b2 : total.bias) b2 *= inv;
      loss_sum += batch_loss;
      adam_step(adam, result.head, total, lr);
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.lr = lr;
    stats.mean_loss =
        triplet_count > 0 ? loss_sum / static_cast<double>(triplet_count) : 0.0;
    stats.active_fraction =
        triplet_count > 0
            ? static_cast<double>(active_count) / static_cast<double>(triplet_count)
            : 0.0;
    result.log.push_back(stats);
  }
  return result;
}

}  // namespace logodet
