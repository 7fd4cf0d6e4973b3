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

#include "logodet/proto_index.hpp"

#include <Eigen/Dense>
#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <numeric>
#include <set>

#include "logodet/io.hpp"

namespace logodet {

PrototypeIndex::PrototypeIndex(const PrototypeIndex& other) {
  std::shared_lock lock(other.mutex_);
  dim_ = other.dim_;
  matrix_ = other.matrix_;
  metas_ = other.metas_;
}

PrototypeIndex& PrototypeIndex::operator=(const PrototypeIndex& other) {
  if (this == &other) return *this;
  // Acquire both locks without deadlock risk.
  std::unique_lock mine(mutex_, std::defer_lock);
  std::shared_lock theirs(other.mutex_, std::defer_lock);
  std::lock(mine, theirs);
  dim_ = other.dim_;
  matrix_ = other.matrix_;
  metas_ = other.metas_;
  return *this;
}

int PrototypeIndex::find_slot(const std::string& class_id,
                              const std::string& variant_id) const {
  for (std::size_t i = 0; i < metas_.size(); ++i) {
    if (metas_[i].class_id == class_id && metas_[i].variant_id == variant_id) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

void PrototypeIndex::add(const std::string& class_id,
                         const std::string& variant_id,
                         const Descriptor& descriptor,
                         std::map<std::string, std::string> metadata) {
  double norm = l2_norm(descriptor);
  if (std::abs(norm - 1.0) > 1e-4) {
    throw NotNormalized("add: descriptor norm " + std::to_string(norm) +
                        " deviates from 1 by more than 1e-4");
  }
  std::unique_lock lock(mutex_);
  if (dim_ == 0) {
    dim_ = static_cast<int>(descriptor.size());
  } else if (static_cast<int>(descriptor.size()) != dim_) {
    throw DimensionMismatch("add: descriptor dim " +
                            std::to_string(descriptor.size()) +
                            " != index dim " + std::to_string(dim_));
  }
  int slot = find_slot(class_id, variant_id);
  if (slot < 0) {
    slot = static_cast<int>(metas_.size());
    metas_.push_back({class_id, variant_id, std::move(metadata)});
    matrix_.resize(matrix_.size() + dim_);
  } else {
    metas_[slot].metadata = std::move(metadata);
  }
  float* row = matrix_.data() + static_cast<std::size_t>(slot) * dim_;
  for (int i = 0; i < dim_; ++i) row[i] = static_cast<float>(descriptor[i]);
}

std::size_t PrototypeIndex::remove(const std::string& class_id) {
  std::unique_lock lock(mutex_);
  std::size_t removed = 0;
  for (std::size_t i = metas_.size(); i-- > 0;) {
    if (metas_[i].class_id == class_id) {
      metas_.erase(metas_.begin() + static_cast<std::ptrdiff_t>(i));
      matrix_.erase(matrix_.begin() + static_cast<std::ptrdiff_t>(i * dim_),
                    matrix_.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim_));
      ++removed;
    }
  }
  return removed;
}

std::size_t PrototypeIndex::remove(const std::string& class_id,
                                   const std::string& variant_id) {
  std::unique_lock lock(mutex_);
  int slot = find_slot(class_id, variant_id);
  if (slot < 0) return 0;
  std::size_t i = static_cast<std::size_t>(slot);
  metas_.erase(metas_.begin() + slot);
  matrix_.erase(matrix_.begin() + static_cast<std::ptrdiff_t>(i * dim_),
                matrix_.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim_));
  return 1;
}

std::vector<QueryResult> PrototypeIndex::query(const Descriptor& descriptor,
                                               int k, double threshold) const {
  if (k < 1) throw FormatError("query: k must be >= 1");
  std::shared_lock lock(mutex_);
  if (metas_.empty()) return {};
  if (static_cast<int>(descriptor.size()) != dim_) {
    throw DimensionMismatch("query: descriptor dim " +
                            std::to_string(descriptor.size()) +
                            " != index dim " + std::to_string(dim_));
  }
  const int n = static_cast<int>(metas_.size());
  Eigen::VectorXf q(dim_);
  for (int i = 0; i < dim_; ++i) q(i) = static_cast<float>(descriptor[i]);

  Eigen::Map<const Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      mat(matrix_.data(), n, dim_);
  Eigen::VectorXf sims = mat * q;

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto better = [&](int a, int b) {
    if (sims(a) != sims(b)) return sims(a) > sims(b);
    if (metas_[a].class_id != metas_[b].class_id) {
      return metas_[a].class_id < metas_[b].class_id;
    }
    return metas_[a].variant_id < metas_[b].variant_id;
  };
  const int top = std::min(k, n);
  std::partial_sort(order.begin(), order.begin() + top, order.end(), better);

  std::vector<QueryResult> results;
  results.reserve(top);
  for (int i = 0; i < top; ++i) {
    int idx = order[i];
    double sim = std::clamp(static_cast<double>(sims(idx)), -1.0, 1.0);
    if (sim < threshold) continue;
    results.push_back({metas_[idx].class_id, metas_[idx].variant_id, sim});
  }
  return results;
}

std::optional<QueryResult> PrototypeIndex::query_topclass(
    const Descriptor& descriptor, int k, double threshold) const {
  auto results = query(descriptor, k, threshold);
  if (results.empty()) return std::nullopt;
  return results.front();
}

std::size_t PrototypeIndex::size() const {
  std::shared_lock lock(mutex_);
  return metas_.size();
}

int PrototypeIndex::dim() const {
  std::shared_lock lock(mutex_);
  return dim_;
}

std::vector<PrototypeMeta> PrototypeIndex::entries() const {
  std::shared_lock lock(mutex_);
  return metas_;
}

std::size_t PrototypeIndex::class_count() const {
  std::shared_lock lock(mutex_);
  std::set<std::string> classes;
  for (const auto& m : metas_) classes.insert(m.class_id);
  return classes.size();
}

void PrototypeIndex::save(const std::string& path) const {
  std::unique_lock lock(mutex_);
  ByteWriter w;
  w.bytes("PIDX", 4);
  w.u16(1);
  w.u32(static_cast<std::uint32_t>(dim_));
  w.u64(metas_.size());
  w.bytes(matrix_.data(), matrix_.size() * sizeof(float));
  for (const auto& m : metas_) {
    w.str(m.class_id);
    w.str(m.variant_id);
    w.str(nlohmann::json(m.metadata).dump());
  }
  std::uint32_t crc = static_cast<std::uint32_t>(
      crc32(0L, w.buffer().data(), static_cast<uInt>(w.buffer().size())));
  w.u32(crc);
  write_file(path, w.buffer());
}

PrototypeIndex PrototypeIndex::load(const std::string& path) {
  auto data = read_file(path);
  if (data.size() < 4 + 2 + 4 + 8 + 4) {
    throw FormatError("index file too small: " + path);
  }
  std::uint32_t stored_crc = 0;
  for (int i = 0; i < 4; ++i) {
    stored_crc |= static_cast<std::uint32_t>(data[data.size() - 4 + i]) << (8 * i);
  }
  std::uint32_t actual_crc = static_cast<std::uint32_t>(
      crc32(0L, data.data(), static_cast<uInt>(data.size() - 4)));
  if (stored_crc != actual_crc) {
    throw CorruptPayload("index checksum mismatch: " + path);
  }

  ByteReader r(data.data(), data.size() - 4);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, "PIDX", 4) != 0) {
    throw FormatError("bad magic in " + path);
  }
  std::uint16_t version = r.u16();
  if (version != 1) {
    throw FormatError("unsupported index version in " + path);
  }

  PrototypeIndex index;
  index.dim_ = static_cast<int>(r.u32());
  std::uint64_t count = r.u64();
  if (index.dim_ < 0 || (count > 0 && index.dim_ == 0)) {
    throw FormatError("bad header in " + path);
  }
  index.matrix_.resize(static_cast<std::size_t>(count) * index.dim_);
  r.bytes(index.matrix_.data(), index.matrix_.size() * sizeof(float));
  index.metas_.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    index.metas_[i].class_id = r.str();
    index.metas_[i].variant_id = r.str();
    auto meta_json = nlohmann::json::parse(r.str(), nullptr, false);
    if (meta_json.is_discarded() || !meta_json.is_object()) {
      throw FormatError("bad metadata record in " + path);
    }
    for (auto& [key, value] : meta_json.items()) {
      index.metas_[i].metadata[key] = value.get<std::string>();
    }
  }
  if (r.remaining() != 0) {
    throw FormatError("trailing bytes in " + path);
  }
  return index;
}

}  // namespace logodet
