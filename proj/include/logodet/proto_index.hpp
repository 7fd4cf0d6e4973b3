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

#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "logodet/descriptor.hpp"

namespace logodet {

struct QueryResult {
  std::string class_id;
  std::string variant_id;
  double similarity = 0.0;  // cosine, clamped to [-1, 1]
};

struct PrototypeMeta {
  std::string class_id;
  std::string variant_id;
  std::map<std::string, std::string> metadata;
};

// Table of class-name/prototype-descriptor pairs with exact cosine k-NN.
// Descriptors live in one contiguous f32 matrix (n x dim) so a query is a
// single matrix-vector product; a parallel table holds the labels.
//
// Thread contract: any number of concurrent readers or one exclusive
// writer. All methods lock internally; queries never observe a partially
// applied add/remove.
class PrototypeIndex {
 public:
  PrototypeIndex() = default;
  PrototypeIndex(const PrototypeIndex& other);
  PrototypeIndex& operator=(const PrototypeIndex& other);

  // Descriptor must be unit norm (within 1e-4) and match the index
  // dimension; the first insert fixes the dimension. Re-adding an existing
  // (class, variant) replaces its descriptor in place.
  void add(const std::string& class_id, const std::string& variant_id,
           const Descriptor& descriptor,
           std::map<std::string, std::string> metadata = {});

  // Removes every variant of the class. Returns the number removed.
  std::size_t remove(const std::string& class_id);
  std::size_t remove(const std::string& class_id,
                     const std::string& variant_id);

  // Exact top-k by cosine similarity, filtered to similarity >= threshold.
  // Sorted by similarity descending, ties broken by (class_id, variant_id).
  // An empty index yields an empty list.
  std::vector<QueryResult> query(const Descriptor& descriptor, int k,
                                 double threshold = 0.0) const;

  // Collapses variants to a single class decision: the class of the best
  // hit, or nullopt when nothing clears the threshold.
  std::optional<QueryResult> query_topclass(const Descriptor& descriptor,
                                            int k, double threshold = 0.0) const;

  std::size_t size() const;
  int dim() const;
  std::vector<PrototypeMeta> entries() const;
  std::size_t class_count() const;

  void save(const std::string& path) const;
  static PrototypeIndex load(const std::string& path);

 private:
  int find_slot(const std::string& class_id,
                const std::string& variant_id) const;

  int dim_ = 0;
  std::vector<float> matrix_;  // row-major, size() x dim_
  std::vector<PrototypeMeta> metas_;
  mutable std::shared_mutex mutex_;
};

}  // namespace logodet
