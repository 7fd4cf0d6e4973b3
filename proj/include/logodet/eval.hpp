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
#include <string>
#include <vector>

#include "logodet/bbox.hpp"
#include "logodet/errors.hpp"

namespace logodet {

struct Detection {
  std::string image_id;
  BBox bbox;
  std::string class_id;
  double score = 0.0;  // in [0, 1]
};

struct GroundTruth {
  std::string image_id;
  BBox bbox;
  std::string class_id;
};

// Intersection over union; 0 for disjoint boxes.
double iou(const BBox& a, const BBox& b);

// Greedy per-(image, class) suppression: sort by score descending (ties by
// bbox, then image/class), keep a box iff its IoU with every previously
// kept box of the same image and class stays below the threshold. Returns
// the kept detections in that sorted order.
std::vector<Detection> nms(std::vector<Detection> detections,
                           double iou_threshold);

struct LabeledDetection {
  Detection detection;
  bool true_positive = false;
};

// VOC-style greedy matching. Detections are evaluated in score order; each
// one claims the unmatched same-image same-class ground truth with the
// highest IoU >= threshold. Returns the detections in evaluation order with
// their TP/FP labels.
std::vector<LabeledDetection> match_detections(
    std::vector<Detection> detections,
    const std::vector<GroundTruth>& ground_truths, double iou_threshold = 0.5);

struct PrPoint {
  double precision = 0.0;
  double recall = 0.0;
};

// Cumulative precision/recall swept over the score-sorted labels.
std::vector<PrPoint> pr_curve(const std::vector<LabeledDetection>& labeled,
                              std::size_t total_positives);

// Area under the precision envelope (all-points interpolation: the
// precision at recall r is the maximum precision at any recall >= r).
double average_precision(const std::vector<PrPoint>& points);

// Unweighted mean; the caller passes one AP per class with >= 1 ground truth.
double mean_ap(const std::vector<double>& per_class_ap);

// Fraction of queries whose true class appears within the top-k *distinct*
// classes of its ranking (duplicate classes in a ranking collapse).
double recall_at_k(const std::vector<std::vector<std::string>>& rankings,
                   const std::vector<std::string>& true_classes, int k);

struct EvalReport {
  double map = 0.0;
  std::map<std::string, double> per_class_ap;
  std::map<std::string, std::vector<PrPoint>> per_class_pr;
};

// Full detection evaluation: per-class matching, PR curves, AP and mAP.
// Classes absent from the ground truth are not scored.
EvalReport evaluate_detections(const std::vector<Detection>& detections,
                               const std::vector<GroundTruth>& ground_truths,
                               double iou_threshold = 0.5);

}  // namespace logodet
