/*
 * Copyright 2026 The Infergate Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "infergate/eval/records.hpp"

namespace infergate::eval {

struct MatchFlags {
  std::vector<bool> pred_is_tp;    // index-aligned with record.predictions
  std::vector<bool> truth_matched;  // index-aligned with record.truth
};

// Greedy matching: walk predictions by descending confidence (ties keep
// input order); each claims the unmatched truth of the same label with
// the highest IoU >= iou_threshold, lowest index on IoU ties. A truth is
// claimed at most once.
MatchFlags match_detections(const EvalRecord& record,
                            double iou_threshold = 0.5);

// One scored prediction for a single class, pooled across records.
struct ScoredFlag {
  float confidence = 0.0f;
  bool is_tp = false;
};

// Area under the precision/recall curve, all-points interpolation
// (precision envelope), recall denominated by truth_count.
double average_precision(std::vector<ScoredFlag> flags, uint64_t truth_count);

struct LatencySummary {
  size_t count = 0;
  double mean_us = 0.0;
  uint64_t min_us = 0;
  uint64_t p50_us = 0;
  uint64_t p90_us = 0;
  uint64_t p99_us = 0;
  uint64_t max_us = 0;
};

// Nearest-rank percentile: value at 1-based rank ceil(pct/100 * n).
// Pre: samples sorted ascending and non-empty, pct in (0, 100].
uint64_t percentile_nearest_rank(const std::vector<uint64_t>& sorted_samples,
                                 double pct);

std::optional<LatencySummary> latency_summary(std::vector<uint64_t> samples_us);

struct EvalOptions {
  double iou_threshold = 0.5;
  // A record is a crowded scene when it carries at least this many
  // ground-truth objects.
  uint64_t crowded_threshold = 10;
};

struct MetricReport {
  std::map<uint16_t, double> per_class_ap;  // classes with >= 1 truth
  double map50 = 0.0;
  std::optional<double> false_positive_pct;  // crowded records only
  std::optional<LatencySummary> latency;
  uint64_t frames = 0;
  uint64_t crowded_frames = 0;
  uint64_t truths = 0;
  uint64_t predictions = 0;
  uint64_t true_positives = 0;
  uint64_t false_positives = 0;
};

MetricReport evaluate(const std::vector<EvalRecord>& records,
                      const EvalOptions& opts = {});

}  // namespace infergate::eval
