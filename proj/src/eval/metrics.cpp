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

#include "infergate/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "infergate/box.hpp"

namespace infergate::eval {

MatchFlags match_detections(const EvalRecord& record, double iou_threshold) {
  const auto& preds = record.predictions;
  const auto& truth = record.truth;
  MatchFlags flags;
  flags.pred_is_tp.assign(preds.size(), false);
  flags.truth_matched.assign(truth.size(), false);

  std::vector<size_t> order(preds.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return preds[a].confidence > preds[b].confidence;
  });

  for (size_t pi : order) {
    double best_iou = 0.0;
    size_t best_ti = truth.size();
    for (size_t ti = 0; ti < truth.size(); ++ti) {
      if (flags.truth_matched[ti]) continue;
      if (truth[ti].label_id != preds[pi].label_id) continue;
      const double iou = box_iou(preds[pi].box, truth[ti].box);
      if (iou >= iou_threshold && iou > best_iou) {
        best_iou = iou;
        best_ti = ti;
      }
    }
    if (best_ti < truth.size()) {
      flags.truth_matched[best_ti] = true;
      flags.pred_is_tp[pi] = true;
    }
  }
  return flags;
}

double average_precision(std::vector<ScoredFlag> flags, uint64_t truth_count) {
  if (truth_count == 0 || flags.empty()) return 0.0;
  std::stable_sort(flags.begin(), flags.end(),
                   [](const ScoredFlag& a, const ScoredFlag& b) {
                     return a.confidence > b.confidence;
                   });

  std::vector<double> precision(flags.size());
  std::vector<double> recall(flags.size());
  uint64_t tp = 0;
  for (size_t i = 0; i < flags.size(); ++i) {
    if (flags[i].is_tp) ++tp;
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
    recall[i] = static_cast<double>(tp) / static_cast<double>(truth_count);
  }
  // Precision envelope: each point takes the max precision at any
  // recall >= its own.
  for (size_t i = flags.size() - 1; i-- > 0;)
    precision[i] = std::max(precision[i], precision[i + 1]);

  double ap = 0.0;
  double prev_recall = 0.0;
  for (size_t i = 0; i < flags.size(); ++i) {
    ap += (recall[i] - prev_recall) * precision[i];
    prev_recall = recall[i];
  }
  return ap;
}

uint64_t percentile_nearest_rank(const std::vector<uint64_t>& sorted_samples,
                                 double pct) {
  const size_t n = sorted_samples.size();
  size_t rank = static_cast<size_t>(std::ceil(pct / 100.0 * n));
  rank = std::clamp<size_t>(rank, 1, n);
  return sorted_samples[rank - 1];
}

std::optional<LatencySummary> latency_summary(std::vector<uint64_t> samples_us) {
  if (samples_us.empty()) return std::nullopt;
  std::sort(samples_us.begin(), samples_us.end());
  LatencySummary s;
  s.count = samples_us.size();
  s.min_us = samples_us.front();
  s.max_us = samples_us.back();
  s.mean_us = std::accumulate(samples_us.begin(), samples_us.end(), 0.0) /
              static_cast<double>(samples_us.size());
  s.p50_us = percentile_nearest_rank(samples_us, 50.0);
  s.p90_us = percentile_nearest_rank(samples_us, 90.0);
  s.p99_us = percentile_nearest_rank(samples_us, 99.0);
  return s;
}

MetricReport evaluate(const std::vector<EvalRecord>& records,
                      const EvalOptions& opts) {
  MetricReport report;
  report.frames = records.size();

  std::map<uint16_t, std::vector<ScoredFlag>> per_class_flags;
  std::map<uint16_t, uint64_t> per_class_truths;
  uint64_t crowded_preds = 0;
  uint64_t crowded_fp = 0;
  std::vector<uint64_t> latencies;

  for (const EvalRecord& rec : records) {
    const MatchFlags flags = match_detections(rec, opts.iou_threshold);
    const bool crowded = rec.truth.size() >= opts.crowded_threshold;
    if (crowded) ++report.crowded_frames;

    report.truths += rec.truth.size();
    report.predictions += rec.predictions.size();
    for (const detect::Detection& t : rec.truth) ++per_class_truths[t.label_id];
    for (size_t i = 0; i < rec.predictions.size(); ++i) {
      const bool tp = flags.pred_is_tp[i];
      per_class_flags[rec.predictions[i].label_id].push_back(
          {rec.predictions[i].confidence, tp});
      if (tp)
        ++report.true_positives;
      else
        ++report.false_positives;
      if (crowded) {
        ++crowded_preds;
        if (!tp) ++crowded_fp;
      }
    }
    if (auto lat = rec.latency_us()) latencies.push_back(*lat);
  }

  double ap_sum = 0.0;
  for (const auto& [label, truth_count] : per_class_truths) {
    auto it = per_class_flags.find(label);
    const double ap =
        it == per_class_flags.end()
            ? 0.0
            : average_precision(it->second, truth_count);
    report.per_class_ap[label] = ap;
    ap_sum += ap;
  }
  report.map50 = per_class_truths.empty()
                     ? 0.0
                     : ap_sum / static_cast<double>(per_class_truths.size());

  if (crowded_preds > 0)
    report.false_positive_pct =
        100.0 * static_cast<double>(crowded_fp) / static_cast<double>(crowded_preds);
  report.latency = latency_summary(std::move(latencies));
  return report;
}

}  // namespace infergate::eval
