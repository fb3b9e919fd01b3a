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

#include <string>
#include <vector>

#include "infergate/eval/metrics.hpp"

namespace infergate::eval {

// One row of the published comparison table. map50 is on the percent
// scale the table uses (e.g. 48.9), not a [0,1] fraction.
struct BaselineRow {
  std::string method;
  double map50 = 0.0;
  double inference_ms = 0.0;

  bool operator==(const BaselineRow&) const = default;
};

// Reads `method,map50,inference_ms` lines ('#' comments allowed).
// Throws EvalError naming the offending line.
std::vector<BaselineRow> load_baseline(const std::string& path);

// Converts a harness run into a table row: mAP scaled to percent, mean
// latency in ms (0 when no latency samples exist).
BaselineRow measured_row(const MetricReport& report,
                         const std::string& method = "measured");

// Fixed-width text table of the baseline rows followed by any measured
// rows, separated by a rule.
std::string render_comparison(const std::vector<BaselineRow>& baselines,
                              const std::vector<BaselineRow>& measured = {});
std::string render_comparison(const MetricReport& report,
                              const std::vector<BaselineRow>& baselines);

// Line-oriented `key value` dump of a MetricReport.
std::string render_report(const MetricReport& report);

}  // namespace infergate::eval
