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

#include "infergate/eval/comparison.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace infergate::eval {

namespace {

std::string trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string num(double v) {
  std::ostringstream os;
  os << v;  // default precision keeps fixture values verbatim (48.9, 73)
  return os.str();
}

}  // namespace

std::vector<BaselineRow> load_baseline(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw EvalError("cannot open baseline fixture " + path);
  std::vector<BaselineRow> rows;
  std::string line;
  size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const size_t c1 = t.find(',');
    const size_t c2 = c1 == std::string::npos ? std::string::npos
                                              : t.find(',', c1 + 1);
    if (c2 == std::string::npos)
      throw EvalError(path + ":" + std::to_string(lineno) +
                      ": want method,map50,inference_ms");
    BaselineRow row;
    row.method = trim(t.substr(0, c1));
    try {
      size_t used = 0;
      const std::string f1 = trim(t.substr(c1 + 1, c2 - c1 - 1));
      row.map50 = std::stod(f1, &used);
      if (used != f1.size()) throw std::invalid_argument("trailing");
      const std::string f2 = trim(t.substr(c2 + 1));
      row.inference_ms = std::stod(f2, &used);
      if (used != f2.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw EvalError(path + ":" + std::to_string(lineno) +
                      ": non-numeric field");
    }
    if (row.method.empty())
      throw EvalError(path + ":" + std::to_string(lineno) + ": empty method");
    rows.push_back(std::move(row));
  }
  return rows;
}

BaselineRow measured_row(const MetricReport& report, const std::string& method) {
  BaselineRow row;
  row.method = method;
  row.map50 = report.map50 * 100.0;
  row.inference_ms = report.latency ? report.latency->mean_us / 1000.0 : 0.0;
  return row;
}

std::string render_comparison(const std::vector<BaselineRow>& baselines,
                              const std::vector<BaselineRow>& measured) {
  size_t method_w = std::string("Method").size();
  for (const auto& r : baselines) method_w = std::max(method_w, r.method.size());
  for (const auto& r : measured) method_w = std::max(method_w, r.method.size());

  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(method_w)) << "Method"
     << "  " << std::right << std::setw(7) << "mAP50" << std::setw(21)
     << "Inference Time (ms)" << '\n';
  os << std::string(method_w + 2 + 7 + 21, '-') << '\n';
  auto emit = [&](const BaselineRow& r) {
    os << std::left << std::setw(static_cast<int>(method_w)) << r.method
       << "  " << std::right << std::setw(7) << num(r.map50) << std::setw(21)
       << num(r.inference_ms) << '\n';
  };
  for (const auto& r : baselines) emit(r);
  if (!measured.empty()) {
    os << std::string(method_w + 2 + 7 + 21, '-') << '\n';
    for (const auto& r : measured) emit(r);
  }
  return os.str();
}

std::string render_comparison(const MetricReport& report,
                              const std::vector<BaselineRow>& baselines) {
  return render_comparison(baselines, {measured_row(report)});
}

std::string render_report(const MetricReport& report) {
  std::ostringstream os;
  os << "frames " << report.frames << '\n';
  os << "crowded_frames " << report.crowded_frames << '\n';
  os << "truths " << report.truths << '\n';
  os << "predictions " << report.predictions << '\n';
  os << "true_positives " << report.true_positives << '\n';
  os << "false_positives " << report.false_positives << '\n';
  os << "map50 " << std::setprecision(10) << report.map50 << '\n';
  for (const auto& [label, ap] : report.per_class_ap)
    os << "ap_class_" << label << ' ' << ap << '\n';
  if (report.false_positive_pct)
    os << "false_positive_pct " << *report.false_positive_pct << '\n';
  else
    os << "false_positive_pct absent\n";
  if (report.latency) {
    const LatencySummary& l = *report.latency;
    os << "latency_count " << l.count << '\n';
    os << "latency_mean_us " << l.mean_us << '\n';
    os << "latency_min_us " << l.min_us << '\n';
    os << "latency_p50_us " << l.p50_us << '\n';
    os << "latency_p90_us " << l.p90_us << '\n';
    os << "latency_p99_us " << l.p99_us << '\n';
    os << "latency_max_us " << l.max_us << '\n';
  } else {
    os << "latency absent\n";
  }
  return os.str();
}

}  // namespace infergate::eval
