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

#include "infergate/eval/records.hpp"

#include <fstream>
#include <sstream>

namespace infergate::eval {

namespace {

[[noreturn]] void bad_line(const std::string& path, size_t lineno,
                           const std::string& why) {
  throw EvalError(path + ":" + std::to_string(lineno) + ": " + why);
}

}  // namespace

std::vector<EvalRecord> load_records(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw EvalError("cannot open records file " + path);

  std::vector<EvalRecord> out;
  std::string line;
  size_t lineno = 0;
  size_t want_truth = 0;
  size_t want_pred = 0;

  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);

    if (line[0] == 'T' && (line.size() == 1 || line[1] == ' ')) {
      if (out.empty() || want_truth == 0)
        bad_line(path, lineno, "truth line outside a record block");
      char tag;
      detect::Detection d;
      int label;
      if (!(is >> tag >> label >> d.box.x1 >> d.box.y1 >> d.box.x2 >> d.box.y2))
        bad_line(path, lineno, "malformed truth line");
      if (label < 0 || label > 0xFFFF) bad_line(path, lineno, "label out of range");
      if (!d.box.valid()) bad_line(path, lineno, "degenerate truth box");
      d.label_id = static_cast<uint16_t>(label);
      d.confidence = 1.0f;
      out.back().truth.push_back(d);
      --want_truth;
      continue;
    }

    if (line[0] == 'P' && (line.size() == 1 || line[1] == ' ')) {
      if (out.empty() || want_truth != 0 || want_pred == 0)
        bad_line(path, lineno, "prediction line outside a record block");
      char tag;
      detect::Detection d;
      int label;
      if (!(is >> tag >> label >> d.confidence >> d.box.x1 >> d.box.y1 >>
            d.box.x2 >> d.box.y2))
        bad_line(path, lineno, "malformed prediction line");
      if (label < 0 || label > 0xFFFF) bad_line(path, lineno, "label out of range");
      if (!(d.confidence >= 0.0f && d.confidence <= 1.0f))
        bad_line(path, lineno, "confidence outside [0,1]");
      if (!d.box.valid()) bad_line(path, lineno, "degenerate prediction box");
      d.label_id = static_cast<uint16_t>(label);
      out.back().predictions.push_back(d);
      --want_pred;
      continue;
    }

    if (want_truth != 0 || want_pred != 0)
      bad_line(path, lineno, "record line before previous block completed");
    EvalRecord rec;
    uint64_t n_truth, n_pred;
    if (!(is >> rec.seq >> rec.t_sent_us >> rec.t_result_us >> n_truth >>
          n_pred))
      bad_line(path, lineno, "malformed record line (want 5 fields)");
    want_truth = n_truth;
    want_pred = n_pred;
    out.push_back(std::move(rec));
  }
  if (want_truth != 0 || want_pred != 0)
    throw EvalError(path + ": truncated final record block");
  return out;
}

void save_records(const std::vector<EvalRecord>& records,
                  const std::string& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw EvalError("cannot open " + path + " for writing");
  f << "# infergate records v1\n"
    << "# <seq> <t_sent_us> <t_result_us> <n_truth> <n_detected>\n"
    << "# T <label> <x1> <y1> <x2> <y2>\n"
    << "# P <label> <confidence> <x1> <y1> <x2> <y2>\n";
  for (const EvalRecord& r : records) {
    f << r.seq << ' ' << r.t_sent_us << ' ' << r.t_result_us << ' '
      << r.truth.size() << ' ' << r.predictions.size() << '\n';
    for (const detect::Detection& t : r.truth)
      f << "T " << t.label_id << ' ' << t.box.x1 << ' ' << t.box.y1 << ' '
        << t.box.x2 << ' ' << t.box.y2 << '\n';
    for (const detect::Detection& p : r.predictions)
      f << "P " << p.label_id << ' ' << p.confidence << ' ' << p.box.x1 << ' '
        << p.box.y1 << ' ' << p.box.x2 << ' ' << p.box.y2 << '\n';
  }
  if (!f) throw EvalError("write failed for " + path);
}

}  // namespace infergate::eval
