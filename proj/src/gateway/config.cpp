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

#include "infergate/gateway/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace infergate::gateway {

namespace {

std::string trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& name, size_t lineno,
                       const std::string& why) {
  throw ConfigError(name + ":" + std::to_string(lineno) + ": " + why);
}

uint64_t parse_uint(const std::string& name, size_t lineno,
                    const std::string& text, uint64_t max) {
  try {
    size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size() || v > max) throw std::invalid_argument("range");
    return v;
  } catch (const std::exception&) {
    fail(name, lineno, "expected an integer <= " + std::to_string(max) +
                           ", got '" + text + "'");
  }
}

double parse_real(const std::string& name, size_t lineno,
                  const std::string& text) {
  try {
    size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    fail(name, lineno, "expected a number, got '" + text + "'");
  }
}

}  // namespace

std::string GatewayConfig::class_name(uint16_t label_id) const {
  if (label_id < class_names.size()) return class_names[label_id];
  return "c" + std::to_string(label_id);
}

GatewayConfig parse_config(std::istream& in, const std::string& name) {
  GatewayConfig cfg;
  enum class Section { Global, Actions, Bindings };
  Section section = Section::Global;
  std::string binding_robot;
  std::string line;
  size_t lineno = 0;

  // Bindings may appear before their label names resolve only within the
  // same file, so remember raw label tokens and resolve at the end.
  struct RawBinding {
    std::string robot;
    std::string label;
    uint16_t action_id;
    size_t lineno;
  };
  std::vector<RawBinding> raw_bindings;

  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;

    if (t.front() == '[') {
      if (t.back() != ']') fail(name, lineno, "unterminated section header");
      const std::string sec = t.substr(1, t.size() - 2);
      if (sec == "actions") {
        section = Section::Actions;
      } else if (sec.rfind("bindings.", 0) == 0) {
        binding_robot = sec.substr(std::string("bindings.").size());
        if (binding_robot.empty())
          fail(name, lineno, "bindings section needs a robot id");
        section = Section::Bindings;
      } else {
        fail(name, lineno, "unknown section [" + sec + "]");
      }
      continue;
    }

    const size_t eq = t.find('=');
    if (eq == std::string::npos) fail(name, lineno, "expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) fail(name, lineno, "empty key");

    switch (section) {
      case Section::Global:
        if (key == "classes") {
          cfg.class_names.clear();
          std::istringstream vs(value);
          std::string item;
          while (std::getline(vs, item, ',')) {
            const std::string cls = trim(item);
            if (cls.empty()) fail(name, lineno, "empty class name");
            cfg.class_names.push_back(cls);
          }
        } else if (key == "confidence_threshold") {
          cfg.confidence_threshold = static_cast<float>(parse_real(name, lineno, value));
          if (cfg.confidence_threshold < 0.0f || cfg.confidence_threshold > 1.0f)
            fail(name, lineno, "confidence_threshold outside [0,1]");
        } else if (key == "nms_iou") {
          cfg.nms_iou = parse_real(name, lineno, value);
          if (cfg.nms_iou <= 0.0 || cfg.nms_iou > 1.0)
            fail(name, lineno, "nms_iou outside (0,1]");
        } else if (key == "cooldown_seconds") {
          cfg.cooldown_seconds = parse_real(name, lineno, value);
          if (cfg.cooldown_seconds < 0.0)
            fail(name, lineno, "cooldown_seconds must be >= 0");
        } else {
          fail(name, lineno, "unknown key '" + key + "'");
        }
        break;

      case Section::Actions: {
        const uint16_t id =
            static_cast<uint16_t>(parse_uint(name, lineno, key, 0xFFFF));
        if (cfg.actions.count(id))
          fail(name, lineno, "duplicate action id " + key);
        ActionDef def;
        const size_t sp = value.find(' ');
        def.name = sp == std::string::npos ? value : value.substr(0, sp);
        if (sp != std::string::npos) def.args = trim(value.substr(sp + 1));
        if (def.name.empty()) fail(name, lineno, "action needs a name");
        cfg.actions[id] = std::move(def);
        break;
      }

      case Section::Bindings: {
        const uint16_t action_id =
            static_cast<uint16_t>(parse_uint(name, lineno, value, 0xFFFF));
        raw_bindings.push_back({binding_robot, key, action_id, lineno});
        break;
      }
    }
  }

  for (const auto& rb : raw_bindings) {
    uint16_t label_id;
    const auto it = std::find(cfg.class_names.begin(), cfg.class_names.end(),
                              rb.label);
    if (it != cfg.class_names.end()) {
      label_id = static_cast<uint16_t>(it - cfg.class_names.begin());
    } else if (!rb.label.empty() &&
               rb.label.find_first_not_of("0123456789") == std::string::npos) {
      label_id =
          static_cast<uint16_t>(parse_uint(name, rb.lineno, rb.label, 0xFFFF));
      if (!cfg.class_names.empty() && label_id >= cfg.class_names.size())
        fail(name, rb.lineno, "label id " + rb.label + " outside class list");
    } else {
      fail(name, rb.lineno, "unknown class '" + rb.label + "'");
    }
    if (!cfg.actions.count(rb.action_id))
      fail(name, rb.lineno,
           "binding references undefined action " + std::to_string(rb.action_id));
    cfg.bindings[rb.robot][label_id] = rb.action_id;
  }
  return cfg;
}

GatewayConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  return parse_config(f, path);
}

}  // namespace infergate::gateway
