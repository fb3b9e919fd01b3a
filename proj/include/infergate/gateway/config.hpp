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

// Gateway configuration file: line-oriented `key = value` pairs with
// '#' comments and two section kinds.
//
//   classes = ball,cup,person          label_id = position in the list
//   confidence_threshold = 0.25
//   nms_iou = 0.45
//   cooldown_seconds = 2.0
//
//   [actions]
//   1 = kick approach-then-kick       action_id = name [args...]
//
//   [bindings.nao-01]
//   ball = 1                          label (name or id) = action_id

#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace infergate::gateway {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ActionDef {
  std::string name;
  std::string args;  // free-form template, may be empty

  bool operator==(const ActionDef&) const = default;
};

struct GatewayConfig {
  std::vector<std::string> class_names;
  float confidence_threshold = 0.25f;
  double nms_iou = 0.45;
  double cooldown_seconds = 2.0;
  std::map<uint16_t, ActionDef> actions;
  // robot_id -> (label_id -> action_id)
  std::map<std::string, std::map<uint16_t, uint16_t>> bindings;

  std::string class_name(uint16_t label_id) const;
};

// Throws ConfigError naming file and line on any malformed or
// inconsistent input (unknown keys, bindings to undefined actions or
// labels outside the class list).
GatewayConfig parse_config(std::istream& in, const std::string& name);
GatewayConfig load_config(const std::string& path);

}  // namespace infergate::gateway
