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
#include <string>
#include <vector>

#include "infergate/detect/postprocess.hpp"
#include "infergate/gateway/config.hpp"
#include "infergate/wire/protocol.hpp"

namespace infergate::gateway {

// Validated view of the configured actions and per-robot label bindings.
class ActionRegistry {
 public:
  ActionRegistry() = default;
  // Throws ConfigError when a binding references an undefined action.
  explicit ActionRegistry(const GatewayConfig& config);

  const ActionDef* action(uint16_t action_id) const;
  // nullptr when the robot has no bindings configured.
  const std::map<uint16_t, uint16_t>* bindings_for(
      const std::string& robot_id) const;

 private:
  std::map<uint16_t, ActionDef> actions_;
  std::map<std::string, std::map<uint16_t, uint16_t>> bindings_;
};

// Per-session action arbitration. Selection happens first: the highest-
// confidence detection whose label is bound wins (earliest on ties).
// Then the cooldown gates the send — a winner whose label fired within
// the window produces nothing this frame.
class ActionDispatcher {
 public:
  ActionDispatcher() = default;
  ActionDispatcher(const ActionRegistry* registry,
                   const std::map<uint16_t, uint16_t>* bindings,
                   uint64_t cooldown_us);

  std::optional<wire::ActionPayload> dispatch(
      const std::vector<detect::Detection>& detections, uint64_t now_us);

 private:
  const ActionRegistry* registry_ = nullptr;
  const std::map<uint16_t, uint16_t>* bindings_ = nullptr;
  uint64_t cooldown_us_ = 0;
  std::map<uint16_t, uint64_t> last_fire_us_;
};

}  // namespace infergate::gateway
