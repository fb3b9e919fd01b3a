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

#include "infergate/gateway/actions.hpp"

namespace infergate::gateway {

ActionRegistry::ActionRegistry(const GatewayConfig& config)
    : actions_(config.actions), bindings_(config.bindings) {
  for (const auto& [robot, labels] : bindings_)
    for (const auto& [label, action_id] : labels)
      if (!actions_.count(action_id))
        throw ConfigError("robot " + robot + " binds label " +
                          std::to_string(label) + " to undefined action " +
                          std::to_string(action_id));
}

const ActionDef* ActionRegistry::action(uint16_t action_id) const {
  const auto it = actions_.find(action_id);
  return it == actions_.end() ? nullptr : &it->second;
}

const std::map<uint16_t, uint16_t>* ActionRegistry::bindings_for(
    const std::string& robot_id) const {
  const auto it = bindings_.find(robot_id);
  return it == bindings_.end() ? nullptr : &it->second;
}

ActionDispatcher::ActionDispatcher(const ActionRegistry* registry,
                                   const std::map<uint16_t, uint16_t>* bindings,
                                   uint64_t cooldown_us)
    : registry_(registry), bindings_(bindings), cooldown_us_(cooldown_us) {}

std::optional<wire::ActionPayload> ActionDispatcher::dispatch(
    const std::vector<detect::Detection>& detections, uint64_t now_us) {
  if (!registry_ || !bindings_ || bindings_->empty()) return std::nullopt;

  const detect::Detection* winner = nullptr;
  for (const detect::Detection& d : detections) {
    if (!bindings_->count(d.label_id)) continue;
    if (!winner || d.confidence > winner->confidence) winner = &d;
  }
  if (!winner) return std::nullopt;

  const auto last = last_fire_us_.find(winner->label_id);
  if (last != last_fire_us_.end() && now_us - last->second < cooldown_us_)
    return std::nullopt;

  const uint16_t action_id = bindings_->at(winner->label_id);
  const ActionDef* def = registry_->action(action_id);
  if (!def) return std::nullopt;  // registry validated; defensive only

  last_fire_us_[winner->label_id] = now_us;
  wire::ActionPayload payload;
  payload.action_id = action_id;
  payload.args = def->args;
  return payload;
}

}  // namespace infergate::gateway
