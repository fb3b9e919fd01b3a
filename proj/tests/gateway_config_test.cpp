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

#include <sstream>

#include "doctest.h"
#include "infergate/gateway/actions.hpp"
#include "infergate/gateway/config.hpp"

using namespace infergate;
using namespace infergate::gateway;

namespace {

GatewayConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is, "test.conf");
}

detect::Detection det(uint16_t label, float conf) {
  detect::Detection d;
  d.label_id = label;
  d.confidence = conf;
  d.box = Box{0, 0, 10, 10};
  return d;
}

}  // namespace

TEST_SUITE("gateway-config") {

TEST_CASE("full config parses") {
  GatewayConfig cfg = parse(
      "# gateway settings\n"
      "classes = ball, cup ,person\n"
      "confidence_threshold = 0.3\n"
      "nms_iou = 0.5\n"
      "cooldown_seconds = 1.5\n"
      "\n"
      "[actions]\n"
      "1 = kick approach-then-kick\n"
      "2 = fetch\n"
      "\n"
      "[bindings.nao-01]\n"
      "ball = 1\n"
      "2 = 2\n"
      "[bindings.nao-02]\n"
      "cup = 2\n");

  CHECK(cfg.class_names == std::vector<std::string>{"ball", "cup", "person"});
  CHECK(cfg.confidence_threshold == doctest::Approx(0.3f));
  CHECK(cfg.nms_iou == doctest::Approx(0.5));
  CHECK(cfg.cooldown_seconds == doctest::Approx(1.5));

  REQUIRE(cfg.actions.size() == 2);
  CHECK(cfg.actions.at(1) == ActionDef{"kick", "approach-then-kick"});
  CHECK(cfg.actions.at(2) == ActionDef{"fetch", ""});

  REQUIRE(cfg.bindings.size() == 2);
  // "ball" resolved by name to label 0; "2" taken numerically as person.
  CHECK(cfg.bindings.at("nao-01") ==
        std::map<uint16_t, uint16_t>{{0, 1}, {2, 2}});
  CHECK(cfg.bindings.at("nao-02") == std::map<uint16_t, uint16_t>{{1, 2}});
}

TEST_CASE("class names fall back to generated labels") {
  GatewayConfig cfg = parse("classes = ball,cup\n");
  CHECK(cfg.class_name(0) == "ball");
  CHECK(cfg.class_name(1) == "cup");
  CHECK(cfg.class_name(9) == "c9");
}

TEST_CASE("defaults survive an empty config") {
  GatewayConfig cfg = parse("");
  CHECK(cfg.class_names.empty());
  CHECK(cfg.confidence_threshold == 0.25f);
  CHECK(cfg.nms_iou == 0.45);
  CHECK(cfg.cooldown_seconds == 2.0);
  CHECK(cfg.actions.empty());
  CHECK(cfg.bindings.empty());
}

TEST_CASE("numeric bindings without a class list are accepted") {
  GatewayConfig cfg = parse(
      "[actions]\n"
      "7 = wave\n"
      "[bindings.r1]\n"
      "3 = 7\n");
  CHECK(cfg.bindings.at("r1") == std::map<uint16_t, uint16_t>{{3, 7}});
}

TEST_CASE("malformed configs name their line") {
  auto check_fail = [](const std::string& text, const std::string& needle) {
    std::istringstream is(text);
    CHECK_THROWS_WITH_AS(parse_config(is, "test.conf"),
                         doctest::Contains(needle), ConfigError);
  };

  check_fail("bogus_key = 1\n", "test.conf:1");
  check_fail("classes = a\nnot a pair\n", ":2");
  check_fail("[weird]\n", "unknown section");
  check_fail("[actions\n", "unterminated");
  check_fail("= 5\n", "empty key");
  check_fail("confidence_threshold = 1.5\n", "outside [0,1]");
  check_fail("confidence_threshold = abc\n", "expected a number");
  check_fail("nms_iou = 0\n", "outside (0,1]");
  check_fail("cooldown_seconds = -1\n", ">= 0");
  check_fail("classes = a,,b\n", "empty class name");
  check_fail("[bindings.]\n", "robot id");
  check_fail("[actions]\n1 = kick\n1 = fetch\n", "duplicate action id");
  check_fail("[actions]\nbad = kick\n", "expected an integer");
  check_fail("[actions]\n1 =\n", "action needs a name");
}

TEST_CASE("binding consistency is enforced") {
  auto check_fail = [](const std::string& text, const std::string& needle) {
    std::istringstream is(text);
    CHECK_THROWS_WITH_AS(parse_config(is, "test.conf"),
                         doctest::Contains(needle), ConfigError);
  };

  check_fail(
      "classes = ball\n[actions]\n1 = kick\n[bindings.r1]\ncup = 1\n",
      "unknown class 'cup'");
  check_fail("classes = ball\n[actions]\n1 = kick\n[bindings.r1]\n5 = 1\n",
             "outside class list");
  check_fail("classes = ball\n[bindings.r1]\nball = 9\n",
             "undefined action 9");
  // The failing binding line is the one reported, not the file end.
  check_fail("classes = ball\n[bindings.r1]\nball = 9\n", ":3");
}

TEST_CASE("load_config reports a missing file") {
  CHECK_THROWS_AS(load_config("no_such_config.conf"), ConfigError);
}

TEST_CASE("registry exposes actions and per-robot bindings") {
  GatewayConfig cfg = parse(
      "classes = ball,cup\n"
      "[actions]\n"
      "1 = kick hard\n"
      "[bindings.r1]\n"
      "ball = 1\n");
  ActionRegistry reg(cfg);

  REQUIRE(reg.action(1) != nullptr);
  CHECK(reg.action(1)->name == "kick");
  CHECK(reg.action(1)->args == "hard");
  CHECK(reg.action(2) == nullptr);

  REQUIRE(reg.bindings_for("r1") != nullptr);
  CHECK(reg.bindings_for("r1")->at(0) == 1);
  CHECK(reg.bindings_for("r2") == nullptr);
}

TEST_CASE("registry rejects a hand-built inconsistent config") {
  GatewayConfig cfg;
  cfg.bindings["r1"][0] = 42;  // no action 42 defined
  CHECK_THROWS_AS(ActionRegistry{cfg}, ConfigError);
}

TEST_CASE("dispatcher picks the strongest bound detection") {
  GatewayConfig cfg = parse(
      "classes = ball,cup,person\n"
      "[actions]\n"
      "1 = kick\n"
      "2 = fetch cup-args\n"
      "[bindings.r1]\n"
      "ball = 1\n"
      "cup = 2\n");
  ActionRegistry reg(cfg);
  ActionDispatcher disp(&reg, reg.bindings_for("r1"), 1000000);

  // person (label 2) is unbound; cup at 0.7 beats ball at 0.5.
  auto got = disp.dispatch({det(0, 0.5f), det(2, 0.9f), det(1, 0.7f)}, 0);
  REQUIRE(got.has_value());
  CHECK(got->action_id == 2);
  CHECK(got->args == "cup-args");
}

TEST_CASE("dispatcher with no bindings stays silent") {
  ActionDispatcher disp;
  CHECK(!disp.dispatch({det(0, 0.9f)}, 0).has_value());

  GatewayConfig cfg = parse("[actions]\n1 = kick\n");
  ActionRegistry reg(cfg);
  ActionDispatcher wired(&reg, reg.bindings_for("r1"), 0);
  CHECK(!wired.dispatch({det(0, 0.9f)}, 0).has_value());
}

TEST_CASE("confidence ties keep the earliest detection") {
  GatewayConfig cfg = parse(
      "classes = a,b\n[actions]\n1 = first\n2 = second\n"
      "[bindings.r]\na = 1\nb = 2\n");
  ActionRegistry reg(cfg);
  ActionDispatcher disp(&reg, reg.bindings_for("r"), 0);
  auto got = disp.dispatch({det(1, 0.6f), det(0, 0.6f)}, 0);
  REQUIRE(got.has_value());
  CHECK(got->action_id == 2);  // label b listed first at equal confidence
}

TEST_CASE("cooldown suppresses the winner without falling back") {
  GatewayConfig cfg = parse(
      "classes = a,b\n[actions]\n1 = one\n2 = two\n"
      "[bindings.r]\na = 1\nb = 2\n");
  ActionRegistry reg(cfg);
  const uint64_t cd = 2000000;
  ActionDispatcher disp(&reg, reg.bindings_for("r"), cd);

  REQUIRE(disp.dispatch({det(0, 0.9f)}, 0).has_value());
  // Winner is label a again, still cooling: no action at all, even
  // though label b is present and idle.
  CHECK(!disp.dispatch({det(0, 0.9f), det(1, 0.5f)}, 1000000).has_value());
  // Without label a in the frame, label b fires on its own clock.
  auto b = disp.dispatch({det(1, 0.5f)}, 1200000);
  REQUIRE(b.has_value());
  CHECK(b->action_id == 2);
  // Exactly at the window edge label a is eligible again.
  auto a = disp.dispatch({det(0, 0.9f)}, cd);
  REQUIRE(a.has_value());
  CHECK(a->action_id == 1);
}

}  // TEST_SUITE("gateway-config")
