/*
 * Copyright 2026 The secfuse Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <catch_amalgamated.hpp>

#include <random>
#include <string>

#include "secfuse/builtin.hpp"
#include "secfuse/config_json.hpp"
#include "secfuse/trace_io.hpp"

using namespace secfuse;

namespace {

std::vector<std::string> problems_of(std::string_view text) {
  try {
    parse_scenario(text);
  } catch (const ConfigError& e) {
    return e.problems();
  }
  return {};
}

bool mentions(const std::vector<std::string>& problems, std::string_view needle) {
  for (const auto& p : problems) {
    if (p.find(needle) != std::string::npos) return true;
  }
  return false;
}

constexpr std::string_view kMinimal = R"({
  "horizon": 3, "anchor": 1, "channels": [{"name": "lateral"}],
  "vehicles": [{"id": 1, "initial": {"lateral": 0, "longitudinal": 0}}]
})";

}  // namespace

TEST_CASE("shipped example2 parses with the published parameters", "[config]") {
  const auto cfg = parse_scenario(read_file(SECFUSE_SOURCE_DIR "/scenarios/example2.json"));
  CHECK(cfg.vehicles.size() == 5);
  CHECK(cfg.range == 100.0);
  CHECK(cfg.horizon == 60);
  const auto g = cfg.gamma_bounds();
  CHECK(g.at(Channel::kLateral) == 0.005);
  CHECK(g.at(Channel::kLongitudinal) == 0.5);
  CHECK(cfg.isolation_enabled());
  CHECK(std::get<GaussianAttack>(cfg.find_vehicle(vehicle(4))->attack).sigma == 5.0);
  CHECK(cfg.find_vehicle(vehicle(3))->speed.amplitude == -4.0);
}

TEST_CASE("shipped files match the embedded builtins", "[config]") {
  CHECK(read_file(SECFUSE_SOURCE_DIR "/scenarios/example1.json") == kExample1Json);
  CHECK(read_file(SECFUSE_SOURCE_DIR "/scenarios/example2.json") == kExample2Json);
  const auto e1 = example1_config();
  REQUIRE(e1.example1);
  CHECK(e1.example1->malicious_count == 2);
  CHECK(e1.vehicles[4].noise.lateral == 0.05);
  CHECK_FALSE(e1.isolation_enabled());
}

TEST_CASE("minimal config takes documented defaults", "[config]") {
  const auto cfg = parse_scenario(kMinimal);
  CHECK(cfg.dt == 1.0);
  CHECK(cfg.range == 100.0);
  CHECK_FALSE(cfg.q_override);
  CHECK(cfg.noise_mode == NoiseMode::kIndependent);
  CHECK(cfg.on_insufficient == InsufficientPolicy::kSkip);
  CHECK(cfg.max_sources == 24);
  CHECK(std::holds_alternative<NoAttack>(cfg.vehicles[0].attack));
}

TEST_CASE("schema and semantic violations name their field", "[config]") {
  CHECK(mentions(problems_of(R"({"horizon": 1, "anchor": 1, "channels": [{"name": "lateral"}], "vehicles": []})"),
                 "vehicles: at least one vehicle"));
  CHECK(mentions(problems_of(R"({"horizon": 1, "anchor": 1, "channels": [{"name": "lateral"}], "vehicles": [
      {"id": 7, "initial": {"lateral": 0, "longitudinal": 0}},
      {"id": 7, "initial": {"lateral": 0, "longitudinal": 0}}]})"),
                 "duplicate vehicle id 7"));
  CHECK(mentions(problems_of("{\"horizon\": "), "syntax error"));
  CHECK(mentions(problems_of(R"({"horizon": 1, "anchr": 1})"), "anchr: unknown field"));
  CHECK(mentions(problems_of(R"({"horizon": "x", "anchor": 1, "channels": [], "vehicles": []})"),
                 "horizon: expected integer"));
  CHECK(mentions(problems_of(R"({"horizon": 5, "anchor": 1, "channels": [{"name": "vertical"}], "vehicles": [
      {"id": 1, "initial": {"lateral": 0, "longitudinal": 0}}]})"),
                 "channels[0].name"));
  CHECK(mentions(problems_of(R"({"horizon": 5, "anchor": 1, "channels": [{"name": "lateral"}], "vehicles": [
      {"id": 1, "initial": {"lateral": 0, "longitudinal": 0},
       "lane_changes": [{"start": 1, "end": 3, "target": 4.5}, {"start": 2, "end": 4, "target": 1.5}]}]})"),
                 "vehicles[0].lane_changes[1]: overlaps"));
  CHECK(mentions(problems_of(R"({"horizon": 5, "anchor": 2, "channels": [{"name": "lateral"}], "vehicles": [
      {"id": 1, "initial": {"lateral": 0, "longitudinal": 0}}]})"),
                 "anchor: unknown vehicle id 2"));
  CHECK(mentions(problems_of(R"({"horizon": 5, "anchor": 1, "channels": [{"name": "lateral", "gamma": 0.1},
      {"name": "longitudinal"}], "vehicles": [{"id": 1, "initial": {"lateral": 0, "longitudinal": 0}}]})"),
                 "every channel or for none"));
  CHECK(mentions(problems_of(R"({"horizon": 5, "anchor": 1, "channels": [{"name": "lateral"}], "vehicles": [
      {"id": 1, "initial": {"lateral": 0, "longitudinal": 0}, "attack": {"kind": "laser"}}]})"),
                 "vehicles[0].attack.kind"));
  CHECK(mentions(problems_of(R"({"horizon": 5, "anchor": 1, "q": 1, "channels": [{"name": "lateral"}], "vehicles": [
      {"id": 1, "initial": {"lateral": 0, "longitudinal": 0}}]})"),
                 "q: 1 is not below N/2"));
}

TEST_CASE("serialize then parse is the identity", "[config][property]") {
  CHECK(parse_scenario(serialize_scenario(example1_config())) == example1_config());
  CHECK(parse_scenario(serialize_scenario(example2_config())) == example2_config());

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> real(-1e3, 1e3);
  std::uniform_real_distribution<double> pos(1e-6, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    ScenarioConfig cfg;
    cfg.name = "random-" + std::to_string(trial);
    cfg.horizon = 10 + trial % 7;
    cfg.dt = pos(rng);
    cfg.range = pos(rng) * 100;
    cfg.anchor = vehicle(1);
    const bool gammas = trial % 2 == 0;
    cfg.channels = {{Channel::kLongitudinal, gammas ? std::optional(pos(rng)) : std::nullopt}};
    if (trial % 3 == 0) cfg.channels.push_back({Channel::kLateral, gammas ? std::optional(pos(rng)) : std::nullopt});
    cfg.noise_mode = trial % 4 == 0 ? NoiseMode::kShared : NoiseMode::kIndependent;
    cfg.on_insufficient = trial % 5 == 0 ? InsufficientPolicy::kFail : InsufficientPolicy::kSkip;
    cfg.max_sources = 3 + trial % 20;
    const std::uint32_t n = 1 + trial % 6;
    if (trial % 7 == 0 && n >= 3) cfg.q_override = 1;
    for (std::uint32_t i = 1; i <= n; ++i) {
      VehicleSpec v;
      v.id = vehicle(i * 3);
      if (i == 1) cfg.anchor = v.id;
      v.initial_lateral = real(rng);
      v.initial_longitudinal = real(rng);
      v.speed = {real(rng), real(rng)};
      v.lateral_jitter = pos(rng);
      v.noise = {pos(rng), pos(rng)};
      if (i % 2 == 0) v.lane_changes = {{1, 3, real(rng)}, {4, 9, real(rng)}};
      switch (i % 4) {
        case 0: v.attack = GaussianAttack{pos(rng)}; break;
        case 1: v.attack = NoAttack{}; break;
        case 2: v.attack = ConstantAttack{real(rng)}; break;
        default: v.attack = SeriesAttack{{real(rng), real(rng), 0.0}}; break;
      }
      cfg.vehicles.push_back(v);
    }
    if (trial % 6 == 0) cfg.example1 = Example1Mode{real(rng), pos(rng), n / 2, GaussianAttack{pos(rng)}};
    REQUIRE(validate(cfg).empty());
    REQUIRE(parse_scenario(serialize_scenario(cfg)) == cfg);
  }
}
