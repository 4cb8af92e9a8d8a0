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

#pragma once

// Shipped scenarios. Kept byte-identical to scenarios/*.json (checked by tests).

#include <cstdint>
#include <optional>
#include <string_view>

#include "secfuse/config_json.hpp"
#include "secfuse/scenario.hpp"

namespace secfuse {

/// Seed used by the shipped examples unless another is given.
inline constexpr std::uint64_t kShippedSeed = 7;

inline constexpr std::string_view kExample1Json = R"json({
  "name": "example1",
  "horizon": 20,
  "dt": 1.0,
  "anchor": 1,
  "range": 100.0,
  "channels": [{"name": "lateral"}],
  "q": "default-max",
  "noise_mode": "independent",
  "on_insufficient": "skip",
  "vehicles": [
    {"id": 1, "initial": {"lateral": 1.5, "longitudinal": 0.0}, "noise": {"lateral": 0.01}},
    {"id": 2, "initial": {"lateral": 1.5, "longitudinal": 0.0}, "noise": {"lateral": 0.02}},
    {"id": 3, "initial": {"lateral": 1.5, "longitudinal": 0.0}, "noise": {"lateral": 0.03}},
    {"id": 4, "initial": {"lateral": 1.5, "longitudinal": 0.0}, "noise": {"lateral": 0.04}},
    {"id": 5, "initial": {"lateral": 1.5, "longitudinal": 0.0}, "noise": {"lateral": 0.05}}
  ],
  "example1": {
    "truth": 1.5,
    "jitter": 0.01,
    "malicious_count": 2,
    "attack": {"kind": "gaussian", "sigma": 5.0}
  }
}
)json";

inline constexpr std::string_view kExample2Json = R"json({
  "name": "example2",
  "horizon": 60,
  "dt": 1.0,
  "anchor": 1,
  "range": 100.0,
  "channels": [
    {"name": "lateral", "gamma": 0.005},
    {"name": "longitudinal", "gamma": 0.5}
  ],
  "q": "default-max",
  "noise_mode": "independent",
  "on_insufficient": "skip",
  "vehicles": [
    {"id": 1, "initial": {"lateral": 1.5, "longitudinal": 0.0},
     "speed": {"constant": 30.0, "amplitude": 1.0}, "lateral_jitter": 0.01,
     "noise": {"lateral": 0.005, "longitudinal": 0.5}, "attack": {"kind": "none"}},
    {"id": 2, "initial": {"lateral": 4.5, "longitudinal": 10.0},
     "speed": {"constant": 30.0, "amplitude": 5.0}, "lateral_jitter": 0.02,
     "noise": {"lateral": 0.005, "longitudinal": 0.5}, "attack": {"kind": "none"}},
    {"id": 3, "initial": {"lateral": 7.5, "longitudinal": 50.0},
     "speed": {"constant": 30.0, "amplitude": -4.0}, "lateral_jitter": 0.04,
     "noise": {"lateral": 0.005, "longitudinal": 0.5}, "attack": {"kind": "none"}},
    {"id": 4, "initial": {"lateral": 1.5, "longitudinal": -200.0},
     "speed": {"constant": 35.0, "amplitude": 1.0}, "lateral_jitter": 0.01,
     "lane_changes": [
       {"start": 39, "end": 40, "target": 4.5},
       {"start": 41, "end": 42, "target": 1.5}
     ],
     "noise": {"lateral": 0.005, "longitudinal": 0.5}, "attack": {"kind": "gaussian", "sigma": 5.0}},
    {"id": 5, "initial": {"lateral": 10.5, "longitudinal": -50.0},
     "speed": {"constant": 30.0, "amplitude": 3.0}, "lateral_jitter": 0.03,
     "noise": {"lateral": 0.005, "longitudinal": 0.5}, "attack": {"kind": "gaussian", "sigma": 5.0}}
  ]
}
)json";

inline std::optional<std::string_view> builtin_scenario_text(std::string_view name) {
  if (name == "example1") return kExample1Json;
  if (name == "example2") return kExample2Json;
  return std::nullopt;
}

inline ScenarioConfig example1_config() { return parse_scenario(kExample1Json); }
inline ScenarioConfig example2_config() { return parse_scenario(kExample2Json); }

}  // namespace secfuse
