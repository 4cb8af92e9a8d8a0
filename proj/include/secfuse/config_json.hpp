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

// JSON form of ScenarioConfig. The schema is documented in
// docs/scenario.schema.json; unknown keys are rejected so typos surface.

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "secfuse/scenario.hpp"

namespace secfuse {

namespace detail {

using nlohmann::json;

class JsonReader {
 public:
  std::vector<std::string> errors;

  bool expect_object(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) {
      errors.push_back(path_or_root(path) + ": expected object");
      return false;
    }
    for (const auto& [key, value] : j.items()) {
      bool known = false;
      for (auto a : allowed) known = known || a == key;
      if (!known) errors.push_back(join(path, key) + ": unknown field");
    }
    return true;
  }

  std::optional<double> number(const json& obj, const std::string& path, const char* key, bool required) {
    const json* v = find(obj, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_number()) {
      errors.push_back(join(path, key) + ": expected number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<std::int64_t> integer(const json& obj, const std::string& path, const char* key, bool required) {
    const json* v = find(obj, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_number_integer()) {
      errors.push_back(join(path, key) + ": expected integer");
      return std::nullopt;
    }
    return v->get<std::int64_t>();
  }

  std::optional<std::uint32_t> vehicle_id(const json& obj, const std::string& path, const char* key) {
    auto v = integer(obj, path, key, true);
    if (!v) return std::nullopt;
    if (*v < 0 || *v > static_cast<std::int64_t>(UINT32_MAX)) {
      errors.push_back(join(path, key) + ": vehicle id out of range");
      return std::nullopt;
    }
    return static_cast<std::uint32_t>(*v);
  }

  std::optional<std::string> string(const json& obj, const std::string& path, const char* key, bool required) {
    const json* v = find(obj, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      errors.push_back(join(path, key) + ": expected string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  const json* array(const json& obj, const std::string& path, const char* key, bool required) {
    const json* v = find(obj, path, key, required);
    if (!v) return nullptr;
    if (!v->is_array()) {
      errors.push_back(join(path, key) + ": expected array");
      return nullptr;
    }
    return v;
  }

  const json* find(const json& obj, const std::string& path, const char* key, bool required) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) errors.push_back(join(path, key) + ": missing required field");
      return nullptr;
    }
    return &*it;
  }

  static std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
  }
  static std::string path_or_root(const std::string& path) { return path.empty() ? "(root)" : path; }
};

inline AttackSpec read_attack(JsonReader& r, const json& j, const std::string& path) {
  if (!r.expect_object(j, path, {"kind", "sigma", "value", "values"})) return NoAttack{};
  const auto kind = r.string(j, path, "kind", true);
  if (!kind) return NoAttack{};
  if (*kind == "none") return NoAttack{};
  if (*kind == "gaussian") return GaussianAttack{r.number(j, path, "sigma", true).value_or(0.0)};
  if (*kind == "constant") return ConstantAttack{r.number(j, path, "value", true).value_or(0.0)};
  if (*kind == "series") {
    SeriesAttack s;
    if (const json* arr = r.array(j, path, "values", true)) {
      for (std::size_t i = 0; i < arr->size(); ++i) {
        if (!(*arr)[i].is_number()) {
          r.errors.push_back(path + ".values[" + std::to_string(i) + "]: expected number");
        } else {
          s.values.push_back((*arr)[i].get<double>());
        }
      }
    }
    return s;
  }
  r.errors.push_back(path + ".kind: expected one of none, gaussian, constant, series");
  return NoAttack{};
}

inline VehicleSpec read_vehicle(JsonReader& r, const json& j, const std::string& path) {
  VehicleSpec v;
  if (!r.expect_object(j, path, {"id", "initial", "speed", "lateral_jitter", "lane_changes", "noise", "attack"})) {
    return v;
  }
  if (auto id = r.vehicle_id(j, path, "id")) v.id = vehicle(*id);

  if (const json* init = r.find(j, path, "initial", true)) {
    const std::string p = path + ".initial";
    if (r.expect_object(*init, p, {"lateral", "longitudinal"})) {
      v.initial_lateral = r.number(*init, p, "lateral", true).value_or(0.0);
      v.initial_longitudinal = r.number(*init, p, "longitudinal", true).value_or(0.0);
    }
  }
  if (const json* speed = r.find(j, path, "speed", false)) {
    const std::string p = path + ".speed";
    if (r.expect_object(*speed, p, {"constant", "amplitude"})) {
      v.speed.constant = r.number(*speed, p, "constant", false).value_or(0.0);
      v.speed.amplitude = r.number(*speed, p, "amplitude", false).value_or(0.0);
    }
  }
  v.lateral_jitter = r.number(j, path, "lateral_jitter", false).value_or(0.0);
  if (const json* lcs = r.array(j, path, "lane_changes", false)) {
    for (std::size_t i = 0; i < lcs->size(); ++i) {
      const std::string p = path + ".lane_changes[" + std::to_string(i) + "]";
      const json& lc = (*lcs)[i];
      if (!r.expect_object(lc, p, {"start", "end", "target"})) continue;
      LaneChange c;
      c.start = r.integer(lc, p, "start", true).value_or(0);
      c.end = r.integer(lc, p, "end", true).value_or(0);
      c.target = r.number(lc, p, "target", true).value_or(0.0);
      v.lane_changes.push_back(c);
    }
  }
  if (const json* noise = r.find(j, path, "noise", false)) {
    const std::string p = path + ".noise";
    if (r.expect_object(*noise, p, {"lateral", "longitudinal"})) {
      v.noise.lateral = r.number(*noise, p, "lateral", false).value_or(0.0);
      v.noise.longitudinal = r.number(*noise, p, "longitudinal", false).value_or(0.0);
    }
  }
  if (const json* attack = r.find(j, path, "attack", false)) v.attack = read_attack(r, *attack, path + ".attack");
  return v;
}

inline json attack_to_json(const AttackSpec& attack) {
  return std::visit(
      [](const auto& a) -> json {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, NoAttack>) {
          return {{"kind", "none"}};
        } else if constexpr (std::is_same_v<T, GaussianAttack>) {
          return {{"kind", "gaussian"}, {"sigma", a.sigma}};
        } else if constexpr (std::is_same_v<T, ConstantAttack>) {
          return {{"kind", "constant"}, {"value", a.value}};
        } else {
          return {{"kind", "series"}, {"values", a.values}};
        }
      },
      attack);
}

}  // namespace detail

/// Parses and validates. Throws ConfigError listing every problem found, each
/// qualified with its field path.
inline ScenarioConfig parse_scenario(std::string_view text) {
  using detail::json;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("syntax error: ") + e.what()});
  }

  detail::JsonReader r;
  ScenarioConfig cfg;
  if (!r.expect_object(root, "", {"name", "horizon", "dt", "anchor", "range", "channels", "q", "noise_mode",
                                  "on_insufficient", "max_sources", "vehicles", "example1"})) {
    throw ConfigError(std::move(r.errors));
  }

  cfg.name = r.string(root, "", "name", false).value_or("");
  cfg.horizon = r.integer(root, "", "horizon", true).value_or(0);
  cfg.dt = r.number(root, "", "dt", false).value_or(1.0);
  if (auto a = r.vehicle_id(root, "", "anchor")) cfg.anchor = vehicle(*a);
  cfg.range = r.number(root, "", "range", false).value_or(100.0);

  if (const json* chans = r.array(root, "", "channels", true)) {
    for (std::size_t i = 0; i < chans->size(); ++i) {
      const std::string p = "channels[" + std::to_string(i) + "]";
      const json& c = (*chans)[i];
      if (!r.expect_object(c, p, {"name", "gamma"})) continue;
      ChannelConfig cc;
      if (auto name = r.string(c, p, "name", true)) {
        if (auto ch = parse_channel(*name)) {
          cc.channel = *ch;
        } else {
          r.errors.push_back(p + ".name: expected lateral or longitudinal");
        }
      }
      cc.gamma = r.number(c, p, "gamma", false);
      cfg.channels.push_back(cc);
    }
  }

  if (const json* q = r.find(root, "", "q", false)) {
    if (q->is_string() && q->get<std::string>() == "default-max") {
      cfg.q_override.reset();
    } else if (q->is_number_integer() && q->get<std::int64_t>() >= 0) {
      cfg.q_override = q->get<std::size_t>();
    } else {
      r.errors.push_back("q: expected \"default-max\" or a non-negative integer");
    }
  }
  if (auto mode = r.string(root, "", "noise_mode", false)) {
    if (*mode == "independent") {
      cfg.noise_mode = NoiseMode::kIndependent;
    } else if (*mode == "shared") {
      cfg.noise_mode = NoiseMode::kShared;
    } else {
      r.errors.push_back("noise_mode: expected independent or shared");
    }
  }
  if (auto pol = r.string(root, "", "on_insufficient", false)) {
    if (*pol == "skip") {
      cfg.on_insufficient = InsufficientPolicy::kSkip;
    } else if (*pol == "fail") {
      cfg.on_insufficient = InsufficientPolicy::kFail;
    } else {
      r.errors.push_back("on_insufficient: expected skip or fail");
    }
  }
  if (auto cap = r.integer(root, "", "max_sources", false)) {
    if (*cap < 0) {
      r.errors.push_back("max_sources: must be >= 3");
    } else {
      cfg.max_sources = static_cast<std::size_t>(*cap);
    }
  }

  if (const json* vs = r.array(root, "", "vehicles", true)) {
    for (std::size_t i = 0; i < vs->size(); ++i) {
      cfg.vehicles.push_back(detail::read_vehicle(r, (*vs)[i], "vehicles[" + std::to_string(i) + "]"));
    }
  }

  if (const json* e1 = r.find(root, "", "example1", false)) {
    if (r.expect_object(*e1, "example1", {"truth", "jitter", "malicious_count", "attack"})) {
      Example1Mode m;
      m.truth = r.number(*e1, "example1", "truth", false).value_or(m.truth);
      m.jitter = r.number(*e1, "example1", "jitter", false).value_or(m.jitter);
      if (auto c = r.integer(*e1, "example1", "malicious_count", false)) {
        if (*c < 0) {
          r.errors.push_back("example1.malicious_count: must be >= 0");
        } else {
          m.malicious_count = static_cast<std::size_t>(*c);
        }
      }
      if (const json* a = r.find(*e1, "example1", "attack", false)) m.attack = detail::read_attack(r, *a, "example1.attack");
      cfg.example1 = m;
    }
  }

  // Semantic checks only make sense once the shape is right.
  if (r.errors.empty()) r.errors = validate(cfg);
  if (!r.errors.empty()) throw ConfigError(std::move(r.errors));
  return cfg;
}

inline nlohmann::json scenario_to_json(const ScenarioConfig& cfg) {
  using detail::json;
  json root;
  root["name"] = cfg.name;
  root["horizon"] = cfg.horizon;
  root["dt"] = cfg.dt;
  root["anchor"] = to_int(cfg.anchor);
  root["range"] = cfg.range;
  root["channels"] = json::array();
  for (const auto& c : cfg.channels) {
    json cj{{"name", std::string(to_string(c.channel))}};
    if (c.gamma) cj["gamma"] = *c.gamma;
    root["channels"].push_back(cj);
  }
  root["q"] = cfg.q_override ? json(*cfg.q_override) : json("default-max");
  root["noise_mode"] = cfg.noise_mode == NoiseMode::kIndependent ? "independent" : "shared";
  root["on_insufficient"] = cfg.on_insufficient == InsufficientPolicy::kSkip ? "skip" : "fail";
  root["max_sources"] = cfg.max_sources;
  root["vehicles"] = json::array();
  for (const auto& v : cfg.vehicles) {
    json vj;
    vj["id"] = to_int(v.id);
    vj["initial"] = {{"lateral", v.initial_lateral}, {"longitudinal", v.initial_longitudinal}};
    vj["speed"] = {{"constant", v.speed.constant}, {"amplitude", v.speed.amplitude}};
    vj["lateral_jitter"] = v.lateral_jitter;
    vj["lane_changes"] = json::array();
    for (const auto& lc : v.lane_changes) {
      vj["lane_changes"].push_back({{"start", lc.start}, {"end", lc.end}, {"target", lc.target}});
    }
    vj["noise"] = {{"lateral", v.noise.lateral}, {"longitudinal", v.noise.longitudinal}};
    vj["attack"] = detail::attack_to_json(v.attack);
    root["vehicles"].push_back(vj);
  }
  if (cfg.example1) {
    root["example1"] = {{"truth", cfg.example1->truth},
                        {"jitter", cfg.example1->jitter},
                        {"malicious_count", cfg.example1->malicious_count},
                        {"attack", detail::attack_to_json(cfg.example1->attack)}};
  }
  return root;
}

inline std::string serialize_scenario(const ScenarioConfig& cfg) { return scenario_to_json(cfg).dump(2) + "\n"; }

}  // namespace secfuse
