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

// Declarative description of a simulated run.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "secfuse/error.hpp"
#include "secfuse/fusion.hpp"
#include "secfuse/isolation.hpp"
#include "secfuse/types.hpp"

namespace secfuse {

struct NoAttack {
  friend bool operator==(const NoAttack&, const NoAttack&) = default;
};
struct GaussianAttack {
  double sigma = 0.0;
  friend bool operator==(const GaussianAttack&, const GaussianAttack&) = default;
};
struct ConstantAttack {
  double value = 0.0;
  friend bool operator==(const ConstantAttack&, const ConstantAttack&) = default;
};
/// values[k - 1] is injected at step k; zero past the end.
struct SeriesAttack {
  std::vector<double> values;
  friend bool operator==(const SeriesAttack&, const SeriesAttack&) = default;
};

/// Signal added to everything a vehicle uploads, on both channels.
using AttackSpec = std::variant<NoAttack, GaussianAttack, ConstantAttack, SeriesAttack>;

inline bool is_attacker(const AttackSpec& a) { return !std::holds_alternative<NoAttack>(a); }

/// v(t) = constant + amplitude * sin(t)
struct SpeedProfile {
  double constant = 0.0;
  double amplitude = 0.0;

  double at(double t) const { return constant + amplitude * std::sin(t); }
  friend bool operator==(const SpeedProfile&, const SpeedProfile&) = default;
};

/// Lateral move that starts leaving at step `start` and reaches `target` exactly at step `end`.
struct LaneChange {
  std::int64_t start = 0;
  std::int64_t end = 0;
  double target = 0.0;
  friend bool operator==(const LaneChange&, const LaneChange&) = default;
};

struct ChannelBounds {
  double lateral = 0.0;
  double longitudinal = 0.0;

  double at(Channel c) const { return c == Channel::kLateral ? lateral : longitudinal; }
  friend bool operator==(const ChannelBounds&, const ChannelBounds&) = default;
};

struct VehicleSpec {
  VehicleId id{};
  double initial_lateral = 0.0;
  double initial_longitudinal = 0.0;
  SpeedProfile speed;
  /// In-lane lateral speed is uniform in [-lateral_jitter, lateral_jitter].
  double lateral_jitter = 0.0;
  std::vector<LaneChange> lane_changes;
  ChannelBounds noise;
  AttackSpec attack = NoAttack{};

  friend bool operator==(const VehicleSpec&, const VehicleSpec&) = default;
};

struct ChannelConfig {
  Channel channel = Channel::kLateral;
  std::optional<double> gamma;
  friend bool operator==(const ChannelConfig&, const ChannelConfig&) = default;
};

enum class NoiseMode { kIndependent, kShared };
enum class InsufficientPolicy { kSkip, kFail };

/// Static-truth mode: only the anchor's lateral state is estimated. It equals
/// `truth` plus uniform jitter each step, and `malicious_count` uploaders
/// drawn afresh every step carry `attack`.
struct Example1Mode {
  double truth = 1.5;
  double jitter = 0.01;
  std::size_t malicious_count = 2;
  AttackSpec attack = GaussianAttack{5.0};
  friend bool operator==(const Example1Mode&, const Example1Mode&) = default;
};

struct ScenarioConfig {
  std::string name;
  std::int64_t horizon = 0;
  double dt = 1.0;
  VehicleId anchor{};
  double range = 100.0;
  std::vector<ChannelConfig> channels;
  /// Unset means the default budget ceil(N/2) - 1 per stack.
  std::optional<std::size_t> q_override;
  NoiseMode noise_mode = NoiseMode::kIndependent;
  InsufficientPolicy on_insufficient = InsufficientPolicy::kSkip;
  std::size_t max_sources = 24;
  std::vector<VehicleSpec> vehicles;
  std::optional<Example1Mode> example1;

  bool isolation_enabled() const {
    return !channels.empty() &&
           std::all_of(channels.begin(), channels.end(), [](const ChannelConfig& c) { return c.gamma.has_value(); });
  }

  GammaBounds gamma_bounds() const {
    GammaBounds b;
    for (const auto& c : channels) {
      if (c.gamma) b.set(c.channel, *c.gamma);
    }
    return b;
  }

  const VehicleSpec* find_vehicle(VehicleId id) const {
    for (const auto& v : vehicles) {
      if (v.id == id) return &v;
    }
    return nullptr;
  }

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems)
      : Error(ErrorKind::kConfig, join(problems)), problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& p) {
    std::string out;
    for (const auto& s : p) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }

  std::vector<std::string> problems_;
};

namespace detail {

inline void validate_attack(const AttackSpec& attack, const std::string& path, std::vector<std::string>& errors) {
  if (const auto* g = std::get_if<GaussianAttack>(&attack)) {
    if (!(g->sigma >= 0.0) || !std::isfinite(g->sigma)) errors.push_back(path + ".sigma: must be >= 0");
  } else if (const auto* c = std::get_if<ConstantAttack>(&attack)) {
    if (!std::isfinite(c->value)) errors.push_back(path + ".value: must be finite");
  } else if (const auto* s = std::get_if<SeriesAttack>(&attack)) {
    for (std::size_t i = 0; i < s->values.size(); ++i) {
      if (!std::isfinite(s->values[i])) errors.push_back(path + ".values[" + std::to_string(i) + "]: must be finite");
    }
  }
}

}  // namespace detail

/// Semantic checks; each problem is prefixed with the offending field path.
inline std::vector<std::string> validate(const ScenarioConfig& cfg) {
  std::vector<std::string> errors;
  if (cfg.horizon < 0) errors.push_back("horizon: must be >= 0");
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) errors.push_back("dt: must be > 0");
  if (!(cfg.range > 0.0)) errors.push_back("range: must be > 0");
  if (cfg.max_sources < 3) errors.push_back("max_sources: must be >= 3");

  if (cfg.channels.empty()) errors.push_back("channels: at least one channel required");
  std::set<Channel> seen_channels;
  std::size_t with_gamma = 0;
  for (std::size_t i = 0; i < cfg.channels.size(); ++i) {
    const auto& c = cfg.channels[i];
    const std::string path = "channels[" + std::to_string(i) + "]";
    if (!seen_channels.insert(c.channel).second) {
      errors.push_back(path + ": duplicate channel " + std::string(to_string(c.channel)));
    }
    if (c.gamma) {
      ++with_gamma;
      if (!(*c.gamma > 0.0) || !std::isfinite(*c.gamma)) errors.push_back(path + ".gamma: must be > 0");
    }
  }
  if (with_gamma != 0 && with_gamma != cfg.channels.size()) {
    errors.push_back("channels: gamma must be given for every channel or for none");
  }

  if (cfg.vehicles.empty()) errors.push_back("vehicles: at least one vehicle required");
  std::set<VehicleId> ids;
  for (std::size_t i = 0; i < cfg.vehicles.size(); ++i) {
    const auto& v = cfg.vehicles[i];
    const std::string path = "vehicles[" + std::to_string(i) + "]";
    if (!ids.insert(v.id).second) errors.push_back(path + ".id: duplicate vehicle id " + std::to_string(to_int(v.id)));
    if (!(v.noise.lateral >= 0.0)) errors.push_back(path + ".noise.lateral: must be >= 0");
    if (!(v.noise.longitudinal >= 0.0)) errors.push_back(path + ".noise.longitudinal: must be >= 0");
    if (!(v.lateral_jitter >= 0.0)) errors.push_back(path + ".lateral_jitter: must be >= 0");
    for (std::size_t j = 0; j < v.lane_changes.size(); ++j) {
      const auto& lc = v.lane_changes[j];
      const std::string lp = path + ".lane_changes[" + std::to_string(j) + "]";
      if (lc.start < 0 || lc.end <= lc.start) errors.push_back(lp + ": need 0 <= start < end");
      if (lc.end > cfg.horizon) errors.push_back(lp + ".end: beyond horizon");
      if (j > 0 && lc.start < v.lane_changes[j - 1].end) errors.push_back(lp + ": overlaps previous lane change");
    }
    detail::validate_attack(v.attack, path + ".attack", errors);
  }
  if (!cfg.vehicles.empty() && ids.count(cfg.anchor) == 0) {
    errors.push_back("anchor: unknown vehicle id " + std::to_string(to_int(cfg.anchor)));
  }
  if (cfg.q_override && !check_reconstructible(cfg.vehicles.size(), *cfg.q_override)) {
    errors.push_back("q: " + std::to_string(*cfg.q_override) + " is not below N/2 for any N <= " +
                     std::to_string(cfg.vehicles.size()));
  }
  if (cfg.example1) {
    const auto& e = *cfg.example1;
    if (e.malicious_count > cfg.vehicles.size()) errors.push_back("example1.malicious_count: exceeds vehicle count");
    if (!(e.jitter >= 0.0)) errors.push_back("example1.jitter: must be >= 0");
    detail::validate_attack(e.attack, "example1.attack", errors);
  }
  return errors;
}

}  // namespace secfuse
