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

// Discrete-time ground truth and upload generation.
//
// Each member of the cloud uploads, for every member (itself included), that
// member's true state plus the uploader's own bounded noise plus the
// uploader's attack signal. Relative sensing is taken as exact, so every
// corruption of a value is attributable to the vehicle that sent it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "secfuse/error.hpp"
#include "secfuse/isolation.hpp"
#include "secfuse/rng.hpp"
#include "secfuse/scenario.hpp"
#include "secfuse/types.hpp"

namespace secfuse {

struct Pose {
  VehicleId id{};
  double lateral = 0.0;
  double longitudinal = 0.0;

  double at(Channel c) const { return c == Channel::kLateral ? lateral : longitudinal; }
  friend bool operator==(const Pose&, const Pose&) = default;
};

/// True positions at step k. Never visible to the fusion or isolation stages.
struct WorldState {
  std::int64_t step = 0;
  /// Sorted by id.
  std::vector<Pose> poses;

  const Pose& pose(VehicleId id) const {
    auto it = std::lower_bound(poses.begin(), poses.end(), id,
                               [](const Pose& p, VehicleId v) { return p.id < v; });
    if (it == poses.end() || it->id != id) {
      throw Error(ErrorKind::kInvalidArgument, "no vehicle " + std::to_string(to_int(id)) + " in world");
    }
    return *it;
  }

  Pose& pose(VehicleId id) { return const_cast<Pose&>(std::as_const(*this).pose(id)); }

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

inline WorldState initial_world(std::span<const VehicleSpec> specs) {
  WorldState w;
  for (const auto& s : specs) w.poses.push_back({s.id, s.initial_lateral, s.initial_longitudinal});
  std::sort(w.poses.begin(), w.poses.end(), [](const Pose& a, const Pose& b) { return a.id < b.id; });
  return w;
}

/// One explicit Euler step from k to k + 1; speeds are evaluated at t = k * dt.
inline WorldState step_world(const WorldState& state, std::span<const VehicleSpec> specs, double dt,
                             const StreamFactory& streams) {
  if (!(dt > 0.0)) throw Error(ErrorKind::kInvalidArgument, "dt must be positive");
  WorldState next = state;
  const std::int64_t k = state.step;
  const double t = static_cast<double>(k) * dt;
  for (const auto& spec : specs) {
    Pose& p = next.pose(spec.id);
    p.longitudinal += spec.speed.at(t) * dt;

    auto lc = std::find_if(spec.lane_changes.begin(), spec.lane_changes.end(),
                           [k](const LaneChange& c) { return c.start <= k && k < c.end; });
    if (lc != spec.lane_changes.end()) {
      if (k + 1 == lc->end) {
        p.lateral = lc->target;
      } else {
        p.lateral += (lc->target - p.lateral) / static_cast<double>(lc->end - k);
      }
    } else if (spec.lateral_jitter > 0.0) {
      Stream s = streams.stream(Purpose::kLateralJitter, to_int(spec.id), 0, k, 0);
      p.lateral += s.uniform(-spec.lateral_jitter, spec.lateral_jitter) * dt;
    }
  }
  next.step = k + 1;
  return next;
}

/// Vehicles within planar Euclidean distance `range` of the anchor, anchor included.
inline std::set<VehicleId> neighborhood(const WorldState& state, VehicleId anchor, double range) {
  auto it = std::find_if(state.poses.begin(), state.poses.end(), [anchor](const Pose& p) { return p.id == anchor; });
  if (it == state.poses.end()) {
    throw Error(ErrorKind::kUnknownAnchor, "anchor vehicle " + std::to_string(to_int(anchor)) + " not in world");
  }
  std::set<VehicleId> members;
  for (const Pose& p : state.poses) {
    if (std::hypot(p.lateral - it->lateral, p.longitudinal - it->longitudinal) <= range) members.insert(p.id);
  }
  return members;
}

/// Uniformly random `count`-subset of the membership, drawn independently per step.
inline std::set<VehicleId> select_malicious(const StreamFactory& streams, std::int64_t step,
                                            const std::set<VehicleId>& membership, std::size_t count) {
  if (count > membership.size()) {
    throw Error(ErrorKind::kCountExceedsMembership, "cannot select " + std::to_string(count) + " of " +
                                                        std::to_string(membership.size()) + " vehicles");
  }
  std::vector<VehicleId> pool(membership.begin(), membership.end());
  Stream s = streams.stream(Purpose::kMaliciousSelection, 0, 0, step, 0);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(s.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  return {pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count)};
}

/// The attack an uploader adds to all of its records on `channel` at `step`.
inline double draw_attack(const AttackSpec& attack, const StreamFactory& streams, VehicleId uploader,
                          std::int64_t step, Channel channel) {
  return std::visit(
      [&](const auto& a) -> double {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, NoAttack>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, GaussianAttack>) {
          Stream s = streams.stream(Purpose::kAttack, to_int(uploader), 0, step, static_cast<std::uint64_t>(channel));
          return s.gaussian(0.0, a.sigma);
        } else if constexpr (std::is_same_v<T, ConstantAttack>) {
          return a.value;
        } else {
          if (step < 1 || static_cast<std::size_t>(step) > a.values.size()) return 0.0;
          return a.values[static_cast<std::size_t>(step - 1)];
        }
      },
      attack);
}

/// Privileged decomposition of one upload; test harnesses only.
struct UploadTruth {
  double truth = 0.0;
  double noise = 0.0;
  double attack = 0.0;
};

struct UploadBatch {
  /// Parallel vectors, ordered by (target, channel, uploader).
  std::vector<UploadRecord> records;
  std::vector<UploadTruth> truths;
  /// One stack per (target, channel), ordered by (target, channel).
  std::vector<MeasurementStack> stacks;
  /// Who measures whom: every member measures every member here.
  Neighborhoods neighborhoods;
};

inline const VehicleSpec& find_spec(std::span<const VehicleSpec> specs, VehicleId id) {
  for (const auto& s : specs) {
    if (s.id == id) return s;
  }
  throw Error(ErrorKind::kInvalidArgument, "no spec for vehicle " + std::to_string(to_int(id)));
}

/// Uploads of every member about every target in `targets` (defaults to the membership).
inline UploadBatch generate_uploads(const WorldState& state, const std::set<VehicleId>& membership,
                                    std::span<const VehicleSpec> specs, std::span<const Channel> channels,
                                    const StreamFactory& streams, NoiseMode noise_mode = NoiseMode::kIndependent,
                                    const std::set<VehicleId>* targets = nullptr) {
  if (membership.empty()) throw Error(ErrorKind::kInvalidArgument, "empty membership");
  const std::set<VehicleId>& target_set = targets ? *targets : membership;
  const std::int64_t k = state.step;

  std::map<std::pair<VehicleId, Channel>, double> attack;
  for (VehicleId j : membership) {
    for (Channel c : channels) attack[{j, c}] = draw_attack(find_spec(specs, j).attack, streams, j, k, c);
  }

  UploadBatch batch;
  for (VehicleId j : membership) batch.neighborhoods[j] = target_set;

  for (VehicleId i : target_set) {
    const Pose& truth = state.pose(i);
    for (Channel c : channels) {
      std::vector<Reading> readings;
      for (VehicleId j : membership) {
        const double bound = find_spec(specs, j).noise.at(c);
        const std::uint64_t noise_target = noise_mode == NoiseMode::kIndependent ? to_int(i) : 0;
        Stream s = streams.stream(Purpose::kMeasurementNoise, to_int(j), noise_target, k, static_cast<std::uint64_t>(c));
        const double m = bound > 0.0 ? s.uniform(-bound, bound) : 0.0;
        const double a = attack.at({j, c});
        const double value = truth.at(c) + m + a;
        batch.records.push_back({j, i, c, k, value});
        batch.truths.push_back({truth.at(c), m, a});
        readings.push_back({j, value});
      }
      batch.stacks.emplace_back(i, k, c, std::move(readings));
    }
  }
  return batch;
}

}  // namespace secfuse
