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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "secfuse/error.hpp"

namespace secfuse {

enum class VehicleId : std::uint32_t {};

constexpr std::uint32_t to_int(VehicleId id) { return static_cast<std::uint32_t>(id); }
constexpr VehicleId vehicle(std::uint32_t id) { return VehicleId{id}; }

/// Scalar state channels. Multi-dimensional states are fused one channel at a time.
enum class Channel : std::uint8_t { kLateral = 0, kLongitudinal = 1 };

inline constexpr Channel kAllChannels[] = {Channel::kLateral, Channel::kLongitudinal};

constexpr std::string_view to_string(Channel c) {
  return c == Channel::kLateral ? "lateral" : "longitudinal";
}

inline std::optional<Channel> parse_channel(std::string_view s) {
  if (s == "lateral") return Channel::kLateral;
  if (s == "longitudinal") return Channel::kLongitudinal;
  return std::nullopt;
}

struct Reading {
  VehicleId source{};
  double value = 0.0;

  friend bool operator==(const Reading&, const Reading&) = default;
};

/// The redundant copies of one vehicle's scalar state received at one step.
/// Readings are kept in ascending source order so subset positions are reproducible.
class MeasurementStack {
 public:
  MeasurementStack() = default;

  MeasurementStack(VehicleId target, std::int64_t step, Channel channel, std::vector<Reading> readings)
      : target_(target), step_(step), channel_(channel), readings_(std::move(readings)) {
    std::sort(readings_.begin(), readings_.end(),
              [](const Reading& a, const Reading& b) { return a.source < b.source; });
    for (std::size_t i = 1; i < readings_.size(); ++i) {
      if (readings_[i - 1].source == readings_[i].source) {
        throw Error(ErrorKind::kInvalidArgument,
                    "duplicate source " + std::to_string(to_int(readings_[i].source)) + " in stack");
      }
    }
  }

  /// Anonymous stack: sources are numbered 1..N in the given order.
  static MeasurementStack from_values(std::initializer_list<double> values) {
    return from_values(std::vector<double>(values));
  }

  static MeasurementStack from_values(const std::vector<double>& values) {
    std::vector<Reading> readings;
    readings.reserve(values.size());
    std::uint32_t id = 1;
    for (double v : values) readings.push_back({vehicle(id++), v});
    return MeasurementStack(vehicle(0), 0, Channel::kLateral, std::move(readings));
  }

  VehicleId target() const { return target_; }
  std::int64_t step() const { return step_; }
  Channel channel() const { return channel_; }
  std::size_t size() const { return readings_.size(); }
  const std::vector<Reading>& readings() const { return readings_; }
  double value(std::size_t position) const { return readings_.at(position).value; }

  friend bool operator==(const MeasurementStack&, const MeasurementStack&) = default;

 private:
  VehicleId target_{};
  std::int64_t step_ = 0;
  Channel channel_ = Channel::kLateral;
  std::vector<Reading> readings_;
};

/// Sorted, duplicate-free, zero-based positions into a stack's readings.
class SubsetIndex {
 public:
  SubsetIndex() = default;

  explicit SubsetIndex(std::vector<std::size_t> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
      throw Error(ErrorKind::kInvalidSubset, "duplicate subset member");
    }
  }

  SubsetIndex(std::initializer_list<std::size_t> members)
      : SubsetIndex(std::vector<std::size_t>(members)) {}

  const std::vector<std::size_t>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }

  friend bool operator==(const SubsetIndex&, const SubsetIndex&) = default;
  friend auto operator<=>(const SubsetIndex&, const SubsetIndex&) = default;

 private:
  std::vector<std::size_t> members_;
};

inline void validate_subset(const MeasurementStack& stack, const SubsetIndex& subset) {
  if (subset.empty()) throw Error(ErrorKind::kInvalidSubset, "empty subset");
  if (subset.members().back() >= stack.size()) {
    throw Error(ErrorKind::kInvalidSubset, "subset position " + std::to_string(subset.members().back()) +
                                               " outside stack of size " + std::to_string(stack.size()));
  }
}

/// Source ids of the readings at the subset's positions.
inline std::vector<VehicleId> subset_sources(const MeasurementStack& stack, const SubsetIndex& subset) {
  validate_subset(stack, subset);
  std::vector<VehicleId> ids;
  ids.reserve(subset.size());
  for (std::size_t p : subset.members()) ids.push_back(stack.readings()[p].source);
  return ids;
}

}  // namespace secfuse
