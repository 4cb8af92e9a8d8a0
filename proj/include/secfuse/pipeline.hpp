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

// One simulated cloud run: per step, collect membership and uploads, fuse every
// (vehicle, channel) stack, then isolate malicious uploaders when noise
// bounds are configured. The cloud side sees only the uploads; truth columns
// are carried along for test harnesses.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "secfuse/error.hpp"
#include "secfuse/fusion.hpp"
#include "secfuse/isolation.hpp"
#include "secfuse/rng.hpp"
#include "secfuse/scenario.hpp"
#include "secfuse/simulator.hpp"
#include "secfuse/types.hpp"

namespace secfuse {

struct EstimateRow {
  VehicleId vehicle{};
  Channel channel = Channel::kLateral;
  double truth = 0.0;  // test-only
  double estimate = 0.0;
  double error = 0.0;  // estimate - truth
  std::vector<VehicleId> subset;
  double spread = 0.0;
  std::size_t n = 0;
  std::size_t q = 0;

  // Privileged bookkeeping for conditional guarantees; not serialized.
  std::size_t attacked = 0;
  bool assumption3_held = false;
  double max_honest_bound = 0.0;
};

struct Diagnostic {
  VehicleId vehicle{};
  Channel channel = Channel::kLateral;
  std::string message;
};

struct StepTrace {
  std::int64_t step = 0;
  std::set<VehicleId> membership;
  /// Ordered by (vehicle, channel).
  std::vector<EstimateRow> rows;
  std::optional<IsolationReport> isolation;
  std::vector<Diagnostic> diagnostics;
  UploadBatch uploads;
  /// Uploaders with a nonzero attack on some channel this step (privileged).
  std::set<VehicleId> attackers;

  const EstimateRow* row(VehicleId v, Channel c) const {
    for (const auto& r : rows) {
      if (r.vehicle == v && r.channel == c) return &r;
    }
    return nullptr;
  }
};

struct RunTrace {
  ScenarioConfig config;
  std::uint64_t seed = 0;
  std::vector<StepTrace> steps;
};

inline std::vector<Channel> configured_channels(const ScenarioConfig& cfg) {
  std::vector<Channel> out;
  for (const auto& c : cfg.channels) out.push_back(c.channel);
  return out;
}

/// Vehicle specs in force at `step`, with the per-step malicious draw applied in static-truth mode.
inline std::vector<VehicleSpec> effective_specs(const ScenarioConfig& cfg, const StreamFactory& streams,
                                                std::int64_t step, const std::set<VehicleId>& membership) {
  std::vector<VehicleSpec> specs = cfg.vehicles;
  if (cfg.example1) {
    const auto malicious = select_malicious(streams, step, membership, cfg.example1->malicious_count);
    for (auto& s : specs) s.attack = malicious.count(s.id) ? cfg.example1->attack : AttackSpec{NoAttack{}};
  }
  return specs;
}

/// Moves the world from step k to k + 1.
inline WorldState advance_world(const WorldState& state, const ScenarioConfig& cfg, const StreamFactory& streams) {
  WorldState next = step_world(state, cfg.vehicles, cfg.dt, streams);
  if (cfg.example1) {
    Stream s = streams.stream(Purpose::kStaticTruth, to_int(cfg.anchor), 0, next.step, 0);
    next.pose(cfg.anchor).lateral = cfg.example1->truth + s.uniform(-cfg.example1->jitter, cfg.example1->jitter);
  }
  return next;
}

inline std::set<VehicleId> cloud_membership(const WorldState& world, const ScenarioConfig& cfg) {
  if (cfg.example1) {
    std::set<VehicleId> all;
    for (const auto& v : cfg.vehicles) all.insert(v.id);
    return all;
  }
  return neighborhood(world, cfg.anchor, cfg.range);
}

inline StepTrace run_step(const WorldState& world, const ScenarioConfig& cfg, const StreamFactory& streams) {
  StepTrace trace;
  trace.step = world.step;
  trace.membership = cloud_membership(world, cfg);

  const std::vector<VehicleSpec> specs = effective_specs(cfg, streams, world.step, trace.membership);
  const std::set<VehicleId> targets = cfg.example1 ? std::set<VehicleId>{cfg.anchor} : trace.membership;
  const std::vector<Channel> channels = configured_channels(cfg);
  trace.uploads = generate_uploads(world, trace.membership, specs, channels, streams, cfg.noise_mode, &targets);

  for (std::size_t r = 0; r < trace.uploads.records.size(); ++r) {
    if (trace.uploads.truths[r].attack != 0.0) trace.attackers.insert(trace.uploads.records[r].uploader);
  }

  const FusionOptions options{cfg.max_sources};
  EstimateMap estimates;
  for (const MeasurementStack& stack : trace.uploads.stacks) {
    const std::size_t n = stack.size();
    const std::size_t q = cfg.q_override.value_or(default_attack_budget(n));
    if (n < 3) {
      const std::string msg = "vehicle " + std::to_string(to_int(stack.target())) + " has only " +
                              std::to_string(n) + " sources at step " + std::to_string(world.step);
      if (cfg.on_insufficient == InsufficientPolicy::kFail) throw Error(ErrorKind::kInsufficientRedundancy, msg);
      trace.diagnostics.push_back({stack.target(), stack.channel(), msg});
      continue;
    }
    const FusionOutcome out = fuse(stack, q, options);

    EstimateRow row;
    row.vehicle = stack.target();
    row.channel = stack.channel();
    row.truth = world.pose(row.vehicle).at(row.channel);
    row.estimate = out.estimate;
    row.error = out.estimate - row.truth;
    row.subset = subset_sources(stack, out.selected);
    row.spread = out.spread;
    row.n = n;
    row.q = q;
    for (const Reading& rd : stack.readings()) {
      if (trace.attackers.count(rd.source)) {
        ++row.attacked;
      } else {
        row.max_honest_bound = std::max(row.max_honest_bound, find_spec(specs, rd.source).noise.at(row.channel));
      }
    }
    row.assumption3_held = row.attacked <= q && check_reconstructible(n, q);
    estimates[{row.vehicle, row.channel}] = row.estimate;
    trace.rows.push_back(std::move(row));
  }

  if (cfg.isolation_enabled()) {
    // Only targets with an estimate can serve as evidence.
    Neighborhoods judged;
    for (const auto& [uploader, measured] : trace.uploads.neighborhoods) {
      auto& set = judged[uploader];
      for (VehicleId t : measured) {
        const bool all_channels = std::all_of(channels.begin(), channels.end(),
                                              [&](Channel c) { return estimates.count({t, c}) != 0; });
        if (all_channels) set.insert(t);
      }
    }
    trace.isolation =
        isolate_step(world.step, estimates, trace.uploads.records, cfg.gamma_bounds(), trace.membership, judged);
  }
  return trace;
}

inline RunTrace run_scenario(const ScenarioConfig& cfg, std::uint64_t seed) {
  if (auto problems = validate(cfg); !problems.empty()) throw ConfigError(std::move(problems));
  RunTrace run{cfg, seed, {}};
  const StreamFactory streams(seed);
  WorldState world = initial_world(cfg.vehicles);
  for (std::int64_t k = 1; k <= cfg.horizon; ++k) {
    world = advance_world(world, cfg, streams);
    run.steps.push_back(run_step(world, cfg, streams));
  }
  return run;
}

}  // namespace secfuse
