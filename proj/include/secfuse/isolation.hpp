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

// Residual-based isolation of malicious uploaders. Given fused estimates that
// are within 3g of the truth, an honest uploader's values never deviate from
// the corresponding estimates by more than 4g; any larger residual marks the
// uploader malicious for that step.

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "secfuse/error.hpp"
#include "secfuse/types.hpp"

namespace secfuse {

/// Known per-channel bound on honest disturbances.
class GammaBounds {
 public:
  GammaBounds() = default;
  GammaBounds(std::initializer_list<std::pair<const Channel, double>> init) {
    for (const auto& [c, g] : init) set(c, g);
  }

  void set(Channel channel, double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "gamma for " + std::string(to_string(channel)) + " must be positive and finite");
    }
    bounds_[channel] = gamma;
  }

  bool has(Channel channel) const { return bounds_.count(channel) != 0; }

  double at(Channel channel) const {
    auto it = bounds_.find(channel);
    if (it == bounds_.end()) {
      throw Error(ErrorKind::kMissingGamma, "no gamma for channel " + std::string(to_string(channel)));
    }
    return it->second;
  }

  const std::map<Channel, double>& values() const { return bounds_; }

  GammaBounds scaled(double factor) const {
    GammaBounds out;
    for (const auto& [c, g] : bounds_) out.set(c, g * factor);
    return out;
  }

 private:
  std::map<Channel, double> bounds_;
};

/// One value uploaded by `uploader` about `target`; target == uploader is the self-report.
struct UploadRecord {
  VehicleId uploader{};
  VehicleId target{};
  Channel channel = Channel::kLateral;
  std::int64_t step = 0;
  double value = 0.0;

  friend bool operator==(const UploadRecord&, const UploadRecord&) = default;
};

using EstimateKey = std::pair<VehicleId, Channel>;
using EstimateMap = std::map<EstimateKey, double>;
/// For each uploader, the vehicles it measures (itself included).
using Neighborhoods = std::map<VehicleId, std::set<VehicleId>>;

struct Evidence {
  VehicleId vehicle{};
  Channel channel = Channel::kLateral;
  double max_residual = 0.0;
  VehicleId target{};

  friend bool operator==(const Evidence&, const Evidence&) = default;
};

struct IsolationReport {
  std::int64_t step = 0;
  std::set<VehicleId> flagged;
  /// Sorted by (vehicle, channel).
  std::vector<Evidence> evidence;

  bool is_flagged(VehicleId id) const { return flagged.count(id) != 0; }

  friend bool operator==(const IsolationReport&, const IsolationReport&) = default;
};

inline double residual(double estimate, double upload) { return std::abs(estimate - upload); }

/// Residual above which a vehicle is declared malicious.
inline double isolation_threshold(double gamma) { return 4.0 * gamma; }

/// Attack magnitude beyond which detection at the same step is certain:
/// residual >= |a| - |e| - |m| >= |a| - 4g.
inline double guaranteed_detection_threshold(double gamma) { return 8.0 * gamma; }

inline std::map<Channel, double> guaranteed_detection_threshold(const GammaBounds& bounds) {
  std::map<Channel, double> out;
  for (const auto& [c, g] : bounds.values()) out[c] = guaranteed_detection_threshold(g);
  return out;
}

inline IsolationReport isolate_step(std::int64_t step, const EstimateMap& estimates,
                                    const std::vector<UploadRecord>& uploads, const GammaBounds& bounds,
                                    const std::set<VehicleId>& membership, const Neighborhoods& neighborhoods) {
  IsolationReport report;
  report.step = step;

  std::map<EstimateKey, Evidence> worst;
  for (const UploadRecord& u : uploads) {
    if (membership.count(u.uploader) == 0) continue;
    auto nb = neighborhoods.find(u.uploader);
    if (nb == neighborhoods.end() || nb->second.count(u.target) == 0) continue;

    auto est = estimates.find({u.target, u.channel});
    if (est == estimates.end()) {
      throw Error(ErrorKind::kMissingEstimate, "no estimate for vehicle " + std::to_string(to_int(u.target)) +
                                                   " channel " + std::string(to_string(u.channel)));
    }
    const double gamma = bounds.at(u.channel);
    const double r = residual(est->second, u.value);

    auto [it, inserted] = worst.try_emplace({u.uploader, u.channel}, Evidence{u.uploader, u.channel, r, u.target});
    if (!inserted && r > it->second.max_residual) {
      it->second.max_residual = r;
      it->second.target = u.target;
    }
    if (r > isolation_threshold(gamma)) report.flagged.insert(u.uploader);
  }

  report.evidence.reserve(worst.size());
  for (auto& [key, ev] : worst) report.evidence.push_back(ev);
  return report;
}

}  // namespace secfuse
