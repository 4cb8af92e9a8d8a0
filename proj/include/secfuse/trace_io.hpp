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

// CSV traces, run metadata and the one-shot stack format.

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "secfuse/config_json.hpp"
#include "secfuse/error.hpp"
#include "secfuse/isolation.hpp"
#include "secfuse/pipeline.hpp"
#include "secfuse/types.hpp"

namespace secfuse {

#ifndef SECFUSE_VERSION
#define SECFUSE_VERSION "0.0.0"
#endif

inline constexpr std::string_view kEstimatesHeader = "step,vehicle,channel,truth,estimate,error,subset,spread,N,q";
inline constexpr std::string_view kIsolationHeader =
    "step,vehicle,flagged,max_residual,evidence_target,evidence_channel";
inline constexpr int kTraceFormatVersion = 1;

/// 17 significant digits: enough to reproduce any double exactly.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string join_ids(const std::vector<VehicleId>& ids) {
  std::string out;
  for (VehicleId id : ids) {
    if (!out.empty()) out += ';';
    out += std::to_string(to_int(id));
  }
  return out;
}

inline std::string estimates_csv(const RunTrace& run) {
  std::string out(kEstimatesHeader);
  out += '\n';
  for (const StepTrace& st : run.steps) {
    for (const EstimateRow& r : st.rows) {
      out += std::to_string(st.step) + ',' + std::to_string(to_int(r.vehicle)) + ',' + std::string(to_string(r.channel)) +
             ',' + format_double(r.truth) + ',' + format_double(r.estimate) + ',' + format_double(r.error) + ',' +
             join_ids(r.subset) + ',' + format_double(r.spread) + ',' + std::to_string(r.n) + ',' +
             std::to_string(r.q) + '\n';
    }
  }
  return out;
}

/// The evidence row with the largest residual relative to its channel's threshold.
inline const Evidence* strongest_evidence(const IsolationReport& report, VehicleId v, const GammaBounds& bounds) {
  const Evidence* best = nullptr;
  double best_ratio = -1.0;
  for (const Evidence& e : report.evidence) {
    if (e.vehicle != v) continue;
    const double ratio = e.max_residual / isolation_threshold(bounds.at(e.channel));
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = &e;
    }
  }
  return best;
}

inline std::string isolation_csv(const RunTrace& run) {
  std::string out(kIsolationHeader);
  out += '\n';
  if (!run.config.isolation_enabled()) return out;
  const GammaBounds bounds = run.config.gamma_bounds();
  for (const StepTrace& st : run.steps) {
    if (!st.isolation) continue;
    for (VehicleId v : st.membership) {
      out += std::to_string(st.step) + ',' + std::to_string(to_int(v)) + ',' + (st.isolation->is_flagged(v) ? "1" : "0");
      if (const Evidence* e = strongest_evidence(*st.isolation, v, bounds)) {
        out += ',' + format_double(e->max_residual) + ',' + std::to_string(to_int(e->target)) + ',' +
               std::string(to_string(e->channel));
      } else {
        out += ",,,";
      }
      out += '\n';
    }
  }
  return out;
}

inline std::string run_meta_json(const RunTrace& run) {
  nlohmann::json meta;
  meta["config"] = scenario_to_json(run.config);
  meta["seed"] = run.seed;
  meta["steps"] = run.steps.size();
  meta["versions"] = {{"secfuse", SECFUSE_VERSION}, {"trace_format", kTraceFormatVersion}};
  return meta.dump(2) + "\n";
}

/// Writes to a sibling temporary and renames over the destination.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::kIo, "cannot open " + tmp.string() + ": " + std::strerror(errno));
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw Error(ErrorKind::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

inline void write_traces(const RunTrace& run, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create " + out_dir.string() + ": " + ec.message());
  write_file_atomic(out_dir / "trace_estimates.csv", estimates_csv(run));
  write_file_atomic(out_dir / "trace_isolation.csv", isolation_csv(run));
  write_file_atomic(out_dir / "run_meta.json", run_meta_json(run));
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::kIo, "cannot read " + path.string() + ": " + std::strerror(errno));
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// One-shot stack format, readable by parse_stack_csv and `secfuse fuse`.
inline std::string stack_csv(const MeasurementStack& stack) {
  std::string out = "source_id,value\n";
  for (const Reading& r : stack.readings()) out += std::to_string(to_int(r.source)) + ',' + format_double(r.value) + '\n';
  return out;
}

/// Parses a one-shot stack: header `source_id,value`, one reading per line.
inline MeasurementStack parse_stack_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::vector<Reading> readings;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "source_id,value") {
        throw Error(ErrorKind::kInvalidArgument, "line 1: expected header source_id,value");
      }
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorKind::kInvalidArgument, "line " + std::to_string(line_no) + ": expected two fields");
    }
    try {
      std::size_t pos = 0;
      const std::string id_text = line.substr(0, comma);
      const unsigned long id = std::stoul(id_text, &pos);
      if (pos != id_text.size() || id > UINT32_MAX) throw std::invalid_argument("id");
      const std::string value_text = line.substr(comma + 1);
      const double value = std::stod(value_text, &pos);
      if (pos != value_text.size()) throw std::invalid_argument("value");
      readings.push_back({vehicle(static_cast<std::uint32_t>(id)), value});
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::kInvalidArgument, "line " + std::to_string(line_no) + ": malformed reading");
    }
  }
  if (!header_seen) throw Error(ErrorKind::kInvalidArgument, "empty stack file");
  return MeasurementStack(vehicle(0), 0, Channel::kLateral, std::move(readings));
}

}  // namespace secfuse
