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

// Command-line front end. Kept in a header so tests can drive it in-process.
// Requires CLI11.hpp on the include path.

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "secfuse/builtin.hpp"
#include "secfuse/config_json.hpp"
#include "secfuse/error.hpp"
#include "secfuse/fusion.hpp"
#include "secfuse/pipeline.hpp"
#include "secfuse/trace_io.hpp"

namespace secfuse::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kConfigError = 2,
  kGuaranteeViolation = 3,
  kIoError = 4,
};

inline int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kConfig:
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kInvalidSubset: return kConfigError;
    case ErrorKind::kIo: return kIoError;
    default: return kGuaranteeViolation;
  }
}

/// Shortest text that parses back to the same double.
inline std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, end) : format_double(v);
}

/// --seed wins, then SECFUSE_SEED, then the shipped default.
inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("SECFUSE_SEED")) {
    std::uint64_t v = 0;
    const std::string s(env);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
      throw Error(ErrorKind::kConfig, "SECFUSE_SEED is not an unsigned integer: " + s);
    }
    return v;
  }
  return kShippedSeed;
}

inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Attack-resilient fusion and malicious-vehicle isolation for cloud-connected vehicles", "secfuse"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string stack_path;
  std::optional<std::size_t> q;
  std::string builtin_name;

  auto* run = app.add_subcommand("run", "Simulate a scenario and write traces");
  run->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--seed", seed, "Master seed (default: $SECFUSE_SEED, else 7)");
  run->add_option("--out", out_dir, "Output directory")->required();

  auto* fuse_cmd = app.add_subcommand("fuse", "Fuse one stack read from CSV (source_id,value)");
  fuse_cmd->add_option("--stack", stack_path, "Stack CSV file")->required();
  fuse_cmd->add_option("--q", q, "Attack budget (default: ceil(N/2) - 1)");

  auto* builtin = app.add_subcommand("builtin", "Run a shipped scenario");
  builtin->add_option("name", builtin_name, "example1 or example2")->required()->check(
      CLI::IsMember({"example1", "example2"}));
  builtin->add_option("--seed", seed, "Master seed (default: $SECFUSE_SEED, else 7)");
  builtin->add_option("--out", out_dir, "Output directory")->required();

  auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a scenario");
  validate_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->required();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (*validate_cmd) {
      const ScenarioConfig cfg = parse_scenario(read_file(scenario_path));
      out << "ok: " << (cfg.name.empty() ? scenario_path : cfg.name) << ", " << cfg.vehicles.size()
          << " vehicles, horizon " << cfg.horizon << "\n";
      return kOk;
    }
    if (*fuse_cmd) {
      const MeasurementStack stack = parse_stack_csv(read_file(stack_path));
      const FusionOutcome r = fuse(stack, q.value_or(default_attack_budget(stack.size())));
      out << "estimate " << shortest(r.estimate) << "\n"
          << "subset " << join_ids(subset_sources(stack, r.selected)) << "\n"
          << "spread " << shortest(r.spread) << "\n";
      return kOk;
    }
    ScenarioConfig cfg;
    if (*run) {
      cfg = parse_scenario(read_file(scenario_path));
    } else {
      cfg = parse_scenario(*builtin_scenario_text(builtin_name));
    }
    const RunTrace trace = run_scenario(cfg, resolve_seed(seed));
    write_traces(trace, out_dir);
    out << "wrote " << trace.steps.size() << " steps to " << out_dir << "\n";
    return kOk;
  } catch (const ConfigError& e) {
    for (const auto& p : e.problems()) err << "config error: " << p << "\n";
    return kConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

inline int run_command(int argc, const char* const* argv, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_command(args, out, err);
}

}  // namespace secfuse::cli
