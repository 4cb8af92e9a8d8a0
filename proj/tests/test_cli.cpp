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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "secfuse/cli.hpp"

using namespace secfuse;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_command(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("secfuse_cli_" + name);
  fs::remove_all(p);
  return p;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("fuse prints estimate, subset and spread", "[cli]") {
  const auto file = scratch("stack.csv");
  write(file, "source_id,value\n1,1.0\n2,1.1\n3,100.0\n");
  const auto r = invoke({"fuse", "--stack", file.string(), "--q", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("estimate 1.05\n") != std::string::npos);
  CHECK(r.out.find("subset 1;2\n") != std::string::npos);
  CHECK(r.out.find("spread 0.05") != std::string::npos);

  const auto bad_q = invoke({"fuse", "--stack", file.string(), "--q", "2"});
  CHECK(bad_q.code == cli::kGuaranteeViolation);
  CHECK(bad_q.err.find("not-reconstructible") != std::string::npos);
}

TEST_CASE("builtin example2 isolates vehicle 5 at step 1", "[cli]") {
  const auto dir = scratch("ex2");
  const auto r = invoke({"builtin", "example2", "--seed", "7", "--out", dir.string()});
  REQUIRE(r.code == 0);
  std::ifstream iso(dir / "trace_isolation.csv");
  std::string line;
  bool found = false;
  while (std::getline(iso, line)) found = found || line.rfind("1,5,1,", 0) == 0;
  CHECK(found);
  CHECK(fs::exists(dir / "trace_estimates.csv"));
  CHECK(fs::exists(dir / "run_meta.json"));
}

TEST_CASE("validate rejects malformed files without writing anything", "[cli]") {
  const auto dir = scratch("validate");
  fs::create_directories(dir);
  write(dir / "bad.json", "{\"horizon\": 3, \"vehicles\": [");
  const auto r = invoke({"validate", "--scenario", (dir / "bad.json").string()});
  CHECK(r.code == cli::kConfigError);
  CHECK(r.err.find("syntax error") != std::string::npos);
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  CHECK(entries == 1);

  const auto ok = invoke({"validate", "--scenario", SECFUSE_SOURCE_DIR "/scenarios/example2.json"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("example2") != std::string::npos);
}

TEST_CASE("run with a bad scenario writes no traces", "[cli]") {
  const auto dir = scratch("run_bad");
  fs::create_directories(dir);
  write(dir / "dup.json", R"({"horizon": 2, "anchor": 1, "channels": [{"name": "lateral"}], "vehicles": [
    {"id": 1, "initial": {"lateral": 0, "longitudinal": 0}},
    {"id": 1, "initial": {"lateral": 0, "longitudinal": 0}}]})");
  const auto r = invoke({"run", "--scenario", (dir / "dup.json").string(), "--seed", "1", "--out", (dir / "out").string()});
  CHECK(r.code == cli::kConfigError);
  CHECK(r.err.find("duplicate vehicle id 1") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("exit codes separate usage, config, runtime and io failures", "[cli]") {
  CHECK(invoke({}).code == cli::kUsage);
  CHECK(invoke({"frobnicate"}).code == cli::kUsage);
  CHECK(invoke({"builtin", "example3", "--out", "x"}).code == cli::kUsage);
  CHECK(invoke({"validate", "--scenario", "/nonexistent/scenario.json"}).code == cli::kIoError);

  const auto dir = scratch("tiny");
  fs::create_directories(dir);
  write(dir / "tiny.json", R"({"horizon": 2, "anchor": 1, "on_insufficient": "fail",
    "channels": [{"name": "lateral"}], "vehicles": [
    {"id": 1, "initial": {"lateral": 0, "longitudinal": 0}},
    {"id": 2, "initial": {"lateral": 0, "longitudinal": 0}}]})");
  const auto r = invoke({"run", "--scenario", (dir / "tiny.json").string(), "--out", (dir / "out").string()});
  CHECK(r.code == cli::kGuaranteeViolation);
  CHECK(r.err.find("insufficient-redundancy") != std::string::npos);
}

TEST_CASE("seed falls back to SECFUSE_SEED", "[cli]") {
  const auto a = scratch("seed_flag");
  const auto b = scratch("seed_env");
  REQUIRE(invoke({"builtin", "example1", "--seed", "1234", "--out", a.string()}).code == 0);
  ::setenv("SECFUSE_SEED", "1234", 1);
  REQUIRE(invoke({"builtin", "example1", "--out", b.string()}).code == 0);
  ::setenv("SECFUSE_SEED", "not-a-number", 1);
  CHECK(invoke({"builtin", "example1", "--out", b.string()}).code == cli::kConfigError);
  ::unsetenv("SECFUSE_SEED");

  std::ifstream fa(a / "trace_estimates.csv"), fb(b / "trace_estimates.csv");
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  CHECK(sa.str() == sb.str());
}
