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
#include <sstream>
#include <string>
#include <vector>

#include "secfuse/builtin.hpp"
#include "secfuse/trace_io.hpp"

using namespace secfuse;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("secfuse_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("17 significant digits reproduce every double", "[io]") {
  for (double v : {0.1, 1.05, -3.0e-300, 123456789.123456789, 1.0 / 3.0, 0.0}) {
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("empty trace writes headers only", "[io]") {
  auto cfg = example2_config();
  cfg.horizon = 0;
  cfg.vehicles[3].lane_changes.clear();
  const auto run = run_scenario(cfg, 1);
  const auto dir = scratch_dir("empty");
  write_traces(run, dir);
  CHECK(read_file(dir / "trace_estimates.csv") == std::string(kEstimatesHeader) + "\n");
  CHECK(read_file(dir / "trace_isolation.csv") == std::string(kIsolationHeader) + "\n");
  CHECK(fs::exists(dir / "run_meta.json"));
  CHECK_FALSE(fs::exists(dir / "run_meta.json.tmp"));
}

TEST_CASE("example1 writes one estimate row per step", "[io]") {
  const auto run = run_scenario(example1_config(), kShippedSeed);
  const auto rows = lines_of(estimates_csv(run));
  REQUIRE(rows.size() == 21);
  CHECK(rows[0] == kEstimatesHeader);
  const auto first = split(rows[1], ',');
  REQUIRE(first.size() == 10);
  CHECK(first[0] == "1");
  CHECK(first[1] == "1");
  CHECK(first[2] == "lateral");
  CHECK(split(first[6], ';').size() == 3);
  CHECK(first[8] == "5");
  CHECK(first[9] == "2");
}

TEST_CASE("isolation rows cover every member every step", "[io]") {
  const auto run = run_scenario(example2_config(), kShippedSeed);
  const auto rows = lines_of(isolation_csv(run));
  std::size_t expected = 1;
  for (const auto& st : run.steps) expected += st.membership.size();
  REQUIRE(rows.size() == expected);
  CHECK(rows[0] == kIsolationHeader);
  for (std::size_t i = 1; i < rows.size(); ++i) REQUIRE(split(rows[i], ',').size() == 6);
}

TEST_CASE("run metadata echoes the config and seed", "[io]") {
  const auto run = run_scenario(example2_config(), 99);
  const auto meta = nlohmann::json::parse(run_meta_json(run));
  CHECK(meta["seed"] == 99);
  CHECK(meta["steps"] == 60);
  CHECK(parse_scenario(meta["config"].dump()) == example2_config());
  CHECK(meta["versions"]["trace_format"] == kTraceFormatVersion);
}

TEST_CASE("recorded stacks replay to the recorded estimate and subset", "[io][property]") {
  const auto run = run_scenario(example2_config(), kShippedSeed);
  const auto rows = lines_of(estimates_csv(run));
  std::size_t line = 1;
  for (const auto& st : run.steps) {
    for (const auto& stack : st.uploads.stacks) {
      const auto recorded = split(rows.at(line++), ',');
      const MeasurementStack replayed = parse_stack_csv(stack_csv(stack));
      const auto r = fuse(replayed, std::stoul(recorded[9]));
      REQUIRE(format_double(r.estimate) == recorded[4]);
      REQUIRE(join_ids(subset_sources(replayed, r.selected)) == recorded[6]);
    }
  }
  CHECK(line == rows.size());
}

TEST_CASE("stack csv parsing errors", "[io]") {
  CHECK_THROWS_AS(parse_stack_csv(""), Error);
  CHECK_THROWS_AS(parse_stack_csv("id,value\n1,2\n"), Error);
  CHECK_THROWS_AS(parse_stack_csv("source_id,value\n1;2\n"), Error);
  CHECK_THROWS_AS(parse_stack_csv("source_id,value\n1,abc\n"), Error);
  CHECK_THROWS_AS(parse_stack_csv("source_id,value\n1,2\n1,3\n"), Error);
  const auto s = parse_stack_csv("source_id,value\r\n3,1.5\r\n1,2.5\r\n");
  REQUIRE(s.size() == 2);
  CHECK(s.readings()[0].source == vehicle(1));
}

TEST_CASE("unwritable output surfaces the path", "[io]") {
  const auto run = run_scenario(example1_config(), 1);
  const auto blocker = scratch_dir("blocker");
  { std::ofstream(blocker) << "file, not a directory"; }
  try {
    write_traces(run, blocker / "sub");
    FAIL("expected io error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kIo);
    CHECK(std::string(e.what()).find("blocker") != std::string::npos);
  }
  fs::remove_all(blocker);
}
