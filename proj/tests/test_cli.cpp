// Copyright 2026 The qerr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "support.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(QERR_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return qerr::testing::data_path(name); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("analyze report schema") {
    const Run r = run("analyze --circuit " + data("ghz2.qc") + " --noise " + data("none.nm") +
                      " --input 00 -w 2 --json");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    for (const char* key : {"epsilon", "delta", "worst_case", "gate_count", "per_gate", "wall_ms", "timing"}) {
      CHECK_MESSAGE(j.contains(key), key);
    }
    CHECK(j["epsilon"].get<double>() == 0.0);
    CHECK(j["gate_count"].get<int>() == 2);
    CHECK(j["per_gate"].size() == 2);
    for (const char* key : {"tn_ms", "sdp_ms", "logic_ms"}) CHECK(j["timing"].contains(key));
  }

  TEST_CASE("worst case of the line benchmark") {
    const Run r = run("worst-case --circuit " + data("qaoa_line_10.qc") + " --noise " +
                      data("bitflip1e-4.nm") + " --json");
    REQUIRE(r.code == 0);
    CHECK(std::abs(nlohmann::json::parse(r.out)["worst_case"].get<double>() - 27e-4) < 1e-9);
  }

  TEST_CASE("derivations round trip through check") {
    const std::string deriv = std::string(QERR_TMP_DIR) + "/cli_case.deriv";
    const std::string files = " --circuit " + data("bell_idle.qc") + " --noise " + data("decoherence.nm");
    const Run a = run("analyze" + files + " --json --emit-derivation " + deriv);
    REQUIRE(a.code == 0);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j["derivation_path"].get<std::string>() == deriv);
    CHECK(j["epsilon"].get<double>() <= j["worst_case"].get<double>() + 1e-9);
    CHECK(run("check --derivation " + deriv + files).code == 0);
    CHECK(run("--mode check --derivation " + deriv + files).code == 0);
    CHECK(run("check --derivation " + deriv + " --circuit " + data("bell_idle.qc") + " --noise " +
              data("decoherence_twirled.nm"))
              .code == 1);
  }

  TEST_CASE("compare ranks the twirled model first") {
    const Run r = run("compare --circuit " + data("bell_idle.qc") + " --noise " + data("decoherence.nm") +
                      " --noise " + data("decoherence_twirled.nm") + " --json");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["ranking"][0]["noise"].get<std::string>() == data("decoherence_twirled.nm"));
  }

  TEST_CASE("oracle mode") {
    const Run r = run("oracle --circuit " + data("bell_idle.qc") + " --noise " + data("decoherence.nm") + " --json");
    REQUIRE(r.code == 0);
    const double exact = nlohmann::json::parse(r.out)["exact_error"].get<double>();
    CHECK(exact > 0.0);
    CHECK(exact <= 0.5636 + 1e-3);
  }

  TEST_CASE("input errors exit with 2") {
    CHECK(run("analyze --circuit /nonexistent.qc --noise " + data("none.nm")).code == 2);
    CHECK(run("analyze --circuit " + data("ghz2.qc") + " --noise " + data("none.nm") + " --input 011").code == 2);
    CHECK(run("analyze --circuit " + data("ghz2.qc") + " --noise " + data("none.nm") + " -w 0").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("analyze").code == 2);
    const std::string bad = std::string(QERR_TMP_DIR) + "/bad.qc";
    std::ofstream(bad) << "h q0\ncnot q0\n";
    const std::string cmd = std::string(QERR_CLI) + " analyze --circuit " + bad + " --noise " + data("none.nm") +
                            " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::array<char, 512> buf{};
    std::string err;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) err.append(buf.data(), n);
    pclose(pipe);
    CHECK(err.find("bad.qc") != std::string::npos);
    CHECK(err.find("line 2") != std::string::npos);
  }

  TEST_CASE("generated benchmarks are byte identical per seed") {
    const Run a = run("gen-bench --kind qaoa-random -n 6 --seed 9");
    const Run b = run("gen-bench --kind qaoa-random -n 6 --seed 9");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(run("gen-bench --kind nope").code == 2);
  }
}
