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

#include <set>
#include <utility>

#include "qerr/bench.hpp"

using namespace qerr;

namespace {

std::set<std::pair<int, int>> two_qubit_pairs(const Program& p) {
  std::set<std::pair<int, int>> out;
  const auto branches = enumerate_branches(p);
  for (const auto& step : branches[0].steps) {
    if (step.gate.qubits.size() == 2) {
      out.emplace(std::min(step.gate.qubits[0], step.gate.qubits[1]),
                  std::max(step.gate.qubits[0], step.gate.qubits[1]));
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("bench") {
  TEST_CASE("gate counts") {
    BenchOptions line{BenchKind::QaoaLine, 10, 1, 1, false, false};
    CHECK(gate_count(gen_bench(line)) == 27);
    line.prep = line.mixer = true;
    CHECK(gate_count(gen_bench(line)) == 47);
    BenchOptions ising{BenchKind::IsingChain, 10, 1, 10, true, true};
    CHECK(gate_count(gen_bench(ising)) == 480);
  }

  TEST_CASE("line and chain only couple neighbours") {
    for (BenchKind k : {BenchKind::QaoaLine, BenchKind::IsingChain}) {
      const auto pairs = two_qubit_pairs(gen_bench({k, 10, 3, 1, true, true}));
      CHECK(pairs.size() == 9);
      for (const auto& [a, b] : pairs) CHECK(b == a + 1);
    }
  }

  TEST_CASE("random graphs depend on the seed only") {
    const BenchOptions a{BenchKind::QaoaRandom, 8, 5, 2, true, true};
    CHECK(gen_bench_text(a) == gen_bench_text(a));
    BenchOptions b = a;
    b.seed = 6;
    CHECK(gen_bench_text(a) != gen_bench_text(b));
    const Program p = parse_program(gen_bench_text(a));
    CHECK(gate_count(p) == gate_count(gen_bench(a)));
  }

  TEST_CASE("bad requests") {
    CHECK_THROWS_AS(gen_bench({BenchKind::QaoaLine, 1, 1, 1, true, true}), InputError);
    CHECK_THROWS_AS(parse_bench_kind("grover"), InputError);
  }
}
