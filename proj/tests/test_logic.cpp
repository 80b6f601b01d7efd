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

#include <cmath>

#include "qerr/densesim.hpp"
#include "qerr/logic.hpp"
#include "support.hpp"

using namespace qerr;

namespace {

NoiseModel flips(double p) {
  NoiseModel m;
  m.set_default(1, bit_flip(p));
  m.set_default(2, bit_flip(p));
  return m;
}

Derivation* find_rule(Derivation& d, RuleKind k) {
  if (d.rule == k) return &d;
  for (auto& c : d.children) {
    if (Derivation* hit = find_rule(c, k)) return hit;
  }
  return nullptr;
}

}  // namespace

TEST_SUITE("logic") {
  TEST_CASE("noiseless GHZ has zero error") {
    const Program ghz = parse_program("qubits 2\nh q0\ncnot q0 q1\n");
    const Analysis a = analyze(ghz, BasisState::zeros(2), NoiseModel{}, 2);
    CHECK(a.epsilon == 0.0);
    CHECK(a.delta == 0.0);
    CHECK(check(a.derivation, ghz, NoiseModel{}).ok);
  }

  TEST_CASE("a single gate costs its constrained norm") {
    const Program p = parse_program("qubits 1\nh q0\n");
    const NoiseModel m = flips(0.02);
    const Analysis a = analyze(p, BasisState::zeros(1), m, 1);
    const GateStmt h{builtin_gate("h"), {0}};
    const Predicate pred{basis_density(BasisState::zeros(1)), 0.0};
    const double direct = constrained_diamond_norm(gate_error_map(h, m), pred).dual;
    CHECK(a.epsilon == doctest::Approx(direct).epsilon(1e-9));
    CHECK(a.epsilon < 1e-7);  // X fixes |+>
  }

  TEST_CASE("sequence arithmetic and the case study") {
    const Program p = parse_program(testing::read_text(testing::data_path("bell_idle.qc")));
    const NoiseModel raw = parse_noise_model(testing::read_text(testing::data_path("decoherence.nm")));
    const Analysis a = analyze(p, BasisState::zeros(2), raw, 2);
    CHECK(std::abs(a.epsilon - 0.5636) < 5e-4);
    REQUIRE(a.derivation.root.rule == RuleKind::Seq);
    const auto& kids = a.derivation.root.children;
    CHECK(a.epsilon == doctest::Approx(kids[0].epsilon + kids[1].epsilon).epsilon(1e-14));
  }

  TEST_CASE("check accepts engine output and survives serialization") {
    testing::Rng rng(51);
    for (int i = 0; i < 6; ++i) {
      const int n = testing::uniform_int(rng, 2, 5);
      const Program p = testing::random_program({n, 12, 2}, rng);
      const NoiseModel m = testing::random_noise(rng, 0.05);
      const Analysis a = analyze(p, testing::random_basis(n, rng), m, 1 + (i % 2));
      CHECK(check(a.derivation, p, m).ok);
      const DerivationFile back = read_derivation(write_derivation(a.derivation));
      const CheckResult r = check(back, p, m);
      CHECK_MESSAGE(r.ok, r.path << ": " << r.reason);
      CHECK(back.root.epsilon == a.epsilon);
    }
  }

  TEST_CASE("tampering is detected") {
    const Program p = parse_program("qubits 3\nh q0\ncnot q0 q1\nif q1 { x q2 } else { h q2 }\ncnot q1 q2\n");
    const NoiseModel m = flips(0.01);
    const Analysis a = analyze(p, BasisState::zeros(3), m, 2);
    REQUIRE(check(a.derivation, p, m).ok);

    DerivationFile seq = a.derivation;
    find_rule(seq.root, RuleKind::Seq)->epsilon -= 1e-3;
    const CheckResult r = check(seq, p, m);
    CHECK_FALSE(r.ok);
    CHECK(r.path == "root");

    DerivationFile weak = a.derivation;
    Derivation* w = find_rule(weak.root, RuleKind::Weaken);
    REQUIRE(w != nullptr);
    w->epsilon = w->children[0].epsilon * 0.5 - 1e-6;
    CHECK_FALSE(check(weak, p, m).ok);

    CHECK_FALSE(check(a.derivation, p, flips(0.02)).ok);
    CHECK_FALSE(check(a.derivation, parse_program("qubits 3\nh q0\n"), m).ok);

    testing::Rng rng(52);
    for (testing::Tamper t : testing::kTampers) {
      for (int k = 0; k < 10; ++k) {
        DerivationFile d = a.derivation;
        const std::string what = testing::tamper(d, t, rng);
        CHECK_MESSAGE(!check(d, p, m).ok, what);
      }
    }
  }

  TEST_CASE("measurement rule arithmetic") {
    const Program p = parse_program("qubits 2\nh q0\nif q0 { x q1 } else { skip }\n");
    const NoiseModel m = flips(0.01);
    const Analysis a = analyze(p, BasisState::zeros(2), m, 2);
    Derivation root = a.derivation.root;
    Derivation* meas = find_rule(root, RuleKind::Meas);
    REQUIRE(meas != nullptr);
    CHECK(meas->children.size() == 2);
    CHECK(meas->meas->uniform_epsilon == doctest::Approx(0.01).epsilon(1e-6));
    CHECK(meas->epsilon == meas->meas->uniform_epsilon);  // delta = 0
    CHECK(a.epsilon + 1e-9 >= exact_error(p, basis_density(BasisState::zeros(2)), m));
  }

  TEST_CASE("unreachable branches are skipped with a warning") {
    const Program p = parse_program("qubits 2\nif q0 { x q1 } else { h q1 }\n");
    const NoiseModel m = flips(0.01);
    const Analysis a = analyze(p, BasisState::zeros(2), m, 2);
    CHECK(a.warnings.size() == 1);
    CHECK(a.per_gate.size() == 1);
    CHECK(check(a.derivation, p, m).ok);
  }

  TEST_CASE("full width is never looser than truncation") {
    testing::Rng rng(53);
    for (int i = 0; i < 4; ++i) {
      const int n = testing::uniform_int(rng, 3, 6);
      const Program p = testing::random_program({n, 15, 0}, rng);
      const NoiseModel m = testing::random_noise(rng, 0.05);
      const BasisState s = testing::random_basis(n, rng);
      const double full = analyze(p, s, m, 1 << (n / 2)).epsilon;
      for (int w : {1, 2}) CHECK(full <= analyze(p, s, m, w).epsilon + 1e-9);
      CHECK(full <= worst_case_bound(p, m) + 1e-9);
    }
  }

  TEST_CASE("model comparison") {
    const Program ghz3 = parse_program("qubits 3\nh q0\ncnot q0 q1\ncnot q1 q2\n");
    std::vector<NamedModel> models{{"p1e-3", flips(1e-3)}, {"p1e-4", flips(1e-4)}, {"p5e-4", flips(5e-4)}};
    const auto ranked = compare_noise_models(ghz3, BasisState::zeros(3), models, 2);
    REQUIRE(ranked.size() == 3);
    CHECK(ranked[0].name == "p1e-4");
    CHECK(ranked[1].name == "p5e-4");
    CHECK(ranked[2].name == "p1e-3");

    std::vector<NamedModel> same{{"a", flips(1e-3)}, {"b", flips(1e-3)}};
    const auto tie = compare_noise_models(ghz3, BasisState::zeros(3), same, 2);
    CHECK(tie[0].epsilon == tie[1].epsilon);
    CHECK(tie[0].name == "a");
  }

  TEST_CASE("shared caches give identical answers") {
    testing::Rng rng(54);
    const Program p = testing::random_program({4, 15, 1}, rng);
    const NoiseModel m = testing::random_noise(rng, 0.05);
    AnalyzeOptions opts;
    opts.cache = std::make_shared<SolveCache>();
    const double first = analyze(p, BasisState::zeros(4), m, 2, opts).epsilon;
    const Analysis again = analyze(p, BasisState::zeros(4), m, 2, opts);
    CHECK(again.epsilon == first);
    CHECK(again.sdp_solves == 0);
    opts.threads = 4;
    CHECK(analyze(p, BasisState::zeros(4), m, 2, opts).epsilon == first);
  }

  TEST_CASE("malformed derivation text") {
    CHECK_THROWS_AS(read_derivation("{}"), InputError);
    CHECK_THROWS_AS(read_derivation("not json"), InputError);
  }
}
