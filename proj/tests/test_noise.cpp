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
#include "qerr/noise.hpp"
#include "support.hpp"

using namespace qerr;

namespace {

bool trace_preserving(const Channel& c) {
  CMatrix s = CMatrix::Zero(c.dim(), c.dim());
  for (const auto& k : c.kraus()) s += k.adjoint() * k;
  return (s - CMatrix::Identity(c.dim(), c.dim())).norm() < 1e-10;
}

}  // namespace

TEST_SUITE("noise") {
  TEST_CASE("standard channels are trace preserving") {
    CHECK(trace_preserving(bit_flip(0.1)));
    CHECK(trace_preserving(phase_flip(0.3)));
    CHECK(trace_preserving(depolarizing(0.2)));
    CHECK(trace_preserving(decoherence(0.551, 0.325)));
    CHECK(trace_preserving(pauli_twirl(decoherence(0.551, 0.325))));
    CHECK_THROWS_AS(bit_flip(1.5), InputError);
  }

  TEST_CASE("bit flip acts as expected") {
    const CMatrix zero = basis_density(BasisState::parse("0"));
    const CMatrix out = bit_flip(0.25).apply(zero);
    CHECK(std::abs(out(1, 1) - 0.25) < 1e-14);
  }

  TEST_CASE("superoperator and Choi forms agree") {
    testing::Rng rng(3);
    for (int arity : {1, 2}) {
      const Channel c = testing::random_channel(arity, 0.4, rng);
      const CMatrix rho = testing::random_density(c.dim(), 2, rng);
      // Column stacking.
      CVector vec = Eigen::Map<const CVector>(rho.data(), rho.size());
      CVector out = c.superoperator() * vec;
      CMatrix back = Eigen::Map<CMatrix>(out.data(), c.dim(), c.dim());
      CHECK((back - c.apply(rho)).norm() < 1e-12);
      CHECK((choi_to_superoperator(c.choi()) - c.superoperator()).norm() < 1e-12);
      const Channel again(choi_to_kraus(c.choi()));
      CHECK((again.apply(rho) - c.apply(rho)).norm() < 1e-10);
    }
  }

  TEST_CASE("twirling keeps only the Pauli diagonal") {
    testing::Rng rng(5);
    const Channel n = testing::random_channel(1, 0.5, rng);
    const RMatrix r = pauli_transfer_matrix(n);
    const RMatrix t = pauli_transfer_matrix(pauli_twirl(n));
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) CHECK(std::abs(t(i, j) - (i == j ? r(i, j) : 0.0)) < 1e-12);
    }
  }

  TEST_CASE("noise model rules: first match, then defaults") {
    const NoiseModel m = parse_noise_model(
        "gate h on q0: bitflip(0.5)\n"
        "gate *: phaseflip(0.1)   # everything else\n"
        "default 2: depolarizing(0.2)\n");
    const GateStmt h0{builtin_gate("h"), {0}};
    const GateStmt h1{builtin_gate("h"), {1}};
    CHECK(m.describe(h0).find("bitflip") != std::string::npos);
    CHECK(m.describe(h1).find("phaseflip") != std::string::npos);
    const CMatrix plus = CMatrix::Constant(2, 2, 0.5);
    const CMatrix out = m.lookup(h0).apply(basis_density(BasisState::parse("0")));
    CHECK((out - plus).norm() < 1e-12);  // X leaves |+> alone
  }

  TEST_CASE("malformed noise files are rejected with a line") {
    try {
      parse_noise_model("default 1: bitflip(0.1)\ngate h: bogus(1)\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_noise_model("gate h: kraus([1, 0; 0, 2])\n"), InputError);
    CHECK_THROWS_AS(parse_noise_model("default 1: depolarizing(0.1, 0.2)\n"), InputError);
  }
}
