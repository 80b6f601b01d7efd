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
#include "support.hpp"

using namespace qerr;

TEST_SUITE("densesim") {
  TEST_CASE("Bell marginal is maximally mixed") {
    const Program bell = parse_program("qubits 2\nh q0\ncnot q0 q1\n");
    const CMatrix rho = exec_ideal(bell, basis_density(BasisState::zeros(2)));
    CHECK((partial_trace(rho, {0}) - 0.5 * CMatrix::Identity(2, 2)).norm() < 1e-12);
    CHECK((partial_trace(rho, {1}) - 0.5 * CMatrix::Identity(2, 2)).norm() < 1e-12);
  }

  TEST_CASE("partial trace keeps the listed order") {
    testing::Rng rng(2);
    const CMatrix a = testing::random_density(2, 2, rng);
    const CMatrix b = testing::random_density(2, 2, rng);
    const CMatrix c = testing::random_density(2, 2, rng);
    const CMatrix rho = kron(kron(a, b), c);
    CHECK((partial_trace(rho, {2, 0}) - kron(c, a)).norm() < 1e-12);
    CHECK((partial_trace(rho, {1}) - b).norm() < 1e-12);
  }

  TEST_CASE("density evolution matches the statevector") {
    testing::Rng rng(4);
    for (int i = 0; i < 10; ++i) {
      const Program p = testing::random_program({4, 15, 0}, rng);
      const BasisState s = testing::random_basis(4, rng);
      CVector psi = CVector::Zero(16);
      int idx = 0;
      for (int bit : s.bits) idx = 2 * idx + bit;
      psi(idx) = 1.0;
      const Program nf = branch_normal_form(p);
      const Node* cur = &nf.body();
      while (true) {
        if (const auto* seq = std::get_if<SeqStmt>(&cur->value)) {
          const auto& g = std::get<GateStmt>(seq->first->value);
          psi = apply_local_vector(psi, g.kind->matrix, g.qubits, 4);
          cur = seq->second.get();
        } else {
          if (const auto* g = std::get_if<GateStmt>(&cur->value)) {
            psi = apply_local_vector(psi, g->kind->matrix, g->qubits, 4);
          }
          break;
        }
      }
      CHECK((exec_ideal(p, basis_density(s)) - pure_density(psi)).norm() < 1e-10);
    }
  }

  TEST_CASE("exact error of a single bit flip") {
    const Program p = parse_program("qubits 1\nx q0\n");
    NoiseModel m;
    m.set_default(1, bit_flip(0.03));
    CHECK(std::abs(exact_error(p, basis_density(BasisState::zeros(1)), m) - 0.03) < 1e-12);
  }

  TEST_CASE("measurement mixes the branches") {
    const Program p = parse_program("qubits 2\nh q0\nif q0 { skip } else { x q1 }\n");
    const CMatrix out = exec_ideal(p, basis_density(BasisState::zeros(2)));
    CHECK(std::abs(out(0, 0) - 0.5) < 1e-12);
    CHECK(std::abs(out(3, 3) - 0.5) < 1e-12);
    CHECK(std::abs(out(0, 3)) < 1e-12);
  }

  TEST_CASE("size limits") {
    CHECK_THROWS_AS(basis_density(BasisState::zeros(kDenseCap + 1)), InputError);
  }
}
