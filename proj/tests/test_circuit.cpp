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

#include "qerr/circuit.hpp"
#include "qerr/densesim.hpp"
#include "support.hpp"

using namespace qerr;

TEST_SUITE("circuit") {
  TEST_CASE("parses gates, declarations and measurements") {
    const Program p = parse_program(
        "qubits 3\n"
        "gate rz [1, 0; 0, 0.6+0.8i]\n"
        "h q0   # comment\n"
        "cx q0 q1; rz q2\n"
        "if q1 { x q2 } else { z q2; h q0 }\n");
    CHECK(p.nqubits() == 3);
    CHECK(gate_count(p) == 6);
    CHECK(if_count(p) == 1);
  }

  TEST_CASE("print and parse round trip") {
    testing::Rng rng(7);
    for (int i = 0; i < 20; ++i) {
      const Program p = testing::random_program({4, 12, 2}, rng);
      const Program q = parse_program(print_program(p));
      CHECK(structurally_equal(p.body(), q.body()));
      CHECK(print_program(q) == print_program(p));
    }
  }

  TEST_CASE("syntax errors carry positions") {
    try {
      parse_program("h q0\ncnot q0\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_program("foo q0\n"), InputError);
    CHECK_THROWS_AS(parse_program("qubits 2\nh q5\n"), InputError);
    CHECK_THROWS_AS(parse_program("gate g [1, 0; 0, 2]\ng q0\n"), InputError);
    CHECK_THROWS_AS(parse_program("cnot q1 q1\n"), InputError);
  }

  TEST_CASE("qubit count is inferred without a header") {
    CHECK(parse_program("h q4\n").nqubits() == 5);
  }

  TEST_CASE("complex literals") {
    Complex c;
    CHECK(parse_complex_literal("1.5-2i", c));
    CHECK(c == Complex(1.5, -2.0));
    CHECK(parse_complex_literal("-i", c));
    CHECK(c == Complex(0.0, -1.0));
    CHECK(parse_complex_literal("2e-3i", c));
    CHECK(c == Complex(0.0, 2e-3));
    CHECK_FALSE(parse_complex_literal("1+", c));
    CHECK_FALSE(parse_complex_literal("abc", c));
    CHECK(parse_complex_literal(format_complex_literal(Complex(0.1, -1.0 / 3.0)), c));
    CHECK(c == Complex(0.1, -1.0 / 3.0));
  }

  TEST_CASE("branches duplicate the continuation") {
    const Program p = parse_program("qubits 2\nh q0\nif q0 { x q1 } else { skip }\nh q1\n");
    const auto br = enumerate_branches(p);
    REQUIRE(br.size() == 2);
    CHECK(br[0].label_string() == "q0=0");
    CHECK(gate_count(br[0].straight_line(2)) == 3);
    CHECK(gate_count(br[1].straight_line(2)) == 2);
    CHECK_THROWS_AS(enumerate_branches(p, 1), BranchCapError);
  }

  TEST_CASE("normal form has the same semantics") {
    testing::Rng rng(11);
    for (int i = 0; i < 15; ++i) {
      const Program p = testing::random_program({3, 10, 2}, rng);
      const Program nf = branch_normal_form(p);
      const CMatrix rho = basis_density(testing::random_basis(3, rng));
      CHECK((exec_ideal(p, rho) - exec_ideal(nf, rho)).norm() < 1e-10);
    }
  }

  TEST_CASE("basis states") {
    CHECK(BasisState::parse("0110").to_string() == "0110");
    CHECK(BasisState::zeros(3).nqubits() == 3);
    CHECK_THROWS_AS(BasisState::parse("01a"), InputError);
  }
}
