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

#ifndef QERR_TESTS_SUPPORT_HPP_
#define QERR_TESTS_SUPPORT_HPP_

#include <cstdint>
#include <random>
#include <string>

#include "qerr/circuit.hpp"
#include "qerr/linalg.hpp"
#include "qerr/logic.hpp"
#include "qerr/noise.hpp"

namespace qerr::testing {

using Rng = std::mt19937_64;

double uniform(Rng& rng);
int uniform_int(Rng& rng, int lo, int hi);  // inclusive

/// Haar-random d x d unitary.
CMatrix random_unitary(int d, Rng& rng);
CVector random_state(int d, Rng& rng);
/// Random density matrix of the given rank.
CMatrix random_density(int d, int rank, Rng& rng);

/// (1 - q) id + q R for a random channel R; its distance from the identity
/// channel is at most q.
Channel random_channel(int arity, double q, Rng& rng);

/// Random defaults for 1- and 2-qubit gates, each within `qmax` of ideal.
NoiseModel random_noise(Rng& rng, double qmax);

BasisState random_basis(int n, Rng& rng);

struct ProgramShape {
  int nqubits = 4;
  int max_gates = 30;
  int max_ifs = 2;
  bool nearest_neighbor = false;  // 2-qubit gates on (q, q+1) only
  double two_qubit_share = 0.35;
};

Program random_program(const ProgramShape& shape, Rng& rng);

enum class Tamper { Epsilon, Delta, Rule, Certificate };
inline constexpr Tamper kTampers[] = {Tamper::Epsilon, Tamper::Delta, Tamper::Rule, Tamper::Certificate};
const char* tamper_name(Tamper t);

/// Changes one field of a random node (a random gate node for certificates).
/// Returns a description of the edit.
std::string tamper(DerivationFile& d, Tamper kind, Rng& rng);

/// Path of a data file shipped with the repository.
std::string data_path(const std::string& name);
std::string read_text(const std::string& path);

}  // namespace qerr::testing

#endif  // QERR_TESTS_SUPPORT_HPP_
