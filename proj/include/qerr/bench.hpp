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

#ifndef QERR_BENCH_HPP_
#define QERR_BENCH_HPP_

#include <cstdint>
#include <string>

#include "qerr/circuit.hpp"

namespace qerr {

enum class BenchKind { QaoaLine, QaoaRandom, IsingChain };

/// "qaoa-line", "qaoa-random", "ising-chain"; throws InputError otherwise.
BenchKind parse_bench_kind(const std::string& name);

struct BenchOptions {
  BenchKind kind = BenchKind::QaoaLine;
  int nqubits = 10;
  std::uint64_t seed = 1;
  int layers = 1;      // QAOA rounds or Trotter steps
  bool prep = true;    // Hadamard layer on every qubit first
  bool mixer = true;   // QAOA only: rx layer after each cost layer
};

/// Deterministic by seed. ZZ couplings are cnot; rz; cnot on the edge,
/// rotations are custom gates named after their layer.
Program gen_bench(const BenchOptions& options);
/// The program in circuit-file form, with a comment header.
std::string gen_bench_text(const BenchOptions& options);

}  // namespace qerr

#endif  // QERR_BENCH_HPP_
