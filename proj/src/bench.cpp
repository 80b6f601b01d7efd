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

#include "qerr/bench.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

namespace qerr {

namespace {

// Uniform in [0, 1) from the raw engine output, identical on every platform.
double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

CMatrix rz(double theta) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = std::polar(1.0, -theta / 2.0);
  m(1, 1) = std::polar(1.0, theta / 2.0);
  return m;
}

CMatrix rx(double theta) {
  const Complex c(std::cos(theta / 2.0), 0.0);
  const Complex s(0.0, -std::sin(theta / 2.0));
  CMatrix m(2, 2);
  m << c, s, s, c;
  return m;
}

class Builder {
 public:
  void gate(const GateKindPtr& k, std::vector<int> q) { stmts_.push_back(make_gate(k, std::move(q))); }
  void zz(const GateKindPtr& phase, int a, int b) {
    gate(builtin_gate("cnot"), {a, b});
    gate(phase, {b});
    gate(builtin_gate("cnot"), {a, b});
  }
  void layer(const GateKindPtr& k, int n) {
    for (int q = 0; q < n; ++q) gate(k, {q});
  }
  Program build(int n) const { return Program(n, make_block(stmts_)); }

 private:
  std::vector<NodePtr> stmts_;
};

std::vector<std::pair<int, int>> random_graph(int n, std::mt19937_64& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (uniform(rng) < 0.3) edges.emplace_back(a, b);
    }
  }
  if (edges.empty()) edges.emplace_back(0, n - 1);
  return edges;
}

}  // namespace

BenchKind parse_bench_kind(const std::string& name) {
  if (name == "qaoa-line") return BenchKind::QaoaLine;
  if (name == "qaoa-random") return BenchKind::QaoaRandom;
  if (name == "ising-chain") return BenchKind::IsingChain;
  throw InputError("unknown benchmark kind '" + name + "' (qaoa-line, qaoa-random, ising-chain)");
}

Program gen_bench(const BenchOptions& o) {
  if (o.nqubits < 2) throw InputError("benchmarks need at least 2 qubits");
  if (o.layers < 1) throw InputError("benchmarks need at least 1 layer");
  std::mt19937_64 rng(o.seed);
  Builder b;
  const int n = o.nqubits;
  if (o.prep) b.layer(builtin_gate("h"), n);

  if (o.kind == BenchKind::IsingChain) {
    const double dt = 0.1;
    const double coupling = 0.5 + uniform(rng);
    const double field = 0.5 + uniform(rng);
    const double transverse = 0.5 + uniform(rng);
    const auto zz = make_gate_kind("rz_j", rz(2.0 * coupling * dt));
    const auto hz = make_gate_kind("rz_h", rz(2.0 * field * dt));
    const auto gx = make_gate_kind("rx_g", rx(2.0 * transverse * dt));
    for (int step = 0; step < o.layers; ++step) {
      for (int q = 0; q + 1 < n; ++q) b.zz(zz, q, q + 1);
      b.layer(hz, n);
      b.layer(gx, n);
    }
    return b.build(n);
  }

  std::vector<std::pair<int, int>> edges;
  if (o.kind == BenchKind::QaoaLine) {
    for (int q = 0; q + 1 < n; ++q) edges.emplace_back(q, q + 1);
  } else {
    edges = random_graph(n, rng);
  }
  for (int layer = 0; layer < o.layers; ++layer) {
    const double gamma = M_PI * uniform(rng);
    const double beta = M_PI * uniform(rng);
    const auto cost = make_gate_kind("rz_c" + std::to_string(layer), rz(2.0 * gamma));
    for (const auto& [a, c] : edges) b.zz(cost, a, c);
    if (o.mixer) b.layer(make_gate_kind("rx_m" + std::to_string(layer), rx(2.0 * beta)), n);
  }
  return b.build(n);
}

std::string gen_bench_text(const BenchOptions& o) {
  const Program p = gen_bench(o);
  static const char* names[] = {"qaoa-line", "qaoa-random", "ising-chain"};
  std::ostringstream os;
  os << "# " << names[static_cast<int>(o.kind)] << " n=" << o.nqubits << " seed=" << o.seed
     << " layers=" << o.layers << (o.prep ? "" : " no-prep")
     << (o.mixer || o.kind == BenchKind::IsingChain ? "" : " no-mixer") << "\n";
  os << "# gates: " << gate_count(p) << "\n";
  os << print_program(p);
  return os.str();
}

}  // namespace qerr
