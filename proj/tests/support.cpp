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

#include "support.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace qerr::testing {

double uniform(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

int uniform_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

namespace {

double gaussian(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return n(rng);
}

CMatrix gaussian_matrix(int rows, int cols, Rng& rng) {
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = Complex(gaussian(rng), gaussian(rng));
  }
  return m;
}

}  // namespace

CMatrix random_unitary(int d, Rng& rng) {
  Eigen::HouseholderQR<CMatrix> qr(gaussian_matrix(d, d, rng));
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    const Complex diag = r(j, j);
    q.col(j) *= std::abs(diag) > 0.0 ? diag / std::abs(diag) : Complex(1.0);
  }
  return q;
}

CVector random_state(int d, Rng& rng) {
  CVector v = gaussian_matrix(d, 1, rng).col(0);
  return v / v.norm();
}

CMatrix random_density(int d, int rank, Rng& rng) {
  const CMatrix g = gaussian_matrix(d, rank, rng);
  CMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

Channel random_channel(int arity, double q, Rng& rng) {
  const int d = 1 << arity;
  const int r = uniform_int(rng, 1, 3);
  // Isometry d -> r d, cut into r Kraus operators.
  Eigen::HouseholderQR<CMatrix> qr(gaussian_matrix(r * d, d, rng));
  const CMatrix iso = CMatrix(qr.householderQ()).leftCols(d);
  std::vector<CMatrix> kraus{std::sqrt(1.0 - q) * CMatrix::Identity(d, d)};
  for (int k = 0; k < r; ++k) kraus.push_back(std::sqrt(q) * iso.middleRows(k * d, d));
  return Channel(std::move(kraus));
}

NoiseModel random_noise(Rng& rng, double qmax) {
  NoiseModel m;
  m.set_default(1, random_channel(1, qmax * uniform(rng), rng));
  m.set_default(2, random_channel(2, qmax * uniform(rng), rng));
  return m;
}

BasisState random_basis(int n, Rng& rng) {
  BasisState s;
  for (int i = 0; i < n; ++i) s.bits.push_back(static_cast<int>(rng() & 1));
  return s;
}

namespace {

struct Gen {
  const ProgramShape& shape;
  Rng& rng;
  int custom = 0;
  int gates_left = 0;

  NodePtr gate() {
    --gates_left;
    const int n = shape.nqubits;
    if (n >= 2 && uniform(rng) < shape.two_qubit_share) {
      int a = uniform_int(rng, 0, n - 1);
      int b;
      if (shape.nearest_neighbor) {
        a = uniform_int(rng, 0, n - 2);
        b = a + 1;
        if (rng() & 1) std::swap(a, b);
      } else {
        do b = uniform_int(rng, 0, n - 1); while (b == a);
      }
      static const char* names[] = {"cnot", "cz", "swap"};
      const int pick = uniform_int(rng, 0, 3);
      GateKindPtr k = pick < 3 ? builtin_gate(names[pick])
                               : make_gate_kind("v" + std::to_string(custom++), random_unitary(4, rng));
      return make_gate(k, {a, b});
    }
    static const char* names[] = {"h", "x", "s", "t", "y"};
    const int pick = uniform_int(rng, 0, 6);
    GateKindPtr k = pick < 5 ? builtin_gate(names[pick])
                             : make_gate_kind("u" + std::to_string(custom++), random_unitary(2, rng));
    return make_gate(k, {uniform_int(rng, 0, n - 1)});
  }

  NodePtr block(int len) {
    std::vector<NodePtr> s;
    for (int i = 0; i < len && gates_left > 0; ++i) s.push_back(gate());
    return make_block(s);
  }
};

}  // namespace

Program random_program(const ProgramShape& shape, Rng& rng) {
  Gen g{shape, rng};
  g.gates_left = uniform_int(rng, 1, shape.max_gates);
  int ifs = uniform_int(rng, 0, shape.max_ifs);
  std::vector<NodePtr> stmts;
  while (g.gates_left > 0) {
    if (ifs > 0 && uniform(rng) < 0.15) {
      --ifs;
      const int q = uniform_int(rng, 0, shape.nqubits - 1);
      NodePtr a = g.block(uniform_int(rng, 0, 3));
      NodePtr b = g.block(uniform_int(rng, 0, 3));
      stmts.push_back(make_if(q, a, b));
    } else {
      stmts.push_back(g.gate());
    }
  }
  return Program(shape.nqubits, make_block(stmts));
}

namespace {

void collect(Derivation& d, std::vector<Derivation*>& all, bool gates_only) {
  if (!gates_only || d.rule == RuleKind::Gate) all.push_back(&d);
  for (auto& c : d.children) collect(c, all, gates_only);
}

}  // namespace

const char* tamper_name(Tamper t) {
  switch (t) {
    case Tamper::Epsilon: return "epsilon";
    case Tamper::Delta: return "delta";
    case Tamper::Rule: return "rule";
    case Tamper::Certificate: return "certificate";
  }
  return "?";
}

std::string tamper(DerivationFile& file, Tamper kind, Rng& rng) {
  std::vector<Derivation*> nodes;
  collect(file.root, nodes, kind == Tamper::Certificate);
  if (nodes.empty()) return "";
  Derivation& d = *nodes[rng() % nodes.size()];
  const std::string where = std::string(rule_name(d.rule)) + " node";
  switch (kind) {
    case Tamper::Epsilon: {
      double next = d.epsilon + ((rng() & 1) ? 1e-3 : -1e-3);
      if (next < 0.0) next = d.epsilon + 1e-3;
      d.epsilon = next;
      return "epsilon of " + where;
    }
    case Tamper::Delta:
      d.delta += (d.delta > 1e-3 && (rng() & 1)) ? -1e-3 : 1e-3;
      return "delta of " + where;
    case Tamper::Rule: {
      RuleKind k;
      do k = static_cast<RuleKind>(rng() % 5); while (k == d.rule);
      d.rule = k;
      return "rule of " + where + " -> " + rule_name(k);
    }
    case Tamper::Certificate: {
      DiamondCertificate& c = d.gate->certificate;
      switch (rng() % 6) {
        case 0: c.y0 += 1e-4; return "certificate y0";
        case 1: c.y0 -= 1e-4; return "certificate y0";
        case 2: c.t += 1e-3; return "certificate t";
        case 3: {
          const auto i = static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(c.z.rows()));
          const auto j = static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(c.z.cols()));
          c.z(i, j) += Complex(1e-4, 0.0);
          return "certificate z entry";
        }
        case 4: c.kappa *= 1.001; return "certificate kappa";
        default: {
          if (c.v.size() == 0) c.v = CMatrix::Identity(d.gate->local_rho.rows(), d.gate->local_rho.rows());
          c.v(0, 0) *= 0.999;
          return "certificate scaling";
        }
      }
    }
  }
  return "";
}

std::string data_path(const std::string& name) { return std::string(QERR_DATA_DIR) + "/" + name; }

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace qerr::testing
