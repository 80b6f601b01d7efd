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

#include "qerr/densesim.hpp"

#include <algorithm>
#include <set>

namespace qerr {

namespace {

// Offsets of the 2^k local basis states for the listed qubits.
std::vector<Eigen::Index> local_offsets(const std::vector<int>& qubits, int n) {
  const int k = static_cast<int>(qubits.size());
  std::vector<Eigen::Index> off(std::size_t{1} << k, 0);
  for (std::size_t l = 0; l < off.size(); ++l) {
    Eigen::Index o = 0;
    for (int j = 0; j < k; ++j) {
      if ((l >> (k - 1 - j)) & 1U) o |= Eigen::Index{1} << (n - 1 - qubits[j]);
    }
    off[l] = o;
  }
  return off;
}

Eigen::Index target_mask(const std::vector<int>& qubits, int n) {
  Eigen::Index mask = 0;
  for (int q : qubits) mask |= Eigen::Index{1} << (n - 1 - q);
  return mask;
}

void check_qubits(const std::vector<int>& qubits, int n) {
  std::set<int> seen;
  for (int q : qubits) {
    if (q < 0 || q >= n || !seen.insert(q).second) throw InputError("invalid qubit list");
  }
}

void exec_node(const Node& node, CMatrix& rho, int n, const NoiseModel* model) {
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SeqStmt>) {
          exec_node(*s.first, rho, n, model);
          exec_node(*s.second, rho, n, model);
        } else if constexpr (std::is_same_v<T, GateStmt>) {
          if (model) {
            rho = apply_local_channel(rho, model->lookup(s).kraus(), s.qubits, n);
          } else {
            rho = apply_local_channel(rho, {s.kind->matrix}, s.qubits, n);
          }
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          CMatrix p0 = CMatrix::Zero(2, 2), p1 = CMatrix::Zero(2, 2);
          p0(0, 0) = 1.0;
          p1(1, 1) = 1.0;
          CMatrix r0 = apply_local_channel(rho, {p0}, {s.qubit}, n);
          CMatrix r1 = apply_local_channel(rho, {p1}, {s.qubit}, n);
          exec_node(*s.then0, r0, n, model);
          exec_node(*s.else1, r1, n, model);
          rho = r0 + r1;
        }
      },
      node.value);
}

}  // namespace

int density_qubits(const CMatrix& rho) {
  if (rho.rows() != rho.cols()) throw InputError("density matrix must be square");
  const int n = exact_log2(rho.rows());
  if (n > kDenseCap) {
    throw InputError("dense simulation is capped at " + std::to_string(kDenseCap) + " qubits");
  }
  return n;
}

bool is_density_matrix(const CMatrix& rho, double tol) {
  if (rho.rows() != rho.cols()) return false;
  if (!is_hermitian(rho, tol)) return false;
  if (std::abs(rho.trace() - Complex(1.0, 0.0)) > tol) return false;
  return min_eigenvalue(rho) >= -tol;
}

CMatrix basis_density(const BasisState& s) {
  const int n = s.nqubits();
  if (n > kDenseCap) {
    throw InputError("dense simulation is capped at " + std::to_string(kDenseCap) + " qubits");
  }
  Eigen::Index idx = 0;
  for (int b : s.bits) idx = (idx << 1) | b;
  CMatrix rho = CMatrix::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
  rho(idx, idx) = 1.0;
  return rho;
}

CMatrix pure_density(const CVector& psi) { return psi * psi.adjoint(); }

void apply_local_left(CMatrix& m, const CMatrix& k, const std::vector<int>& qubits, int n) {
  const auto off = local_offsets(qubits, n);
  const Eigen::Index mask = target_mask(qubits, n);
  const Eigen::Index d = static_cast<Eigen::Index>(off.size());
  const Eigen::Index dim = m.rows();
  CMatrix gathered(d, m.cols());
  for (Eigen::Index base = 0; base < dim; ++base) {
    if (base & mask) continue;
    for (Eigen::Index l = 0; l < d; ++l) gathered.row(l) = m.row(base | off[l]);
    CMatrix out = k * gathered;
    for (Eigen::Index l = 0; l < d; ++l) m.row(base | off[l]) = out.row(l);
  }
}

CMatrix apply_local_channel(const CMatrix& rho, const std::vector<CMatrix>& kraus,
                            const std::vector<int>& qubits, int n) {
  check_qubits(qubits, n);
  if (rho.rows() != (Eigen::Index{1} << n)) throw InputError("density matrix dimension mismatch");
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : kraus) {
    if (k.rows() != (Eigen::Index{1} << qubits.size())) {
      throw InputError("operator size does not match its qubit list");
    }
    CMatrix a = rho;
    apply_local_left(a, k, qubits, n);
    CMatrix b = a.adjoint();
    apply_local_left(b, k, qubits, n);
    out += b.adjoint();
  }
  return out;
}

CVector apply_local_vector(const CVector& psi, const CMatrix& u, const std::vector<int>& qubits,
                           int n) {
  check_qubits(qubits, n);
  CMatrix m = psi;
  apply_local_left(m, u, qubits, n);
  return m.col(0);
}

CMatrix exec_ideal(const Program& p, const CMatrix& rho) {
  if (density_qubits(rho) != p.nqubits()) {
    throw InputError("density matrix has " + std::to_string(density_qubits(rho)) +
                     " qubits but the program has " + std::to_string(p.nqubits()));
  }
  CMatrix out = rho;
  exec_node(p.body(), out, p.nqubits(), nullptr);
  return out;
}

CMatrix exec_noisy(const Program& p, const CMatrix& rho, const NoiseModel& model) {
  if (density_qubits(rho) != p.nqubits()) {
    throw InputError("density matrix has " + std::to_string(density_qubits(rho)) +
                     " qubits but the program has " + std::to_string(p.nqubits()));
  }
  CMatrix out = rho;
  exec_node(p.body(), out, p.nqubits(), &model);
  return out;
}

double trace_distance(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InputError("trace distance needs equal dimensions");
  }
  return trace_norm(hermitian_part(a - b));
}

double exact_error(const Program& p, const CMatrix& rho, const NoiseModel& model) {
  return 0.5 * trace_distance(exec_noisy(p, rho, model), exec_ideal(p, rho));
}

CMatrix partial_trace(const CMatrix& rho, const std::vector<int>& keep) {
  const int n = exact_log2(rho.rows());
  if (keep.empty()) throw InputError("partial trace needs at least one kept qubit");
  check_qubits(keep, n);
  std::vector<int> rest;
  for (int q = 0; q < n; ++q) {
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) rest.push_back(q);
  }
  const auto koff = local_offsets(keep, n);
  const auto roff = local_offsets(rest, n);
  const Eigen::Index dk = static_cast<Eigen::Index>(koff.size());
  CMatrix out = CMatrix::Zero(dk, dk);
  for (Eigen::Index r : roff)
    for (Eigen::Index i = 0; i < dk; ++i)
      for (Eigen::Index j = 0; j < dk; ++j) out(i, j) += rho(r | koff[i], r | koff[j]);
  return out;
}

}  // namespace qerr
