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

#ifndef QERR_MPS_HPP_
#define QERR_MPS_HPP_

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "qerr/circuit.hpp"
#include "qerr/linalg.hpp"

namespace qerr {

/// Pure state as a chain of site tensors A^(0), A^(1) over bonds of width <= w.
///
/// Logical qubit q lives on physical site perm()[q]. The chain is kept in
/// mixed canonical form around one site, so singular values of a two-site
/// block are Schmidt coefficients of the whole state.
class MpsState {
 public:
  using Site = std::array<CMatrix, 2>;

  /// Product state |s_1 ... s_n>. Throws InputError if w < 1.
  static MpsState init(const BasisState& basis, int width);

  int nqubits() const { return static_cast<int>(sites_.size()); }
  int width() const { return width_; }
  /// Accumulated trace-norm bound against the exact state.
  double delta() const { return delta_; }
  /// One entry per two-site update (swaps included).
  const std::vector<double>& truncations() const { return truncations_; }
  const std::vector<int>& perm() const { return perm_; }
  const std::vector<Site>& sites() const { return sites_; }
  int center() const { return center_; }
  int max_bond() const;

  /// Exact; acts on physical `site`.
  void apply_1q(const CMatrix& g, int site);
  /// Acts on physical sites (site, site+1), the first as the more significant
  /// qubit. Returns the truncation contribution added to delta.
  double apply_2q(const CMatrix& g, int site);
  /// Gate on logical qubits, routing with swaps when they are not adjacent.
  void apply_gate(const GateStmt& g);

  /// Probability of measuring `outcome` on logical `qubit`.
  double probability(int qubit, int outcome);
  /// Projects logical `qubit` onto `outcome` and renormalizes. For delta > 0
  /// the bound becomes min(2, 2 delta / p). Returns p.
  double collapse(int qubit, int outcome);

  /// Reduced density matrix on 1 or 2 logical qubits, in the listed order.
  CMatrix local_density(const std::vector<int>& qubits) const;

  /// Amplitudes in logical order, qubit 0 most significant.
  CVector to_statevector() const;
  double norm() const;

  /// Site shapes and entries, one block per site.
  std::string dump() const;

 private:
  void move_center(int site);
  void shift_right();
  void shift_left();

  std::vector<Site> sites_;
  std::vector<int> perm_;
  int width_ = 1;
  int center_ = 0;
  double delta_ = 0.0;
  std::vector<double> truncations_;
};

/// <a|b>. Throws InputError unless both use the same qubit count and layout.
Complex inner_product(const MpsState& a, const MpsState& b);

struct TnBranch {
  std::vector<MeasurementOutcome> label;
  MpsState state;
  double probability = 1.0;  // estimated from the approximate state
  bool zero_probability = false;
};

/// Evolves the ideal program from `basis`, one entry per measurement path.
std::vector<TnBranch> run_tn(const Program& p, const BasisState& basis, int width,
                             std::size_t cap = kDefaultBranchCap);

/// Outcomes with probability at or below this are treated as unreachable.
inline constexpr double kZeroProbability = 1e-12;

}  // namespace qerr

#endif  // QERR_MPS_HPP_
