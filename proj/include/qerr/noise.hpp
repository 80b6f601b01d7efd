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

#ifndef QERR_NOISE_HPP_
#define QERR_NOISE_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qerr/circuit.hpp"
#include "qerr/linalg.hpp"

namespace qerr {

/// Completely positive trace-preserving map on 1 or 2 qubits. Kraus,
/// superoperator and Choi forms are computed once at construction.
///
/// Superoperator: column-stacking, vec(E rho E^dag) = (conj(E) kron E) vec(rho).
/// Choi: J = sum_ij |i><j| kron Phi(|i><j|), input factor first.
class Channel {
 public:
  /// Throws InputError if the operators are not all d x d with d in {2, 4}
  /// or if sum E^dag E deviates from I by more than `tp_tol`.
  explicit Channel(std::vector<CMatrix> kraus, double tp_tol = 1e-9);

  static Channel identity(int arity);
  static Channel from_superoperator(const CMatrix& superop);
  static Channel from_choi(const CMatrix& choi);

  int dim() const { return dim_; }
  int arity() const { return arity_; }
  const std::vector<CMatrix>& kraus() const { return kraus_; }
  const CMatrix& superoperator() const { return superop_; }
  const CMatrix& choi() const { return choi_; }

  CMatrix apply(const CMatrix& rho) const;

 private:
  int dim_ = 2;
  int arity_ = 1;
  std::vector<CMatrix> kraus_;
  CMatrix superop_;
  CMatrix choi_;
};

CMatrix kraus_to_superoperator(const std::vector<CMatrix>& kraus);
CMatrix kraus_to_choi(const std::vector<CMatrix>& kraus);
CMatrix superoperator_to_choi(const CMatrix& superop);
CMatrix choi_to_superoperator(const CMatrix& choi);
/// Minimal Kraus set from the eigendecomposition of a PSD Choi matrix.
std::vector<CMatrix> choi_to_kraus(const CMatrix& choi);

Channel channel_from_unitary(const CMatrix& u);
Channel bit_flip(double p);
Channel phase_flip(double p);
/// rho -> (1 - p) rho + p I/2.
Channel depolarizing(double p);
/// Combined amplitude and phase damping with rates gamma and lam.
Channel decoherence(double gamma, double lam);
/// Average of P N P over the single-qubit Paulis.
Channel pauli_twirl(const Channel& n);

/// R_ij = tr(P_i Phi(P_j)) / d over Pauli strings (qubit 0 most significant).
RMatrix pauli_transfer_matrix(const Channel& c);

/// `after` applied to the output of `before`.
Channel compose(const Channel& after, const Channel& before);
/// c kron I: a 1-qubit channel acting on the first qubit of a 2-qubit gate.
Channel extend_to_first_qubit(const Channel& c);

/// Difference of two channels of equal dimension.
struct HermitianMap {
  int dim = 2;
  CMatrix superoperator;
  CMatrix choi;
};

/// a - b.
HermitianMap difference(const Channel& a, const Channel& b);
HermitianMap zero_map(int dim);

/// One line of a noise-model file.
struct NoiseRule {
  std::string gate;                        // "*" matches every gate
  std::optional<std::vector<int>> qubits;  // every gate qubit must be listed
  bool replace = false;                    // channel is the whole noisy gate
  Channel channel = Channel::identity(1);
  std::string expr;                        // source text, for reports
  int line = 0;
};

/// Ordered rules, first match wins, then the per-arity default.
class NoiseModel {
 public:
  void add_rule(NoiseRule rule);
  /// `noise` is composed after the ideal gate of the given arity.
  void set_default(int arity, Channel noise, std::string expr = "");

  const std::vector<NoiseRule>& rules() const { return rules_; }
  const std::optional<Channel>& default_noise(int arity) const;

  /// Noisy channel for `g`. Throws InputError on a dimension mismatch.
  Channel lookup(const GateStmt& g) const;
  /// Description of the rule used for `g`, or "ideal".
  std::string describe(const GateStmt& g) const;

 private:
  const NoiseRule* match(const GateStmt& g) const;

  std::vector<NoiseRule> rules_;
  std::optional<Channel> default1_;
  std::optional<Channel> default2_;
  std::string default1_expr_;
  std::string default2_expr_;
};

/// Parses the `.nm` format (see docs/noise-format.md).
NoiseModel parse_noise_model(std::string_view text);
/// Parses a single channel expression such as `twirl(decoherence(0.5, 0.1))`.
Channel parse_channel_expr(std::string_view text);

}  // namespace qerr

#endif  // QERR_NOISE_HPP_
