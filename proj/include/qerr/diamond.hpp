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

#ifndef QERR_DIAMOND_HPP_
#define QERR_DIAMOND_HPP_

#include <string>

#include "qerr/circuit.hpp"
#include "qerr/linalg.hpp"
#include "qerr/noise.hpp"
#include "qerr/sdp.hpp"

namespace qerr {

/// Inputs allowed into a gate: states whose marginal on the gate qubits is
/// within trace norm `delta` of `local_rho`.
struct Predicate {
  CMatrix local_rho;
  double delta = 0.0;
};

/// Dual certificate for
///   max tr(J W)  s.t.  0 <= W <= rho kron I,  tr rho = 1,  rho >= 0,
///                      tr(G rho) >= 0,  G = (conj(local_rho) - b I) / kappa
/// written in coordinates rho = V r V^dag. With M = V^dag V,
/// Jv = (V kron I)^dag J (V kron I) and Gv = V^dag G V, any Hermitian
/// Z >= Jv, Z >= 0, t >= 0 and y0 with y0 M >= tr_out Z + t Gv bound the
/// optimum by y0. `v` empty means V = I.
struct DiamondCertificate {
  CMatrix v;
  double kappa = 1.0;
  CMatrix z;
  double t = 0.0;
  double y0 = 0.0;
};

struct SdpSolution {
  double primal = 0.0;  // value of a feasible point (lower bound)
  double dual = 0.0;    // certified upper bound, the reported epsilon
  double gap = 0.0;
  CMatrix w;            // primal witness
  CMatrix rho;          // primal witness, the SDP's input variable
  DiamondCertificate certificate;
  bool constrained = false;  // Frobenius constraint was passed to the solver
  double frobenius_b = 0.0;
  int iterations = 0;
  std::string status;
};

/// J = sum_ij |i><j| kron Phi(|i><j|).
CMatrix choi(const HermitianMap& phi);

/// ||rho'||_F (||rho'||_F - delta).
double frobenius_bound(const CMatrix& local_rho, double delta);
/// The right-hand side actually used: the bound above, lowered when needed
/// so that the constraint keeps a strictly feasible point.
double effective_frobenius_bound(const Predicate& pred);
/// False when no density matrix can violate the Frobenius constraint.
bool frobenius_constraint_needed(const Predicate& pred);

/// Value bounded by the certificate, after the shifts that repair small
/// violations of its inequalities. `pred` null means unconstrained.
double certificate_bound(const CMatrix& j, const DiamondCertificate& cert, const Predicate* pred);
/// Most negative residual among the certificate's inequalities (0 if none).
double certificate_violation(const CMatrix& j, const DiamondCertificate& cert,
                             const Predicate* pred);

/// Exact optimum over W for a fixed input variable rho.
double primal_value(const CMatrix& j, const CMatrix& rho);

/// The (rho', delta)-constrained norm. Throws NumericalError when the
/// solver cannot close the certified gap to 1e-7 (relative to ||J||).
SdpSolution constrained_diamond_norm(const HermitianMap& phi, const Predicate& pred);
SdpSolution unconstrained_diamond_solution(const HermitianMap& phi);
double unconstrained_diamond_norm(const HermitianMap& phi);

/// Noisy-versus-ideal map of one gate statement.
HermitianMap gate_error_map(const GateStmt& g, const NoiseModel& model);

/// Sum of per-gate unconstrained norms, maximized over measurement paths.
double worst_case_bound(const Program& p, const NoiseModel& model,
                        std::size_t cap = kDefaultBranchCap);

/// Certified gap tolerance relative to max(1, ||J||).
inline constexpr double kDiamondGapTolerance = 1e-7;

}  // namespace qerr

#endif  // QERR_DIAMOND_HPP_
