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

#ifndef QERR_DENSESIM_HPP_
#define QERR_DENSESIM_HPP_

#include <vector>

#include "qerr/circuit.hpp"
#include "qerr/linalg.hpp"
#include "qerr/noise.hpp"

namespace qerr {

/// Largest qubit count the dense reference accepts.
inline constexpr int kDenseCap = 8;

/// Throws InputError unless `rho` is 2^n x 2^n with n <= kDenseCap.
int density_qubits(const CMatrix& rho);
/// Hermitian, unit trace and PSD within 1e-9.
bool is_density_matrix(const CMatrix& rho, double tol = 1e-9);

CMatrix basis_density(const BasisState& s);
CMatrix pure_density(const CVector& psi);

/// `k` acts on `qubits` (first listed is most significant). Left product only.
void apply_local_left(CMatrix& m, const CMatrix& k, const std::vector<int>& qubits, int n);
/// sum_k K rho K^dag with each K local to `qubits`.
CMatrix apply_local_channel(const CMatrix& rho, const std::vector<CMatrix>& kraus,
                            const std::vector<int>& qubits, int n);
/// Statevector version of a local unitary.
CVector apply_local_vector(const CVector& psi, const CMatrix& u, const std::vector<int>& qubits,
                           int n);

CMatrix exec_ideal(const Program& p, const CMatrix& rho);
CMatrix exec_noisy(const Program& p, const CMatrix& rho, const NoiseModel& model);

/// Schatten-1 norm of a - b.
double trace_distance(const CMatrix& a, const CMatrix& b);
/// Half the trace norm between the noisy and the ideal output.
double exact_error(const Program& p, const CMatrix& rho, const NoiseModel& model);

/// Reduced state on `keep`, ordered as listed.
CMatrix partial_trace(const CMatrix& rho, const std::vector<int>& keep);

}  // namespace qerr

#endif  // QERR_DENSESIM_HPP_
