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

#ifndef QERR_SDP_HPP_
#define QERR_SDP_HPP_

#include <string>
#include <vector>

#include "qerr/linalg.hpp"

namespace qerr {

/// Nonzero entry of a Hermitian constraint matrix. Both (r, c) and (c, r)
/// must be listed for off-diagonal positions.
struct SparseEntry {
  int row = 0;
  int col = 0;
  Complex value;
};

/// One linear constraint: a sparse Hermitian matrix per block (may be empty).
struct SdpConstraint {
  std::vector<std::vector<SparseEntry>> blocks;
};

/// Block-diagonal Hermitian SDP in standard form:
///   (P) min <C, X>  s.t. <A_i, X> = b_i,  X >= 0
///   (D) max b^T y   s.t. S = C - sum_i y_i A_i >= 0
/// with <A, X> = Re tr(A X).
struct SdpProblem {
  std::vector<int> block_sizes;
  std::vector<CMatrix> c;
  std::vector<SdpConstraint> a;
  RVector b;
};

struct SdpOptions {
  int max_iterations = 200;
  double tolerance = 1e-10;
};

/// Optional interior starting point; X and S must be positive definite.
struct SdpStart {
  std::vector<CMatrix> x;
  RVector y;
  std::vector<CMatrix> s;
};

struct SdpResult {
  std::vector<CMatrix> x;
  std::vector<CMatrix> s;
  RVector y;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string status;
};

/// Primal-dual interior point with Nesterov-Todd scaling and Mehrotra
/// predictor-corrector steps. Never throws on slow convergence; inspect
/// `converged`. Throws InputError on malformed problems.
SdpResult solve_sdp(const SdpProblem& problem, const SdpOptions& options = {},
                    const SdpStart* start = nullptr);

/// <A, X> for a sparse A.
double sparse_inner(const std::vector<SparseEntry>& a, const CMatrix& x);

}  // namespace qerr

#endif  // QERR_SDP_HPP_
