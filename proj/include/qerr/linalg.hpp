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

#ifndef QERR_LINALG_HPP_
#define QERR_LINALG_HPP_

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qerr {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Raised when the input (file, flag, matrix literal) is malformed.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a numerical routine fails to produce a trustworthy result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

CMatrix kron(const CMatrix& a, const CMatrix& b);

double max_abs(const CMatrix& m);

bool is_unitary(const CMatrix& u, double tol = 1e-10);
bool is_hermitian(const CMatrix& h, double tol = 1e-10);

CMatrix hermitian_part(const CMatrix& m);

/// Eigenvalues of the Hermitian part of `h`, ascending.
RVector hermitian_eigenvalues(const CMatrix& h);
double min_eigenvalue(const CMatrix& h);
double max_eigenvalue(const CMatrix& h);

/// Schatten-1 norm. Hermitian input uses the eigenvalue route.
double trace_norm(const CMatrix& m);

/// Principal square root of the PSD part of a Hermitian matrix.
CMatrix psd_sqrt(const CMatrix& h);

/// Sum of the positive eigenvalues of a Hermitian matrix.
double positive_part_trace(const CMatrix& h);

/// log2 of a power of two; throws InputError otherwise.
int exact_log2(Eigen::Index d);

/// Pauli matrices, index 0..3 = I, X, Y, Z.
const CMatrix& pauli(int index);

/// Hex FNV-1a digest over the IEEE bit patterns of a matrix.
std::string digest(const CMatrix& m);

}  // namespace qerr

#endif  // QERR_LINALG_HPP_
