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

#include "qerr/linalg.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>

namespace qerr {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_unitary(const CMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  CMatrix id = CMatrix::Identity(u.rows(), u.cols());
  return max_abs(u.adjoint() * u - id) <= tol;
}

bool is_hermitian(const CMatrix& h, double tol) {
  return h.rows() == h.cols() && max_abs(h - h.adjoint()) <= tol;
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

RVector hermitian_eigenvalues(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("Hermitian eigensolver did not converge");
  }
  return es.eigenvalues();
}

double min_eigenvalue(const CMatrix& h) { return hermitian_eigenvalues(h)(0); }

double max_eigenvalue(const CMatrix& h) {
  RVector ev = hermitian_eigenvalues(h);
  return ev(ev.size() - 1);
}

double trace_norm(const CMatrix& m) {
  if (is_hermitian(m, 1e-12 * (1.0 + max_abs(m)))) {
    return hermitian_eigenvalues(m).cwiseAbs().sum();
  }
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues().sum();
}

CMatrix psd_sqrt(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(h));
  if (es.info() != Eigen::Success) {
    throw NumericalError("Hermitian eigensolver did not converge");
  }
  RVector roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * roots.cast<Complex>().asDiagonal() *
         es.eigenvectors().adjoint();
}

double positive_part_trace(const CMatrix& h) {
  return hermitian_eigenvalues(h).cwiseMax(0.0).sum();
}

int exact_log2(Eigen::Index d) {
  if (d <= 0 || !std::has_single_bit(static_cast<std::uint64_t>(d))) {
    throw InputError("dimension " + std::to_string(d) + " is not a power of two");
  }
  return std::countr_zero(static_cast<std::uint64_t>(d));
}

const CMatrix& pauli(int index) {
  static const std::array<CMatrix, 4> table = [] {
    const Complex i(0.0, 1.0);
    std::array<CMatrix, 4> t;
    t[0] = CMatrix::Identity(2, 2);
    t[1] = CMatrix(2, 2);
    t[1] << 0.0, 1.0, 1.0, 0.0;
    t[2] = CMatrix(2, 2);
    t[2] << 0.0, -i, i, 0.0;
    t[3] = CMatrix(2, 2);
    t[3] << 1.0, 0.0, 0.0, -1.0;
    return t;
  }();
  return table.at(static_cast<std::size_t>(index));
}

std::string digest(const CMatrix& m) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](double v) {
    std::uint64_t bits;
    if (v == 0.0) v = 0.0;  // fold -0 into +0
    std::memcpy(&bits, &v, sizeof bits);
    for (int k = 0; k < 8; ++k) {
      h ^= (bits >> (8 * k)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(static_cast<double>(m.rows()));
  mix(static_cast<double>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      mix(m(i, j).real());
      mix(m(i, j).imag());
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qerr
