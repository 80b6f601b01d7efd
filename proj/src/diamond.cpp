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

#include "qerr/diamond.hpp"


#include <algorithm>
#include <cmath>
#include <map>

namespace qerr {

namespace {

// tr over the output factor of a (d*d) x (d*d) matrix ordered input kron output.
CMatrix trace_output(const CMatrix& m, int d) {
  CMatrix out = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int a = 0; a < d; ++a) out(i, j) += m(i * d + a, j * d + a);
  return out;
}

struct BasisElement {
  std::vector<SparseEntry> entries;
};

// Orthonormal basis of n x n Hermitian matrices under Re tr(A B).
std::vector<BasisElement> hermitian_basis(int n) {
  std::vector<BasisElement> basis;
  const double r = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  for (int p = 0; p < n; ++p) basis.push_back({{{p, p, 1.0}}});
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      basis.push_back({{{p, q, r}, {q, p, r}}});
      basis.push_back({{{p, q, i * r}, {q, p, -i * r}}});
    }
  return basis;
}

SdpSolution zero_solution(int d) {
  SdpSolution s;
  s.w = CMatrix::Zero(d * d, d * d);
  s.rho = CMatrix::Identity(d, d) / static_cast<double>(d);
  s.certificate.v = CMatrix::Identity(d, d);
  s.certificate.z = CMatrix::Zero(d * d, d * d);
  s.status = "zero map";
  return s;
}

CMatrix repair_density(const CMatrix& x) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(x));
  RVector ev = es.eigenvalues().cwiseMax(0.0);
  if (!(ev.sum() > 0.0)) {
    return CMatrix::Identity(x.rows(), x.cols()) / static_cast<double>(x.rows());
  }
  CMatrix rho = es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  return hermitian_part(rho / ev.sum());
}

CMatrix congruence(const CMatrix& j, const CMatrix& v) {
  const CMatrix vi = kron(v, CMatrix::Identity(v.rows(), v.rows()));
  return hermitian_part(vi.adjoint() * j * vi);
}

// Scaled constraint operator V^dag (conj(rho') - b I) V / kappa.
CMatrix scaled_constraint(const Predicate& pred, const CMatrix& v, double kappa) {
  const int d = static_cast<int>(pred.local_rho.rows());
  const CMatrix g = (pred.local_rho.conjugate() -
                     effective_frobenius_bound(pred) * CMatrix::Identity(d, d)) / kappa;
  return hermitian_part(v.adjoint() * g * v);
}

// Coordinates in which the constrained feasible set has unit size: the top
// eigenspace of conj(rho') is kept, the rest is shrunk by sqrt(eta).
struct Scaling {
  CMatrix v, m, g;
  double kappa = 1.0;
  RVector mdiag, gdiag;  // eigen-coordinates of M and G
  CMatrix basis;
  int top_count = 0;
};

Scaling make_scaling(const Predicate& pred) {
  const int d = static_cast<int>(pred.local_rho.rows());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(pred.local_rho.conjugate()));
  const RVector lam = es.eigenvalues();
  const double top = lam(d - 1);
  const double b = effective_frobenius_bound(pred);
  Scaling sc;
  sc.kappa = top - b;
  double next = -1e300;
  for (int i = 0; i < d; ++i) {
    if (lam(i) >= top - 1e-12) ++sc.top_count;
    else next = std::max(next, lam(i));
  }
  const double s2 = std::min(1.0, sc.kappa / (top - next));
  RVector vdiag(d);
  sc.mdiag.resize(d);
  sc.gdiag.resize(d);
  for (int i = 0; i < d; ++i) {
    const bool is_top = lam(i) >= top - 1e-12;
    vdiag(i) = is_top ? 1.0 : std::sqrt(s2);
    sc.mdiag(i) = vdiag(i) * vdiag(i);
    sc.gdiag(i) = sc.mdiag(i) * (lam(i) - b) / sc.kappa;
  }
  sc.basis = es.eigenvectors();
  sc.v = sc.basis * vdiag.cast<Complex>().asDiagonal() * sc.basis.adjoint();
  sc.m = hermitian_part(sc.v.adjoint() * sc.v);
  sc.g = scaled_constraint(pred, sc.v, sc.kappa);
  return sc;
}

SdpSolution solve(const CMatrix& j_full, const Predicate* pred) {
  const int n = static_cast<int>(j_full.rows());
  const int d = static_cast<int>(std::llround(std::sqrt(n)));
  if (d * d != n || (d != 2 && d != 4)) throw InputError("Choi matrix must be 4x4 or 16x16");
  if (!is_hermitian(j_full, 1e-10 * std::max(1.0, max_abs(j_full)))) {
    throw InputError("Choi matrix of a map difference must be Hermitian");
  }
  const CMatrix j = hermitian_part(j_full);
  const double jscale = hermitian_eigenvalues(j).cwiseAbs().maxCoeff();
  if (!(jscale > 1e-300)) return zero_solution(d);
  if (pred && pred->local_rho.rows() != d) throw InputError("predicate size does not match the gate");

  const bool constrained = pred && frobenius_constraint_needed(*pred);
  Scaling sc;
  if (constrained) {
    sc = make_scaling(*pred);
  } else {
    sc.v = sc.m = sc.basis = CMatrix::Identity(d, d);
    sc.mdiag = RVector::Ones(d);
    sc.top_count = d;
  }
  const CMatrix jv = congruence(j, sc.v);
  const double scale = hermitian_eigenvalues(jv).cwiseAbs().maxCoeff();
  if (!(scale > 1e-300)) return zero_solution(d);

  SdpProblem prob;
  prob.block_sizes = {n, n, d};
  if (constrained) prob.block_sizes.push_back(1);
  const std::size_t nb = prob.block_sizes.size();
  for (int sz : prob.block_sizes) prob.c.push_back(CMatrix::Zero(sz, sz));
  prob.c[0] = -jv / scale;

  const auto basis = hermitian_basis(n);
  for (const auto& e : basis) {
    SdpConstraint con;
    con.blocks.resize(nb);
    for (const auto& en : e.entries) {
      con.blocks[0].push_back({en.row, en.col, -en.value});
      con.blocks[1].push_back({en.row, en.col, -en.value});
      const int a = en.row % d, b = en.col % d;
      if (a == b) con.blocks[2].push_back({en.row / d, en.col / d, en.value});
    }
    prob.a.push_back(std::move(con));
  }
  auto dense_entries = [&](const CMatrix& mat, double sign) {
    std::vector<SparseEntry> out;
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        if (std::abs(mat(r, c)) > 0.0) out.push_back({r, c, sign * mat(r, c)});
    return out;
  };
  {
    SdpConstraint con;
    con.blocks.resize(nb);
    con.blocks[2] = dense_entries(sc.m, -1.0);
    prob.a.push_back(std::move(con));
  }
  if (constrained) {
    SdpConstraint con;
    con.blocks.resize(nb);
    con.blocks[2] = dense_entries(sc.g, 1.0);
    con.blocks[3].push_back({0, 0, -1.0});
    prob.a.push_back(std::move(con));
  }
  const Eigen::Index m = static_cast<Eigen::Index>(prob.a.size());
  const Eigen::Index trace_row = static_cast<Eigen::Index>(basis.size());
  prob.b = RVector::Zero(m);
  prob.b(trace_row) = -1.0;

  // Strictly feasible start on both sides, diagonal in the eigenbasis of M.
  const int k = sc.top_count;
  RVector r0 = RVector::Constant(d, 1.0 / d);
  double slack = 0.0;
  if (constrained) {
    const int rest = d - k;
    const double s2 = sc.mdiag.minCoeff();
    double h = 0.0;
    for (int i = 0; i < d; ++i)
      if (i < d - k) h += sc.gdiag(i) / rest;
    double c = 0.5 / s2;
    if (s2 - h > 0.0) c = std::min(c, 0.5 / (s2 - h));
    const double a = 1.0 - s2 * c;
    for (int i = 0; i < d; ++i) r0(i) = i >= d - k ? a / k : c / rest;
    slack = a + c * h;
  }
  const CMatrix rho0 = sc.basis * r0.cast<Complex>().asDiagonal() * sc.basis.adjoint();
  SdpStart start;
  const CMatrix half = 0.5 * kron(rho0, CMatrix::Identity(d, d));
  start.x = {half, half, rho0};
  const double zc = std::max(0.0, max_eigenvalue(jv / scale)) + 1.0;
  double t0 = 0.0;
  RVector adiag = RVector::Constant(d, zc * d);
  if (constrained) {
    double grest = -1e300;
    for (int i = 0; i < d - k; ++i) grest = std::max(grest, sc.gdiag(i));
    t0 = grest < -1e-3 ? std::max(1.0, 2.0 * zc * d / -grest) : 1.0;
    adiag += t0 * sc.gdiag;
  }
  double y0 = -1e300;
  for (int i = 0; i < d; ++i) y0 = std::max(y0, adiag(i) / sc.mdiag(i));
  y0 = std::max(y0, 0.0) + 1.0;
  const RVector s3 = y0 * sc.mdiag - adiag;
  start.s = {zc * CMatrix::Identity(n, n) + prob.c[0], zc * CMatrix::Identity(n, n),
             sc.basis * s3.cast<Complex>().asDiagonal() * sc.basis.adjoint()};
  start.y = RVector::Zero(m);
  for (int i = 0; i < n; ++i) start.y(i) = zc;
  start.y(trace_row) = y0;
  if (constrained) {
    start.x.push_back(CMatrix::Constant(1, 1, slack));
    start.s.push_back(CMatrix::Constant(1, 1, t0));
    start.y(m - 1) = t0;
  }
  const bool interior = !constrained || slack > 0.0;
  SdpResult res = solve_sdp(prob, {}, interior ? &start : nullptr);

  SdpSolution sol;
  sol.constrained = constrained;
  sol.frobenius_b = constrained ? effective_frobenius_bound(*pred) : 0.0;
  sol.iterations = res.iterations;
  sol.status = res.status;

  CMatrix z = CMatrix::Zero(n, n);
  for (std::size_t q = 0; q < basis.size(); ++q) {
    for (const auto& en : basis[q].entries) z(en.row, en.col) += res.y(static_cast<Eigen::Index>(q)) * en.value;
  }
  z = hermitian_part(z * scale);
  DiamondCertificate cert;
  cert.v = sc.v;
  cert.kappa = sc.kappa;
  cert.t = constrained ? std::max(0.0, res.y(m - 1) * scale) : 0.0;
  const double shift = std::max({0.0, -min_eigenvalue(hermitian_part(z - jv)), -min_eigenvalue(z)});
  cert.z = z + shift * CMatrix::Identity(n, n);
  CMatrix a = trace_output(cert.z, d);
  if (constrained) a += cert.t * sc.g;
  if (constrained) {
    cert.y0 = res.y(trace_row) * scale;
  } else {
    cert.y0 = max_eigenvalue(hermitian_part(a));
  }
  sol.certificate = cert;
  const Predicate* used = constrained ? pred : nullptr;
  sol.dual = certificate_bound(j, sol.certificate, used);

  // Primal witness: nearest feasible input variable, then the best W for it.
  CMatrix rho = repair_density(sc.v * res.x[2] * sc.v.adjoint());
  if (constrained) {
    const CMatrix cmat = pred->local_rho.conjugate();
    const double cur = (cmat * rho).trace().real();
    if (cur < sol.frobenius_b) {
      // Move toward rho's own part in the top eigenspace of C.
      const CMatrix top_vecs = sc.basis.rightCols(sc.top_count);
      const CMatrix proj = top_vecs * top_vecs.adjoint();
      CMatrix target = hermitian_part(proj * rho * proj);
      const double mass = target.trace().real();
      if (mass > 1e-12) {
        target /= mass;
      } else {
        target = top_vecs.col(sc.top_count - 1) * top_vecs.col(sc.top_count - 1).adjoint();
      }
      const double top = (cmat * target).trace().real();
      const double theta = top > cur ? std::clamp((sol.frobenius_b - cur) / (top - cur), 0.0, 1.0) : 1.0;
      rho = (1.0 - theta) * rho + theta * target;
    }
  }
  sol.rho = rho;
  CMatrix root = kron(psd_sqrt(rho), CMatrix::Identity(d, d));
  CMatrix m_eff = hermitian_part(root * j * root);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m_eff);
  RVector pos = (es.eigenvalues().array() > 0.0).cast<double>();
  CMatrix proj = es.eigenvectors() * pos.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  sol.w = hermitian_part(root * proj * root);
  sol.primal = positive_part_trace(m_eff);
  sol.gap = sol.dual - sol.primal;

  const double tol = kDiamondGapTolerance * std::max(1.0, jscale);
  if (!(sol.gap <= tol) || !std::isfinite(sol.dual)) {
    throw NumericalError("diamond-norm SDP did not converge (" + res.status +
                         ", bound " + std::to_string(sol.dual) + ", witness " +
                         std::to_string(sol.primal) + ")");
  }
  return sol;
}

}  // namespace

CMatrix choi(const HermitianMap& phi) { return phi.choi; }

double frobenius_bound(const CMatrix& local_rho, double delta) {
  const double f = local_rho.norm();
  return f * (f - delta);
}

double effective_frobenius_bound(const Predicate& pred) {
  const double b = frobenius_bound(pred.local_rho, pred.delta);
  const double top = max_eigenvalue(hermitian_part(pred.local_rho));
  return std::min(b, top - 1e-14 * std::max(1.0, std::abs(top)));
}

bool frobenius_constraint_needed(const Predicate& pred) {
  const double b = frobenius_bound(pred.local_rho, pred.delta);
  if (b <= 0.0) return false;
  // tr(C rho) >= lambda_min(C) for every density matrix.
  return min_eigenvalue(hermitian_part(pred.local_rho)) < effective_frobenius_bound(pred) - 1e-12;
}

namespace {

struct CertificateTerms {
  CMatrix m, jv, g, z, residual;
  double zero_shift = 0.0;
  bool has_g = false;
};

CertificateTerms certificate_terms(const CMatrix& j, const DiamondCertificate& cert,
                                   const Predicate* pred) {
  const int n = static_cast<int>(j.rows());
  const int d = static_cast<int>(std::llround(std::sqrt(n)));
  if (cert.z.rows() != n || cert.z.cols() != n) throw InputError("certificate has the wrong size");
  const CMatrix v = cert.v.size() == 0 ? CMatrix::Identity(d, d) : cert.v;
  if (v.rows() != d || v.cols() != d) throw InputError("certificate scaling has the wrong size");
  if (!(cert.kappa > 0.0) || !std::isfinite(cert.kappa) || !std::isfinite(cert.y0) ||
      !std::isfinite(cert.t)) {
    throw InputError("certificate has non-finite or non-positive parameters");
  }
  CertificateTerms ct;
  ct.m = hermitian_part(v.adjoint() * v);
  if (!(min_eigenvalue(ct.m) > 0.0)) throw InputError("certificate scaling is singular");
  ct.jv = congruence(j, v);
  ct.z = hermitian_part(cert.z);
  ct.zero_shift = std::max({0.0, -min_eigenvalue(hermitian_part(ct.z - ct.jv)), -min_eigenvalue(ct.z)});
  CMatrix a = trace_output(ct.z, d);
  if (pred) {
    if (pred->local_rho.rows() != d) throw InputError("predicate size does not match the gate");
    ct.g = scaled_constraint(*pred, v, cert.kappa);
    ct.has_g = true;
    a += std::max(0.0, cert.t) * ct.g;
  }
  ct.residual = hermitian_part(cert.y0 * ct.m - a);
  return ct;
}

}  // namespace

double certificate_violation(const CMatrix& j, const DiamondCertificate& cert, const Predicate* pred) {
  const CertificateTerms ct = certificate_terms(j, cert, pred);
  double worst = std::min({0.0, min_eigenvalue(hermitian_part(ct.z - ct.jv)), min_eigenvalue(ct.z),
                           min_eigenvalue(ct.residual)});
  if (pred) worst = std::min(worst, cert.t);
  return worst;
}

double certificate_bound(const CMatrix& j, const DiamondCertificate& cert, const Predicate* pred) {
  const int d = static_cast<int>(std::llround(std::sqrt(static_cast<double>(j.rows()))));
  const CertificateTerms ct = certificate_terms(j, cert, pred);
  // Shifting Z by s I adds s d I under the partial trace.
  const double eps = std::max(0.0, ct.zero_shift * d - min_eigenvalue(ct.residual));
  if (eps == 0.0) return std::max(0.0, cert.y0);
  // Raise y0 (and t) along a direction whose increment is positive definite.
  double cost = 1.0 / min_eigenvalue(ct.m);
  if (ct.has_g) {
    const double c2 = min_eigenvalue(hermitian_part(2.0 * ct.m - ct.g));
    if (c2 > 0.0) cost = std::min(cost, 2.0 / c2);
  }
  return std::max(0.0, cert.y0 + eps * cost);
}

double primal_value(const CMatrix& j, const CMatrix& rho) {
  const int d = static_cast<int>(rho.rows());
  CMatrix root = kron(psd_sqrt(rho), CMatrix::Identity(d, d));
  return positive_part_trace(hermitian_part(root * j * root));
}

SdpSolution constrained_diamond_norm(const HermitianMap& phi, const Predicate& pred) {
  if (pred.delta < 0.0 || !std::isfinite(pred.delta)) throw InputError("predicate delta must be >= 0");
  return solve(phi.choi, &pred);
}

SdpSolution unconstrained_diamond_solution(const HermitianMap& phi) { return solve(phi.choi, nullptr); }

double unconstrained_diamond_norm(const HermitianMap& phi) {
  return unconstrained_diamond_solution(phi).dual;
}

HermitianMap gate_error_map(const GateStmt& g, const NoiseModel& model) {
  return difference(channel_from_unitary(g.kind->matrix), model.lookup(g));
}

double worst_case_bound(const Program& p, const NoiseModel& model, std::size_t cap) {
  std::map<std::string, double> cache;
  double worst = 0.0;
  for (const auto& br : enumerate_branches(p, cap)) {
    double sum = 0.0;
    for (const auto& step : br.steps) {
      if (step.kind != BranchStep::Kind::Gate) continue;
      const HermitianMap phi = gate_error_map(step.gate, model);
      const std::string key = digest(phi.choi);
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, unconstrained_diamond_norm(phi)).first;
      sum += it->second;
    }
    worst = std::max(worst, sum);
  }
  return worst;
}

}  // namespace qerr
