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

#include "qerr/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qerr {

namespace {

using Blocks = std::vector<CMatrix>;

double inner(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k].conjugate().cwiseProduct(b[k])).sum().real();
  return s;
}

double frob(const Blocks& a) {
  double s = 0.0;
  for (const auto& m : a) s += m.squaredNorm();
  return std::sqrt(s);
}

// A(X): the vector of <A_i, X>.
RVector apply_a(const SdpProblem& p, const Blocks& x) {
  RVector r(static_cast<Eigen::Index>(p.a.size()));
  for (std::size_t i = 0; i < p.a.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < p.a[i].blocks.size(); ++k) s += sparse_inner(p.a[i].blocks[k], x[k]);
    r(static_cast<Eigen::Index>(i)) = s;
  }
  return r;
}

// A^T(y) = sum_i y_i A_i.
Blocks apply_at(const SdpProblem& p, const RVector& y) {
  Blocks out;
  for (int n : p.block_sizes) out.push_back(CMatrix::Zero(n, n));
  for (std::size_t i = 0; i < p.a.size(); ++i) {
    const double yi = y(static_cast<Eigen::Index>(i));
    if (yi == 0.0) continue;
    for (std::size_t k = 0; k < p.a[i].blocks.size(); ++k)
      for (const auto& e : p.a[i].blocks[k]) out[k](e.row, e.col) += yi * e.value;
  }
  return out;
}

// Largest step in [0, inf) keeping L L^* + alpha D positive semidefinite.
double max_step(const CMatrix& l, const CMatrix& d) {
  CMatrix li = l.triangularView<Eigen::Lower>().solve(CMatrix::Identity(l.rows(), l.cols()));
  CMatrix m = hermitian_part(li * d * li.adjoint());
  const double lam = min_eigenvalue(m);
  return lam < 0.0 ? -1.0 / lam : std::numeric_limits<double>::infinity();
}

struct Scaling {
  CMatrix l;      // chol(X)
  CMatrix rs;     // chol(S)
  CMatrix g;      // W = G G^*
  CMatrix ginv;   // G^{-1}
  RVector lambda; // G^{-1} X G^{-*} = G^* S G = diag(lambda)
  CMatrix w;
};

struct FlatBlock {
  std::vector<Eigen::Index> rows;
  std::vector<int> start, row, col;
  std::vector<double> re, im;
};

bool nt_scaling(const CMatrix& x, const CMatrix& s, Scaling& out) {
  Eigen::LLT<CMatrix> cx(x), cs(s);
  if (cx.info() != Eigen::Success || cs.info() != Eigen::Success) return false;
  out.l = cx.matrixL();
  out.rs = cs.matrixL();
  CMatrix k = out.rs.adjoint() * out.l;
  Eigen::JacobiSVD<CMatrix> svd(k, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.lambda = svd.singularValues();
  if (!(out.lambda.minCoeff() > 0.0) || !out.lambda.allFinite()) return false;
  RVector isq = out.lambda.cwiseSqrt().cwiseInverse();
  out.g = out.l * svd.matrixV() * isq.cast<Complex>().asDiagonal();
  out.ginv = isq.cast<Complex>().asDiagonal() * svd.matrixU().adjoint() * out.rs.adjoint();
  out.w = hermitian_part(out.g * out.g.adjoint());
  return true;
}

}  // namespace

double sparse_inner(const std::vector<SparseEntry>& a, const CMatrix& x) {
  double s = 0.0;
  for (const auto& e : a) s += (e.value * x(e.col, e.row)).real();
  return s;
}

SdpResult solve_sdp(const SdpProblem& p, const SdpOptions& opt, const SdpStart* start) {
  const std::size_t nb = p.block_sizes.size();
  const Eigen::Index m = static_cast<Eigen::Index>(p.a.size());
  if (p.c.size() != nb || p.b.size() != m) throw InputError("SDP data sizes are inconsistent");
  for (std::size_t k = 0; k < nb; ++k) {
    const int n = p.block_sizes[k];
    if (n <= 0 || p.c[k].rows() != n || p.c[k].cols() != n) {
      throw InputError("SDP block size mismatch");
    }
  }
  for (const auto& con : p.a) {
    if (con.blocks.size() != nb) throw InputError("SDP constraint has wrong block count");
    for (std::size_t k = 0; k < nb; ++k)
      for (const auto& e : con.blocks[k]) {
        if (e.row < 0 || e.col < 0 || e.row >= p.block_sizes[k] || e.col >= p.block_sizes[k]) {
          throw InputError("SDP constraint entry out of range");
        }
      }
  }

  double total_dim = 0.0;
  for (int n : p.block_sizes) total_dim += n;
  const double norm_b = p.b.norm();
  const double norm_c = frob(p.c);

  // Infeasible start scaled to the data.
  double a_max = 1.0;
  for (const auto& con : p.a) {
    double s = 0.0;
    for (const auto& blk : con.blocks)
      for (const auto& e : blk) s += std::norm(e.value);
    a_max = std::max(a_max, std::sqrt(s));
  }
  const double xi = std::max(10.0, std::sqrt(total_dim) * (1.0 + norm_b) / a_max);
  const double eta = std::max(10.0, (1.0 + norm_c) / std::sqrt(total_dim));
  SdpResult r;
  for (int n : p.block_sizes) {
    r.x.push_back(xi * CMatrix::Identity(n, n));
    r.s.push_back(eta * CMatrix::Identity(n, n));
  }
  r.y = RVector::Zero(m);
  if (start) {
    if (start->x.size() != nb || start->s.size() != nb || start->y.size() != m) {
      throw InputError("SDP starting point has the wrong shape");
    }
    r.x = start->x;
    r.s = start->s;
    r.y = start->y;
  }

  // Constraint entries per block, flattened in constraint order.
  std::vector<FlatBlock> flat(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    FlatBlock& fb = flat[k];
    fb.start.push_back(0);
    for (std::size_t i = 0; i < p.a.size(); ++i) {
      const auto& ent = p.a[i].blocks[k];
      if (ent.empty()) continue;
      fb.rows.push_back(static_cast<Eigen::Index>(i));
      for (const auto& e : ent) {
        fb.row.push_back(e.row);
        fb.col.push_back(e.col);
        fb.re.push_back(e.value.real());
        fb.im.push_back(e.value.imag());
      }
      fb.start.push_back(static_cast<int>(fb.row.size()));
    }
  }

  std::vector<Scaling> sc(nb);
  for (int it = 0; it < opt.max_iterations; ++it) {
    r.iterations = it;
    const RVector rp = p.b - apply_a(p, r.x);
    Blocks at_y = apply_at(p, r.y);
    Blocks rd(nb);
    for (std::size_t k = 0; k < nb; ++k) rd[k] = p.c[k] - r.s[k] - at_y[k];
    r.primal_objective = inner(p.c, r.x);
    r.dual_objective = p.b.dot(r.y);
    r.primal_infeasibility = rp.norm() / (1.0 + norm_b);
    r.dual_infeasibility = frob(rd) / (1.0 + norm_c);
    const double mu = inner(r.x, r.s) / total_dim;
    const double scale_obj = 1.0 + std::abs(r.primal_objective) + std::abs(r.dual_objective);
    const double gap = std::min(std::abs(r.primal_objective - r.dual_objective), mu * total_dim) / scale_obj;
    // The primal residual drifts at the end; callers rebuild primal points.
    if (gap <= opt.tolerance && r.primal_infeasibility <= 1e-6 && r.dual_infeasibility <= opt.tolerance) {
      r.converged = true;
      r.status = "optimal";
      return r;
    }

    for (std::size_t k = 0; k < nb; ++k) {
      if (!nt_scaling(r.x[k], r.s[k], sc[k])) {
        r.status = "lost positive definiteness";
        return r;
      }
    }

    // Schur complement M_ij = Re tr(A_i W A_j W), upper triangle.
    RMatrix schur = RMatrix::Zero(m, m);
    for (std::size_t k = 0; k < nb; ++k) {
      const FlatBlock& fb = flat[k];
      const int n = p.block_sizes[k];
      const Complex* w = sc[k].w.data();
      const std::size_t rows = fb.rows.size();
      for (std::size_t a = 0; a < rows; ++a) {
        for (std::size_t b = a; b < rows; ++b) {
          double acc = 0.0;
          for (int e = fb.start[a]; e < fb.start[a + 1]; ++e)
            for (int f = fb.start[b]; f < fb.start[b + 1]; ++f) {
              const Complex x = w[fb.col[e] + n * fb.row[f]];
              const Complex y = w[fb.col[f] + n * fb.row[e]];
              const double xr = x.real() * y.real() - x.imag() * y.imag();
              const double xi = x.real() * y.imag() + x.imag() * y.real();
              const double vr = fb.re[e] * fb.re[f] - fb.im[e] * fb.im[f];
              const double vi = fb.re[e] * fb.im[f] + fb.im[e] * fb.re[f];
              acc += vr * xr - vi * xi;
            }
          schur(fb.rows[a], fb.rows[b]) += acc;
        }
      }
    }
    schur.triangularView<Eigen::StrictlyLower>() = schur.transpose();
    const double reg = 1e-14 * std::max(1.0, schur.diagonal().cwiseAbs().maxCoeff());
    schur.diagonal().array() += reg;
    Eigen::LLT<RMatrix> chol(schur);
    Eigen::FullPivLU<RMatrix> lu;
    const bool use_lu = chol.info() != Eigen::Success;
    if (use_lu) lu.compute(schur);
    auto solve_m = [&](const RVector& rhs) -> RVector {
      RVector x = use_lu ? RVector(lu.solve(rhs)) : RVector(chol.solve(rhs));
      const RVector res = rhs - schur * x;
      x += use_lu ? RVector(lu.solve(res)) : RVector(chol.solve(res));
      return x;
    };

    Blocks wrdw(nb);
    for (std::size_t k = 0; k < nb; ++k) wrdw[k] = sc[k].w * rd[k] * sc[k].w;
    const RVector a_wrdw = apply_a(p, wrdw);

    // Direction for a complementarity right-hand side H (scaled space).
    auto direction = [&](const std::vector<CMatrix>& h, Blocks& dx, RVector& dy, Blocks& ds) {
      Blocks rc(nb);
      for (std::size_t k = 0; k < nb; ++k) {
        const RVector& lam = sc[k].lambda;
        CMatrix t(lam.size(), lam.size());
        for (Eigen::Index a = 0; a < lam.size(); ++a)
          for (Eigen::Index b = 0; b < lam.size(); ++b) t(a, b) = h[k](a, b) / (lam(a) + lam(b));
        rc[k] = sc[k].g * t * sc[k].g.adjoint();
      }
      dy = solve_m(rp - apply_a(p, rc) + a_wrdw);
      Blocks aty = apply_at(p, dy);
      ds.resize(nb);
      dx.resize(nb);
      for (std::size_t k = 0; k < nb; ++k) {
        ds[k] = hermitian_part(rd[k] - aty[k]);
        dx[k] = hermitian_part(rc[k] - sc[k].w * ds[k] * sc[k].w);
      }
    };

    auto steps = [&](const Blocks& dx, const Blocks& ds, double& ap, double& ad) {
      ap = std::numeric_limits<double>::infinity();
      ad = ap;
      for (std::size_t k = 0; k < nb; ++k) {
        ap = std::min(ap, max_step(sc[k].l, dx[k]));
        ad = std::min(ad, max_step(sc[k].rs, ds[k]));
      }
    };

    // Predictor.
    std::vector<CMatrix> h(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      const RVector& lam = sc[k].lambda;
      h[k] = (-2.0 * lam.cwiseAbs2()).cast<Complex>().asDiagonal();
    }
    Blocks dx, ds;
    RVector dy;
    direction(h, dx, dy, ds);
    double ap = 0.0, ad = 0.0;
    steps(dx, ds, ap, ad);
    ap = std::min(1.0, ap);
    ad = std::min(1.0, ad);
    double mu_aff = 0.0;
    for (std::size_t k = 0; k < nb; ++k) {
      mu_aff += inner({r.x[k] + ap * dx[k]}, {r.s[k] + ad * ds[k]});
    }
    mu_aff /= total_dim;
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

    // Corrector.
    for (std::size_t k = 0; k < nb; ++k) {
      const RVector& lam = sc[k].lambda;
      CMatrix dxs = sc[k].ginv * dx[k] * sc[k].ginv.adjoint();
      CMatrix dss = sc[k].g.adjoint() * ds[k] * sc[k].g;
      CMatrix target = (2.0 * (sigma * mu - lam.cwiseAbs2().array())).matrix().cast<Complex>().asDiagonal();
      h[k] = target - (dxs * dss + dss * dxs);
    }
    direction(h, dx, dy, ds);
    steps(dx, ds, ap, ad);
    const double tau = 0.98;
    ap = std::min(1.0, tau * ap);
    ad = std::min(1.0, tau * ad);
    if (!(ap > 1e-14) && !(ad > 1e-14)) {
      r.status = "stalled";
      return r;
    }
    for (std::size_t k = 0; k < nb; ++k) {
      r.x[k] = hermitian_part(r.x[k] + ap * dx[k]);
      r.s[k] = hermitian_part(r.s[k] + ad * ds[k]);
    }
    r.y += ad * dy;
  }
  r.iterations = opt.max_iterations;
  r.status = "iteration limit";
  return r;
}

}  // namespace qerr
