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

#include "qerr/mps.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

namespace qerr {

namespace {

const CMatrix& swap_matrix() {
  static const CMatrix s = builtin_gate("swap")->matrix;
  return s;
}

// Singular values below this fraction of the norm are treated as rank noise.
constexpr double kRankNoise = 1e-14;

}  // namespace

MpsState MpsState::init(const BasisState& basis, int width) {
  if (width < 1) throw InputError("MPS width must be at least 1");
  if (basis.nqubits() < 1) throw InputError("MPS needs at least one qubit");
  MpsState m;
  m.width_ = width;
  const int n = basis.nqubits();
  m.sites_.resize(static_cast<std::size_t>(n));
  m.perm_.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    Site s{CMatrix::Zero(1, 1), CMatrix::Zero(1, 1)};
    s[static_cast<std::size_t>(basis.bits[static_cast<std::size_t>(k)])](0, 0) = 1.0;
    m.sites_[static_cast<std::size_t>(k)] = std::move(s);
    m.perm_[static_cast<std::size_t>(k)] = k;
  }
  return m;
}

int MpsState::max_bond() const {
  int b = 1;
  for (const auto& s : sites_) b = std::max(b, static_cast<int>(s[0].cols()));
  return b;
}

void MpsState::shift_right() {
  auto& a = sites_[static_cast<std::size_t>(center_)];
  auto& b = sites_[static_cast<std::size_t>(center_ + 1)];
  const Eigen::Index wl = a[0].rows(), wr = a[0].cols();
  CMatrix stacked(2 * wl, wr);
  stacked << a[0], a[1];
  Eigen::HouseholderQR<CMatrix> qr(stacked);
  const Eigen::Index r = std::min(2 * wl, wr);
  CMatrix q = qr.householderQ() * CMatrix::Identity(2 * wl, r);
  CMatrix rr = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  a[0] = q.topRows(wl);
  a[1] = q.bottomRows(wl);
  b[0] = rr * b[0];
  b[1] = rr * b[1];
  ++center_;
}

void MpsState::shift_left() {
  auto& a = sites_[static_cast<std::size_t>(center_ - 1)];
  auto& b = sites_[static_cast<std::size_t>(center_)];
  const Eigen::Index wl = b[0].rows(), wr = b[0].cols();
  CMatrix wide(wl, 2 * wr);
  wide << b[0], b[1];
  Eigen::HouseholderQR<CMatrix> qr(wide.adjoint());
  const Eigen::Index r = std::min(2 * wr, wl);
  CMatrix q = qr.householderQ() * CMatrix::Identity(2 * wr, r);
  CMatrix rr = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  CMatrix qa = q.adjoint();
  b[0] = qa.leftCols(wr);
  b[1] = qa.rightCols(wr);
  CMatrix rt = rr.adjoint();
  a[0] = a[0] * rt;
  a[1] = a[1] * rt;
  --center_;
}

void MpsState::move_center(int site) {
  while (center_ < site) shift_right();
  while (center_ > site) shift_left();
}

void MpsState::apply_1q(const CMatrix& g, int site) {
  if (site < 0 || site >= nqubits()) throw InputError("site index out of range");
  if (g.rows() != 2 || g.cols() != 2) throw InputError("1-qubit gate must be 2x2");
  auto& s = sites_[static_cast<std::size_t>(site)];
  CMatrix n0 = g(0, 0) * s[0] + g(0, 1) * s[1];
  CMatrix n1 = g(1, 0) * s[0] + g(1, 1) * s[1];
  s[0] = std::move(n0);
  s[1] = std::move(n1);
}

double MpsState::apply_2q(const CMatrix& g, int site) {
  if (site < 0 || site + 1 >= nqubits()) throw InputError("two-site update out of range");
  if (g.rows() != 4 || g.cols() != 4) throw InputError("2-qubit gate must be 4x4");
  move_center(site);
  auto& a = sites_[static_cast<std::size_t>(site)];
  auto& b = sites_[static_cast<std::size_t>(site + 1)];
  const Eigen::Index wl = a[0].rows(), wr = b[0].cols();

  std::array<CMatrix, 4> blocks;
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2) blocks[static_cast<std::size_t>(2 * s1 + s2)] = a[s1] * b[s2];
  CMatrix theta(2 * wl, 2 * wr);
  for (int r = 0; r < 4; ++r) {
    CMatrix acc = CMatrix::Zero(wl, wr);
    for (int t = 0; t < 4; ++t) {
      if (g(r, t) != Complex(0.0, 0.0)) acc += g(r, t) * blocks[static_cast<std::size_t>(t)];
    }
    theta.block((r / 2) * wl, (r % 2) * wr, wl, wr) = acc;
  }

  Eigen::BDCSVD<CMatrix> svd(theta, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw NumericalError("SVD failed to converge");
  const RVector& sv = svd.singularValues();
  if (!sv.allFinite()) throw NumericalError("SVD produced non-finite singular values");
  const double total = sv.squaredNorm();
  if (!(total > 0.0)) throw NumericalError("two-site block vanished");

  Eigen::Index rank = 0;
  const double floor = kRankNoise * std::sqrt(total);
  while (rank < sv.size() && sv(rank) >= floor) ++rank;
  rank = std::max<Eigen::Index>(rank, 1);
  const Eigen::Index keep = std::min<Eigen::Index>(rank, width_);
  double contribution = 0.0;
  if (keep < rank) {
    const double dropped = sv.tail(sv.size() - keep).squaredNorm();
    contribution = 2.0 * std::sqrt(std::min(1.0, dropped / total));
  }
  const double kept = sv.head(keep).squaredNorm();

  CMatrix u = svd.matrixU().leftCols(keep);
  CMatrix sv_dag = (sv.head(keep) / std::sqrt(kept)).cast<Complex>().asDiagonal() *
                   svd.matrixV().leftCols(keep).adjoint();
  a[0] = u.topRows(wl);
  a[1] = u.bottomRows(wl);
  b[0] = sv_dag.leftCols(wr);
  b[1] = sv_dag.rightCols(wr);
  center_ = site + 1;

  truncations_.push_back(contribution);
  delta_ += contribution;
  return contribution;
}

void MpsState::apply_gate(const GateStmt& g) {
  if (g.kind->arity == 1) {
    apply_1q(g.kind->matrix, perm_[static_cast<std::size_t>(g.qubits[0])]);
    return;
  }
  const int qa = g.qubits[0], qb = g.qubits[1];
  int pa = perm_[static_cast<std::size_t>(qa)];
  const int pb = perm_[static_cast<std::size_t>(qb)];
  while (std::abs(pa - pb) > 1) {
    const int next = pa < pb ? pa + 1 : pa - 1;
    apply_2q(swap_matrix(), std::min(pa, next));
    auto other = std::find(perm_.begin(), perm_.end(), next);
    *other = pa;
    perm_[static_cast<std::size_t>(qa)] = next;
    pa = next;
  }
  if (pa < pb) {
    apply_2q(g.kind->matrix, pa);
  } else {
    apply_2q(swap_matrix() * g.kind->matrix * swap_matrix(), pb);
  }
}

double MpsState::probability(int qubit, int outcome) {
  if (qubit < 0 || qubit >= nqubits()) throw InputError("qubit index out of range");
  const int site = perm_[static_cast<std::size_t>(qubit)];
  move_center(site);
  const auto& s = sites_[static_cast<std::size_t>(site)];
  const double w0 = s[0].squaredNorm(), w1 = s[1].squaredNorm();
  return (outcome == 0 ? w0 : w1) / (w0 + w1);
}

double MpsState::collapse(int qubit, int outcome) {
  const double p = probability(qubit, outcome);
  if (!(p > 0.0)) throw InputError("cannot collapse onto a zero-probability outcome");
  auto& s = sites_[static_cast<std::size_t>(perm_[static_cast<std::size_t>(qubit)])];
  s[static_cast<std::size_t>(1 - outcome)].setZero();
  s[static_cast<std::size_t>(outcome)] /= s[static_cast<std::size_t>(outcome)].norm();
  if (delta_ > 0.0) delta_ = std::min(2.0, 2.0 * delta_ / p);
  return p;
}

CMatrix MpsState::local_density(const std::vector<int>& qubits) const {
  if (qubits.empty() || qubits.size() > 2) throw InputError("local density needs 1 or 2 qubits");
  for (int q : qubits) {
    if (q < 0 || q >= nqubits()) throw InputError("qubit index out of range");
  }
  if (qubits.size() == 2 && qubits[0] == qubits[1]) throw InputError("qubits must be distinct");

  std::vector<int> phys;
  for (int q : qubits) phys.push_back(perm_[static_cast<std::size_t>(q)]);
  const int k1 = *std::min_element(phys.begin(), phys.end());
  const int k2 = *std::max_element(phys.begin(), phys.end());
  auto site = [this](int k) -> const Site& { return sites_[static_cast<std::size_t>(k)]; };

  // Left environment: identity on left-canonical sites, explicit past the center.
  CMatrix left = CMatrix::Identity(site(std::min(k1, center_))[0].rows(),
                                   site(std::min(k1, center_))[0].rows());
  for (int k = center_; k < k1; ++k) {
    left = site(k)[0].adjoint() * left * site(k)[0] + site(k)[1].adjoint() * left * site(k)[1];
  }
  CMatrix right = CMatrix::Identity(site(std::max(k2, center_))[0].cols(),
                                    site(std::max(k2, center_))[0].cols());
  for (int k = center_; k > k2; --k) {
    right = site(k)[0] * right * site(k)[0].adjoint() + site(k)[1] * right * site(k)[1].adjoint();
  }

  if (k1 == k2) {
    CMatrix rho(2, 2);
    const auto& a = site(k1);
    for (int s = 0; s < 2; ++s)
      for (int t = 0; t < 2; ++t) rho(s, t) = (a[t].adjoint() * left * a[s] * right).trace();
    return rho;
  }

  CMatrix rho(4, 4);
  const auto& a = site(k1);
  const auto& b = site(k2);
  for (int s = 0; s < 2; ++s) {
    for (int sp = 0; sp < 2; ++sp) {
      CMatrix env = a[sp].adjoint() * left * a[s];
      for (int k = k1 + 1; k < k2; ++k) {
        env = site(k)[0].adjoint() * env * site(k)[0] + site(k)[1].adjoint() * env * site(k)[1];
      }
      for (int t = 0; t < 2; ++t)
        for (int tp = 0; tp < 2; ++tp) {
          rho(2 * s + t, 2 * sp + tp) = (b[tp].adjoint() * env * b[t] * right).trace();
        }
    }
  }
  if (phys[0] > phys[1]) rho = swap_matrix() * rho * swap_matrix();
  return rho;
}

CVector MpsState::to_statevector() const {
  const int n = nqubits();
  if (n > 20) throw InputError("statevector export is limited to 20 qubits");
  CMatrix t(1, 1);
  t(0, 0) = 1.0;
  for (const auto& s : sites_) {
    CMatrix next(t.rows() * 2, s[0].cols());
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      next.row(2 * r) = t.row(r) * s[0];
      next.row(2 * r + 1) = t.row(r) * s[1];
    }
    t = std::move(next);
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  CVector out(dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    Eigen::Index y = 0;
    for (int q = 0; q < n; ++q) {
      if ((x >> (n - 1 - q)) & 1) y |= Eigen::Index{1} << (n - 1 - perm_[static_cast<std::size_t>(q)]);
    }
    out(x) = t(y, 0);
  }
  return out;
}

double MpsState::norm() const { return std::sqrt(std::max(0.0, inner_product(*this, *this).real())); }

std::string MpsState::dump() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "mps " << nqubits() << " width " << width_ << " delta " << delta_ << "\nperm";
  for (int p : perm_) os << ' ' << p;
  os << "\n";
  for (std::size_t k = 0; k < sites_.size(); ++k) {
    for (int s = 0; s < 2; ++s) {
      const auto& m = sites_[k][static_cast<std::size_t>(s)];
      os << "site " << k << " s " << s << " " << m.rows() << "x" << m.cols() << "\n";
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
          os << (j ? " " : "") << format_complex_literal(m(i, j));
        }
        os << "\n";
      }
    }
  }
  return os.str();
}

Complex inner_product(const MpsState& a, const MpsState& b) {
  if (a.nqubits() != b.nqubits()) throw InputError("inner product needs equal qubit counts");
  if (a.perm() != b.perm()) throw InputError("inner product needs identical qubit layouts");
  CMatrix env = CMatrix::Ones(1, 1);
  for (int k = 0; k < a.nqubits(); ++k) {
    const auto& sa = a.sites()[static_cast<std::size_t>(k)];
    const auto& sb = b.sites()[static_cast<std::size_t>(k)];
    env = sa[0].adjoint() * env * sb[0] + sa[1].adjoint() * env * sb[1];
  }
  return env(0, 0);
}

namespace {

void run_node(const Node& node, std::vector<TnBranch>& active) {
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SeqStmt>) {
          run_node(*s.first, active);
          run_node(*s.second, active);
        } else if constexpr (std::is_same_v<T, GateStmt>) {
          for (auto& b : active) {
            if (!b.zero_probability) b.state.apply_gate(s);
          }
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          std::array<std::vector<TnBranch>, 2> split;
          for (auto& b : active) {
            for (int o = 0; o < 2; ++o) {
              TnBranch c = b;
              c.label.push_back({s.qubit, o});
              if (!c.zero_probability) {
                const double p = c.state.probability(s.qubit, o);
                if (p <= kZeroProbability) {
                  c.zero_probability = true;
                  c.probability = 0.0;
                } else {
                  c.state.collapse(s.qubit, o);
                  c.probability *= p;
                }
              }
              split[static_cast<std::size_t>(o)].push_back(std::move(c));
            }
          }
          run_node(*s.then0, split[0]);
          run_node(*s.else1, split[1]);
          active = std::move(split[0]);
          active.insert(active.end(), std::make_move_iterator(split[1].begin()),
                        std::make_move_iterator(split[1].end()));
        }
      },
      node.value);
}

}  // namespace

std::vector<TnBranch> run_tn(const Program& p, const BasisState& basis, int width,
                             std::size_t cap) {
  if (basis.nqubits() != p.nqubits()) {
    throw InputError("input state has " + std::to_string(basis.nqubits()) +
                     " qubits but the program has " + std::to_string(p.nqubits()));
  }
  const std::size_t count = branch_count(p.body(), cap);
  if (count > cap) {
    throw BranchCapError("program has more than " + std::to_string(cap) +
                         " measurement branches (branch cap " + std::to_string(cap) + ")");
  }
  std::vector<TnBranch> active;
  active.push_back(TnBranch{{}, MpsState::init(basis, width), 1.0, false});
  run_node(p.body(), active);
  return active;
}

}  // namespace qerr
