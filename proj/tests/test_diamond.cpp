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

#include <doctest.h>

#include <cmath>

#include "qerr/diamond.hpp"
#include "qerr/densesim.hpp"
#include "support.hpp"

using namespace qerr;

namespace {

HermitianMap versus_identity(const Channel& c) { return difference(c, Channel::identity(c.arity())); }

// Half the trace norm of (Phi kron I)(|psi><psi|) computed from Kraus forms.
double sampled_value(const Channel& noisy, const CVector& psi) {
  const int d = noisy.dim();
  const CMatrix rho = psi * psi.adjoint();
  const CMatrix id = CMatrix::Identity(d, d);
  CMatrix out = -rho;
  for (const auto& k : noisy.kraus()) {
    const CMatrix kk = kron(k, id);
    out += kk * rho * kk.adjoint();
  }
  return 0.5 * trace_norm(hermitian_part(out));
}

CVector purification(const CMatrix& rho, testing::Rng& rng) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(rho));
  const int d = static_cast<int>(rho.rows());
  const CMatrix u = testing::random_unitary(d, rng);
  CVector psi = CVector::Zero(d * d);
  for (int k = 0; k < d; ++k) {
    const double p = std::max(0.0, es.eigenvalues()(k));
    psi += std::sqrt(p) * kron(es.eigenvectors().col(k), u.col(k));
  }
  return psi;
}

}  // namespace

TEST_SUITE("diamond") {
  TEST_CASE("closed forms") {
    for (double p : {1e-4, 1e-2, 0.1, 0.5}) {
      CHECK(std::abs(unconstrained_diamond_norm(versus_identity(bit_flip(p))) - p) < 1e-7);
      CHECK(std::abs(unconstrained_diamond_norm(versus_identity(phase_flip(p))) - p) < 1e-7);
      CHECK(std::abs(unconstrained_diamond_norm(versus_identity(depolarizing(p))) - 0.75 * p) < 1e-7);
    }
  }

  TEST_CASE("identical channels have norm zero") {
    const SdpSolution s = unconstrained_diamond_solution(zero_map(2));
    CHECK(s.dual == 0.0);
  }

  TEST_CASE("predicates tighten the bound") {
    const HermitianMap flip = versus_identity(bit_flip(0.1));
    const CMatrix zero = basis_density(BasisState::parse("0"));
    const CMatrix plus = CMatrix::Constant(2, 2, 0.5);
    CHECK(std::abs(constrained_diamond_norm(flip, {zero, 0.0}).dual - 0.1) < 1e-7);
    CHECK(constrained_diamond_norm(flip, {plus, 0.0}).dual < 1e-7);
    const double loose = constrained_diamond_norm(flip, {plus, 0.3}).dual;
    CHECK(loose > 1e-3);
    CHECK(loose <= 0.1 + 1e-7);
  }

  TEST_CASE("decoherence at the Bell marginal, before and after twirling") {
    const Predicate bell{0.5 * CMatrix::Identity(2, 2), 0.0};
    const double raw = constrained_diamond_norm(versus_identity(decoherence(0.551, 0.325)), bell).dual;
    const double tw =
        constrained_diamond_norm(versus_identity(pauli_twirl(decoherence(0.551, 0.325))), bell).dual;
    CHECK(std::abs(raw - 0.5636) < 5e-4);
    CHECK(std::abs(tw - 0.4617) < 5e-4);
  }

  TEST_CASE("certificates re-evaluate to the reported bound") {
    testing::Rng rng(41);
    for (int i = 0; i < 10; ++i) {
      const int arity = 1 + (i % 2);
      const Channel c = testing::random_channel(arity, 0.2, rng);
      const HermitianMap phi = versus_identity(c);
      const Predicate pred{testing::random_density(c.dim(), 1 + (i % 3), rng), 0.05 * (i % 4)};
      const SdpSolution s = constrained_diamond_norm(phi, pred);
      CHECK(s.gap <= kDiamondGapTolerance);
      CHECK(s.primal <= s.dual + 1e-9);
      const Predicate* used = s.constrained ? &pred : nullptr;
      CHECK(certificate_bound(phi.choi, s.certificate, used) == doctest::Approx(s.dual).epsilon(1e-12));
      CHECK(certificate_violation(phi.choi, s.certificate, used) > -1e-6);
      CHECK(s.dual <= unconstrained_diamond_norm(phi) + 1e-7);
    }
  }

  TEST_CASE("damaged certificates still bound the optimum") {
    testing::Rng rng(42);
    const Channel c = testing::random_channel(1, 0.3, rng);
    const HermitianMap phi = versus_identity(c);
    const SdpSolution s = unconstrained_diamond_solution(phi);
    DiamondCertificate bad = s.certificate;
    bad.y0 -= 0.05;
    bad.z(0, 0) -= 0.05;
    CHECK(certificate_bound(phi.choi, bad, nullptr) >= s.primal - 1e-9);
  }

  TEST_CASE("sampled inputs never beat the bound") {
    testing::Rng rng(43);
    for (int i = 0; i < 5; ++i) {
      const Channel c = testing::random_channel(1, 0.3, rng);
      const HermitianMap phi = versus_identity(c);
      const double bound = unconstrained_diamond_norm(phi);
      const CMatrix center = testing::random_density(2, 1, rng);
      const double delta = 0.2;
      const double cbound = constrained_diamond_norm(phi, {center, delta}).dual;
      for (int k = 0; k < 300; ++k) {
        CHECK(sampled_value(c, testing::random_state(4, rng)) <= bound + 1e-9);
        const CMatrix other = testing::random_density(2, 2, rng);
        const double dist = trace_distance(other, center);
        const double s = dist > delta ? delta / dist : 1.0;
        const CMatrix near = (1.0 - s) * center + s * other;
        CHECK(sampled_value(c, purification(near, rng)) <= cbound + 1e-9);
      }
    }
  }

  TEST_CASE("worst case adds per-gate norms along the longest path") {
    const Program p = parse_program("qubits 2\nh q0\nif q0 { x q1; x q1 } else { skip }\ncnot q0 q1\n");
    NoiseModel m;
    m.set_default(1, bit_flip(0.01));
    m.set_default(2, bit_flip(0.02));
    CHECK(std::abs(worst_case_bound(p, m) - 0.05) < 1e-8);
  }
}
