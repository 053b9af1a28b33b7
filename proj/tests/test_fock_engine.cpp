// Copyright 2026 The qbh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "qbh/fock_engine.hpp"
#include "qbh/network_lab.hpp"

using namespace qbh;

namespace {

// H from ladder matrices, entry for entry with the normal-ordered definition.
MatrixXc brute_quadratic(const QuadraticForm& q, const FockBasis& basis) {
  const Index n = q.n_modes();
  std::vector<MatrixXc> a;
  for (Index m = 0; m < n; ++m) a.push_back(ladder_matrix(basis, m));
  MatrixXc H = q.c0() * MatrixXc::Identity(basis.dim(), basis.dim());
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      H += q.M()(i, j) * a[i].adjoint() * a[j];
      H += 0.5 * q.P()(i, j) * a[i].adjoint() * a[j].adjoint();
      H += 0.5 * q.Q()(i, j) * a[i] * a[j];
    }
  return H;
}

}  // namespace

TEST_CASE("FockBasis indexing is mixed radix with mode 0 fastest") {
  const FockBasis b({2, 3});
  CHECK(b.dim() == 12);
  CHECK(b.index({1, 0}) == 1);
  CHECK(b.index({0, 1}) == 3);
  CHECK(b.index({2, 3}) == 11);
  for (Index k = 0; k < b.dim(); ++k) CHECK(b.index(b.occupations(k)) == k);
  CHECK(b.descriptor() == "fock 2 2 3");
  CHECK_THROWS_AS(b.index({3, 0}), ValidationError);
  CHECK_THROWS_AS(FockBasis::uniform(4, 30), ValidationError);
  CHECK(FockBasis::uniform(2, 30).default_interior() == 10);
  CHECK(FockBasis::uniform(2, 30).interior_indices(10).size() == 121);
}

TEST_CASE("ladder matrix lowers with sqrt(n)") {
  const FockBasis b = FockBasis::uniform(1, 6);
  const MatrixXc a = ladder_matrix(b, 0);
  for (int n = 1; n <= 6; ++n) CHECK(std::abs(a(n - 1, n) - std::sqrt(double(n))) < 1e-15);
  CHECK(a(6, 6) == cplx(0.0));
}

TEST_CASE("second_quantize matches the brute-force ladder construction (property)") {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 10; ++k) {
    const Index n = 1 + k % 3;
    const QuadraticForm q = random_hermitian_form(rng, n).with_constant(0.3);
    const FockBasis basis = FockBasis::uniform(n, n == 3 ? 6 : 10);
    const MatrixXc direct = second_quantize(q, basis);
    CHECK(max_abs(MatrixXc(direct - brute_quadratic(q, basis))) < 1e-12);
    CHECK(max_abs(MatrixXc(direct - second_quantize(from_quadratic(q), basis))) < 1e-12);
  }
  const QuadraticForm dbs = build_dimer({DimerKind::DBS, 1.0, 0.5, 0.5});
  const FockBasis b2 = FockBasis::uniform(2, 8);
  CHECK(max_abs(MatrixXc(second_quantize(dbs, b2) - brute_quadratic(dbs, b2))) < 1e-12);
}

TEST_CASE("truncated Omega is Hermitian positive with an exact inverse") {
  const OmegaMatrix om = omega_matrix(12, 0.4);
  CHECK(max_abs(MatrixXc(om.omega - om.omega.adjoint())) == 0.0);
  CHECK(max_abs(MatrixXc(om.eigenvectors.adjoint() * om.eigenvectors -
                         MatrixXc::Identity(13, 13))) < 1e-13);
  CHECK(om.exponents.minCoeff() < 0.0);
  CHECK(om.exponents.maxCoeff() > 0.0);
  CHECK_THROWS_AS(omega_matrix(0, 0.0), ValidationError);
  CHECK_THROWS_AS(omega_matrix(65, 0.0), ValidationError);
}

TEST_CASE("hole Fock pairs are biorthogonal at cutoff 30") {
  const OmegaMatrix om = omega_matrix(30, 0.0);
  const MatrixXc G = hole_pairing_matrix(om, 5);
  CHECK(max_abs(MatrixXc(G - MatrixXc::Identity(6, 6))) < 1e-8);
  for (Index n = 0; n <= 5; ++n) CHECK(std::abs(hole_fock_pair(om, n).pairing - 1.0) < 1e-10);
  CHECK_THROWS_AS(hole_fock_pair(om, 31), ValidationError);
}

TEST_CASE("truncated Omega diverges with the cutoff") {
  // The true Omega has divergent Fock matrix elements; truncations grow
  // without bound instead of converging to the hole relations.
  double prev_cond = 0.0;
  double prev_norm = 0.0;
  for (Index c : {8, 16, 24, 32}) {
    const OmegaMatrix om = omega_matrix(c, 0.0);
    CHECK(om.condition > 1e3 * std::max(1.0, prev_cond));
    CHECK(om.omega_inv.col(0).norm() > 10.0 * prev_norm);
    prev_cond = om.condition;
    prev_norm = om.omega_inv.col(0).norm();
    // Far from the exact -(n+1).
    const MatrixXc N = second_quantize(LadderPolynomial::number(1, 0), FockBasis({c}));
    CHECK(std::abs(explicit_hole_expectation(om, N, 0) + 1.0) > 1e2);
  }
}

TEST_CASE("explicit hole expectation equals the exact path on a small cutoff identity") {
  // Omega O Omega^-1 with O = identity is the identity at any cutoff.
  const OmegaMatrix om = omega_matrix(10, 0.3);
  const MatrixXc I = MatrixXc::Identity(11, 11);
  CHECK(std::abs(explicit_hole_expectation(om, I, 2) - 1.0) < 1e-6);
}

TEST_CASE("apply_on_mode acts on the chosen tensor factor") {
  const FockBasis b({2, 3});
  const MatrixXc a1 = ladder_matrix(FockBasis({3}), 0);
  const VectorXc v = fock_state(b, {1, 2});
  const VectorXc w = apply_on_mode(b, 1, a1, v);
  CHECK(std::abs(w[b.index({1, 1})] - std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(w.norm() - std::sqrt(2.0)) < 1e-15);
  CHECK(max_abs(VectorXc(w - ladder_matrix(b, 1) * v)) < 1e-15);
}

TEST_CASE("displacement of vacuum is a coherent state on the interior") {
  const cplx alpha(0.6, 0.2);
  const FockBasis b({40});
  const VectorXc psi = displacement_matrix(b, 0, alpha) * fock_state(b, {0});
  double fact = 1.0;
  for (int n = 0; n < 12; ++n) {
    if (n > 0) fact *= n;
    const cplx expected = std::exp(-0.5 * std::norm(alpha)) * std::pow(alpha, n) / std::sqrt(fact);
    CHECK(std::abs(psi[n] - expected) < 1e-12);
  }
}

TEST_CASE("evolve agrees with the dense exponential (property)") {
  std::mt19937_64 rng(32);
  std::normal_distribution<double> nd;
  for (int k = 0; k < 10; ++k) {
    const Index d = 6 + k;
    MatrixXc H(d, d);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) H(i, j) = cplx(nd(rng), nd(rng) * (k % 2 ? 0.3 : 0.0));
    if (k % 2 == 0) H = (0.5 * (H + H.adjoint())).eval();
    VectorXc psi(d);
    for (Index i = 0; i < d; ++i) psi[i] = cplx(nd(rng), nd(rng));
    const double t = 0.7;
    const VectorXc ref = MatrixXc(-kI * t * H).exp() * psi;
    const EvolveResult raw = evolve(H, psi, t, false);
    CHECK(max_abs(VectorXc(raw.state - ref)) < 1e-10 * ref.norm());
    const EvolveResult ren = evolve(H, psi, t, true);
    CHECK(std::abs(ren.state.norm() - 1.0) < 1e-13);
    CHECK(std::abs(ren.log_norm - std::log(ref.norm())) < 1e-10);
    CHECK(max_abs(VectorXc(ren.state - ref / ref.norm())) < 1e-10);
  }
  CHECK_THROWS_AS(evolve(MatrixXc::Zero(2, 2), VectorXc::Zero(3), 1.0, false), ValidationError);
}

TEST_CASE("sparse evolution path matches dense") {
  const QuadraticForm q = build_dimer({DimerKind::P, 1.0, 1.0, 0.3});
  const FockBasis b = FockBasis::uniform(2, 20);
  const MatrixXc H = second_quantize(q, b);
  const VectorXc psi0 = fock_state(b, {0, 0});
  const EvolveResult r = evolve(H, psi0, 1.0, false);
  // Gaussian oracle: the resonant pairing dimer leaves |00> -> TMSV with
  // amplitude <00|psi> = e^{i phase} / cosh(g t).
  CHECK(std::abs(std::abs(r.state[0]) - 1.0 / std::cosh(0.3)) < 1e-8);
}

TEST_CASE("duality evolution: Heisenberg similarity exact, truncated Omega divergent") {
  const QuadraticForm bs = build_dimer({DimerKind::BS, 1.0, 0.5, 0.3});
  const DualityEvolutionReport r = duality_evolution_check(bs, 0, 0.0, 0.5, {10, 14, 18});
  CHECK(r.heisenberg_residual < 1e-10);
  REQUIRE(r.table.size() == 3);
  CHECK_FALSE(r.converged);
  CHECK(r.table[2].residual > r.table[0].residual);
}

TEST_CASE("dual pairs share BdG frequency magnitudes") {
  const double w = 0.8;
  const QuadraticForm p = build_dimer({DimerKind::P, -1.0, 1.0, 0.6});
  const DynamicalMatrix d = build_bdg(p);
  const SpectrumReport sp = spectrum(d);
  for (const auto& [n, nb] : sp.pairing) CHECK(std::abs(std::abs(sp.eigenvalues[n]) - w) < 1e-12);
  const QuadraticForm dual = dual_quadratic(p, 0, 0.0, Direction::Inverse);
  const SpectrumReport sd = spectrum(build_bdg(dual));
  for (const auto& [n, nb] : sd.pairing) CHECK(std::abs(std::abs(sd.eigenvalues[n]) - w) < 1e-12);
}

TEST_CASE("write_state emits the descriptor header") {
  const FockBasis b({1});
  std::ostringstream os;
  write_state(os, b, fock_state(b, {1}));
  CHECK(os.str() == "fock 1 1\n0 0 0\n1 1 0\n");
}
