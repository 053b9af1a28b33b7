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

#include "doctest.h"
#include "qbh/fock_engine.hpp"
#include "qbh/gaussian_engine.hpp"
#include "qbh/network_lab.hpp"

using namespace qbh;

TEST_CASE("symplectic form and quadrature transform") {
  const MatrixXd J = symplectic_form(2);
  CHECK(J(0, 1) == 1.0);
  CHECK(J(1, 0) == -1.0);
  CHECK(MatrixXd(J * J + MatrixXd::Identity(4, 4)).norm() == 0.0);
  const MatrixXc T = quadrature_transform(2);
  // a = (x + i p)/sqrt2 on the first row.
  CHECK(std::abs(T(0, 0) - 1.0 / std::sqrt(2.0)) < 1e-16);
  CHECK(std::abs(T(0, 1) - kI / std::sqrt(2.0)) < 1e-16);
}

TEST_CASE("propagators of Hermitian forms are symplectic (property)") {
  std::mt19937_64 rng(51);
  for (int k = 0; k < 50; ++k) {
    const Index n = 1 + k % 4;
    const QuadraticForm q = random_hermitian_form(rng, n);
    const MatrixXd S = symplectic_propagator(generator_from_quadratic(q), 0.3);
    const MatrixXd J = symplectic_form(n);
    CHECK((S * J * S.transpose() - J).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, S.norm()));
    const MatrixXd K = quadrature_hamiltonian(q);
    CHECK((K - K.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("generator matches the free oscillator rotation") {
  const QuadraticForm q(MatrixXc::Constant(1, 1, 2.0), MatrixXc::Zero(1, 1), MatrixXc::Zero(1, 1));
  const MatrixXd S = symplectic_propagator(generator_from_quadratic(q), 0.4);
  // x(t) = x cos 2t + p sin 2t
  CHECK(std::abs(S(0, 0) - std::cos(0.8)) < 1e-14);
  CHECK(std::abs(S(0, 1) - std::sin(0.8)) < 1e-14);
  CHECK(std::abs(S(1, 0) + std::sin(0.8)) < 1e-14);
}

TEST_CASE("non-Hermitian forms are rejected by the Gaussian path") {
  CHECK_THROWS_AS(generator_from_quadratic(build_dimer({DimerKind::DBS, 1, 1, 0.5})),
                  ValidationError);
  CHECK_THROWS_AS(ground_state(build_dimer({DimerKind::DBS, 1, 1, 0.5})), ValidationError);
}

TEST_CASE("TMSV log-negativity is 2|r|") {
  for (double r : {-0.8, -0.1, 0.0, 0.25, 0.5, 1.0, 2.0}) {
    const GaussianState s = tmsv(r);
    CHECK(uncertainty_margin(s) > -1e-12);
    CHECK(std::abs(log_negativity(s, {0}) - 2.0 * std::abs(r)) < 1e-10);
    CHECK(std::abs(log_negativity(s, {1}) - 2.0 * std::abs(r)) < 1e-10);
  }
  CHECK(std::abs(log_negativity(tmsv(0.5), {0}) - 1.0) < 1e-12);
  CHECK(std::abs(log_negativity(tmsv(0.5), {0}, LogBase::Two) - 1.0 / std::log(2.0)) < 1e-12);
}

TEST_CASE("log_negativity validates its input") {
  GaussianState s = tmsv(0.3);
  CHECK_THROWS_AS(log_negativity(s, {}), ValidationError);
  CHECK_THROWS_AS(log_negativity(s, {2}), ValidationError);
  CHECK_THROWS_AS(log_negativity(s, {0, 0}), ValidationError);
  GaussianState bad = vacuum_state(2);
  bad.cov *= 0.1;
  CHECK_THROWS_AS(log_negativity(bad, {0}), ValidationError);
  GaussianState asym = vacuum_state(2);
  asym.cov(0, 2) = 0.1;
  CHECK_THROWS_AS(log_negativity(asym, {0}), ValidationError);
}

TEST_CASE("symplectic eigenvalues of pure states are 1/2") {
  std::mt19937_64 rng(52);
  for (int k = 0; k < 10; ++k) {
    const QuadraticForm q = random_hermitian_form(rng, 3);
    const GaussianState s = evolve(vacuum_state(3), generator_from_quadratic(q), 0.5);
    const VectorXd nu = symplectic_eigenvalues(s.cov);
    for (Index j = 0; j < 3; ++j) CHECK(std::abs(nu[j] - 0.5) < 1e-9);
    CHECK(uncertainty_margin(s) > -1e-9);
  }
}

TEST_CASE("resonant pairing evolution: E_N = 2 g t, Gaussian and Fock") {
  const double g = 0.5;
  const QuadraticForm q = build_dimer({DimerKind::P, 1.0, 1.0, g});
  const SymplecticGenerator gen = generator_from_quadratic(q);
  const FockBasis b = FockBasis::uniform(2, 30);
  const MatrixXc H = second_quantize(q, b);
  for (double t : {0.2, 0.5, 1.0}) {
    const double en = log_negativity(evolve(vacuum_state(2), gen, t), {0});
    CHECK(std::abs(en - 2.0 * g * t) < 1e-8);
    const VectorXc psi = evolve(H, fock_state(b, {0, 0}), t, false).state;
    CHECK(std::abs(fock_log_negativity(psi, 30, 30) - 2.0 * g * t) < 1e-4);
  }
}

TEST_CASE("fock log-negativity of simple states") {
  const FockBasis b = FockBasis::uniform(2, 2);
  CHECK(std::abs(fock_log_negativity(fock_state(b, {1, 0}), 2, 2)) < 1e-15);
  const VectorXc bell = fock_state(b, {1, 0}) + fock_state(b, {0, 1});
  CHECK(std::abs(fock_log_negativity(bell, 2, 2) - std::log(2.0)) < 1e-14);
  CHECK_THROWS_AS(fock_log_negativity(bell, 3, 2), ValidationError);
}

TEST_CASE("stable pairing dimer ground state carries 2r = artanh(g/Delta)") {
  for (double g : {0.1, 0.3, 0.6, 0.9}) {
    const double delta = 1.0;
    const QuadraticForm q = build_dimer({DimerKind::P, -delta, delta, g});
    const GaussianState s = ground_state(q);
    const VectorXd nu = symplectic_eigenvalues(s.cov);
    CHECK(std::abs(nu[0] - 0.5) < 1e-12);
    CHECK(std::abs(nu[1] - 0.5) < 1e-12);
    CHECK(std::abs(log_negativity(s, {0}) - 2.0 * pairing_squeezing(delta, g)) < 1e-10);
    // Oracle: energy is minimal against any rotated TMSV with the same r.
    const MatrixXd K = quadrature_hamiltonian(q);
    const double e0 = (K * s.cov).trace();
    const double r = pairing_squeezing(delta, g);
    CHECK(e0 <= (K * tmsv(r).cov).trace() + 1e-12);
    CHECK(e0 <= (K * tmsv(-r).cov).trace() + 1e-12);
    CHECK(std::abs(e0 - std::min((K * tmsv(r).cov).trace(), (K * tmsv(-r).cov).trace())) < 1e-10);
  }
  const GaussianState s = ground_state(build_dimer({DimerKind::P, -1.0, 1.0, 0.6}));
  CHECK(std::abs(log_negativity(s, {0}) - std::log(2.0)) < 1e-9);
}

TEST_CASE("ground_state rejects unbounded and unstable forms") {
  CHECK_THROWS_AS(ground_state(build_dimer({DimerKind::P, 1.0, 1.0, 0.3})), ValidationError);
  CHECK_THROWS_AS(ground_state(build_dimer({DimerKind::P, -1.0, 1.0, 1.5})), ValidationError);
  CHECK_THROWS_AS(pairing_squeezing(1.0, 1.0), ValidationError);
}

TEST_CASE("dual frame entanglement of the APT dimer") {
  const DualFrameEntanglement r = dual_frame_entanglement(
      build_dimer({DimerKind::DBS, -1.0, 1.0, 0.6}), 0, 0.0, EntanglementScenario::Ground);
  CHECK(r.physical.is_hermitian());
  CHECK(max_coefficient_difference(r.physical,
                                   build_dimer({DimerKind::P, -1.0, 1.0, 0.6}).with_constant(1.0)) <
        1e-15);
  CHECK(std::abs(r.ph_en - std::log(2.0)) < 1e-9);
  CHECK(r.dual_frames[0].is_hole());
  CHECK_FALSE(r.dual_frames[1].is_hole());
}

TEST_CASE("dual frame entanglement under resonant evolution") {
  const double g = 0.4;
  const DualFrameEntanglement r =
      dual_frame_entanglement(build_dimer({DimerKind::DBS, 1.0, 1.0, g}), 0, 0.0,
                              EntanglementScenario::ResonantEvolution, 0.75);
  CHECK(std::abs(r.ph_en - 2.0 * g * 0.75) < 1e-8);
  CHECK_THROWS_AS(dual_frame_entanglement(build_dimer({DimerKind::DBS, 1.0, 0.3, g}), 1, 0.0,
                                          EntanglementScenario::Ground),
                  ValidationError);
}
