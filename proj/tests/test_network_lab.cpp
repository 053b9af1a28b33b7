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

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "qbh/network_lab.hpp"

using namespace qbh;

namespace {

VectorXd grid(double t_max, Index n) { return VectorXd::LinSpaced(n, 0.0, t_max); }

// Populations of a single excitation hopping on a ring, computed by
// diagonalizing the hand-built 3x3 hopping matrix.
MatrixXd ring_oracle(double g, double phi12, double phi23, double phi31, const VectorXd& times) {
  MatrixXc B = MatrixXc::Zero(3, 3);
  B(0, 1) = g * std::polar(1.0, -phi12);
  B(1, 2) = g * std::polar(1.0, -phi23);
  B(2, 0) = g * std::polar(1.0, -phi31);
  B(1, 0) = std::conj(B(0, 1));
  B(2, 1) = std::conj(B(1, 2));
  B(0, 2) = std::conj(B(2, 0));
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(B);
  MatrixXd pops(times.size(), 3);
  for (Index k = 0; k < times.size(); ++k) {
    VectorXc ph(3);
    for (Index j = 0; j < 3; ++j) ph[j] = std::exp(-kI * es.eigenvalues()[j] * times[k]);
    const VectorXc psi = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().row(0).adjoint();
    for (Index j = 0; j < 3; ++j) pops(k, j) = std::norm(psi[j]);
  }
  return pops;
}

}  // namespace

TEST_CASE("dimer builders") {
  const QuadraticForm p = build_dimer({DimerKind::P, 0.5, 1.5, 0.2});
  CHECK(p.M()(0, 0) == cplx(-0.5));
  CHECK(p.M()(1, 1) == cplx(1.5));
  CHECK(p.P()(0, 1) == cplx(0.2));
  CHECK(p.Q()(1, 0) == cplx(0.2));
  CHECK(build_dimer({DimerKind::DP, 0.5, 1.5, 0.2}).Q()(0, 1) == cplx(-0.2));
  CHECK(build_dimer({DimerKind::BS, 1, 1, 0.2}).is_hermitian());
  CHECK(build_dimer({DimerKind::DBS, 1, 1, 0.2}).M()(1, 0) == cplx(0.0, 0.2));
  CHECK(parse_dimer_kind("DBS") == DimerKind::DBS);
  CHECK(to_string(DimerKind::DP) == "DP");
  CHECK_THROWS_AS(parse_dimer_kind("XY"), ValidationError);
  CHECK_THROWS_AS(build_dimer({DimerKind::P, 1, 1, -0.1}), ValidationError);
}

TEST_CASE("BS is dual to DP and DBS to P at coefficient level") {
  const double d1 = 0.7;
  const double d2 = 1.2;
  const double g = 0.3;
  CHECK(max_coefficient_difference(dual_quadratic(build_dimer({DimerKind::DBS, d1, d2, g}), 0, 0.0),
                                   build_dimer({DimerKind::P, d1, d2, g}).with_constant(-d1)) == 0.0);
  CHECK(max_coefficient_difference(dual_quadratic(build_dimer({DimerKind::BS, d1, d2, g}), 0, 0.0),
                                   build_dimer({DimerKind::DP, d1, d2, g}).with_constant(-d1)) == 0.0);
}

TEST_CASE("BST flow matches the diagonalized ring oracle") {
  const VectorXd t = grid(6.0, 601);
  for (double flux : {-kPi / 2, 0.0, 1.0, kPi / 2}) {
    const FlowTrace tr = chiral_flow(TrimerSpec::with_flux(TrimerKind::BST, flux), t);
    const MatrixXd o = ring_oracle(1.0, flux / 3, flux / 3, flux / 3, t);
    CHECK((tr.populations - o).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(tr.max_population_drift < 1e-12);
  }
}

TEST_CASE("chirality reverses with the flux") {
  const VectorXd t = grid(6.0, 6001);
  CHECK(order_string(chiral_flow(TrimerSpec::with_flux(TrimerKind::BST, -kPi / 2), t).order) ==
        "1->2->3");
  CHECK(order_string(chiral_flow(TrimerSpec::with_flux(TrimerKind::BST, kPi / 2), t).order) ==
        "1->3->2");
  // Gauge choice does not affect populations.
  const FlowTrace a = chiral_flow(TrimerSpec::with_flux(TrimerKind::BST, -kPi / 2), t);
  const FlowTrace b = chiral_flow(
      TrimerSpec::with_flux(TrimerKind::BST, -kPi / 2, 1.0, GaugeStyle::Concentrated), t);
  CHECK((a.populations - b.populations).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("p1 revival period is 2 pi / (sqrt3 g)") {
  for (double g : {0.5, 1.0, 2.0}) {
    const double T = revival_period(TrimerSpec::with_flux(TrimerKind::BST, -kPi / 2, g));
    CHECK(std::abs(T - 2.0 * kPi / (std::sqrt(3.0) * g)) < 1e-6);
  }
}

TEST_CASE("time reversal symmetry at zero and pi flux only") {
  const VectorXd t = grid(10.0, 1001);
  for (double flux : {0.0, kPi})
    CHECK(time_reversal_check(TrimerSpec::with_flux(TrimerKind::BST, flux), t).max_asymmetry <
          1e-9);
  CHECK_FALSE(time_reversal_check(TrimerSpec::with_flux(TrimerKind::BST, -kPi / 2), t).symmetric);
  CHECK_THROWS_AS(
      time_reversal_check(
          TrimerSpec::with_flux(TrimerKind::BST, 0.0, 1.0, GaugeStyle::Concentrated), t),
      ValidationError);
}

TEST_CASE("SHT hole-frame traces equal BST traces") {
  const VectorXd t = grid(6.0, 301);
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> ph(-3.0, 3.0);
  for (int k = 0; k < 10; ++k) {
    TrimerSpec bst;
    bst.phi12 = ph(rng);
    bst.phi23 = ph(rng);
    bst.phi31 = ph(rng);
    bst.g = 0.8;
    TrimerSpec sht = bst;
    sht.kind = TrimerKind::SHT;
    sht.delta = 0.5 * (k % 3);
    sht.theta = ph(rng);
    const MatrixXc bb = single_excitation_block(build_trimer(bst).form, build_trimer(bst).frames);
    const Trimer s = build_trimer(sht);
    CHECK(s.frames[0].is_hole());
    // The detuning becomes a uniform energy shift in the hole frame.
    const MatrixXc shifted = bb + sht.delta * MatrixXc::Identity(3, 3);
    CHECK(max_abs(MatrixXc(single_excitation_block(s.form, s.frames) - shifted)) < 1e-12);
    CHECK((chiral_flow(sht, t).populations - chiral_flow(bst, t).populations)
              .cwiseAbs()
              .maxCoeff() < 1e-9);
  }
}

TEST_CASE("SHT equals the dual of the BST on node 1") {
  TrimerSpec bst = TrimerSpec::with_flux(TrimerKind::BST, 0.9);
  TrimerSpec sht = bst;
  sht.kind = TrimerKind::SHT;
  sht.theta = 0.4;
  const QuadraticForm dual = dual_quadratic(build_trimer(bst).form, 0, 0.4);
  CHECK(max_coefficient_difference(dual, build_trimer(sht).form) < 1e-15);
}

TEST_CASE("single excitation block requires number conservation in the frame") {
  const QuadraticForm p = build_dimer({DimerKind::P, 1, 1, 0.5});
  CHECK_THROWS_AS(single_excitation_block(p, {FrameTag::particle(), FrameTag::particle()}),
                  ValidationError);
  const MatrixXc b = single_excitation_block(p, {FrameTag::hole(0.0), FrameTag::particle()});
  CHECK(b.rows() == 2);
}

TEST_CASE("hole loop flux is pi minus the particle flux (property)") {
  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> ph(-kPi, kPi);
  for (int k = 0; k < 50; ++k) {
    TrimerSpec t;
    t.phi12 = ph(rng);
    t.phi23 = ph(rng);
    t.phi31 = ph(rng);
    const FluxDualReport r = hole_loop_flux_check(t);
    CHECK(r.deviation < 1e-12);
    CHECK(std::abs(wrap_phase(r.flux - t.flux())) < 1e-12);
  }
}

TEST_CASE("Bell fidelity follows the closed form") {
  // Oracle: the single-excitation block of DBS is [[D, i g], [i g, D]],
  // evolved from (0, 1) and normalized.
  const double delta = 0.3;
  const double g = 0.5;
  for (double t : {0.0, 0.5, 1.0, 2.0, 5.0}) {
    const BellReport r = bell_evolution(delta, g, t);
    MatrixXc B(2, 2);
    B << delta, kI * g, kI * g, delta;
    VectorXc v(2);
    v << 0.0, 1.0;
    VectorXc psi = MatrixXc(-kI * t * B).exp() * v;
    const double log_n = std::log(psi.norm());
    psi.normalize();
    const double oracle = std::norm((psi[0] + psi[1]) / std::sqrt(2.0));
    CHECK(std::abs(r.fidelity - oracle) < 1e-8);
    CHECK(std::abs(r.fidelity - r.closed_form) < 1e-8);
    CHECK(std::abs(r.log_norm - log_n) < 1e-8);
  }
  CHECK(bell_evolution(1.0, 1.0, 2.5).fidelity >= 0.9999);
}
