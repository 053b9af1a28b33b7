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
#include "qbh/lindblad_engine.hpp"

using namespace qbh;

namespace {

DissipativeModel loss(double delta, double lambda, double gamma) {
  return {delta, lambda, {{Jump::Loss, gamma}}};
}

DissipativeModel pump(double delta, double lambda, double gamma) {
  return {delta, lambda, {{Jump::Pump, gamma}}};
}

MatrixXc random_density(std::mt19937_64& rng, Index d) {
  std::normal_distribution<double> nd;
  MatrixXc A(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) A(i, j) = cplx(nd(rng), nd(rng));
  MatrixXc rho = A * A.adjoint();
  return rho / rho.trace();
}

// Mean-field oracle: d<a>/dt = -(i Delta + gamma/2) <a> - i lambda, integrated
// by RK4 from 0 to a long time.
cplx mean_field_oracle(double delta, double lambda, double gamma) {
  auto f = [&](cplx x) { return -(kI * delta + 0.5 * gamma) * x - kI * lambda; };
  cplx x = 0.0;
  const double h = 1e-2;
  for (int s = 0; s < 20000; ++s) {
    const cplx k1 = f(x);
    const cplx k2 = f(x + 0.5 * h * k1);
    const cplx k3 = f(x + 0.5 * h * k2);
    const cplx k4 = f(x + h * k3);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return x;
}

}  // namespace

TEST_CASE("model validation") {
  CHECK_THROWS_AS(DissipativeModel({0.0, 1.0, {}}).validate(), ValidationError);
  CHECK_THROWS_AS(loss(0.0, 1.0, -1.0).validate(), ValidationError);
  CHECK_THROWS_AS(loss(NAN, 1.0, 1.0).validate(), ValidationError);
  CHECK_THROWS_AS(pump_fixed_point(loss(0, 1, 1)), ValidationError);
  CHECK_THROWS_AS(loss_fixed_point(pump(0, 1, 1)), ValidationError);
}

TEST_CASE("loss fixed point agrees with the integrated mean-field equation") {
  for (double delta : {-1.0, 0.0, 0.5})
    for (double gamma : {0.5, 1.0, 2.0}) {
      const cplx abar = loss_fixed_point(loss(delta, 1.0, gamma));
      CHECK(std::abs(abar - mean_field_oracle(delta, 1.0, gamma)) < 1e-9);
    }
}

TEST_CASE("pump fixed point formula") {
  const cplx abar = pump_fixed_point(pump(0.0, 1.0, 2.0));
  CHECK(std::abs(abar - kI) < 1e-15);
  CHECK(moment_abscissa(pump(0.0, 1.0, 2.0)) == 2.0);
  CHECK(moment_abscissa(loss(0.0, 1.0, 2.0)) == -2.0);
}

TEST_CASE("liouvillian preserves trace and Hermiticity (property)") {
  std::mt19937_64 rng(41);
  for (const DissipativeModel& m :
       {loss(0.3, 1.0, 1.0), pump(-0.5, 0.7, 0.8),
        DissipativeModel{0.2, cplx(0.4, 0.1), {{Jump::Loss, 1.0}, {Jump::Pump, 0.3}}}}) {
    const FockBasis b({12});
    const SparseMatrixXc L = liouvillian(m, b);
    for (int k = 0; k < 5; ++k) {
      const MatrixXc rho = random_density(rng, 13);
      const MatrixXc out = unvec(L * vec(rho), 13);
      CHECK(std::abs(out.trace()) < 1e-12);
      CHECK(max_abs(MatrixXc(out - out.adjoint())) < 1e-12);
      CHECK(max_abs(MatrixXc(out - apply_liouvillian(m, b, rho))) < 1e-12);
    }
  }
}

TEST_CASE("vec and unvec are inverse, column stacked") {
  MatrixXc r(2, 2);
  r << 1, 2, 3, 4;
  const VectorXc v = vec(r);
  CHECK(v[1] == cplx(3.0));
  CHECK(unvec(v, 2) == r);
}

TEST_CASE("loss steady state is the coherent fixed point on a 3x3 grid") {
  for (double delta : {-1.0, 0.0, 1.0})
    for (double gamma : {0.5, 1.0, 2.0}) {
      const DissipativeModel m = loss(delta, 1.0, gamma);
      const SteadyStateReport r = loss_steady_state_report(m);
      CHECK(r.fidelity >= 1.0 - 1e-8);
      CHECK(std::abs(r.mean_a - r.abar) < 1e-8);
      CHECK(std::abs(r.mean_n - std::norm(r.abar)) < 1e-7);
      CHECK(r.cutoff >= adequate_cutoff(r.abar));
    }
}

TEST_CASE("steady state solver returns a unit-trace null vector") {
  const DissipativeModel m = loss(0.5, 1.0, 1.0);
  const FockBasis b({adequate_cutoff(loss_fixed_point(m))});
  const SteadyState s = steady_state(m, b);
  CHECK(std::abs(s.trace - 1.0) < 1e-12);
  CHECK(s.residual < 1e-10);
  CHECK(max_abs(MatrixXc(s.rho - s.rho.adjoint())) < 1e-10);
}

TEST_CASE("time integration approaches the steady state") {
  const DissipativeModel m = loss(0.0, 0.5, 2.0);
  const FockBasis b({12});
  MatrixXc rho0 = MatrixXc::Zero(13, 13);
  rho0(0, 0) = 1.0;
  const MatrixXc rho = integrate(liouvillian(m, b), rho0, 20.0, 0.01);
  const VectorXc c = coherent_state(b, loss_fixed_point(m));
  CHECK(std::abs(c.dot(rho * c) - 1.0) < 1e-8);
}

TEST_CASE("pump-only model has no normalizable steady state") {
  const DissipativeModel m = pump(0.0, 1.0, 2.0);
  try {
    steady_state(m, FockBasis({20}));
    FAIL("expected NoSteadyStateError");
  } catch (const NoSteadyStateError& e) {
    CHECK(e.abscissa() == 2.0);
  }
}

TEST_CASE("pump similarity residual vanishes exactly at the pump fixed point") {
  const DissipativeModel m = pump(0.0, 1.0, 2.0);
  CHECK(pump_similarity_residual(m, pump_fixed_point(m)) < 1e-14);
  CHECK(pump_similarity_residual(m, -kI) > 0.1);
  const DissipativeModel d = pump(0.7, 0.5, 1.3);
  CHECK(pump_similarity_residual(d, pump_fixed_point(d), 0.4) < 1e-14);
  CHECK(pump_similarity_residual(d, pump_fixed_point(d) * 1.01, 0.4) > 1e-4);
}

TEST_CASE("pump formal residual grows with the cutoff") {
  // Explicit truncated Omega diverges, so the candidate's interior residual
  // increases instead of decreasing.
  const PumpResidualReport r = pump_formal_residual(pump(0.0, 1.0, 2.0), {20, 30, 40});
  REQUIRE(r.table.size() == 3);
  CHECK_FALSE(r.decreasing);
  CHECK(r.table[1].residual > r.table[0].residual);
  CHECK(r.table[2].residual > r.table[1].residual);
  CHECK(r.similarity_residual < 1e-14);
}
