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

#include "qbh/gaussian_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace qbh {

MatrixXd symplectic_form(Index n_modes) {
  MatrixXd J = MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (Index j = 0; j < n_modes; ++j) {
    J(2 * j, 2 * j + 1) = 1.0;
    J(2 * j + 1, 2 * j) = -1.0;
  }
  return J;
}

MatrixXc quadrature_transform(Index n) {
  const double s = 1.0 / std::sqrt(2.0);
  MatrixXc T = MatrixXc::Zero(2 * n, 2 * n);
  for (Index j = 0; j < n; ++j) {
    T(j, 2 * j) = s;
    T(j, 2 * j + 1) = kI * s;
    T(n + j, 2 * j) = s;
    T(n + j, 2 * j + 1) = -kI * s;
  }
  return T;
}

SymplecticGenerator generator_from_quadratic(const QuadraticForm& q) {
  if (!q.is_hermitian())
    throw ValidationError(
        "generator_from_quadratic: form is not Hermitian; map it to its Hermitian dual first");
  const Index n = q.n_modes();
  const MatrixXc T = quadrature_transform(n);
  const MatrixXc Gc = T.inverse() * (-kI * build_bdg(q).h) * T;
  if (max_abs(Gc.imag()) > 1e-12 * std::max(1.0, max_abs(Gc)))
    throw NumericalError("generator_from_quadratic: quadrature generator is not real");
  return {Gc.real()};
}

MatrixXd quadrature_hamiltonian(const QuadraticForm& q) {
  const SymplecticGenerator g = generator_from_quadratic(q);
  const MatrixXd K = -symplectic_form(q.n_modes()) * g.G;
  return 0.5 * (K + K.transpose());
}

MatrixXd symplectic_propagator(const SymplecticGenerator& g, double t) {
  return MatrixXd(g.G * t).exp();
}

GaussianState evolve(const GaussianState& s, const SymplecticGenerator& g, double t) {
  const MatrixXd S = symplectic_propagator(g, t);
  GaussianState out;
  out.mean = S * s.mean;
  out.cov = S * s.cov * S.transpose();
  out.cov = (0.5 * (out.cov + out.cov.transpose())).eval();
  return out;
}

GaussianState vacuum_state(Index n_modes) {
  return {VectorXd::Zero(2 * n_modes), 0.5 * MatrixXd::Identity(2 * n_modes, 2 * n_modes)};
}

GaussianState tmsv(double r) {
  const double c = std::cosh(2.0 * r);
  const double s = std::sinh(2.0 * r);
  GaussianState st = vacuum_state(2);
  st.cov << c, 0, s, 0,
            0, c, 0, -s,
            s, 0, c, 0,
            0, -s, 0, c;
  st.cov *= 0.5;
  return st;
}

double uncertainty_margin(const GaussianState& s) {
  const MatrixXc A = s.cov.cast<cplx>() + 0.5 * kI * symplectic_form(s.n_modes()).cast<cplx>();
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(0.5 * (A + A.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

VectorXd symplectic_eigenvalues(const MatrixXd& cov) {
  const Index n = cov.rows() / 2;
  const MatrixXc A = kI * (symplectic_form(n) * cov).cast<cplx>();
  Eigen::ComplexEigenSolver<MatrixXc> es(A, false);
  std::vector<double> mags;
  for (Index k = 0; k < A.rows(); ++k) mags.push_back(std::abs(es.eigenvalues()[k]));
  std::sort(mags.begin(), mags.end());
  VectorXd nu(n);
  // Eigenvalues come in pairs +-nu.
  for (Index k = 0; k < n; ++k) nu[k] = 0.5 * (mags[2 * k] + mags[2 * k + 1]);
  return nu;
}

double log_negativity(const GaussianState& s, const std::vector<Index>& partition, LogBase base) {
  const Index n = s.n_modes();
  if (s.cov.rows() != 2 * n || s.cov.cols() != 2 * n)
    throw ValidationError("log_negativity: covariance size does not match the mean");
  if (partition.empty()) throw ValidationError("log_negativity: empty partition");
  std::vector<bool> in(n, false);
  for (Index m : partition) {
    if (m < 0 || m >= n || in[m]) throw ValidationError("log_negativity: invalid partition");
    in[m] = true;
  }
  if (max_abs(MatrixXd(s.cov - s.cov.transpose())) > 1e-10)
    throw ValidationError("log_negativity: covariance is not symmetric");
  if (uncertainty_margin(s) < -1e-10)
    throw ValidationError("log_negativity: covariance violates the uncertainty relation");
  VectorXd flip = VectorXd::Ones(2 * n);
  for (Index m = 0; m < n; ++m)
    if (in[m]) flip[2 * m + 1] = -1.0;
  const MatrixXd pt = flip.asDiagonal() * s.cov * flip.asDiagonal();
  const VectorXd nu = symplectic_eigenvalues(pt);
  double en = 0.0;
  for (Index k = 0; k < nu.size(); ++k) en += std::max(0.0, -std::log(2.0 * nu[k]));
  return base == LogBase::Two ? en / std::log(2.0) : en;
}

GaussianState ground_state(const QuadraticForm& q) {
  if (!q.is_hermitian()) throw ValidationError("ground_state: form is not Hermitian");
  const DynamicalMatrix d = build_bdg(q);
  const SpectrumReport sp = spectrum(d);
  if (sp.regime != Regime::Real) {
    Index worst = 0;
    sp.eigenvalues.imag().cwiseAbs().maxCoeff(&worst);
    std::ostringstream msg;
    msg << "ground_state: unstable form, complex BdG eigenvalue " << sp.eigenvalues[worst];
    throw ValidationError(msg.str());
  }
  const Index n = q.n_modes();
  const MatrixXd K = quadrature_hamiltonian(q);
  Eigen::SelfAdjointEigenSolver<MatrixXd> ek(K);
  if (ek.eigenvalues().minCoeff() <= 1e-12 * std::max(1.0, ek.eigenvalues().cwiseAbs().maxCoeff())) {
    Index k = 0;
    VectorXd pos = sp.eigenvalues.real();
    pos.cwiseAbs().minCoeff(&k);
    std::ostringstream msg;
    msg << "ground_state: Hamiltonian is not bounded below (BdG eigenvalue "
        << sp.eigenvalues[k] << ")";
    throw ValidationError(msg.str());
  }
  const MatrixXd Kh = ek.operatorSqrt();
  const MatrixXd Kih = ek.operatorInverseSqrt();
  const MatrixXd M = Kh * symplectic_form(n) * Kh;
  Eigen::SelfAdjointEigenSolver<MatrixXd> em(M.transpose() * M);
  GaussianState g;
  g.mean = VectorXd::Zero(2 * n);
  g.cov = 0.5 * Kih * em.operatorSqrt() * Kih;
  g.cov = (0.5 * (g.cov + g.cov.transpose())).eval();
  return g;
}

double pairing_squeezing(double delta, double g) {
  if (!(std::abs(g) < std::abs(delta)))
    throw ValidationError("pairing_squeezing: requires |g| < |Delta|");
  return 0.5 * std::atanh(g / delta);
}

double fock_log_negativity(const VectorXc& psi, Index cutoff0, Index cutoff1) {
  if (psi.size() != (cutoff0 + 1) * (cutoff1 + 1))
    throw ValidationError("fock_log_negativity: state size does not match the cutoffs");
  const MatrixXc C = Eigen::Map<const MatrixXc>(psi.data(), cutoff0 + 1, cutoff1 + 1) / psi.norm();
  Eigen::JacobiSVD<MatrixXc> svd(C);
  return 2.0 * std::log(svd.singularValues().sum());
}

DualFrameEntanglement dual_frame_entanglement(const QuadraticForm& q, Index mode, double theta,
                                              EntanglementScenario scenario, double t) {
  DualFrameEntanglement rep;
  if (q.is_hermitian()) {
    rep.physical = q;
    rep.dual = dual_quadratic(q, mode, theta);
  } else {
    rep.dual = q;
    rep.physical = dual_quadratic(q, mode, theta);
    if (!rep.physical.is_hermitian(1e-10))
      throw ValidationError(
          "dual_frame_entanglement: neither the form nor its dual on this mode is Hermitian");
    rep.physical = QuadraticForm(rep.physical.M(), rep.physical.P(), rep.physical.P().conjugate(),
                                 rep.physical.c0().real());
  }
  rep.dual_frames.assign(q.n_modes(), FrameTag::particle());
  rep.dual_frames[mode] = FrameTag::hole(theta);

  std::vector<Index> part{mode};
  GaussianState st;
  if (scenario == EntanglementScenario::Ground) {
    st = ground_state(rep.physical);
  } else {
    st = evolve(vacuum_state(q.n_modes()), generator_from_quadratic(rep.physical), t);
  }
  rep.physical_en = log_negativity(st, part);
  rep.ph_en = rep.physical_en;
  return rep;
}

}  // namespace qbh
