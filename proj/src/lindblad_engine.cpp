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

#include "qbh/lindblad_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SparseLU>

#include "qbh/ladder_algebra.hpp"

namespace qbh {

void DissipativeModel::validate() const {
  if (!std::isfinite(detuning) || !std::isfinite(drive.real()) || !std::isfinite(drive.imag()))
    throw ValidationError("DissipativeModel: detuning and drive must be finite");
  if (channels.empty()) throw ValidationError("DissipativeModel: at least one channel required");
  for (const Channel& c : channels)
    if (!(c.rate > 0.0) || !std::isfinite(c.rate))
      throw ValidationError("DissipativeModel: channel rates must be positive");
}

double DissipativeModel::rate(Jump j) const {
  double r = 0.0;
  for (const Channel& c : channels)
    if (c.jump == j) r += c.rate;
  return r;
}

cplx loss_fixed_point(const DissipativeModel& m) {
  m.validate();
  if (m.rate(Jump::Pump) > 0.0) throw ValidationError("loss_fixed_point: model has a pump channel");
  return -kI * m.drive / (0.5 * m.rate(Jump::Loss) + kI * m.detuning);
}

cplx pump_fixed_point(const DissipativeModel& m) {
  m.validate();
  if (m.rate(Jump::Loss) > 0.0) throw ValidationError("pump_fixed_point: model has a loss channel");
  return kI * m.drive / (0.5 * m.rate(Jump::Pump) - kI * m.detuning);
}

Index adequate_cutoff(cplx abar) {
  const double r = std::abs(abar);
  return static_cast<Index>(std::ceil(r * r + 10.0 * r + 10.0));
}

double moment_abscissa(const DissipativeModel& m) {
  m.validate();
  // d<n>/dt = -(gamma_loss - gamma_pump) <n> + gamma_pump + drive terms.
  return m.rate(Jump::Pump) - m.rate(Jump::Loss);
}

MatrixXc drive_hamiltonian(const DissipativeModel& m, const FockBasis& basis) {
  if (basis.n_modes() != 1) throw ValidationError("liouvillian: single-mode basis required");
  const MatrixXc a = ladder_matrix(basis, 0);
  const MatrixXc ad = a.adjoint();
  return m.detuning * ad * a + m.drive * ad + std::conj(m.drive) * a;
}

namespace {

SparseMatrixXc kron(const SparseMatrixXc& A, const SparseMatrixXc& B) {
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(static_cast<std::size_t>(A.nonZeros() * B.nonZeros()));
  for (Index ka = 0; ka < A.outerSize(); ++ka)
    for (SparseMatrixXc::InnerIterator ia(A, ka); ia; ++ia)
      for (Index kb = 0; kb < B.outerSize(); ++kb)
        for (SparseMatrixXc::InnerIterator ib(B, kb); ib; ++ib)
          trip.emplace_back(ia.row() * B.rows() + ib.row(), ia.col() * B.cols() + ib.col(),
                            ia.value() * ib.value());
  SparseMatrixXc K(A.rows() * B.rows(), A.cols() * B.cols());
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

SparseMatrixXc sparse_identity(Index n) {
  SparseMatrixXc I(n, n);
  I.setIdentity();
  return I;
}

}  // namespace

SparseMatrixXc liouvillian(const DissipativeModel& m, const FockBasis& basis) {
  m.validate();
  const Index d = basis.dim();
  if (d > 5000) throw ValidationError("liouvillian: dimension limit exceeded");
  const SparseMatrixXc H = drive_hamiltonian(m, basis).sparseView();
  const SparseMatrixXc a = ladder_matrix(basis, 0).sparseView();
  const SparseMatrixXc I = sparse_identity(d);
  SparseMatrixXc L = -kI * (kron(I, H) - kron(SparseMatrixXc(H.transpose()), I));
  for (const Channel& c : m.channels) {
    const SparseMatrixXc z = c.jump == Jump::Loss ? a : SparseMatrixXc(a.adjoint());
    const SparseMatrixXc zdz = SparseMatrixXc(z.adjoint()) * z;
    L += (0.5 * c.rate) * (2.0 * kron(SparseMatrixXc(z.conjugate()), z) - kron(I, zdz) -
                           kron(SparseMatrixXc(zdz.transpose()), I));
  }
  L.makeCompressed();
  return L;
}

MatrixXc apply_liouvillian(const DissipativeModel& m, const FockBasis& basis, const MatrixXc& rho) {
  m.validate();
  const MatrixXc H = drive_hamiltonian(m, basis);
  const MatrixXc a = ladder_matrix(basis, 0);
  MatrixXc out = -kI * (H * rho - rho * H);
  for (const Channel& c : m.channels) {
    const MatrixXc z = c.jump == Jump::Loss ? a : MatrixXc(a.adjoint());
    const MatrixXc zdz = z.adjoint() * z;
    out += (0.5 * c.rate) * (2.0 * z * rho * z.adjoint() - zdz * rho - rho * zdz);
  }
  return out;
}

MatrixXc unvec(const VectorXc& v, Index dim) { return Eigen::Map<const MatrixXc>(v.data(), dim, dim); }

VectorXc vec(const MatrixXc& rho) { return Eigen::Map<const VectorXc>(rho.data(), rho.size()); }

MatrixXc integrate(const SparseMatrixXc& L, const MatrixXc& rho0, double t, double dt) {
  if (!(dt > 0.0)) throw ValidationError("integrate: dt must be positive");
  const Index dim = rho0.rows();
  VectorXc y = vec(rho0);
  const Index steps = std::max<Index>(1, static_cast<Index>(std::ceil(t / dt)));
  const double h = t / static_cast<double>(steps);
  for (Index s = 0; s < steps; ++s) {
    const VectorXc k1 = L * y;
    const VectorXc k2 = L * (y + 0.5 * h * k1);
    const VectorXc k3 = L * (y + 0.5 * h * k2);
    const VectorXc k4 = L * (y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  MatrixXc rho = unvec(y, dim);
  // The generator maps Hermitian operators to Hermitian operators.
  return 0.5 * (rho + rho.adjoint());
}

SteadyState steady_state(const SparseMatrixXc& L, Index dim) {
  if (L.rows() != dim * dim || L.cols() != dim * dim)
    throw ValidationError("steady_state: superoperator size does not match dim^2");
  const Index n = dim * dim;
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(static_cast<std::size_t>(L.nonZeros() + dim));
  for (Index k = 0; k < L.outerSize(); ++k)
    for (SparseMatrixXc::InnerIterator it(L, k); it; ++it)
      if (it.row() != 0) trip.emplace_back(it.row(), it.col(), it.value());
  for (Index i = 0; i < dim; ++i) trip.emplace_back(0, i + i * dim, 1.0);
  SparseMatrixXc A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  VectorXc rhs = VectorXc::Zero(n);
  rhs[0] = 1.0;

  SteadyState ss;
  Eigen::SparseLU<SparseMatrixXc> lu;
  lu.compute(A);
  VectorXc x;
  if (lu.info() == Eigen::Success) {
    x = lu.solve(rhs);
    ss.method = "null-space";
  }
  if (lu.info() != Eigen::Success || !x.allFinite() || max_abs(L * x) > 1e-10) {
    double norm1 = 0.0;
    for (Index k = 0; k < L.outerSize(); ++k) {
      double col = 0.0;
      for (SparseMatrixXc::InnerIterator it(L, k); it; ++it) col += std::abs(it.value());
      norm1 = std::max(norm1, col);
    }
    const double dt = 1.0 / std::max(1.0, norm1);
    MatrixXc rho = MatrixXc::Identity(dim, dim) / static_cast<double>(dim);
    if (x.size() == n && x.allFinite()) rho = unvec(x, dim);
    bool done = false;
    for (int chunk = 0; chunk < 2000 && !done; ++chunk) {
      rho = integrate(L, rho, 200.0 * dt, dt);
      rho /= rho.trace();
      done = max_abs(L * vec(rho)) < 1e-10;
    }
    if (!done) throw NumericalError("steady_state: time integration did not reach |L rho| < 1e-10");
    x = vec(rho);
    ss.method = "time-integration";
  }
  ss.rho = unvec(x, dim);
  ss.trace = ss.rho.trace();
  ss.rho /= ss.trace;
  ss.residual = max_abs(L * vec(ss.rho));
  return ss;
}

SteadyState steady_state(const DissipativeModel& m, const FockBasis& basis) {
  const double abscissa = moment_abscissa(m);
  if (abscissa >= 0.0) {
    std::ostringstream msg;
    msg << "steady_state: no normalizable steady state (moment growth rate " << abscissa << ")";
    throw NoSteadyStateError(msg.str(), abscissa);
  }
  return steady_state(liouvillian(m, basis), basis.dim());
}

VectorXc coherent_state(const FockBasis& basis, cplx alpha) {
  if (basis.n_modes() != 1) throw ValidationError("coherent_state: single-mode basis required");
  VectorXc v(basis.dim());
  v[0] = 1.0;
  for (Index n = 1; n < basis.dim(); ++n) v[n] = v[n - 1] * alpha / std::sqrt(double(n));
  return v / v.norm();
}

SteadyStateReport loss_steady_state_report(const DissipativeModel& m, Index min_cutoff) {
  SteadyStateReport rep;
  rep.abar = loss_fixed_point(m);
  rep.cutoff = std::max(adequate_cutoff(rep.abar), min_cutoff);
  const FockBasis basis({rep.cutoff});
  const SteadyState ss = steady_state(m, basis);
  const MatrixXc a = ladder_matrix(basis, 0);
  rep.mean_n = (ss.rho * a.adjoint() * a).trace().real();
  rep.mean_a = (ss.rho * a).trace();
  const VectorXc alpha = coherent_state(basis, rep.abar);
  rep.fidelity = alpha.dot(ss.rho * alpha).real();
  rep.residual = ss.residual;
  return rep;
}

PumpResidualReport pump_formal_residual(const DissipativeModel& m,
                                        const std::vector<Index>& cutoffs, double theta) {
  PumpResidualReport rep;
  rep.abar = pump_fixed_point(m);
  for (Index c : cutoffs) {
    const FockBasis basis({c});
    const OmegaMatrix om = omega_matrix(c, theta);
    const MatrixXc D = displacement_matrix(basis, 0, rep.abar);
    // D is exactly unitary in truncation, so <0|Omega D^-1 = (D Omega |0>)^dag.
    const VectorXc right = D * om.omega_inv.col(0);
    const VectorXc left = D * om.omega.col(0);
    const MatrixXc rho = right * left.adjoint();
    PumpResidualRow row;
    row.cutoff = c;
    row.trace = rho.trace();
    row.condition = om.condition;
    row.residual = interior_max_abs(apply_liouvillian(m, basis, rho),
                                    basis.interior_indices(basis.default_interior()));
    rep.table.push_back(row);
  }
  rep.decreasing = rep.table.size() >= 2;
  for (std::size_t k = 1; k < rep.table.size(); ++k)
    if (!(rep.table[k].residual < rep.table[k - 1].residual)) rep.decreasing = false;
  rep.similarity_residual = pump_similarity_residual(m, rep.abar, theta);
  return rep;
}

double pump_similarity_residual(const DissipativeModel& m, cplx abar, double theta) {
  m.validate();
  using LP = LadderPolynomial;
  const LP a = LP::annihilator(1, 0);
  const LP ad = LP::creator(1, 0);
  const LP H = cplx(m.detuning) * (ad * a) + m.drive * ad + std::conj(m.drive) * a;
  // W^-1 O W for W = D(abar) Omega^-1: displace, then the hole-frame map.
  auto frame = [&](const LP& o) {
    return ph_substitute(displace(o, 0, abar), 0, theta, Direction::Inverse);
  };
  const LP h2 = frame(H);
  struct Term {
    double rate;
    LP z, zd, zdz;
  };
  std::vector<Term> terms;
  for (const Channel& c : m.channels) {
    const LP z = c.jump == Jump::Loss ? a : ad;
    const LP zd = z.adjoint();
    terms.push_back({c.rate, frame(z), frame(zd), frame(zd * z)});
  }
  auto el = [](const LP& o, int j, int k) { return fock_expectation(o, {j}, {k}); };
  const int top = 2 * std::max(2, h2.degree());
  double worst = 0.0;
  for (int j = 0; j <= top; ++j)
    for (int k = 0; k <= top; ++k) {
      // sigma = |0><0|: <j|A sigma B|k> = <j|A|0><0|B|k>.
      cplx v = -kI * (el(h2, j, 0) * double(k == 0) - double(j == 0) * el(h2, 0, k));
      for (const Term& t : terms)
        v += 0.5 * t.rate *
             (2.0 * el(t.z, j, 0) * el(t.zd, 0, k) - el(t.zdz, j, 0) * double(k == 0) -
              double(j == 0) * el(t.zdz, 0, k));
      worst = std::max(worst, std::abs(v));
    }
  return worst;
}

}  // namespace qbh
