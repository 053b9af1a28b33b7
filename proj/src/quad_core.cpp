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

#include "qbh/quad_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qbh {

QuadraticForm::QuadraticForm(MatrixXc M, MatrixXc P, MatrixXc Q, cplx c0)
    : M_(std::move(M)), P_(std::move(P)), Q_(std::move(Q)), c0_(c0) {
  const Index n = M_.rows();
  if (n < 1 || M_.cols() != n || P_.rows() != n || P_.cols() != n || Q_.rows() != n ||
      Q_.cols() != n) {
    std::ostringstream msg;
    msg << "QuadraticForm: dimension mismatch (M " << M_.rows() << "x" << M_.cols() << ", P "
        << P_.rows() << "x" << P_.cols() << ", Q " << Q_.rows() << "x" << Q_.cols() << ")";
    throw ValidationError(msg.str());
  }
  // Only the symmetric parts of P and Q contribute to the operator.
  MatrixXc ps = 0.5 * (P_ + P_.transpose());
  MatrixXc qs = 0.5 * (Q_ + Q_.transpose());
  P_ = std::move(ps);
  Q_ = std::move(qs);
}

QuadraticForm QuadraticForm::zero(Index n_modes) {
  return {MatrixXc::Zero(n_modes, n_modes), MatrixXc::Zero(n_modes, n_modes),
          MatrixXc::Zero(n_modes, n_modes), 0.0};
}

QuadraticForm QuadraticForm::hermitian(const MatrixXc& A, const MatrixXc& B, double c0) {
  return {A, B, B.conjugate(), c0};
}

bool QuadraticForm::is_hermitian(double tol) const {
  return max_abs(M_ - M_.adjoint()) <= tol && max_abs(Q_ - P_.conjugate()) <= tol &&
         std::abs(c0_.imag()) <= tol;
}

QuadraticForm operator+(const QuadraticForm& a, const QuadraticForm& b) {
  if (a.n_modes() != b.n_modes()) throw ValidationError("QuadraticForm sum: mode count mismatch");
  return {a.M_ + b.M_, a.P_ + b.P_, a.Q_ + b.Q_, a.c0_ + b.c0_};
}

QuadraticForm operator*(cplx s, const QuadraticForm& q) {
  return {s * q.M_, s * q.P_, s * q.Q_, s * q.c0_};
}

bool operator==(const QuadraticForm& a, const QuadraticForm& b) {
  return a.n_modes() == b.n_modes() && a.M_ == b.M_ && a.P_ == b.P_ && a.Q_ == b.Q_ &&
         a.c0_ == b.c0_;
}

double max_coefficient_difference(const QuadraticForm& a, const QuadraticForm& b) {
  if (a.n_modes() != b.n_modes()) return std::numeric_limits<double>::infinity();
  return std::max({max_abs(a.M() - b.M()), max_abs(a.P() - b.P()), max_abs(a.Q() - b.Q()),
                   std::abs(a.c0() - b.c0())});
}

QuadraticForm random_hermitian_form(std::mt19937_64& rng, Index n_modes, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  auto draw = [&](Index n) {
    MatrixXc m(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) m(i, j) = cplx(u(rng), u(rng));
    return m;
  };
  MatrixXc a = draw(n_modes);
  MatrixXc A = 0.5 * (a + a.adjoint());
  MatrixXc b = draw(n_modes);
  MatrixXc B = 0.5 * (b + b.transpose());
  return QuadraticForm::hermitian(A, B, u(rng));
}

DynamicalMatrix build_bdg(const QuadraticForm& q) {
  const Index n = q.n_modes();
  DynamicalMatrix d;
  d.n_modes = n;
  d.hermitian_source = q.is_hermitian();
  d.h.resize(2 * n, 2 * n);
  // Commutators [a_k, H] and [a_k^dag, H] row by row; negation is exact so
  // the symmetry identities hold bit-for-bit for Hermitian sources.
  d.h.topLeftCorner(n, n) = q.M();
  d.h.topRightCorner(n, n) = q.P();
  d.h.bottomLeftCorner(n, n) = -q.Q();
  d.h.bottomRightCorner(n, n) = -q.M().transpose();
  return d;
}

SymmetryReport check_symmetries(const DynamicalMatrix& d, double tol) {
  const Index n = d.n_modes;
  const MatrixXc t1 = tau(1, n);
  const MatrixXc t3 = tau(3, n);
  const MatrixXc& h = d.h;
  SymmetryReport r;
  r.pseudo_hermiticity = max_abs(t3 * h * t3 - h.adjoint());
  r.particle_hole = max_abs(t1 * h * t1 + h.conjugate());
  r.transposition = max_abs(t3 * t1 * h * t1 * t3 + h.transpose());
  r.pseudo_hermitian = r.pseudo_hermiticity < tol;
  r.ph_symmetric = r.particle_hole < tol;
  r.transposition_identity = r.transposition < tol;
  return r;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Real:
      return "Real";
    case Regime::Complex:
      return "Complex";
    case Regime::Mixed:
      return "Mixed";
  }
  return "?";
}

namespace {

double matrix_scale(const MatrixXc& h) { return std::max(1.0, max_abs(h)); }

bool is_representative(cplx e, double tol) {
  if (e.real() > tol) return true;
  if (e.real() < -tol) return false;
  return e.imag() >= 0.0;
}

}  // namespace

SpectrumReport spectrum(const DynamicalMatrix& d, double tol) {
  if (!(tol > 0.0)) throw ValidationError("spectrum: tol must be positive");
  Eigen::ComplexEigenSolver<MatrixXc> es(d.h);
  if (es.info() != Eigen::Success) throw NumericalError("spectrum: eigensolver did not converge");

  SpectrumReport rep;
  rep.tol = tol;
  rep.eigenvalues = es.eigenvalues();
  rep.eigenvectors = es.eigenvectors();
  const Index dim = rep.eigenvalues.size();
  for (Index k = 0; k < dim; ++k) rep.eigenvectors.col(k).normalize();

  const double pair_tol = std::max(tol, 1e-7 * matrix_scale(d.h));
  std::vector<bool> used(dim, false);
  for (Index i = 0; i < dim; ++i) {
    if (used[i]) continue;
    used[i] = true;
    Index best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < dim; ++j) {
      if (used[j]) continue;
      const double dist = std::abs(rep.eigenvalues[i] + rep.eigenvalues[j]);
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    if (best < 0 || best_dist > pair_tol) {
      std::ostringstream msg;
      msg << "spectrum: eigenvalue " << rep.eigenvalues[i]
          << " has no negated partner (matrix is not a BdG dynamical matrix)";
      throw PairingError(msg.str());
    }
    used[best] = true;
    if (is_representative(rep.eigenvalues[i], tol))
      rep.pairing.emplace_back(i, best);
    else
      rep.pairing.emplace_back(best, i);
  }

  bool any_real = false;
  bool any_complex = false;
  for (Index k = 0; k < dim; ++k) {
    const cplx e = rep.eigenvalues[k];
    if (std::abs(e) < tol) continue;  // forced zero modes never decide the regime
    if (std::abs(e.imag()) < tol)
      any_real = true;
    else
      any_complex = true;
  }
  rep.regime = any_complex ? (any_real ? Regime::Mixed : Regime::Complex) : Regime::Real;

  const MatrixXc t3 = tau(3, d.n_modes);
  rep.symplectic_norms.resize(dim);
  for (Index k = 0; k < dim; ++k) {
    const auto v = rep.eigenvectors.col(k);
    rep.symplectic_norms[k] = (v.adjoint() * t3 * v)(0, 0).real();
  }
  return rep;
}

namespace {

void check_not_defective(const MatrixXc& V, const VectorXc& values) {
  Eigen::JacobiSVD<MatrixXc> svd(V, Eigen::ComputeFullV);
  const VectorXd& s = svd.singularValues();
  const double ratio = s[s.size() - 1] / s[0];
  if (ratio < 1e-7) {
    const VectorXc w = svd.matrixV().col(V.cols() - 1);
    Index k = 0;
    w.cwiseAbs().maxCoeff(&k);
    std::ostringstream msg;
    msg << "quasimodes: eigenvector matrix is rank deficient (sigma_min/sigma_max = " << ratio
        << "); exceptional point at eigenvalue " << values[k];
    throw DefectiveSpectrumError(msg.str(), values[k]);
  }
}

}  // namespace

QuasiModeSet quasimodes(const DynamicalMatrix& d, const SpectrumReport& report) {
  const Index n = d.n_modes;
  const MatrixXc& V = report.eigenvectors;
  const VectorXc& vals = report.eigenvalues;
  check_not_defective(V, vals);

  const double scale = matrix_scale(d.h);
  const MatrixXc t3 = tau(3, n);
  const SymmetryReport sym = check_symmetries(d, 1e-10 * scale);

  QuasiModeSet set;
  set.regime = report.regime;

  if (report.regime == Regime::Real && sym.pseudo_hermitian) {
    // tau3-orthogonalize inside each cluster of equal eigenvalues; the
    // positive-norm vectors are the quasi-particles.
    set.normalization = Normalization::SymplecticUnit;
    const double cluster_tol = std::max(report.tol, 1e-7 * scale);
    std::vector<bool> done(vals.size(), false);
    for (Index i = 0; i < vals.size(); ++i) {
      if (done[i]) continue;
      std::vector<Index> idx;
      for (Index j = i; j < vals.size(); ++j)
        if (!done[j] && std::abs(vals[j] - vals[i]) < cluster_tol) {
          idx.push_back(j);
          done[j] = true;
        }
      MatrixXc Vc(V.rows(), static_cast<Index>(idx.size()));
      for (std::size_t k = 0; k < idx.size(); ++k) Vc.col(static_cast<Index>(k)) = V.col(idx[k]);
      MatrixXc G = Vc.adjoint() * t3 * Vc;
      G = 0.5 * (G + G.adjoint()).eval();
      Eigen::SelfAdjointEigenSolver<MatrixXc> ges(G);
      const MatrixXc rotated = Vc * ges.eigenvectors();
      for (Index k = 0; k < rotated.cols(); ++k) {
        const double g = ges.eigenvalues()[k];
        if (std::abs(g) < 1e-10) {
          throw DefectiveSpectrumError(
              "quasimodes: eigenvector with vanishing symplectic norm in the real regime",
              vals[idx[0]]);
        }
        if (g < 0.0) continue;
        VectorXc v = rotated.col(k) / std::sqrt(g);
        const cplx eps = (v.adjoint() * t3 * d.h * v)(0, 0);
        set.modes.push_back({cplx(eps.real(), 0.0), v, v});
      }
    }
    if (static_cast<Index>(set.modes.size()) != n) {
      throw PairingError("quasimodes: expected N positive-norm eigenvectors in the real regime");
    }
    return set;
  }

  set.normalization = Normalization::Biorthogonal;
  const MatrixXc L = V.fullPivLu().inverse();
  for (const auto& [rep, partner_index] : report.pairing) {
    (void)partner_index;
    VectorXc r = V.col(rep);
    const double s = r.norm();
    r /= s;
    const Eigen::RowVectorXcd l = L.row(rep) * s;
    VectorXc p = t3 * l.adjoint();
    set.modes.push_back({vals[rep], std::move(r), std::move(p)});
  }
  return set;
}

Composition composition_diagnostic(const QuasiMode& mode) {
  const Index n = mode.right.size() / 2;
  Composition c;
  c.weights.resize(n);
  c.symplectic.resize(n);
  for (Index i = 0; i < n; ++i) {
    const cplx top = std::conj(mode.partner[i]) * mode.right[i];
    const cplx bottom = std::conj(mode.partner[n + i]) * mode.right[n + i];
    c.weights[i] = top + bottom;
    c.symplectic[i] = top - bottom;
  }
  return c;
}

Composition composition_diagnostic(const VectorXc& v) {
  const Index n = v.size() / 2;
  double s = 0.0;
  for (Index i = 0; i < n; ++i) s += std::norm(v[i]) - std::norm(v[n + i]);
  if (std::abs(s) < 1e-12)
    throw ValidationError("composition_diagnostic: vector has vanishing symplectic norm");
  Composition c;
  c.weights.resize(n);
  c.symplectic.resize(n);
  for (Index i = 0; i < n; ++i) {
    c.weights[i] = (std::norm(v[i]) + std::norm(v[n + i])) / s;
    c.symplectic[i] = std::norm(v[i]) - std::norm(v[n + i]);
  }
  return c;
}

}  // namespace qbh
