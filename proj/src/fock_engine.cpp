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

#include "qbh/fock_engine.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>
#include <unsupported/Eigen/MatrixFunctions>

namespace qbh {

FockBasis::FockBasis(std::vector<Index> cutoffs, Index dimension_limit)
    : cutoffs_(std::move(cutoffs)) {
  if (cutoffs_.empty()) throw ValidationError("FockBasis: needs at least one mode");
  for (Index c : cutoffs_) {
    if (c < 1) throw ValidationError("FockBasis: cutoffs must be >= 1");
    if (dim_ > dimension_limit / (c + 1)) {
      std::ostringstream msg;
      msg << "FockBasis: dimension exceeds the limit " << dimension_limit;
      throw ValidationError(msg.str());
    }
    dim_ *= c + 1;
  }
}

FockBasis FockBasis::uniform(Index n_modes, Index cutoff, Index dimension_limit) {
  if (n_modes < 1) throw ValidationError("FockBasis: needs at least one mode");
  return FockBasis(std::vector<Index>(n_modes, cutoff), dimension_limit);
}

Index FockBasis::index(const std::vector<int>& occ) const {
  if (static_cast<Index>(occ.size()) != n_modes())
    throw ValidationError("FockBasis: occupation list length does not match mode count");
  Index idx = 0;
  Index stride = 1;
  for (Index m = 0; m < n_modes(); ++m) {
    if (occ[m] < 0 || occ[m] > cutoffs_[m])
      throw ValidationError("FockBasis: occupation outside the truncated space");
    idx += occ[m] * stride;
    stride *= cutoffs_[m] + 1;
  }
  return idx;
}

std::vector<int> FockBasis::occupations(Index flat) const {
  std::vector<int> occ(cutoffs_.size());
  for (std::size_t m = 0; m < cutoffs_.size(); ++m) {
    occ[m] = static_cast<int>(flat % (cutoffs_[m] + 1));
    flat /= cutoffs_[m] + 1;
  }
  return occ;
}

std::string FockBasis::descriptor() const {
  std::ostringstream os;
  os << "fock " << n_modes();
  for (Index c : cutoffs_) os << ' ' << c;
  return os.str();
}

Index FockBasis::default_interior() const {
  const Index c = *std::min_element(cutoffs_.begin(), cutoffs_.end());
  return (c + 2) / 3;
}

std::vector<Index> FockBasis::interior_indices(Index levels) const {
  std::vector<Index> idx;
  for (Index k = 0; k < dim_; ++k) {
    const auto occ = occupations(k);
    if (std::all_of(occ.begin(), occ.end(), [&](int n) { return n <= levels; })) idx.push_back(k);
  }
  return idx;
}

VectorXc fock_state(const FockBasis& basis, const std::vector<int>& occupations) {
  VectorXc v = VectorXc::Zero(basis.dim());
  v[basis.index(occupations)] = 1.0;
  return v;
}

MatrixXc ladder_matrix(const FockBasis& basis, Index mode) {
  return second_quantize(LadderPolynomial::annihilator(basis.n_modes(), mode), basis);
}

MatrixXc second_quantize(const LadderPolynomial& p, const FockBasis& basis) {
  if (p.n_modes() != basis.n_modes())
    throw ValidationError("second_quantize: mode count does not match the basis");
  const Index n = basis.n_modes();
  const Index dim = basis.dim();
  MatrixXc H = MatrixXc::Zero(dim, dim);
  for (Index col = 0; col < dim; ++col) {
    const auto occ = basis.occupations(col);
    for (const auto& [key, c] : p.terms()) {
      // Truncated a^q lowers, truncated a^dag^p raises and dies above the cutoff.
      std::vector<int> out = occ;
      double amp = 1.0;
      for (Index m = 0; m < n && amp != 0.0; ++m) {
        const auto [pp, qq] = key[m];
        const int lowered = occ[m] - qq;
        const int raised = lowered + pp;
        if (lowered < 0 || raised > basis.cutoff(m)) {
          amp = 0.0;
          break;
        }
        amp *= fock_element(raised, occ[m], pp, qq);
        out[m] = raised;
      }
      if (amp != 0.0) H(basis.index(out), col) += c * amp;
    }
  }
  return H;
}

MatrixXc second_quantize(const QuadraticForm& q, const FockBasis& basis) {
  return second_quantize(from_quadratic(q), basis);
}

double interior_max_abs(const MatrixXc& A, const std::vector<Index>& idx) {
  double m = 0.0;
  for (Index i : idx)
    for (Index j : idx) m = std::max(m, std::abs(A(i, j)));
  return m;
}

double interior_max_abs(const VectorXc& v, const std::vector<Index>& idx) {
  double m = 0.0;
  for (Index i : idx) m = std::max(m, std::abs(v[i]));
  return m;
}

OmegaMatrix omega_matrix(Index cutoff, double theta) {
  if (cutoff < 1 || cutoff > 64)
    throw ValidationError("omega_matrix: cutoff must lie in [1, 64]");
  const FockBasis b({cutoff});
  const MatrixXc a = ladder_matrix(b, 0);
  const MatrixXc a2 = a * a;
  MatrixXc X = kI * (kPi / 4.0) *
               (std::polar(1.0, -theta) * a2 - std::polar(1.0, theta) * a2.adjoint());
  X = (0.5 * (X + X.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(X);
  if (es.info() != Eigen::Success) throw NumericalError("omega_matrix: eigensolver failed");

  OmegaMatrix om;
  om.theta = theta;
  om.eigenvectors = es.eigenvectors();
  om.exponents = es.eigenvalues();
  const VectorXd up = om.exponents.array().exp();
  const VectorXd down = (-om.exponents.array()).exp();
  const MatrixXc& V = om.eigenvectors;
  om.omega = V * up.cast<cplx>().asDiagonal() * V.adjoint();
  om.omega = (0.5 * (om.omega + om.omega.adjoint())).eval();
  om.omega_inv = V * down.cast<cplx>().asDiagonal() * V.adjoint();
  om.omega_inv = (0.5 * (om.omega_inv + om.omega_inv.adjoint())).eval();
  om.condition = std::exp(om.exponents.maxCoeff() - om.exponents.minCoeff());
  if (!std::isfinite(om.condition) || !om.omega.allFinite())
    throw NumericalError("omega_matrix: overflow at this cutoff");
  return om;
}

VectorXc apply_on_mode(const FockBasis& basis, Index mode, const MatrixXc& op, const VectorXc& v) {
  const Index c = basis.cutoff(mode) + 1;
  if (op.rows() != c || op.cols() != c || v.size() != basis.dim())
    throw ValidationError("apply_on_mode: operator or vector size mismatch");
  Index stride = 1;
  for (Index m = 0; m < mode; ++m) stride *= basis.cutoff(m) + 1;
  const Index block = stride * c;
  VectorXc out = VectorXc::Zero(v.size());
  for (Index base = 0; base < basis.dim(); base += block)
    for (Index inner = 0; inner < stride; ++inner)
      for (Index i = 0; i < c; ++i) {
        cplx s = 0.0;
        for (Index j = 0; j < c; ++j) s += op(i, j) * v[base + inner + j * stride];
        out[base + inner + i * stride] = s;
      }
  return out;
}

BiorthogonalPair hole_fock_pair(const OmegaMatrix& omega, Index n) {
  const Index dim = omega.omega.rows();
  if (n < 0 || n >= dim) throw ValidationError("hole_fock_pair: n exceeds the cutoff");
  BiorthogonalPair pair;
  pair.n = n;
  pair.right = omega.omega_inv.col(n);
  pair.left = omega.omega.col(n);
  pair.pairing = hole_pairing_matrix(omega, n)(n, n);
  if (std::abs(pair.pairing - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "hole_fock_pair: pairing " << pair.pairing << " deviates from 1 (ill-conditioned)";
    throw NumericalError(msg.str());
  }
  return pair;
}

MatrixXc hole_pairing_matrix(const OmegaMatrix& omega, Index nmax) {
  const Index dim = omega.omega.rows();
  if (nmax < 0 || nmax >= dim) throw ValidationError("hole_pairing_matrix: nmax exceeds cutoff");
  // Components of Omega^+-1 |n> in the eigenbasis of X.
  const MatrixXc W = omega.eigenvectors.adjoint().leftCols(nmax + 1);
  const VectorXd up = omega.exponents.array().exp();
  const VectorXd down = (-omega.exponents.array()).exp();
  const MatrixXc L = up.cast<cplx>().asDiagonal() * W;
  const MatrixXc R = down.cast<cplx>().asDiagonal() * W;
  return L.adjoint() * R;
}

cplx explicit_hole_expectation(const OmegaMatrix& omega, const MatrixXc& op, Index n) {
  const VectorXc right = omega.omega_inv.col(n);
  const VectorXc left = omega.omega.col(n);
  return left.dot(op * right);
}

MatrixXc displacement_matrix(const FockBasis& basis, Index mode, cplx alpha) {
  const FockBasis single({basis.cutoff(mode)});
  const MatrixXc a = ladder_matrix(single, 0);
  const MatrixXc gen = alpha * a.adjoint() - std::conj(alpha) * a;
  const MatrixXc D1 = gen.exp();
  MatrixXc D(basis.dim(), basis.dim());
  for (Index col = 0; col < basis.dim(); ++col) {
    VectorXc e = VectorXc::Zero(basis.dim());
    e[col] = 1.0;
    D.col(col) = apply_on_mode(basis, mode, D1, e);
  }
  return D;
}

EvolveResult evolve(const MatrixXc& H, const VectorXc& psi0, double t, bool renormalize) {
  if (!std::isfinite(t)) throw ValidationError("evolve: t must be finite");
  if (H.rows() != H.cols() || H.rows() != psi0.size())
    throw ValidationError("evolve: dimension mismatch");
  const double norm1 = H.cwiseAbs().colwise().sum().maxCoeff();
  const double raw_steps = std::ceil(norm1 * std::abs(t));
  if (!(raw_steps <= 1e8))
    throw NumericalError("evolve: |H| t too large for the Taylor stepper");
  const Index steps = std::max<Index>(1, static_cast<Index>(raw_steps));
  const cplx step = -kI * (t / static_cast<double>(steps));

  const Index nnz = (H.array() != cplx(0.0)).count();
  const bool sparse = nnz * 10 < H.size();
  Eigen::SparseMatrix<cplx> Hs;
  if (sparse) Hs = H.sparseView();

  EvolveResult res;
  res.steps = steps;
  VectorXc v = psi0;
  if (renormalize) {
    const double n0 = v.norm();
    if (!(n0 > 0.0)) throw ValidationError("evolve: zero initial state");
    res.log_norm = std::log(n0);
    v /= n0;
  }
  VectorXc term(v.size());
  for (Index s = 0; s < steps; ++s) {
    VectorXc w = v;
    term = v;
    for (int k = 1; k <= 80; ++k) {
      if (sparse)
        term = (step / static_cast<double>(k)) * (Hs * term);
      else
        term = (step / static_cast<double>(k)) * (H * term);
      w += term;
      if (term.norm() <= 1e-17 * w.norm()) break;
    }
    if (renormalize) {
      const double nw = w.norm();
      res.log_norm += std::log(nw);
      w /= nw;
    }
    v.swap(w);
  }
  if (!v.allFinite()) throw NumericalError("evolve: non-finite state");
  res.state = std::move(v);
  return res;
}

DualityEvolutionReport duality_evolution_check(const QuadraticForm& q, Index mode, double theta,
                                               double t, const std::vector<Index>& cutoffs) {
  const QuadraticForm dual = dual_quadratic(q, mode, theta);
  const MatrixXc h = build_bdg(q).h;
  const MatrixXc hd = build_bdg(dual).h;
  const MatrixXc K = frame_exchange_matrix(q.n_modes(), mode, theta);
  const MatrixXc U = (-kI * t * h).exp();
  const MatrixXc Ud = (-kI * t * hd).exp();

  DualityEvolutionReport rep;
  rep.heisenberg_residual = max_abs(K.inverse() * U * K - Ud);

  for (Index c : cutoffs) {
    const FockBasis basis = FockBasis::uniform(q.n_modes(), c);
    const OmegaMatrix om = omega_matrix(c, theta);
    const MatrixXc H = second_quantize(q, basis);
    const MatrixXc Hd = second_quantize(dual, basis);
    const VectorXc psi0 = fock_state(basis, std::vector<int>(q.n_modes(), 0));
    const VectorXc lhs = evolve(Hd, apply_on_mode(basis, mode, om.omega_inv, psi0), t, false).state;
    const VectorXc rhs = apply_on_mode(basis, mode, om.omega_inv, evolve(H, psi0, t, false).state);
    rep.table.push_back({c, interior_max_abs(VectorXc(lhs - rhs),
                                             basis.interior_indices(basis.default_interior()))});
  }
  rep.converged = rep.table.size() >= 2;
  for (std::size_t k = 1; k < rep.table.size(); ++k)
    if (!(rep.table[k].residual < rep.table[k - 1].residual)) rep.converged = false;
  return rep;
}

void write_state(std::ostream& os, const FockBasis& basis, const VectorXc& v) {
  os << basis.descriptor() << '\n' << std::setprecision(17);
  for (Index k = 0; k < v.size(); ++k) os << k << ' ' << v[k].real() << ' ' << v[k].imag() << '\n';
}

}  // namespace qbh
