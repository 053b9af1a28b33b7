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

#ifndef QBH_QUAD_CORE_HPP
#define QBH_QUAD_CORE_HPP

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qbh/types.hpp"

namespace qbh {

class FockBasis;

/**
 * Normal-ordered quadratic bosonic Hamiltonian over N modes,
 *
 *   H = sum_ij M_ij a_i^dag a_j + 1/2 sum_ij P_ij a_i^dag a_j^dag
 *       + 1/2 sum_ij Q_ij a_i a_j + c0.
 *
 * P and Q are symmetrized on construction. The form need not be Hermitian:
 * particle-hole duals of Hermitian forms generally are not.
 */
class QuadraticForm {
 public:
  QuadraticForm(MatrixXc M, MatrixXc P, MatrixXc Q, cplx c0 = 0.0);

  static QuadraticForm zero(Index n_modes);
  /// Hermitian form with A = M and B = P (so Q = B*).
  static QuadraticForm hermitian(const MatrixXc& A, const MatrixXc& B, double c0 = 0.0);

  Index n_modes() const { return M_.rows(); }
  const MatrixXc& M() const { return M_; }
  const MatrixXc& P() const { return P_; }
  const MatrixXc& Q() const { return Q_; }
  cplx c0() const { return c0_; }

  /// M = M^dag, Q = P* and Im c0 = 0, each within tol.
  bool is_hermitian(double tol = 1e-12) const;

  QuadraticForm with_constant(cplx c0) const { return {M_, P_, Q_, c0}; }

  friend QuadraticForm operator+(const QuadraticForm& a, const QuadraticForm& b);
  friend QuadraticForm operator*(cplx s, const QuadraticForm& q);
  friend bool operator==(const QuadraticForm& a, const QuadraticForm& b);

 private:
  MatrixXc M_, P_, Q_;
  cplx c0_;
};

/// Largest coefficient difference between two forms, constant included.
double max_coefficient_difference(const QuadraticForm& a, const QuadraticForm& b);

/// Random Hermitian form with entries of magnitude <= scale.
QuadraticForm random_hermitian_form(std::mt19937_64& rng, Index n_modes, double scale = 1.0);

// BdG dynamical matrix h = tau3 * [[M, P], [Q, M^T]] acting on the Nambu
// array (a_1..a_N, a_1^dag..a_N^dag), so that i d(alpha)/dt = h alpha.
struct DynamicalMatrix {
  MatrixXc h;
  Index n_modes = 0;
  bool hermitian_source = false;
};

DynamicalMatrix build_bdg(const QuadraticForm& q);

struct SymmetryReport {
  double pseudo_hermiticity = 0.0;  // |tau3 h tau3 - h^dag|
  double particle_hole = 0.0;       // |tau1 h tau1 + h*|
  double transposition = 0.0;       // |tau3 tau1 h tau1 tau3 + h^T|
  bool pseudo_hermitian = false;
  bool ph_symmetric = false;
  bool transposition_identity = false;
};

SymmetryReport check_symmetries(const DynamicalMatrix& d, double tol = 1e-12);

enum class Regime { Real, Complex, Mixed };
std::string to_string(Regime r);

struct SpectrumReport {
  VectorXc eigenvalues;
  // (n, nbar) with eps_nbar = -eps_n; n is the representative: Re eps_n > 0,
  // or Re eps_n ~ 0 and Im eps_n >= 0.
  std::vector<std::pair<Index, Index>> pairing;
  Regime regime = Regime::Real;
  MatrixXc eigenvectors;  // unit Euclidean columns
  VectorXd symplectic_norms;  // Re(v^dag tau3 v)
  double tol = 1e-9;
};

/// Throws PairingError when the eigenvalue multiset is not negation-symmetric.
SpectrumReport spectrum(const DynamicalMatrix& d, double tol = 1e-9);

enum class Normalization {
  SymplecticUnit,  // real regime, pseudo-Hermitian: v^dag tau3 v = +1, partner = v
  Biorthogonal     // <partner| tau3 |right> = 1, partner = tau3 (row of V^-1)^dag
};

struct QuasiMode {
  cplx frequency;
  VectorXc right;
  VectorXc partner;
};

struct QuasiModeSet {
  std::vector<QuasiMode> modes;
  Normalization normalization = Normalization::Biorthogonal;
  Regime regime = Regime::Real;
};

/// Throws DefectiveSpectrumError at (or numerically at) an exceptional point.
QuasiModeSet quasimodes(const DynamicalMatrix& d, const SpectrumReport& report);

struct Composition {
  // Biorthogonal shift of <a_i^dag a_i> when the mode is excited:
  // positive for particle content, negative for hole content, complex when
  // particle and hole content mix.
  VectorXc weights;
  // tau3-weighted content of mode i; sums to the symplectic norm.
  VectorXc symplectic;
};

Composition composition_diagnostic(const QuasiMode& mode);
/// Single-vector form for tau3-normalized (v^dag tau3 v = +-1) eigenvectors.
Composition composition_diagnostic(const VectorXc& v);

struct ReconstructionReport {
  double residual = 0.0;  // max |entry| of the interior block
  Index interior_levels = 0;
  Index cutoff = 0;
};

/**
 * Rebuilds sum_n eps_n (psi_n^dag psi_n + 1/2) (real regime) or
 * sum_n eps_n (psi_n^dag psi_{n*} + 1/2) (complex regime) as a truncated
 * matrix and compares it with the direct second quantization of q on the
 * interior states. The reordering constant c0 - tr(M)/2 is included.
 * interior_levels <= 0 selects the default ceil(cutoff/3).
 */
ReconstructionReport reconstruct_check(const QuadraticForm& q, const QuasiModeSet& modes,
                                       const FockBasis& basis, Index interior_levels = 0);

}  // namespace qbh

#endif  // QBH_QUAD_CORE_HPP
