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

#ifndef QBH_FOCK_ENGINE_HPP
#define QBH_FOCK_ENGINE_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "qbh/ladder_algebra.hpp"
#include "qbh/quad_core.hpp"
#include "qbh/types.hpp"

namespace qbh {

/**
 * Truncated multi-mode Fock space. Occupation of mode i runs over
 * 0..cutoff_i; the flat index is mixed radix with mode 0 fastest.
 */
class FockBasis {
 public:
  static constexpr Index kDefaultDimensionLimit = 200000;

  explicit FockBasis(std::vector<Index> cutoffs, Index dimension_limit = kDefaultDimensionLimit);
  static FockBasis uniform(Index n_modes, Index cutoff,
                           Index dimension_limit = kDefaultDimensionLimit);

  Index n_modes() const { return static_cast<Index>(cutoffs_.size()); }
  Index dim() const { return dim_; }
  Index cutoff(Index mode) const { return cutoffs_.at(mode); }
  const std::vector<Index>& cutoffs() const { return cutoffs_; }

  Index index(const std::vector<int>& occupations) const;
  std::vector<int> occupations(Index flat) const;
  /// e.g. "fock 2 30 30"
  std::string descriptor() const;

  /// Default interior depth: ceil(cutoff / 3) for the smallest cutoff.
  Index default_interior() const;
  /// Flat indices whose occupations are all <= levels.
  std::vector<Index> interior_indices(Index levels) const;

 private:
  std::vector<Index> cutoffs_;
  Index dim_ = 1;
};

VectorXc fock_state(const FockBasis& basis, const std::vector<int>& occupations);

MatrixXc ladder_matrix(const FockBasis& basis, Index mode);

MatrixXc second_quantize(const QuadraticForm& q, const FockBasis& basis);
MatrixXc second_quantize(const LadderPolynomial& p, const FockBasis& basis);

/// Max |entry| of A restricted to rows and columns in idx.
double interior_max_abs(const MatrixXc& A, const std::vector<Index>& idx);
double interior_max_abs(const VectorXc& v, const std::vector<Index>& idx);

/**
 * Omega = exp(X), X = i pi/4 (e^{-i theta} a^2 - e^{i theta} a^dag^2), on one
 * truncated mode. X is Hermitian; Omega is kept in its eigenbasis
 * X = V diag(d) V^dag, where products with Omega^+-1 stay well conditioned.
 */
struct OmegaMatrix {
  MatrixXc omega;
  MatrixXc omega_inv;
  MatrixXc eigenvectors;  // V, unitary
  VectorXd exponents;     // d
  double condition = 1.0;  // exp(max d - min d)
  double theta = 0.0;
};

/// Throws ValidationError for cutoff > 64; the construction is a validation tool.
OmegaMatrix omega_matrix(Index cutoff, double theta);

/// Applies a single-mode operator to one tensor factor of a state.
VectorXc apply_on_mode(const FockBasis& basis, Index mode, const MatrixXc& op, const VectorXc& v);

struct BiorthogonalPair {
  VectorXc right;  // Omega^-1 |n>
  VectorXc left;   // Omega |n>
  cplx pairing;    // left^dag right
  Index n = 0;
};

BiorthogonalPair hole_fock_pair(const OmegaMatrix& omega, Index n);

/// <m_hbar | n_h> for m, n <= nmax, formed in the eigenbasis of X.
MatrixXc hole_pairing_matrix(const OmegaMatrix& omega, Index nmax);

/// <n_hbar| O |n_h> from explicit truncated vectors.
cplx explicit_hole_expectation(const OmegaMatrix& omega, const MatrixXc& op, Index n);

MatrixXc displacement_matrix(const FockBasis& basis, Index mode, cplx alpha);

struct EvolveResult {
  VectorXc state;
  double log_norm = 0.0;  // ln |exp(-iHt) psi0| when renormalized, else 0
  Index steps = 0;
};

/// exp(-i H t) psi0 by scaled Taylor steps, without forming the dense exponential.
EvolveResult evolve(const MatrixXc& H, const VectorXc& psi0, double t, bool renormalize);

struct DualityEvolutionRow {
  Index cutoff = 0;
  double residual = 0.0;
};

struct DualityEvolutionReport {
  double heisenberg_residual = 0.0;
  std::vector<DualityEvolutionRow> table;
  bool converged = false;  // interior residual decreasing across the cutoff table
};

/**
 * (i) |K^-1 exp(-i h t) K - exp(-i h' t)| for h' the dual BdG matrix;
 * (ii) |exp(-i H' t) Omega^-1 psi0 - Omega^-1 exp(-i H t) psi0| on the interior,
 *      psi0 the vacuum, for each cutoff.
 */
DualityEvolutionReport duality_evolution_check(const QuadraticForm& q, Index mode, double theta,
                                               double t, const std::vector<Index>& cutoffs);

/// Snapshot text: header line with the basis descriptor, then `index re im`.
void write_state(std::ostream& os, const FockBasis& basis, const VectorXc& v);

}  // namespace qbh

#endif  // QBH_FOCK_ENGINE_HPP
