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

#ifndef QBH_LINDBLAD_ENGINE_HPP
#define QBH_LINDBLAD_ENGINE_HPP

#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "qbh/fock_engine.hpp"
#include "qbh/types.hpp"

namespace qbh {

using SparseMatrixXc = Eigen::SparseMatrix<cplx>;

enum class Jump { Loss, Pump };

struct Channel {
  Jump jump = Jump::Loss;
  double rate = 0.0;
};

// H = Delta a^dag a + lambda a^dag + conj(lambda) a on a single mode.
struct DissipativeModel {
  double detuning = 0.0;
  cplx drive = 0.0;
  std::vector<Channel> channels;

  void validate() const;
  double rate(Jump j) const;
};

class NoSteadyStateError : public NumericalError {
 public:
  NoSteadyStateError(const std::string& what, double abscissa)
      : NumericalError(what), abscissa_(abscissa) {}
  double abscissa() const { return abscissa_; }

 private:
  double abscissa_;
};

/// Mean field of the coherent steady state under loss: -i lambda / (gamma/2 + i Delta).
cplx loss_fixed_point(const DissipativeModel& m);
/// Formal displaced-hole fixed point under pump: i lambda / (gamma/2 - i Delta).
cplx pump_fixed_point(const DissipativeModel& m);
/// Smallest cutoff satisfying cutoff >= |abar|^2 + 10 |abar| + 10.
Index adequate_cutoff(cplx abar);

/// Growth rate of the first and second moments; positive means no steady state.
double moment_abscissa(const DissipativeModel& m);

MatrixXc drive_hamiltonian(const DissipativeModel& m, const FockBasis& basis);

/// Column-stacked superoperator, vec(A X B) = (B^T (x) A) vec(X).
SparseMatrixXc liouvillian(const DissipativeModel& m, const FockBasis& basis);

/// L(rho) applied directly to a dense operator.
MatrixXc apply_liouvillian(const DissipativeModel& m, const FockBasis& basis, const MatrixXc& rho);

MatrixXc unvec(const VectorXc& v, Index dim);
VectorXc vec(const MatrixXc& rho);

struct SteadyState {
  MatrixXc rho;
  cplx trace = 1.0;
  double residual = 0.0;  // max |L rho|
  std::string method;     // "null-space" or "time-integration"
};

/// Trace-constrained null-space solve, falling back to time integration.
SteadyState steady_state(const SparseMatrixXc& L, Index dim);

/// Rejects pump-dominated models with NoSteadyStateError before solving.
SteadyState steady_state(const DissipativeModel& m, const FockBasis& basis);

/// Explicit RK4 integration of d rho/dt = L rho.
MatrixXc integrate(const SparseMatrixXc& L, const MatrixXc& rho0, double t, double dt);

VectorXc coherent_state(const FockBasis& basis, cplx alpha);

struct SteadyStateReport {
  cplx abar;
  double mean_n = 0.0;
  double fidelity = 0.0;
  Index cutoff = 0;
  double residual = 0.0;
  cplx mean_a;
};

/// Loss steady state checked against the coherent-state prediction.
SteadyStateReport loss_steady_state_report(const DissipativeModel& m, Index min_cutoff = 0);

struct PumpResidualRow {
  Index cutoff = 0;
  double residual = 0.0;     // interior max |L rho_candidate|
  cplx trace;                // of the candidate
  double condition = 0.0;    // of the explicit Omega
};

struct PumpResidualReport {
  cplx abar;
  std::vector<PumpResidualRow> table;
  bool decreasing = false;
  // Exact check in the frame W = D Omega^-1, free of truncation.
  double similarity_residual = 0.0;
};

/**
 * Candidate rho = D(abar) |0>_h <0|_hbar D^-1(abar) with abar the pump fixed
 * point, built from explicit truncated Omega at each cutoff.
 */
PumpResidualReport pump_formal_residual(const DissipativeModel& m,
                                        const std::vector<Index>& cutoffs, double theta = 0.0);

/// max |<j| L'(|0><0|) |k>| for L' the Lindbladian conjugated into the frame
/// D(abar) Omega^-1; zero iff abar is a fixed point of the hole-vacuum ansatz.
double pump_similarity_residual(const DissipativeModel& m, cplx abar, double theta = 0.0);

}  // namespace qbh

#endif  // QBH_LINDBLAD_ENGINE_HPP
