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

#ifndef QBH_GAUSSIAN_ENGINE_HPP
#define QBH_GAUSSIAN_ENGINE_HPP

#include <string>
#include <vector>

#include "qbh/ladder_algebra.hpp"
#include "qbh/quad_core.hpp"
#include "qbh/types.hpp"

namespace qbh {

// Quadratures x = (a + a^dag)/sqrt2, p = -i (a - a^dag)/sqrt2, ordered
// (x_1, p_1, x_2, p_2, ...); hbar = 1 and the vacuum covariance is I/2.
struct GaussianState {
  VectorXd mean;
  MatrixXd cov;
  Index n_modes() const { return mean.size() / 2; }
};

// d xi/dt = G xi with J G symmetric.
struct SymplecticGenerator {
  MatrixXd G;
};

/// J = direct sum of [[0, 1], [-1, 0]].
MatrixXd symplectic_form(Index n_modes);

/// T with alpha = T xi, alpha the Nambu array.
MatrixXc quadrature_transform(Index n_modes);

/// Rejects non-Hermitian forms with ValidationError.
SymplecticGenerator generator_from_quadratic(const QuadraticForm& q);

/// Symmetric K with H = 1/2 xi^T K xi + const.
MatrixXd quadrature_hamiltonian(const QuadraticForm& q);

MatrixXd symplectic_propagator(const SymplecticGenerator& g, double t);

GaussianState evolve(const GaussianState& s, const SymplecticGenerator& g, double t);

GaussianState vacuum_state(Index n_modes);

/// S(r)|00> with S(r) = exp(r (a1^dag a2^dag - a1 a2)).
GaussianState tmsv(double r);

/// Smallest eigenvalue of cov + i J / 2.
double uncertainty_margin(const GaussianState& s);

VectorXd symplectic_eigenvalues(const MatrixXd& cov);

enum class LogBase { Natural, Two };

/// Logarithmic negativity across (partition, rest); natural log by default.
double log_negativity(const GaussianState& s, const std::vector<Index>& partition,
                      LogBase base = LogBase::Natural);

/// Bogoliubov vacuum. Unstable forms are rejected with a ValidationError
/// naming the offending BdG eigenvalue.
GaussianState ground_state(const QuadraticForm& q);

/// r = artanh(g / Delta) / 2 for two-mode pairing at detuning Delta.
double pairing_squeezing(double delta, double g);

/// ln of the summed Schmidt coefficients squared, for a two-mode pure Fock state.
double fock_log_negativity(const VectorXc& psi, Index cutoff0, Index cutoff1);

enum class EntanglementScenario { Ground, ResonantEvolution };

struct DualFrameEntanglement {
  double physical_en = 0.0;  // in the Hermitian frame
  double ph_en = 0.0;        // reported for the dual frame
  QuadraticForm physical = QuadraticForm::zero(1);
  QuadraticForm dual = QuadraticForm::zero(1);
  std::vector<FrameTag> dual_frames;
};

/**
 * Entanglement of the Hermitian member of the pair (q, dual_quadratic(q, mode,
 * theta)), reported for the other member with its frame tags. ResonantEvolution
 * evolves the vacuum for time t.
 */
DualFrameEntanglement dual_frame_entanglement(const QuadraticForm& q, Index mode, double theta,
                                              EntanglementScenario scenario, double t = 0.0);

}  // namespace qbh

#endif  // QBH_GAUSSIAN_ENGINE_HPP
