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

#ifndef QBH_NETWORK_LAB_HPP
#define QBH_NETWORK_LAB_HPP

#include <string>
#include <vector>

#include "qbh/ladder_algebra.hpp"
#include "qbh/quad_core.hpp"
#include "qbh/types.hpp"

namespace qbh {

enum class DimerKind { P, DP, BS, DBS };

DimerKind parse_dimer_kind(const std::string& s);
std::string to_string(DimerKind k);

// P : -D1 n1 + D2 n2 + g (a1^dag a2^dag + a1 a2)
// DP: -D1 n1 + D2 n2 + g (a1^dag a2^dag - a1 a2)
// BS: D1 n1 + D2 n2 + i g (a1 a2^dag - a1^dag a2)
// DBS: D1 n1 + D2 n2 + i g (a1 a2^dag + a1^dag a2)
struct DimerSpec {
  DimerKind kind = DimerKind::P;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double g = 0.0;
};

QuadraticForm build_dimer(const DimerSpec& d);

enum class TrimerKind { BST, SHT };
enum class GaugeStyle { Symmetric, Concentrated };

struct TrimerSpec {
  TrimerKind kind = TrimerKind::BST;
  double g = 1.0;
  double delta = 0.0;  // SHT only
  double phi12 = 0.0;
  double phi23 = 0.0;
  double phi31 = 0.0;
  double theta = 0.0;  // SHT only
  GaugeStyle gauge = GaugeStyle::Symmetric;

  /// Distributes flux over the bonds: Phi/3 each, or all on bond 1-2.
  static TrimerSpec with_flux(TrimerKind kind, double flux, double g = 1.0,
                              GaugeStyle style = GaugeStyle::Symmetric);
  /// phi12 + phi23 + phi31 in (-pi, pi].
  double flux() const;
  std::string describe() const;
};

struct Trimer {
  QuadraticForm form = QuadraticForm::zero(3);
  std::vector<FrameTag> frames;
};

Trimer build_trimer(const TrimerSpec& t);

/// Restriction to one-excitation states of the tagged frame, vacuum energy included.
MatrixXc single_excitation_block(const QuadraticForm& q, const std::vector<FrameTag>& frames);

struct FlowTrace {
  VectorXd times;
  MatrixXd populations;  // rows: times, cols: nodes
  std::vector<double> first_max_time;  // per node, NaN when none exceeds 0.5
  std::vector<Index> order;            // 1-based, starting node first
  double max_population_drift = 0.0;   // max |sum p - 1|
};

FlowTrace chiral_flow(const TrimerSpec& t, const VectorXd& times);
FlowTrace flow_from_block(const MatrixXc& block, const VectorXd& times);

std::string order_string(const std::vector<Index>& order);

/// First revival of p1 after t = 0, refined by bisection on dp1/dt.
double revival_period(const TrimerSpec& t, double t_max = 20.0);

struct TimeReversalReport {
  bool symmetric = false;
  double max_asymmetry = 0.0;
};

TimeReversalReport time_reversal_check(const TrimerSpec& t, const VectorXd& times,
                                       double tol = 1e-9);

struct FluxDualReport {
  double flux = 0.0;
  double dual_flux = 0.0;
  double deviation = 0.0;  // |wrap(dual - (pi - flux))|
};

/// Forward exchange on every mode of a BST, then the flux of the result.
FluxDualReport hole_loop_flux_check(const TrimerSpec& t);

struct BellReport {
  double fidelity = 0.0;
  double closed_form = 0.0;
  double log_norm = 0.0;
  VectorXc state;
};

/// Renormalized DBS(delta, delta, g) evolution of |01>, Bell fidelity at time t.
BellReport bell_evolution(double delta, double g, double t, Index cutoff = 2);

}  // namespace qbh

#endif  // QBH_NETWORK_LAB_HPP
