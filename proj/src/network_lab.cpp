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

#include "qbh/network_lab.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "qbh/fock_engine.hpp"

namespace qbh {

DimerKind parse_dimer_kind(const std::string& s) {
  if (s == "P") return DimerKind::P;
  if (s == "DP") return DimerKind::DP;
  if (s == "BS") return DimerKind::BS;
  if (s == "DBS") return DimerKind::DBS;
  throw ValidationError("unknown dimer kind '" + s + "' (expected P, DP, BS or DBS)");
}

std::string to_string(DimerKind k) {
  switch (k) {
    case DimerKind::P:
      return "P";
    case DimerKind::DP:
      return "DP";
    case DimerKind::BS:
      return "BS";
    case DimerKind::DBS:
      return "DBS";
  }
  return "?";
}

QuadraticForm build_dimer(const DimerSpec& d) {
  if (!(d.g >= 0.0)) throw ValidationError("build_dimer: g must be nonnegative");
  MatrixXc M = MatrixXc::Zero(2, 2);
  MatrixXc P = MatrixXc::Zero(2, 2);
  MatrixXc Q = MatrixXc::Zero(2, 2);
  switch (d.kind) {
    case DimerKind::P:
    case DimerKind::DP:
      M(0, 0) = -d.delta1;
      M(1, 1) = d.delta2;
      P(0, 1) = P(1, 0) = d.g;
      Q(0, 1) = Q(1, 0) = d.kind == DimerKind::P ? d.g : -d.g;
      break;
    case DimerKind::BS:
      M << d.delta1, -kI * d.g, kI * d.g, d.delta2;
      break;
    case DimerKind::DBS:
      M << d.delta1, kI * d.g, kI * d.g, d.delta2;
      break;
  }
  return {M, P, Q, 0.0};
}

TrimerSpec TrimerSpec::with_flux(TrimerKind kind, double flux, double g, GaugeStyle style) {
  TrimerSpec t;
  t.kind = kind;
  t.g = g;
  t.gauge = style;
  if (style == GaugeStyle::Symmetric) {
    t.phi12 = t.phi23 = t.phi31 = flux / 3.0;
  } else {
    t.phi12 = flux;
  }
  return t;
}

double TrimerSpec::flux() const { return wrap_phase(phi12 + phi23 + phi31); }

std::string TrimerSpec::describe() const {
  std::ostringstream os;
  os << std::setprecision(17) << "kind=" << (kind == TrimerKind::BST ? "BST" : "SHT")
     << " g=" << g << " delta=" << delta << " phi12=" << phi12 << " phi23=" << phi23
     << " phi31=" << phi31 << " theta=" << theta
     << " gauge=" << (gauge == GaugeStyle::Symmetric ? "symmetric" : "concentrated")
     << " flux=" << flux();
  return os.str();
}

Trimer build_trimer(const TrimerSpec& t) {
  MatrixXc M = MatrixXc::Zero(3, 3);
  MatrixXc P = MatrixXc::Zero(3, 3);
  MatrixXc Q = MatrixXc::Zero(3, 3);
  const double g = t.g;
  Trimer tr;
  tr.frames.assign(3, FrameTag::particle());
  M(1, 2) = g * std::polar(1.0, -t.phi23);
  M(2, 1) = std::conj(M(1, 2));
  if (t.kind == TrimerKind::BST) {
    M(0, 1) = g * std::polar(1.0, -t.phi12);
    M(1, 0) = std::conj(M(0, 1));
    M(2, 0) = g * std::polar(1.0, -t.phi31);
    M(0, 2) = std::conj(M(2, 0));
    tr.form = QuadraticForm(M, P, Q, 0.0);
    return tr;
  }
  // Node 1 in the hole frame: hopping into node 1 becomes dissipative pairing.
  M(0, 0) = -t.delta;
  M(1, 1) = M(2, 2) = t.delta;
  P(0, 1) = P(1, 0) = -kI * g * std::polar(1.0, t.phi12 + t.theta);
  P(0, 2) = P(2, 0) = -kI * g * std::polar(1.0, t.theta - t.phi31);
  Q(0, 1) = Q(1, 0) = -kI * g * std::polar(1.0, -(t.phi12 + t.theta));
  Q(0, 2) = Q(2, 0) = -kI * g * std::polar(1.0, t.phi31 - t.theta);
  tr.form = QuadraticForm(M, P, Q, -t.delta);
  tr.frames[0] = FrameTag::hole(t.theta);
  return tr;
}

MatrixXc single_excitation_block(const QuadraticForm& q, const std::vector<FrameTag>& frames) {
  const Index n = q.n_modes();
  const LadderPolynomial poly = to_frame(from_quadratic(q), frames);
  for (const auto& [key, c] : poly.terms()) {
    int up = 0;
    int down = 0;
    for (const auto& [p, qq] : key) {
      up += p;
      down += qq;
    }
    if (up != down) {
      std::ostringstream msg;
      msg << "single_excitation_block: term " << c << " ";
      for (const auto& [p, qq] : key) msg << '(' << p << ',' << qq << ')';
      msg << " does not conserve excitation number in this frame";
      throw ValidationError(msg.str());
    }
  }
  MatrixXc B(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      std::vector<int> bra(n, 0);
      std::vector<int> ket(n, 0);
      bra[i] = 1;
      ket[j] = 1;
      B(i, j) = fock_expectation(poly, bra, ket);
    }
  return B;
}

namespace {

double first_local_max(const VectorXd& times, const VectorXd& p) {
  for (Index i = 1; i + 1 < p.size(); ++i)
    if (p[i] > 0.5 && p[i] > p[i - 1] && p[i] > p[i + 1]) return times[i];
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

FlowTrace flow_from_block(const MatrixXc& block, const VectorXd& times) {
  const Index n = block.rows();
  FlowTrace tr;
  tr.times = times;
  tr.populations.resize(times.size(), n);
  VectorXc psi0 = VectorXc::Zero(n);
  psi0[0] = 1.0;
  for (Index k = 0; k < times.size(); ++k) {
    const VectorXc psi = MatrixXc(-kI * times[k] * block).exp() * psi0;
    double total = 0.0;
    for (Index i = 0; i < n; ++i) {
      tr.populations(k, i) = std::norm(psi[i]);
      total += tr.populations(k, i);
    }
    tr.max_population_drift = std::max(tr.max_population_drift, std::abs(total - 1.0));
  }
  tr.first_max_time.resize(n);
  for (Index i = 0; i < n; ++i)
    tr.first_max_time[i] = first_local_max(times, tr.populations.col(i));
  std::vector<Index> others;
  for (Index i = 1; i < n; ++i)
    if (!std::isnan(tr.first_max_time[i])) others.push_back(i);
  std::stable_sort(others.begin(), others.end(), [&](Index a, Index b) {
    return tr.first_max_time[a] < tr.first_max_time[b];
  });
  tr.order.push_back(1);
  for (Index i : others) tr.order.push_back(i + 1);
  return tr;
}

FlowTrace chiral_flow(const TrimerSpec& t, const VectorXd& times) {
  const Trimer tr = build_trimer(t);
  return flow_from_block(single_excitation_block(tr.form, tr.frames), times);
}

std::string order_string(const std::vector<Index>& order) {
  std::string s;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k) s += "->";
    s += std::to_string(order[k]);
  }
  return s;
}

double revival_period(const TrimerSpec& t, double t_max) {
  const Trimer tr = build_trimer(t);
  const MatrixXc B = single_excitation_block(tr.form, tr.frames);
  VectorXc psi0 = VectorXc::Zero(3);
  psi0[0] = 1.0;
  auto state = [&](double s) { return VectorXc(MatrixXc(-kI * s * B).exp() * psi0); };
  auto p1 = [&](double s) { return std::norm(state(s)[0]); };
  auto dp1 = [&](double s) {
    const VectorXc psi = state(s);
    const VectorXc dpsi = -kI * (B * psi);
    return 2.0 * (std::conj(psi[0]) * dpsi[0]).real();
  };
  const double h = 1e-3;
  double prev = p1(0.0);
  double cur = p1(h);
  for (double s = 2 * h; s <= t_max; s += h) {
    const double next = p1(s);
    if (cur > 0.5 && cur > prev && cur > next) {
      double lo = s - 2 * h;
      double hi = s;
      // dp1 > 0 at lo, < 0 at hi.
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (dp1(mid) > 0.0)
          lo = mid;
        else
          hi = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev = cur;
    cur = next;
  }
  throw NumericalError("revival_period: no revival of p1 above 0.5 before t_max");
}

TimeReversalReport time_reversal_check(const TrimerSpec& t, const VectorXd& times, double tol) {
  if (t.gauge != GaugeStyle::Symmetric)
    throw ValidationError("time_reversal_check: requires the symmetric gauge");
  const FlowTrace tr = chiral_flow(t, times);
  TimeReversalReport rep;
  rep.max_asymmetry = (tr.populations.col(1) - tr.populations.col(2)).cwiseAbs().maxCoeff();
  rep.symmetric = rep.max_asymmetry < tol;
  return rep;
}

FluxDualReport hole_loop_flux_check(const TrimerSpec& t) {
  if (t.kind != TrimerKind::BST) throw ValidationError("hole_loop_flux_check: requires a BST");
  LadderPolynomial poly = from_quadratic(build_trimer(t).form);
  for (Index m = 0; m < 3; ++m) poly = ph_substitute(poly, m, 0.0, Direction::Forward);
  const QuadraticForm dual = to_quadratic(poly);
  const std::vector<Index> cycle{0, 1, 2};
  FluxDualReport rep;
  rep.flux = loop_flux(HoppingGraph::from_quadratic(build_trimer(t).form), cycle);
  rep.dual_flux = loop_flux(
      HoppingGraph::from_quadratic(dual, std::vector<FrameTag>(3, FrameTag::hole(0.0))), cycle);
  rep.deviation = std::abs(wrap_phase(rep.dual_flux - (kPi - rep.flux)));
  return rep;
}

BellReport bell_evolution(double delta, double g, double t, Index cutoff) {
  const QuadraticForm q = build_dimer({DimerKind::DBS, delta, delta, g});
  const FockBasis basis = FockBasis::uniform(2, cutoff);
  const MatrixXc H = second_quantize(q, basis);
  const EvolveResult r = evolve(H, fock_state(basis, {0, 1}), t, true);
  VectorXc bell = (fock_state(basis, {1, 0}) + fock_state(basis, {0, 1})) / std::sqrt(2.0);
  BellReport rep;
  rep.state = r.state;
  rep.log_norm = r.log_norm;
  rep.fidelity = std::norm(bell.dot(r.state));
  rep.closed_form = 1.0 / (1.0 + std::exp(-4.0 * g * t));
  return rep;
}

}  // namespace qbh
