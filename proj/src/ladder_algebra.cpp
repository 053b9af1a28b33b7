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

#include "qbh/ladder_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>

namespace qbh {

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

struct Piece {
  int p;
  int q;
  double weight;
};

// (a^dag^p a^q)(a^dag^r a^s) = sum_k C(q,k) C(r,k) k! a^dag^{p+r-k} a^{q+s-k}
std::vector<Piece> single_mode_product(int p, int q, int r, int s) {
  std::vector<Piece> out;
  const int kmax = std::min(q, r);
  for (int k = 0; k <= kmax; ++k)
    out.push_back({p + r - k, q + s - k, binomial(q, k) * binomial(r, k) * factorial(k)});
  return out;
}

// a^p a^dag^q = sum_k C(p,k) C(q,k) k! a^dag^{q-k} a^{p-k}
std::vector<Piece> antinormal_expansion(int p, int q) { return single_mode_product(0, p, q, 0); }

// Exact (i^sign)^n for sign = +-1.
cplx i_power(int n, int sign) {
  int r = ((n % 4) + 4) % 4;
  if (sign < 0) r = (4 - r) % 4;
  switch (r) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
  }
}

cplx ipow(cplx z, int n) {
  cplx r = 1.0;
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

using PhaseFn = std::function<cplx(int, int)>;

// Replaces the (p, q) factor of `mode` by phase(p, q) a^p a^dag^q, normal-ordered.
LadderPolynomial exchange_impl(const LadderPolynomial& poly, Index mode, const PhaseFn& phase) {
  if (mode < 0 || mode >= poly.n_modes())
    throw ValidationError("substitution: mode index out of range");
  LadderPolynomial out(poly.n_modes());
  for (const auto& [key, c] : poly.terms()) {
    const auto [p, q] = key[mode];
    const cplx ph = phase(p, q);
    for (const Piece& piece : antinormal_expansion(p, q)) {
      Monomial k2 = key;
      k2[mode] = {piece.p, piece.q};
      out.add_term(k2, c * ph * piece.weight);
    }
  }
  return out;
}

}  // namespace

LadderPolynomial::LadderPolynomial(Index n_modes) : n_modes_(n_modes) {
  if (n_modes < 1) throw ValidationError("LadderPolynomial: n_modes must be positive");
}

void LadderPolynomial::check_key(const Monomial& key) const {
  if (static_cast<Index>(key.size()) != n_modes_)
    throw ValidationError("LadderPolynomial: monomial length does not match mode count");
  for (const auto& [p, q] : key)
    if (p < 0 || q < 0) throw ValidationError("LadderPolynomial: negative exponent");
}

LadderPolynomial LadderPolynomial::constant(Index n_modes, cplx c) {
  LadderPolynomial r(n_modes);
  r.add_term(Monomial(n_modes, {0, 0}), c);
  return r;
}

LadderPolynomial LadderPolynomial::annihilator(Index n_modes, Index mode) {
  Monomial k(n_modes, {0, 0});
  k.at(mode) = {0, 1};
  return monomial(k);
}

LadderPolynomial LadderPolynomial::creator(Index n_modes, Index mode) {
  Monomial k(n_modes, {0, 0});
  k.at(mode) = {1, 0};
  return monomial(k);
}

LadderPolynomial LadderPolynomial::number(Index n_modes, Index mode) {
  Monomial k(n_modes, {0, 0});
  k.at(mode) = {1, 1};
  return monomial(k);
}

LadderPolynomial LadderPolynomial::monomial(const Monomial& key, cplx c) {
  LadderPolynomial r(static_cast<Index>(key.size()));
  r.add_term(key, c);
  return r;
}

cplx LadderPolynomial::coefficient(const Monomial& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? cplx(0.0) : it->second;
}

int LadderPolynomial::degree() const {
  int d = 0;
  for (const auto& [key, c] : terms_) {
    int s = 0;
    for (const auto& [p, q] : key) s += p + q;
    d = std::max(d, s);
  }
  return d;
}

void LadderPolynomial::add_term(const Monomial& key, cplx c) {
  check_key(key);
  if (c == cplx(0.0)) return;
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx(0.0)) terms_.erase(it);
  }
}

LadderPolynomial LadderPolynomial::adjoint() const {
  LadderPolynomial r(n_modes_);
  for (const auto& [key, c] : terms_) {
    Monomial k2 = key;
    for (auto& [p, q] : k2) std::swap(p, q);
    r.add_term(k2, std::conj(c));
  }
  return r;
}

LadderPolynomial& LadderPolynomial::operator+=(const LadderPolynomial& o) {
  if (o.n_modes_ != n_modes_) throw ValidationError("LadderPolynomial: mode count mismatch");
  for (const auto& [key, c] : o.terms_) add_term(key, c);
  return *this;
}

LadderPolynomial& LadderPolynomial::operator-=(const LadderPolynomial& o) {
  if (o.n_modes_ != n_modes_) throw ValidationError("LadderPolynomial: mode count mismatch");
  for (const auto& [key, c] : o.terms_) add_term(key, -c);
  return *this;
}

LadderPolynomial operator*(cplx s, const LadderPolynomial& p) {
  LadderPolynomial r(p.n_modes_);
  for (const auto& [key, c] : p.terms_) r.add_term(key, s * c);
  return r;
}

LadderPolynomial operator*(const LadderPolynomial& a, const LadderPolynomial& b) {
  if (a.n_modes_ != b.n_modes_) throw ValidationError("LadderPolynomial: mode count mismatch");
  const Index n = a.n_modes_;
  LadderPolynomial r(n);
  std::vector<std::vector<Piece>> per_mode(n);
  Monomial key(n);
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      // Distinct modes commute, so the product factorizes mode by mode.
      for (Index m = 0; m < n; ++m)
        per_mode[m] = single_mode_product(ka[m].first, ka[m].second, kb[m].first, kb[m].second);
      const cplx c = ca * cb;
      std::function<void(Index, double)> expand = [&](Index m, double w) {
        if (m == n) {
          r.add_term(key, c * w);
          return;
        }
        for (const Piece& piece : per_mode[m]) {
          key[m] = {piece.p, piece.q};
          expand(m + 1, w * piece.weight);
        }
      };
      expand(0, 1.0);
    }
  }
  return r;
}

double max_coefficient_difference(const LadderPolynomial& a, const LadderPolynomial& b) {
  double d = 0.0;
  for (const auto& [key, c] : a.terms()) d = std::max(d, std::abs(c - b.coefficient(key)));
  for (const auto& [key, c] : b.terms()) d = std::max(d, std::abs(c - a.coefficient(key)));
  return d;
}

std::string to_text(const LadderPolynomial& p) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (const auto& [key, c] : p.terms()) {
    os << c.real() << ' ' << c.imag() << " :";
    os << ' ';
    for (const auto& [pp, qq] : key) os << '(' << pp << ',' << qq << ')';
    os << '\n';
  }
  return os.str();
}

LadderPolynomial parse_text(const std::string& text, Index n_modes) {
  LadderPolynomial r(n_modes);
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    double re = 0.0;
    double im = 0.0;
    char colon = 0;
    if (!(ls >> re >> im >> colon) || colon != ':')
      throw ValidationError("parse_text: malformed coefficient on line " +
                            std::to_string(line_no));
    Monomial key;
    char open = 0;
    while (ls >> open) {
      int pp = 0;
      int qq = 0;
      char comma = 0;
      char close = 0;
      if (open != '(' || !(ls >> pp >> comma >> qq >> close) || comma != ',' || close != ')')
        throw ValidationError("parse_text: malformed monomial on line " +
                              std::to_string(line_no));
      key.emplace_back(pp, qq);
    }
    r.add_term(key, {re, im});
  }
  return r;
}

LadderPolynomial normal_order(const std::vector<LadderWord>& words, Index n_modes) {
  LadderPolynomial r(n_modes);
  for (const LadderWord& w : words) {
    LadderPolynomial acc = LadderPolynomial::constant(n_modes, w.coeff);
    for (const Letter& l : w.letters) {
      if (l.mode < 0 || l.mode >= n_modes)
        throw ValidationError("normal_order: mode index out of range");
      acc = acc * (l.dagger ? LadderPolynomial::creator(n_modes, l.mode)
                            : LadderPolynomial::annihilator(n_modes, l.mode));
    }
    r += acc;
  }
  return r;
}

LadderPolynomial ph_substitute(const LadderPolynomial& p, Index mode, double theta,
                               Direction direction) {
  const int sign = direction == Direction::Forward ? -1 : 1;
  // (a^dag)^p a^q -> (s i e^{-i theta})^p (s i e^{i theta})^q a^p a^dag^q.
  // The theta phase uses the net exponent so balanced terms are exact.
  return exchange_impl(p, mode, [&](int pp, int qq) {
    const cplx unit = i_power(pp + qq, sign);
    return qq == pp ? unit : unit * std::polar(1.0, (qq - pp) * theta);
  });
}

LadderPolynomial exchange_substitute(const LadderPolynomial& p, Index mode, cplx u, cplx v) {
  return exchange_impl(p, mode, [&](int pp, int qq) { return ipow(v, pp) * ipow(u, qq); });
}

LadderPolynomial displace(const LadderPolynomial& poly, Index mode, cplx alpha) {
  if (mode < 0 || mode >= poly.n_modes())
    throw ValidationError("displace: mode index out of range");
  LadderPolynomial out(poly.n_modes());
  const cplx abar = std::conj(alpha);
  for (const auto& [key, c] : poly.terms()) {
    const auto [p, q] = key[mode];
    // (a^dag + abar)^p (a + alpha)^q is already normal-ordered.
    for (int i = 0; i <= p; ++i)
      for (int j = 0; j <= q; ++j) {
        Monomial k2 = key;
        k2[mode] = {i, j};
        out.add_term(k2, c * binomial(p, i) * binomial(q, j) * ipow(abar, p - i) *
                             ipow(alpha, q - j));
      }
  }
  return out;
}

LadderPolynomial from_quadratic(const QuadraticForm& q) {
  const Index n = q.n_modes();
  LadderPolynomial r(n);
  const Monomial zero(n, {0, 0});
  r.add_term(zero, q.c0());
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      Monomial k = zero;
      if (i == j) {
        k[i] = {1, 1};
      } else {
        k[i].first = 1;
        k[j].second = 1;
      }
      r.add_term(k, q.M()(i, j));
    }
    for (Index j = i; j < n; ++j) {
      Monomial kp = zero;
      Monomial kq = zero;
      if (i == j) {
        kp[i] = {2, 0};
        kq[i] = {0, 2};
        r.add_term(kp, 0.5 * q.P()(i, i));
        r.add_term(kq, 0.5 * q.Q()(i, i));
      } else {
        kp[i] = kp[j] = {1, 0};
        kq[i] = kq[j] = {0, 1};
        r.add_term(kp, q.P()(i, j));
        r.add_term(kq, q.Q()(i, j));
      }
    }
  }
  return r;
}

QuadraticForm to_quadratic(const LadderPolynomial& poly) {
  const Index n = poly.n_modes();
  MatrixXc M = MatrixXc::Zero(n, n);
  MatrixXc P = MatrixXc::Zero(n, n);
  MatrixXc Q = MatrixXc::Zero(n, n);
  cplx c0 = 0.0;
  for (const auto& [key, c] : poly.terms()) {
    std::vector<Index> active;
    int deg = 0;
    for (Index m = 0; m < n; ++m) {
      const auto [p, q] = key[m];
      if (p + q > 0) active.push_back(m);
      deg += p + q;
    }
    auto reject = [&]() {
      std::ostringstream msg;
      msg << "to_quadratic: term of degree " << deg << " is not quadratic: " << c << " ";
      for (const auto& [p, q] : key) msg << '(' << p << ',' << q << ')';
      throw ValidationError(msg.str());
    };
    if (deg == 0) {
      c0 += c;
    } else if (deg != 2) {
      reject();
    } else if (active.size() == 1) {
      const Index i = active[0];
      const auto [p, q] = key[i];
      if (p == 1)
        M(i, i) += c;
      else if (p == 2)
        P(i, i) += 2.0 * c;
      else
        Q(i, i) += 2.0 * c;
    } else {
      const Index i = active[0];
      const Index j = active[1];
      const auto [pi, qi] = key[i];
      const auto [pj, qj] = key[j];
      (void)qi;
      (void)qj;
      if (pi == 1 && pj == 1) {
        P(i, j) += c;
        P(j, i) += c;
      } else if (pi == 0 && pj == 0) {
        Q(i, j) += c;
        Q(j, i) += c;
      } else if (pi == 1) {
        M(i, j) += c;
      } else {
        M(j, i) += c;
      }
    }
  }
  return {M, P, Q, c0};
}

namespace {

std::pair<cplx, cplx> exchange_constants(double theta, Direction direction) {
  const cplx s = direction == Direction::Forward ? -kI : kI;
  // u multiplies a^dag in the image of a, v multiplies a in the image of a^dag.
  return {s * std::polar(1.0, theta), s * std::polar(1.0, -theta)};
}

}  // namespace

QuadraticForm dual_quadratic(const QuadraticForm& q, Index k, double theta, Direction direction) {
  const Index n = q.n_modes();
  if (k < 0 || k >= n) throw ValidationError("dual_quadratic: mode index out of range");
  const auto [u, v] = exchange_constants(theta, direction);
  const MatrixXc& M = q.M();
  const MatrixXc& P = q.P();
  const MatrixXc& Q = q.Q();
  MatrixXc M2 = M;
  MatrixXc P2 = P;
  MatrixXc Q2 = Q;
  for (Index j = 0; j < n; ++j) {
    if (j == k) continue;
    M2(k, j) = u * Q(k, j);
    M2(j, k) = v * P(k, j);
    P2(k, j) = P2(j, k) = u * M(j, k);
    Q2(k, j) = Q2(j, k) = v * M(k, j);
  }
  // a^dag a -> v u a a^dag = -(a^dag a + 1)
  M2(k, k) = -M(k, k);
  P2(k, k) = u * u * Q(k, k);
  Q2(k, k) = v * v * P(k, k);
  return {M2, P2, Q2, q.c0() - M(k, k)};
}

MatrixXc frame_exchange_matrix(Index n_modes, Index mode, double theta, Direction direction) {
  if (mode < 0 || mode >= n_modes)
    throw ValidationError("frame_exchange_matrix: mode index out of range");
  const auto [u, v] = exchange_constants(theta, direction);
  MatrixXc K = MatrixXc::Identity(2 * n_modes, 2 * n_modes);
  K(mode, mode) = 0.0;
  K(n_modes + mode, n_modes + mode) = 0.0;
  K(mode, n_modes + mode) = u;
  K(n_modes + mode, mode) = v;
  return K;
}

FrameTag FrameTag::hole(double theta) {
  double t = std::fmod(theta, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  if (t >= 2.0 * kPi) t = 0.0;
  return {Kind::Hole, t};
}

std::string to_string(const FrameTag& f) {
  if (!f.is_hole()) return "Particle";
  std::ostringstream os;
  os << std::setprecision(17) << "Hole(" << f.theta << ")";
  return os.str();
}

double fock_element(int m, int n, int p, int q) {
  if (m < 0 || n < 0 || p < 0 || q < 0) return 0.0;
  if (n < q || m < p || m - p != n - q) return 0.0;
  double prod = 1.0;
  for (int k = n - q + 1; k <= n; ++k) prod *= k;
  for (int k = m - p + 1; k <= m; ++k) prod *= k;
  return std::sqrt(prod);
}

cplx fock_expectation(const LadderPolynomial& obs, const std::vector<int>& bra,
                      const std::vector<int>& ket) {
  const Index n = obs.n_modes();
  if (static_cast<Index>(bra.size()) != n || static_cast<Index>(ket.size()) != n)
    throw ValidationError("fock_expectation: occupation list length does not match mode count");
  for (Index m = 0; m < n; ++m)
    if (bra[m] < 0 || ket[m] < 0)
      throw ValidationError("fock_expectation: occupations must be nonnegative");
  cplx total = 0.0;
  for (const auto& [key, c] : obs.terms()) {
    double w = 1.0;
    for (Index m = 0; m < n && w != 0.0; ++m)
      w *= fock_element(bra[m], ket[m], key[m].first, key[m].second);
    if (w != 0.0) total += c * w;
  }
  return total;
}

LadderPolynomial to_frame(const LadderPolynomial& obs, const std::vector<FrameTag>& frames) {
  if (static_cast<Index>(frames.size()) != obs.n_modes())
    throw ValidationError("frame list length does not match mode count");
  LadderPolynomial r = obs;
  for (Index m = 0; m < obs.n_modes(); ++m)
    if (frames[m].is_hole()) r = ph_substitute(r, m, frames[m].theta, Direction::Inverse);
  return r;
}

cplx hole_frame_expectation(const LadderPolynomial& obs, const std::vector<int>& bra_occ,
                            const std::vector<int>& ket_occ, const std::vector<FrameTag>& frames) {
  return fock_expectation(to_frame(obs, frames), bra_occ, ket_occ);
}

HoppingGraph::HoppingGraph(Index n_nodes, std::vector<FrameTag> frames)
    : n_(n_nodes), frames_(std::move(frames)) {
  if (n_nodes < 1) throw ValidationError("HoppingGraph: needs at least one node");
  if (frames_.empty()) frames_.assign(n_nodes, FrameTag::particle());
  if (static_cast<Index>(frames_.size()) != n_nodes)
    throw ValidationError("HoppingGraph: frame list length does not match node count");
}

HoppingGraph HoppingGraph::from_quadratic(const QuadraticForm& q, std::vector<FrameTag> frames,
                                          double tol) {
  HoppingGraph g(q.n_modes(), std::move(frames));
  for (Index i = 0; i < q.n_modes(); ++i)
    for (Index j = 0; j < q.n_modes(); ++j)
      if (i != j && std::abs(q.M()(i, j)) > tol) g.set_amplitude(i, j, q.M()(i, j));
  return g;
}

void HoppingGraph::set_amplitude(Index i, Index j, cplx t) {
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || i == j)
    throw ValidationError("HoppingGraph: invalid edge");
  edges_[{i, j}] = t;
}

bool HoppingGraph::has_edge(Index i, Index j) const { return edges_.count({i, j}) > 0; }

cplx HoppingGraph::amplitude(Index i, Index j) const {
  auto it = edges_.find({i, j});
  if (it == edges_.end()) {
    std::ostringstream msg;
    msg << "HoppingGraph: missing edge between nodes " << i << " and " << j;
    throw ValidationError(msg.str());
  }
  return it->second;
}

double wrap_phase(double x) {
  double r = std::remainder(x, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

double loop_flux(const HoppingGraph& g, const std::vector<Index>& cycle) {
  if (cycle.size() < 2) throw ValidationError("loop_flux: cycle needs at least two nodes");
  double phi = 0.0;
  for (std::size_t k = 0; k < cycle.size(); ++k) {
    const Index i = cycle[k];
    const Index j = cycle[(k + 1) % cycle.size()];
    phi -= std::arg(g.amplitude(i, j));
  }
  return wrap_phase(phi);
}

QuadraticForm gauge_transform(const QuadraticForm& q, const std::vector<double>& chi) {
  const Index n = q.n_modes();
  if (static_cast<Index>(chi.size()) != n)
    throw ValidationError("gauge_transform: phase list length does not match mode count");
  MatrixXc M = q.M();
  MatrixXc P = q.P();
  MatrixXc Q = q.Q();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (i != j) M(i, j) *= std::polar(1.0, chi[i] - chi[j]);
      P(i, j) *= std::polar(1.0, chi[i] + chi[j]);
      Q(i, j) *= std::polar(1.0, -(chi[i] + chi[j]));
    }
  return {M, P, Q, q.c0()};
}

}  // namespace qbh
