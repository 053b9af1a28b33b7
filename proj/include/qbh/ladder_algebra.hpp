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

#ifndef QBH_LADDER_ALGEBRA_HPP
#define QBH_LADDER_ALGEBRA_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qbh/quad_core.hpp"
#include "qbh/types.hpp"

namespace qbh {

/// Per-mode exponents (p_i, q_i) of (a_i^dag)^p_i (a_i)^q_i, modes ascending.
using Monomial = std::vector<std::pair<int, int>>;

/**
 * Normal-ordered polynomial in multi-mode ladder operators.
 *
 * Terms are keyed by Monomial; zero coefficients are never stored. All
 * reordering uses integer commutator combinatorics, so only the input
 * coefficients carry rounding.
 */
class LadderPolynomial {
 public:
  using TermMap = std::map<Monomial, cplx>;

  explicit LadderPolynomial(Index n_modes = 1);

  static LadderPolynomial constant(Index n_modes, cplx c);
  static LadderPolynomial annihilator(Index n_modes, Index mode);
  static LadderPolynomial creator(Index n_modes, Index mode);
  static LadderPolynomial number(Index n_modes, Index mode);
  static LadderPolynomial monomial(const Monomial& key, cplx c = 1.0);

  Index n_modes() const { return n_modes_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  cplx coefficient(const Monomial& key) const;
  /// Largest total number of ladder operators in any term.
  int degree() const;

  /// Accumulates c into the term; drops the entry if it becomes exactly 0.
  void add_term(const Monomial& key, cplx c);

  LadderPolynomial adjoint() const;

  LadderPolynomial& operator+=(const LadderPolynomial& o);
  LadderPolynomial& operator-=(const LadderPolynomial& o);
  friend LadderPolynomial operator+(LadderPolynomial a, const LadderPolynomial& b) { return a += b; }
  friend LadderPolynomial operator-(LadderPolynomial a, const LadderPolynomial& b) { return a -= b; }
  friend LadderPolynomial operator*(const LadderPolynomial& a, const LadderPolynomial& b);
  friend LadderPolynomial operator*(cplx s, const LadderPolynomial& p);
  friend bool operator==(const LadderPolynomial& a, const LadderPolynomial& b) {
    return a.n_modes_ == b.n_modes_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const LadderPolynomial& a, const LadderPolynomial& b) { return !(a == b); }

 private:
  void check_key(const Monomial& key) const;

  Index n_modes_;
  TermMap terms_;
};

/// Largest coefficient difference over the union of terms.
double max_coefficient_difference(const LadderPolynomial& a, const LadderPolynomial& b);

/// Golden text form: one line per term, `re im : (p_1,q_1)...(p_N,q_N)`.
std::string to_text(const LadderPolynomial& p);
LadderPolynomial parse_text(const std::string& text, Index n_modes);

struct Letter {
  Index mode = 0;
  bool dagger = false;
};

/// Arbitrary-order product of ladder operators with a coefficient.
struct LadderWord {
  cplx coeff = 1.0;
  std::vector<Letter> letters;
};

LadderPolynomial normal_order(const std::vector<LadderWord>& words, Index n_modes);

enum class Direction { Forward, Inverse };

/**
 * Particle-hole substitution on one mode, re-normal-ordered.
 *
 *   Forward: a -> -i e^{i theta} a^dag,  a^dag -> -i e^{-i theta} a
 *   Inverse: a ->  i e^{i theta} a^dag,  a^dag ->  i e^{-i theta} a
 */
LadderPolynomial ph_substitute(const LadderPolynomial& p, Index mode, double theta,
                               Direction direction);

/// Linear exchange a -> u a^dag, a^dag -> v a on one mode.
LadderPolynomial exchange_substitute(const LadderPolynomial& p, Index mode, cplx u, cplx v);

/// D^-1 O D for D = exp(alpha a^dag - conj(alpha) a): a -> a + alpha.
LadderPolynomial displace(const LadderPolynomial& p, Index mode, cplx alpha);

LadderPolynomial from_quadratic(const QuadraticForm& q);
/// Throws ValidationError on linear terms or degree > 2.
QuadraticForm to_quadratic(const LadderPolynomial& p);

/// Coefficient-level conjugation of q by the particle-hole exchange on one mode.
QuadraticForm dual_quadratic(const QuadraticForm& q, Index mode, double theta,
                             Direction direction = Direction::Forward);

/// BdG-level counterpart of dual_quadratic: h' = K^-1 h K.
MatrixXc frame_exchange_matrix(Index n_modes, Index mode, double theta,
                               Direction direction = Direction::Forward);

struct FrameTag {
  enum class Kind { Particle, Hole };
  Kind kind = Kind::Particle;
  double theta = 0.0;  // in [0, 2 pi)

  static FrameTag particle() { return {}; }
  static FrameTag hole(double theta);
  bool is_hole() const { return kind == Kind::Hole; }
};

std::string to_string(const FrameTag& f);

/// <m|a^dag^p a^q|n> for particle Fock states; exact up to one sqrt.
double fock_element(int m, int n, int p, int q);

/// <bra| obs |ket> between particle Fock states, no truncation.
cplx fock_expectation(const LadderPolynomial& obs, const std::vector<int>& bra,
                      const std::vector<int>& ket);

/**
 * Matrix element between biorthogonal Fock states of the given frames. Hole
 * frames are handled by the Inverse substitution (the hole states are
 * Omega^-1 |n>, their partners Omega |m>), then evaluated exactly.
 */
cplx hole_frame_expectation(const LadderPolynomial& obs, const std::vector<int>& bra_occ,
                            const std::vector<int>& ket_occ, const std::vector<FrameTag>& frames);

/// Applies the frame map of every Hole-tagged mode to obs.
LadderPolynomial to_frame(const LadderPolynomial& obs, const std::vector<FrameTag>& frames);

// amplitude(i, j) is the coefficient of a_i^dag a_j, read as a hop j -> i
// with phase phi_ij = -arg amplitude(i, j).
class HoppingGraph {
 public:
  explicit HoppingGraph(Index n_nodes, std::vector<FrameTag> frames = {});
  static HoppingGraph from_quadratic(const QuadraticForm& q, std::vector<FrameTag> frames = {},
                                     double tol = 0.0);

  void set_amplitude(Index i, Index j, cplx t);
  bool has_edge(Index i, Index j) const;
  cplx amplitude(Index i, Index j) const;
  Index n_nodes() const { return n_; }
  const std::vector<FrameTag>& frames() const { return frames_; }

 private:
  Index n_;
  std::vector<FrameTag> frames_;
  std::map<std::pair<Index, Index>, cplx> edges_;
};

/// Reduces x into (-pi, pi].
double wrap_phase(double x);

/// Sum of phi along consecutive nodes of the closed cycle, in (-pi, pi].
double loop_flux(const HoppingGraph& g, const std::vector<Index>& cycle);

/// Local U(1) rotation a_i^dag -> a_i^dag e^{i chi_i}.
QuadraticForm gauge_transform(const QuadraticForm& q, const std::vector<double>& chi);

}  // namespace qbh

#endif  // QBH_LADDER_ALGEBRA_HPP
