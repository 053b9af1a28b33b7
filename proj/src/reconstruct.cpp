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

#include <algorithm>
#include <sstream>

#include <Eigen/SparseCore>

#include "qbh/fock_engine.hpp"
#include "qbh/quad_core.hpp"

namespace qbh {

namespace {

double reconstruct_residual(const QuadraticForm& q, const QuasiModeSet& modes,
                            const FockBasis& basis, Index levels) {
  const Index n = q.n_modes();
  using Sparse = Eigen::SparseMatrix<cplx>;
  std::vector<Sparse> a(n);
  std::vector<Sparse> ad(n);
  for (Index j = 0; j < n; ++j) {
    a[j] = ladder_matrix(basis, j).sparseView();
    ad[j] = a[j].adjoint();
  }

  const MatrixXc t3 = tau(3, n);
  const Index dim = basis.dim();
  MatrixXc H = (q.c0() - 0.5 * q.M().trace()) * MatrixXc::Identity(dim, dim);
  for (const QuasiMode& mode : modes.modes) {
    // b = l alpha with l = partner^dag tau3; c = alpha^dag tau3 right.
    const Eigen::RowVectorXcd l = mode.partner.adjoint() * t3;
    Sparse b(dim, dim);
    Sparse c(dim, dim);
    for (Index j = 0; j < n; ++j) {
      b += l[j] * a[j] + l[n + j] * ad[j];
      c += mode.right[j] * ad[j] - mode.right[n + j] * a[j];
    }
    const Sparse cb = c * b;
    H += mode.frequency * MatrixXc(cb);
    H.diagonal().array() += 0.5 * mode.frequency;
  }
  const MatrixXc direct = second_quantize(q, basis);
  return interior_max_abs(MatrixXc(H - direct), basis.interior_indices(levels));
}

}  // namespace

ReconstructionReport reconstruct_check(const QuadraticForm& q, const QuasiModeSet& modes,
                                       const FockBasis& basis, Index interior_levels) {
  if (basis.n_modes() != q.n_modes())
    throw ValidationError("reconstruct_check: basis mode count does not match the form");
  if (static_cast<Index>(modes.modes.size()) != q.n_modes())
    throw ValidationError("reconstruct_check: expected one quasimode per mode");
  ReconstructionReport rep;
  rep.interior_levels = interior_levels > 0 ? interior_levels : basis.default_interior();
  rep.cutoff = *std::min_element(basis.cutoffs().begin(), basis.cutoffs().end());
  if (rep.interior_levels + 2 > rep.cutoff)
    throw ValidationError("reconstruct_check: interior must stay two levels below the cutoff");
  rep.residual = reconstruct_residual(q, modes, basis, rep.interior_levels);

  double scale = 1.0;
  for (const QuasiMode& m : modes.modes) scale = std::max(scale, std::abs(m.frequency));
  if (rep.residual > 1e-8 * scale * static_cast<double>(rep.cutoff)) {
    std::vector<Index> larger = basis.cutoffs();
    for (Index& c : larger) c += 2;
    const double again = reconstruct_residual(q, modes, FockBasis(larger), rep.interior_levels);
    if (!(again < rep.residual)) {
      std::ostringstream msg;
      msg << "reconstruct_check: inadequate cutoff, residual " << rep.residual << " -> " << again
          << " under cutoff increase";
      throw NumericalError(msg.str());
    }
  }
  return rep;
}

}  // namespace qbh
