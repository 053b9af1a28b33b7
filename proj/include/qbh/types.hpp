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

#ifndef QBH_TYPES_HPP
#define QBH_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qbh {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;
using MatrixXd = Eigen::MatrixXd;
using VectorXd = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

// Error hierarchy. The CLI maps ValidationError to exit status 2 and
// NumericalError to exit status 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class DefectiveSpectrumError : public NumericalError {
 public:
  DefectiveSpectrumError(const std::string& what, cplx eigenvalue)
      : NumericalError(what), eigenvalue_(eigenvalue) {}
  cplx eigenvalue() const { return eigenvalue_; }

 private:
  cplx eigenvalue_;
};

class PairingError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Pauli-type Nambu matrix tau_k = sigma_k (x) I_N, k in {1, 2, 3}.
template <typename Scalar = cplx>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> tau(int k, Index n_modes) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat t = Mat::Zero(2 * n_modes, 2 * n_modes);
  const auto id = Mat::Identity(n_modes, n_modes);
  switch (k) {
    case 1:
      t.topRightCorner(n_modes, n_modes) = id;
      t.bottomLeftCorner(n_modes, n_modes) = id;
      break;
    case 2:
      if constexpr (Eigen::NumTraits<Scalar>::IsComplex) {
        t.topRightCorner(n_modes, n_modes) = -Scalar(0, 1) * id;
        t.bottomLeftCorner(n_modes, n_modes) = Scalar(0, 1) * id;
      } else {
        throw ValidationError("tau_2 needs a complex scalar type");
      }
      break;
    case 3:
      t.topLeftCorner(n_modes, n_modes) = id;
      t.bottomRightCorner(n_modes, n_modes) = -id;
      break;
    default:
      throw ValidationError("tau index must be 1, 2 or 3");
  }
  return t;
}

/// Largest absolute entry; the residual norm used by the symmetry audits.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : static_cast<double>(m.cwiseAbs().maxCoeff());
}

}  // namespace qbh

#endif  // QBH_TYPES_HPP
