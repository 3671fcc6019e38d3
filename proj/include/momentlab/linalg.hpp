// Copyright 2026 The momentlab developers
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

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

#include "momentlab/rng.hpp"

namespace momentlab {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Complex = std::complex<double>;

/// Haar-random unit vector in C^d (normalized complex Gaussian).
inline CVec haar_state(int d, Rng &rng) {
  if (d < 2) throw std::invalid_argument("haar_state: d < 2");
  CVec v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.complex_gaussian();
  v /= v.norm();
  return v;
}

namespace detail {
/// QR with the diagonal phase correction that makes the factor Haar.
inline CMat phase_fixed_q(const CMat &ginibre, int cols) {
  Eigen::HouseholderQR<CMat> qr(ginibre);
  CMat q = qr.householderQ() * CMat::Identity(ginibre.rows(), cols);
  const CMat &qrmat = qr.matrixQR();
  for (int i = 0; i < cols; ++i) {
    const Complex rii = qrmat(i, i);
    const double a = std::abs(rii);
    q.col(i) *= (a > 0) ? rii / a : Complex(1, 0);
  }
  return q;
}
}  // namespace detail

/// Haar-random unitary in U(D).
inline CMat haar_unitary(int D, Rng &rng) {
  CMat z(D, D);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) z(i, j) = rng.complex_gaussian();
  return detail::phase_fixed_q(z, D);
}

/// First m columns of a Haar-random unitary in U(D).
inline CMat haar_isometry(int D, int m, Rng &rng) {
  if (m > D) throw std::invalid_argument("haar_isometry: m > D");
  CMat z(D, m);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < m; ++j) z(i, j) = rng.complex_gaussian();
  return detail::phase_fixed_q(z, m);
}

inline CMat kron(const CMat &a, const CMat &b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline CMat hermitize(const CMat &m) { return 0.5 * (m + m.adjoint()); }

inline RVec hermitian_eigenvalues(const CMat &m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// Operator norm of a Hermitian (or numerically near-Hermitian) matrix.
inline double op_norm_hermitian(const CMat &m) {
  const RVec ev = hermitian_eigenvalues(m);
  return std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
}

/// Trace norm of a Hermitian matrix.
inline double trace_norm_hermitian(const CMat &m) {
  return hermitian_eigenvalues(m).cwiseAbs().sum();
}

inline double hermiticity_deviation(const CMat &m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace momentlab
