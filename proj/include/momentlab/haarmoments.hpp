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

#include <cmath>

#include "momentlab/linalg.hpp"
#include "momentlab/rational.hpp"
#include "momentlab/tensorperm.hpp"

namespace momentlab {

/**
 * Coefficients of the second-order twirl E[(UAU+)^{x2}] = alpha I x I + beta F,
 * where F is the swap. They solve alpha D^2 + beta D = tr(A)^2 and
 * alpha D + beta D^2 = tr(A^2).
 */
struct TwirlCoefficients {
  double alpha = 0;
  double beta = 0;
  int D = 0;
};

inline TwirlCoefficients twirl2_coefficients(const CMat &a) {
  const int D = static_cast<int>(a.rows());
  if (D < 2) throw std::invalid_argument("twirl2_coefficients: D < 2");
  const double tr_a = a.trace().real();
  const double tr_a2 = (a * a).trace().real();
  const double denom = static_cast<double>(D) * (static_cast<double>(D) * D - 1.0);
  return TwirlCoefficients{(D * tr_a * tr_a - tr_a2) / denom,
                           (D * tr_a2 - tr_a * tr_a) / denom, D};
}

struct RationalTwirlCoefficients {
  Rational alpha;
  Rational beta;
};

/// Exact route for rational trace data.
inline RationalTwirlCoefficients twirl2_coefficients_exact(const Rational &tr_a,
                                                           const Rational &tr_a2, long D) {
  if (D < 2) throw std::invalid_argument("twirl2_coefficients_exact: D < 2");
  const Rational denom = Rational(D) * (Rational(D) * Rational(D) - 1);
  return RationalTwirlCoefficients{(Rational(D) * tr_a * tr_a - tr_a2) / denom,
                                   (Rational(D) * tr_a2 - tr_a * tr_a) / denom};
}

struct HaarMeanVar {
  double mean = 0;
  double variance = 0;
};

/**
 * Mean and variance of X = tr(B U A U+) over Haar U in U(D):
 * mean = tr(A) tr(B) / D,
 * var  = (D tr(A^2) - tr(A)^2)(D tr(B^2) - tr(B)^2) / (D^2 (D^2 - 1)).
 */
inline HaarMeanVar haar_mean_var(const CMat &a, const CMat &b) {
  const int D = static_cast<int>(a.rows());
  if (b.rows() != D) throw std::invalid_argument("haar_mean_var: dimension mismatch");
  const double tr_a = a.trace().real(), tr_b = b.trace().real();
  const double tr_a2 = (a * a).trace().real(), tr_b2 = (b * b).trace().real();
  const double dd = static_cast<double>(D);
  HaarMeanVar out;
  out.mean = tr_a * tr_b / dd;
  out.variance = (dd * tr_a2 - tr_a * tr_a) * (dd * tr_b2 - tr_b * tr_b) /
                 (dd * dd * (dd * dd - 1.0));
  return out;
}

struct HaarMcResult {
  double mc_mean = 0;
  double mc_var = 0;
  double se_mean = 0;       // sample standard error of the mean
  double formula_mean = 0;
  double formula_var = 0;
  double z_mean = 0;        // (mc_mean - formula_mean) / se_mean
  double var_ratio = 0;     // mc_var / formula_var (0 when formula_var = 0)
  int trials = 0;
};

inline HaarMcResult haar_mean_var_mc(const CMat &a, const CMat &b, int trials,
                                     std::uint64_t seed) {
  const int D = static_cast<int>(a.rows());
  const HaarMeanVar formula = haar_mean_var(a, b);
  Rng rng(seed);
  double sum = 0, sum_sq = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const CMat u = haar_unitary(D, rng);
    const double x = (b * u * a * u.adjoint()).trace().real();
    sum += x;
    sum_sq += x * x;
  }
  HaarMcResult res;
  res.trials = trials;
  res.formula_mean = formula.mean;
  res.formula_var = formula.variance;
  res.mc_mean = sum / trials;
  res.mc_var = sum_sq / trials - res.mc_mean * res.mc_mean;
  res.mc_var *= static_cast<double>(trials) / (trials - 1);
  res.se_mean = std::sqrt(std::max(res.mc_var, 0.0) / trials);
  res.z_mean = res.se_mean > 0 ? (res.mc_mean - formula.mean) / res.se_mean : 0.0;
  res.var_ratio = formula.variance > 0 ? res.mc_var / formula.variance : 0.0;
  return res;
}

/**
 * Operator-norm deviation between the Monte Carlo average of (UAU+)^{x2}
 * and the reconstructed twirl alpha I x I + beta F.
 */
inline double twirl2_reconstruction_check(const CMat &a, int trials, std::uint64_t seed) {
  const int D = static_cast<int>(a.rows());
  const TwirlCoefficients tc = twirl2_coefficients(a);
  Rng rng(seed);
  CMat avg = CMat::Zero(static_cast<long>(D) * D, static_cast<long>(D) * D);
  for (int trial = 0; trial < trials; ++trial) {
    const CMat u = haar_unitary(D, rng);
    const CMat uau = u * a * u.adjoint();
    avg.noalias() += kron(uau, uau);
  }
  avg /= trials;
  const CMat swap = perm_operator({1, 0}, D).mat;
  const CMat expected = tc.alpha * CMat::Identity(avg.rows(), avg.cols()) + tc.beta * swap;
  return op_norm_hermitian(avg - expected);
}

/// Operator-norm deviation of the Monte Carlo first twirl from tr(A)/D I.
inline double twirl1_reconstruction_check(const CMat &a, int trials, std::uint64_t seed) {
  const int D = static_cast<int>(a.rows());
  Rng rng(seed);
  CMat avg = CMat::Zero(D, D);
  for (int trial = 0; trial < trials; ++trial) {
    const CMat u = haar_unitary(D, rng);
    avg.noalias() += u * a * u.adjoint();
  }
  avg /= trials;
  return op_norm_hermitian(avg - (a.trace().real() / D) * CMat::Identity(D, D));
}

}  // namespace momentlab
