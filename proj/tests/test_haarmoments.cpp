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

#include "momentlab/haarmoments.hpp"

#include <cmath>

#include "doctest.h"

using namespace momentlab;

namespace {

CMat random_hermitian(int d, Rng &rng) {
  CMat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = rng.complex_gaussian();
  return hermitize(m);
}

}  // namespace

TEST_CASE("twirl coefficients: closed forms") {
  for (int D : {2, 3, 5}) {
    const auto tc = twirl2_coefficients(CMat::Identity(D, D));
    CHECK(tc.alpha == doctest::Approx(1.0));
    CHECK(tc.beta == doctest::Approx(0.0));
  }

  // A = diag(1, 0): tr A = tr A^2 = 1, so alpha = beta = 1/6 at D = 2.
  CMat a = CMat::Zero(2, 2);
  a(0, 0) = 1;
  const auto tc = twirl2_coefficients(a);
  CHECK(tc.alpha == doctest::Approx(1.0 / 6));
  CHECK(tc.beta == doctest::Approx(1.0 / 6));

  const auto exact = twirl2_coefficients_exact(rat(1), rat(1), 2);
  CHECK(exact.alpha == rat(1, 6));
  CHECK(exact.beta == rat(1, 6));

  // Traceless with tr A^2 = 1.
  for (long D : {2L, 3L, 4L}) {
    const auto tl = twirl2_coefficients_exact(rat(0), rat(1), D);
    CHECK(tl.alpha == -Rational(1) / (Rational(D) * (D * D - 1)));
    CHECK(tl.beta == Rational(1) / Rational(D * D - 1));
  }
}

TEST_CASE("twirl coefficients solve the defining linear system") {
  Rng rng(314);
  for (int D : {2, 3, 4, 6}) {
    const CMat a = random_hermitian(D, rng);
    const auto tc = twirl2_coefficients(a);
    const double tr_a = a.trace().real();
    const double tr_a2 = (a * a).trace().real();
    CHECK(std::abs(tc.alpha * D * D + tc.beta * D - tr_a * tr_a) < 1e-10 * (1 + tr_a * tr_a));
    CHECK(std::abs(tc.alpha * D + tc.beta * D * D - tr_a2) < 1e-10 * (1 + tr_a2));
  }
}

TEST_CASE("Haar mean and variance formula") {
  Rng rng(2718);

  SUBCASE("A or B proportional to the identity kills the variance") {
    const CMat b = random_hermitian(3, rng);
    const auto mv = haar_mean_var(2.5 * CMat::Identity(3, 3), b);
    CHECK(mv.variance == doctest::Approx(0.0));
    CHECK(mv.mean == doctest::Approx(2.5 * b.trace().real()));

    const CMat a = random_hermitian(3, rng);
    const auto mv2 = haar_mean_var(a, CMat::Identity(3, 3));
    CHECK(mv2.variance == doctest::Approx(0.0));
    CHECK(mv2.mean == doctest::Approx(a.trace().real()));
  }

  SUBCASE("symmetry in A and B, nonnegativity") {
    for (int rep = 0; rep < 10; ++rep) {
      const CMat a = random_hermitian(4, rng);
      const CMat b = random_hermitian(4, rng);
      const auto ab = haar_mean_var(a, b);
      const auto ba = haar_mean_var(b, a);
      CHECK(ab.variance == ba.variance);
      CHECK(ab.mean == doctest::Approx(ba.mean));
      CHECK(ab.variance >= -1e-15);
    }
  }

  SUBCASE("variance vanishes only at the identity point of the family") {
    const CMat b = random_hermitian(3, rng);
    CMat probe = CMat::Zero(3, 3);
    probe(0, 0) = 1;
    probe(1, 1) = -1;
    for (double theta : {-0.5, -0.1, 0.1, 0.8}) {
      const CMat a = CMat::Identity(3, 3) + theta * probe;
      CHECK(haar_mean_var(a, b).variance > 1e-8);
    }
    CHECK(haar_mean_var(CMat::Identity(3, 3), b).variance == doctest::Approx(0.0));
  }

  SUBCASE("rank-one A against contractions: variance <= D/(D^2-1)") {
    const int D = 4;
    CMat a = CMat::Zero(D, D);
    a(0, 0) = 1;
    for (int rep = 0; rep < 10; ++rep) {
      CMat b = random_hermitian(D, rng);
      b /= op_norm_hermitian(b);
      CHECK(haar_mean_var(a, b).variance <= D / (D * D - 1.0) + 1e-12);
    }
  }
}

TEST_CASE("Monte Carlo agreement of mean and variance") {
  SUBCASE("zero-mean configuration") {
    CMat a = CMat::Zero(2, 2), b = CMat::Zero(2, 2);
    a(0, 0) = 1;
    b(0, 0) = 1;
    b(1, 1) = -1;
    const auto res = haar_mean_var_mc(a, b, 30000, 21);
    CHECK(res.formula_mean == doctest::Approx(0.0));
    CHECK(std::abs(res.z_mean) <= 4.0);
    CHECK(res.var_ratio > 0.8);
    CHECK(res.var_ratio < 1.25);
  }

  SUBCASE("random Hermitian pair at D = 4") {
    Rng rng(606);
    const CMat a = random_hermitian(4, rng);
    const CMat b = random_hermitian(4, rng);
    const auto res = haar_mean_var_mc(a, b, 30000, 22);
    CHECK(std::abs(res.z_mean) <= 4.0);
    CHECK(res.var_ratio > 0.8);
    CHECK(res.var_ratio < 1.25);
  }

  SUBCASE("A = I is exactly invariant") {
    Rng rng(607);
    const CMat b = random_hermitian(3, rng);
    const auto res = haar_mean_var_mc(CMat::Identity(3, 3), b, 2000, 23);
    CHECK(res.mc_var <= 1e-20);
    CHECK(res.formula_var == doctest::Approx(0.0));
  }
}

TEST_CASE("twirl reconstruction matches Monte Carlo in operator norm") {
  Rng rng(8080);
  for (int D : {2, 3}) {
    CMat a = random_hermitian(D, rng);
    a /= op_norm_hermitian(a);
    const int trials = 20000;
    CHECK(twirl1_reconstruction_check(a, trials, 100 + D) < 5.0 / std::sqrt(trials));
    CHECK(twirl2_reconstruction_check(a, trials, 200 + D) < 5.0 / std::sqrt(trials));
  }
}
