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

#include "momentlab/observable.hpp"

#include <cmath>

#include "doctest.h"

using namespace momentlab;

TEST_CASE("Pauli strings") {
  const Observable z = pauli_string(1, "Z");
  CHECK(z.mat(0, 0).real() == doctest::Approx(1.0));
  CHECK(z.mat(1, 1).real() == doctest::Approx(-1.0));
  CHECK(z.mat.trace().real() == doctest::Approx(0.0));
  CHECK(z.trace_norm == doctest::Approx(2.0));

  const Observable zz = pauli_string(2, "ZZ");
  const RVec ev = hermitian_eigenvalues(zz.mat);
  CHECK(ev(0) == doctest::Approx(-1.0));
  CHECK(ev(1) == doctest::Approx(-1.0));
  CHECK(ev(2) == doctest::Approx(1.0));
  CHECK(ev(3) == doctest::Approx(1.0));

  const Observable xi = pauli_string(2, "XI");
  CHECK(xi.mat.trace().real() == doctest::Approx(0.0));
  CHECK(xi.op_norm == doctest::Approx(1.0));

  for (const std::string &letters : {"XYZ", "ZIZ", "YYX"}) {
    const Observable p = pauli_string(3, letters);
    CHECK(p.op_norm == doctest::Approx(1.0));
    CHECK(p.trace_norm == doctest::Approx(8.0));
  }

  CHECK_THROWS_AS(pauli_string(3, "III"), std::invalid_argument);
  CHECK_THROWS_AS(pauli_string(2, "ZQ"), std::invalid_argument);
  CHECK_THROWS_AS(pauli_string(2, "Z"), std::invalid_argument);
}

TEST_CASE("observable construction guards") {
  CHECK_THROWS_AS(make_observable(2.0 * CMat::Identity(4, 4)), std::invalid_argument);
  CMat skew = CMat::Zero(2, 2);
  skew(0, 1) = 1.0;
  CHECK_THROWS_AS(make_observable(skew), std::invalid_argument);

  const Observable id = identity_observable(8);
  CHECK(id.op_norm == doctest::Approx(1.0));
  CHECK(id.trace_norm == doctest::Approx(8.0));

  const Observable diag = random_diagonal_observable(16, 5);
  CHECK(diag.op_norm <= 1.0 + 1e-12);
  CHECK(diag.trace_norm >= 8.0);
}

TEST_CASE("biased block reduction") {
  SUBCASE("identity observable") {
    const auto bb = biased_block(identity_observable(8), 1.0);
    CHECK(bb.D == 4);
    CHECK_FALSE(bb.sign_flipped);
    CHECK((bb.block - CMat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(bb.trace_B == doctest::Approx(4.0));
    // VV+ is a rank-D projection.
    const CMat vvd = bb.isometry * bb.isometry.adjoint();
    CHECK((vvd * vvd - vvd).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(vvd.trace().real() == doctest::Approx(4.0));
  }

  SUBCASE("Z string keeps the full +1 eigenspace") {
    const auto bb = biased_block(pauli_string(3, "ZZZ"), 1.0);
    CHECK(bb.D == 4);
    CHECK(bb.trace_B == doctest::Approx(4.0));
    CHECK((bb.block - CMat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
  }

  SUBCASE("three-quarters positive spectrum") {
    CMat m = CMat::Identity(8, 8);
    m(6, 6) = -1;
    m(7, 7) = -1;
    const auto bb = biased_block(make_observable(m), 1.0);
    CHECK(bb.trace_B == doctest::Approx(4.0));
  }

  SUBCASE("sign symmetry O <-> -O") {
    const Observable o = random_diagonal_observable(12, 77);
    const Observable neg = make_observable(-o.mat);
    const auto bb = biased_block(o, 0.5);
    const auto nb = biased_block(neg, 0.5);
    CHECK(bb.sign_flipped != nb.sign_flipped);
    CHECK((bb.block + nb.block).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(bb.trace_B == doctest::Approx(-nb.trace_B));
    // The effective blocks coincide.
    CHECK((bb.effective_block() - nb.effective_block()).cwiseAbs().maxCoeff() < 1e-10);
  }

  SUBCASE("trace-norm promise is checked") {
    CMat tiny = CMat::Zero(8, 8);
    tiny(0, 0) = 1.0;
    CHECK_THROWS_AS(biased_block(make_observable(tiny), 0.5), std::invalid_argument);
  }
}

TEST_CASE("embedded gap experiment with the identity observable") {
  const HardPair hp = build_hard_pair(3);
  const auto rep = embedded_gap_experiment(hp, identity_observable(16), 1.0, 1500, 99);
  CHECK(rep.D == 8);

  // B = I_D: zero variance, every trial sits exactly at the mean.
  CHECK(rep.var_p == doctest::Approx(0.0));
  CHECK(rep.var_q == doctest::Approx(0.0));
  CHECK(rep.hit_p == doctest::Approx(1.0));
  CHECK(rep.hit_q == doctest::Approx(1.0));
  CHECK(rep.variance_condition_met);

  // Means are the pure moments; separation is the hard-pair gap.
  double sum_p3 = 0, sum_q3 = 0;
  for (double x : hp.p_weights()) sum_p3 += x * x * x;
  for (double x : hp.q_weights()) sum_q3 += x * x * x;
  CHECK(rep.mean_p == doctest::Approx(sum_p3).epsilon(1e-12));
  CHECK(rep.mean_q == doctest::Approx(sum_q3).epsilon(1e-12));
  CHECK(std::abs(rep.mean_p - rep.mean_q) >= 2.0 * rep.Delta - 1e-9);
  CHECK(std::abs(rep.mc_mean_p - rep.mean_p) <= 4.0 * rep.se_p + 1e-12);

  // Ambient route agrees with the compressed one.
  CHECK(rep.audit_count == 10);
  CHECK(rep.audit_max_dev <= 1e-9);

  const auto mid = midpoint_threshold(rep);
  CHECK(std::abs(rep.mean_p - mid.tau) >= rep.Delta - 1e-12);
  CHECK(std::abs(rep.mean_q - mid.tau) >= rep.Delta - 1e-12);
  CHECK(mid.p_above == (rep.mean_p > rep.mean_q));
}

TEST_CASE("embedded gap experiment with a random diagonal observable") {
  const HardPair hp = build_hard_pair(3);
  const Observable o = random_diagonal_observable(64, 4242);
  const auto rep = embedded_gap_experiment(hp, o, 0.5, 4000, 4243);
  CHECK(rep.D == 32);
  CHECK(std::abs(rep.mean_p - rep.mean_q) >= 2.0 * rep.Delta - 1e-9);
  CHECK(std::abs(rep.mc_mean_p - rep.mean_p) <= 4.0 * rep.se_p + 1e-12);
  CHECK(std::abs(rep.mc_mean_q - rep.mean_q) <= 4.0 * rep.se_q + 1e-12);
  CHECK(rep.var_p <= rep.D / (rep.D * rep.D - 1.0) + 1e-12);
  CHECK(rep.var_q <= rep.D / (rep.D * rep.D - 1.0) + 1e-12);
  CHECK(rep.audit_max_dev <= 1e-9);

  const nlohmann::json j = to_json(rep);
  CHECK(j["trials"] == 4000);
  CHECK(j["basis_hash"].get<std::string>().size() == 16);
}

TEST_CASE("interval disjointness across the observable test matrix") {
  for (int t : {3, 4, 5}) {
    const HardPair hp = build_hard_pair(t);
    struct Case {
      Observable o;
      double eta;
    };
    const std::vector<Case> cases{{identity_observable(16), 1.0},
                                  {pauli_string(3, "ZZZ"), 1.0},
                                  {random_diagonal_observable(16, 900 + t), 0.5}};
    for (const auto &c : cases) {
      const auto rep = embedded_gap_experiment(hp, c.o, c.eta, 200, 31 * t);
      CHECK(std::abs(rep.mean_p - rep.mean_q) >= 2.0 * rep.Delta - 1e-9);
    }
  }
}

TEST_CASE("embedded gap experiment requires D >= m") {
  const HardPair hp = build_hard_pair(5);  // m = 3
  CHECK_THROWS_AS(embedded_gap_experiment(hp, identity_observable(4), 1.0, 10, 1),
                  std::invalid_argument);
}
