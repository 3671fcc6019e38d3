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

#include "momentlab/symfun.hpp"

#include <thread>
#include <vector>

#include "doctest.h"
#include "momentlab/rng.hpp"

using namespace momentlab;

namespace {

std::vector<Rational> random_points(Rng &rng, int m) {
  std::vector<Rational> pts;
  for (int i = 0; i < m; ++i)
    pts.push_back(make_rational(rng.below(41) - 20, 1 + rng.below(20)));
  return pts;
}

}  // namespace

TEST_CASE("elementary symmetric polynomials of explicit points") {
  const std::vector<Rational> a{rat(1, 3), rat(2, 3)};
  const auto e = elementary_from_points(a);
  REQUIRE(e.size() == 2);
  CHECK(e[0] == rat(1));
  CHECK(e[1] == rat(2, 9));

  const auto single = elementary_from_points(std::vector<Rational>{rat(1)});
  CHECK(single == std::vector<Rational>{rat(1)});

  const auto half = elementary_from_points(std::vector<Rational>{rat(1, 2), rat(1, 2)});
  CHECK(half[0] == rat(1));
  CHECK(half[1] == rat(1, 4));
}

TEST_CASE("Newton's identities from elementary symmetric polynomials") {
  // e = (1, c): s = (1, 1-2c, 1-3c).  Frozen against c = 2/9 and c = 1/5.
  for (const Rational &c : {rat(2, 9), rat(1, 5)}) {
    const auto s = power_sums_from_elementary(std::vector<Rational>{rat(1), c}, 3);
    CHECK(s[0] == rat(1));
    CHECK(s[1] == Rational(1) - 2 * c);
    CHECK(s[2] == Rational(1) - 3 * c);
  }

  const auto ones = power_sums_from_elementary(std::vector<Rational>{rat(1)}, 4);
  CHECK(ones == std::vector<Rational>(4, rat(1)));

  const auto s2 = power_sums_from_elementary(std::vector<Rational>{rat(1), rat(2, 9)}, 2);
  CHECK(s2[1] == rat(5, 9));
}

TEST_CASE("Newton round trip on random rational point sets") {
  Rng rng(20260111);
  for (int trial = 0; trial < 60; ++trial) {
    const int m = 1 + rng.below(6);
    const auto pts = random_points(rng, m);
    const auto via_newton = power_sums_from_elementary(elementary_from_points(pts), 8);
    const auto direct = power_sums_from_points(pts, 8);
    for (int r = 0; r < 8; ++r) CHECK(via_newton[r] == direct[r]);
  }
}

TEST_CASE("complete homogeneous symmetric polynomials") {
  const std::vector<Rational> a{rat(1, 3), rat(2, 3)};
  CHECK(complete_homogeneous(a, 0) == rat(1));
  CHECK(complete_homogeneous(a, 1) == rat(1));  // h_1 = e_1
  CHECK(complete_homogeneous(a, 2) == rat(7, 9));

  // Independent route: h_2 = e_1^2 - e_2.
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pts = random_points(rng, 1 + rng.below(5));
    const auto e = elementary_from_points(pts);
    const Rational e1 = e[0];
    const Rational e2 = e.size() > 1 ? e[1] : Rational(0);
    CHECK(complete_homogeneous(pts, 2) == e1 * e1 - e2);
  }
}

TEST_CASE("generating-function consistency up to order 8") {
  // z d/dz log H(z) = sum_r s_r z^r  <=>  j h_j = sum_{r=1..j} s_r h_{j-r}.
  Rng rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    const auto pts = random_points(rng, 1 + rng.below(5));
    const auto s = power_sums_from_points(pts, 8);
    std::vector<Rational> h(9);
    for (int j = 0; j <= 8; ++j) h[j] = complete_homogeneous(pts, j);
    for (int j = 1; j <= 8; ++j) {
      Rational rhs(0);
      for (int r = 1; r <= j; ++r) rhs += s[r - 1] * h[j - r];
      CHECK(Rational(j) * h[j] == rhs);
    }
  }
}

TEST_CASE("monomial symmetric polynomials, ordered-distinct-tuple normalization") {
  const std::vector<Rational> a{rat(1, 3), rat(2, 3)};
  CHECK(monomial_symmetric(Partition{3}, a) == power_sums_from_points(a, 3)[2]);
  CHECK(monomial_symmetric(Partition{1, 1}, a) == rat(4, 9));
  CHECK(monomial_symmetric(Partition{2, 1}, std::vector<Rational>{rat(1, 2), rat(1, 2)}) ==
        rat(1, 4));
  // Length above support vanishes.
  CHECK(monomial_symmetric(Partition{1, 1, 1}, a) == rat(0));
}

TEST_CASE("monomial-to-power-sum expansion: small closed forms") {
  // m_{1,1} = s_1^2 - s_2
  const PsPoly p11 = monomial_powersum_expansion(Partition{1, 1});
  REQUIRE(p11.size() == 2);
  CHECK(p11.at(std::vector<int>{1, 1}) == rat(1));
  CHECK(p11.at(std::vector<int>{2}) == rat(-1));

  // m_{2,1} = s_2 s_1 - s_3
  const PsPoly p21 = monomial_powersum_expansion(Partition{2, 1});
  REQUIRE(p21.size() == 2);
  CHECK(p21.at(std::vector<int>{2, 1}) == rat(1));
  CHECK(p21.at(std::vector<int>{3}) == rat(-1));

  // Single part: g = 0.
  const PsPoly p5 = monomial_powersum_expansion(Partition{5});
  REQUIRE(p5.size() == 1);
  CHECK(p5.at(std::vector<int>{5}) == rat(1));
}

TEST_CASE("leading power-sum coefficient is (-1)^(l-1) (l-1)!") {
  for (int t = 1; t <= 7; ++t) {
    for (const Partition &lambda : partitions_of(t)) {
      const int l = lambda.length();
      Rational expected = factorial_rational(l - 1);
      if ((l - 1) % 2 == 1) expected = -expected;
      CHECK(leading_power_sum_coefficient(lambda) == expected);
    }
  }
}

TEST_CASE("concurrent expansion calls agree with the serial result") {
  const Partition lambda{3, 2, 1, 1};
  const PsPoly serial = monomial_powersum_expansion(lambda);
  std::vector<std::thread> workers;
  std::vector<int> mismatches(4, 0);
  for (int w = 0; w < 4; ++w) {
    workers.emplace_back([&, w] {
      for (int rep = 0; rep < 50; ++rep)
        if (monomial_powersum_expansion(lambda) != serial) ++mismatches[w];
    });
  }
  for (auto &worker : workers) worker.join();
  for (int w = 0; w < 4; ++w) CHECK(mismatches[w] == 0);
}

TEST_CASE("monomial reduction residual is exactly zero up to weight 7") {
  Rng rng(424242);
  for (int t = 1; t <= 7; ++t) {
    for (const Partition &lambda : partitions_of(t)) {
      for (int rep = 0; rep < 3; ++rep) {
        const auto pts = random_points(rng, 1 + rng.below(5));
        CHECK(monomial_reduction_check(lambda, pts) == rat(0));
      }
    }
  }
  // Worked instance with one collision term.
  CHECK(monomial_reduction_check(Partition{2, 1},
                                 std::vector<Rational>{rat(1, 3), rat(2, 3)}) == rat(0));
}
