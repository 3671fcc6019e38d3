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

#include <map>
#include <stdexcept>
#include <vector>

#include "momentlab/partition.hpp"
#include "momentlab/rational.hpp"

namespace momentlab {

using ElemSymVector = std::vector<Rational>;   // e_1..e_m
using PowerSumVector = std::vector<Rational>;  // s_1..s_r

/**
 * All m elementary symmetric polynomials e_1..e_m of the given points,
 * by incremental expansion of prod_i (1 + x_i z).
 */
template <typename Ring>
std::vector<Ring> elementary_from_points(const std::vector<Ring> &points) {
  if (points.empty()) throw std::invalid_argument("elementary_from_points: no points");
  std::vector<Ring> e(points.size() + 1, Ring(0));
  e[0] = Ring(1);
  std::size_t used = 0;
  for (const Ring &x : points) {
    ++used;
    for (std::size_t j = used; j >= 1; --j) e[j] += x * e[j - 1];
  }
  return std::vector<Ring>(e.begin() + 1, e.end());
}

/**
 * Power sums s_1..s_rmax of any root multiset with the given elementary
 * symmetric polynomials, via Newton's identities (e_j := 0 for j > m).
 */
template <typename Ring>
std::vector<Ring> power_sums_from_elementary(const std::vector<Ring> &e, int r_max) {
  if (r_max < 1) throw std::invalid_argument("power_sums_from_elementary: r_max < 1");
  const int m = static_cast<int>(e.size());
  auto e_at = [&](int j) -> Ring { return (j >= 1 && j <= m) ? e[j - 1] : Ring(0); };
  std::vector<Ring> p(r_max + 1, Ring(0));
  for (int r = 1; r <= r_max; ++r) {
    Ring acc(0);
    for (int i = 1; i < r; ++i) {
      Ring term = e_at(i) * p[r - i];
      if (i % 2 == 0) acc -= term;
      else acc += term;
    }
    Ring tail = Ring(r) * e_at(r);
    if (r % 2 == 0) acc -= tail;
    else acc += tail;
    p[r] = acc;
  }
  return std::vector<Ring>(p.begin() + 1, p.end());
}

/// Direct power sums s_1..s_rmax of the points themselves.
template <typename Ring>
std::vector<Ring> power_sums_from_points(const std::vector<Ring> &points, int r_max) {
  std::vector<Ring> s(r_max, Ring(0));
  for (const Ring &x : points) {
    Ring acc(1);
    for (int r = 0; r < r_max; ++r) {
      acc *= x;
      s[r] += acc;
    }
  }
  return s;
}

/**
 * Complete homogeneous symmetric polynomial h_j of the points, via the
 * one-point-at-a-time recurrence h_u <- h_u + x * h_{u-1}.
 */
template <typename Ring>
Ring complete_homogeneous(const std::vector<Ring> &points, int j) {
  if (j < 0) throw std::invalid_argument("complete_homogeneous: j < 0");
  std::vector<Ring> h(j + 1, Ring(0));
  h[0] = Ring(1);
  for (const Ring &x : points)
    for (int u = 1; u <= j; ++u) h[u] += x * h[u - 1];
  return h[j];
}

/**
 * Monomial symmetric polynomial m_lambda in the ordered-distinct-tuple
 * normalization: sum over tuples (i_1,..,i_l) of pairwise distinct indices
 * of x_{i_1}^{lambda_1} ... x_{i_l}^{lambda_l}. Zero when l exceeds the
 * number of points.
 */
template <typename Ring>
Ring monomial_symmetric(const Partition &lambda, const std::vector<Ring> &points) {
  const int l = lambda.length();
  const int n = static_cast<int>(points.size());
  if (l > n) return Ring(0);
  std::vector<bool> used(n, false);
  Ring total(0);
  std::function<void(int, Ring)> rec = [&](int pos, Ring acc) {
    if (pos == l) {
      total += acc;
      return;
    }
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      Ring p(1);
      for (int u = 0; u < lambda.parts[pos]; ++u) p *= points[i];
      used[i] = true;
      rec(pos + 1, acc * p);
      used[i] = false;
    }
  };
  rec(0, Ring(1));
  return total;
}

/**
 * Polynomial in power sums: maps a multiset of degrees {u_1 >= u_2 >= ...}
 * (meaning the product s_{u_1} s_{u_2} ...) to its rational coefficient.
 */
using PsPoly = std::map<std::vector<int>, Rational>;

namespace detail {

inline void ps_add(PsPoly &dst, const std::vector<int> &key, const Rational &coeff) {
  auto it = dst.find(key);
  if (it == dst.end()) {
    if (coeff != 0) dst.emplace(key, coeff);
    return;
  }
  it->second += coeff;
  if (it->second == 0) dst.erase(it);
}

inline PsPoly ps_mul_power_sum(const PsPoly &poly, int u) {
  PsPoly out;
  for (const auto &[key, coeff] : poly) {
    std::vector<int> k = key;
    k.insert(std::upper_bound(k.begin(), k.end(), u, std::greater<int>()), u);
    ps_add(out, k, coeff);
  }
  return out;
}

}  // namespace detail

/**
 * Expansion of m_lambda as a polynomial in power sums, built by the
 * collision recursion: multiplying m_{lambda'} by s_{lambda_l} produces
 * m_lambda plus one collision term per part of lambda'. The memo is
 * thread-local, keeping concurrent calls race-free.
 */
inline PsPoly monomial_powersum_expansion(const Partition &lambda) {
  thread_local std::map<Partition, PsPoly> memo;
  auto it = memo.find(lambda);
  if (it != memo.end()) return it->second;

  PsPoly result;
  const int l = lambda.length();
  if (l == 0) {
    result.emplace(std::vector<int>{}, Rational(1));
  } else if (l == 1) {
    result.emplace(std::vector<int>{lambda.parts[0]}, Rational(1));
  } else {
    const int last = lambda.parts[l - 1];
    std::vector<int> head(lambda.parts.begin(), lambda.parts.end() - 1);
    result = detail::ps_mul_power_sum(monomial_powersum_expansion(Partition{head}), last);
    for (int j = 0; j < l - 1; ++j) {
      std::vector<int> collided = head;
      collided[j] += last;
      const PsPoly sub = monomial_powersum_expansion(Partition{collided});
      for (const auto &[key, coeff] : sub) detail::ps_add(result, key, -coeff);
    }
  }
  memo.emplace(lambda, result);
  return result;
}

template <typename Ring>
Ring evaluate_ps_poly(const PsPoly &poly, const std::vector<Ring> &points) {
  int max_deg = 1;
  for (const auto &[key, coeff] : poly)
    for (int u : key) max_deg = std::max(max_deg, u);
  const std::vector<Ring> s = power_sums_from_points(points, max_deg);
  Ring total(0);
  for (const auto &[key, coeff] : poly) {
    Ring term(coeff);
    for (int u : key) term *= s[u - 1];
    total += term;
  }
  return total;
}

inline Rational factorial_rational(int n) {
  Rational f(1);
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// Coefficient of the pure s_t term in the power-sum expansion of m_lambda.
inline Rational leading_power_sum_coefficient(const Partition &lambda) {
  const PsPoly poly = monomial_powersum_expansion(lambda);
  auto it = poly.find(std::vector<int>{lambda.weight()});
  return it == poly.end() ? Rational(0) : it->second;
}

/**
 * Evaluates m_lambda(points) directly and through its power-sum expansion
 * and returns the difference. The contract is that the residual is exactly
 * zero; the leading s_t coefficient equals (-1)^(l-1) (l-1)!.
 */
inline Rational monomial_reduction_check(const Partition &lambda,
                                         const std::vector<Rational> &points) {
  const Rational direct = monomial_symmetric(lambda, points);
  const Rational via_power_sums = evaluate_ps_poly(monomial_powersum_expansion(lambda), points);
  return direct - via_power_sums;
}

}  // namespace momentlab
