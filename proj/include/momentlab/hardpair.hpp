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
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "momentlab/symfun.hpp"

namespace momentlab {

struct CertificationFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Small rationals only (numerator and denominator below 2^53).
inline long double to_long_double(const Rational &q) {
  return static_cast<long double>(q.get_num().get_d()) /
         static_cast<long double>(q.get_den().get_d());
}

struct ReferencePoints {
  int s = 0;
  int m = 0;
  std::vector<Rational> a;  // a_i = 2i / (m (m+1)), i = 1..m
};

/// s = ceil(t/2) - 1 support points for order t; distinct, positive, summing to 1.
inline ReferencePoints reference_points(int t) {
  if (t < 3) throw std::invalid_argument("reference_points: t must be >= 3");
  ReferencePoints rp;
  rp.s = (t + 1) / 2 - 1;
  rp.m = rp.s + 1;
  for (int i = 1; i <= rp.m; ++i) rp.a.push_back(make_rational(2 * i, rp.m * (rp.m + 1)));
  return rp;
}

namespace detail {

/// Coefficients of F_c, constant term first:
/// F_c(x) = x^m - e_1 x^{m-1} + ... + (-1)^{m-1} e_{m-1} x + (-1)^m c.
inline std::vector<long double> fc_coefficients(const std::vector<Rational> &e, long double c) {
  const int m = static_cast<int>(e.size());
  std::vector<long double> coef(m + 1, 0.0L);
  coef[m] = 1.0L;
  for (int j = 1; j < m; ++j)
    coef[m - j] = (j % 2 == 1 ? -1.0L : 1.0L) * to_long_double(e[j - 1]);
  coef[0] = (m % 2 == 1 ? -1.0L : 1.0L) * c;
  return coef;
}

inline long double poly_eval(const std::vector<long double> &coef, long double x) {
  long double acc = 0.0L;
  for (int k = static_cast<int>(coef.size()) - 1; k >= 0; --k) acc = acc * x + coef[k];
  return acc;
}

inline long double poly_deriv_eval(const std::vector<long double> &coef, long double x) {
  long double acc = 0.0L;
  for (int k = static_cast<int>(coef.size()) - 1; k >= 1; --k) acc = acc * x + coef[k] * k;
  return acc;
}

}  // namespace detail

/**
 * All m roots of F_c, certified real, simple, and strictly positive.
 * Brackets come from a sign-change sweep of (0, e_1 + margin); each bracketed
 * root is refined by bisection plus Newton polish in extended precision, and
 * simplicity is certified by |F'_c(root)| > derivative_margin. Throws
 * CertificationFailed when fewer than m sign changes are found or the
 * derivative check fails.
 */
inline std::vector<long double> roots_of_Fc(const std::vector<Rational> &e, long double c,
                                            long double derivative_margin = 1e-9L) {
  const int m = static_cast<int>(e.size());
  if (m < 1) throw std::invalid_argument("roots_of_Fc: empty coefficient vector");
  const auto coef = detail::fc_coefficients(e, c);

  const long double hi = to_long_double(e[0]) * (1.0L + 1e-6L) + 1e-9L;
  constexpr int kScan = 4096;
  std::vector<std::pair<long double, long double>> brackets;
  long double x_prev = hi * 1e-12L;
  long double f_prev = detail::poly_eval(coef, x_prev);
  for (int g = 1; g <= kScan; ++g) {
    const long double x = hi * static_cast<long double>(g) / kScan;
    const long double f = detail::poly_eval(coef, x);
    if (f_prev == 0.0L || (f_prev < 0.0L) != (f < 0.0L)) {
      if (f_prev == 0.0L)
        throw CertificationFailed("roots_of_Fc: sign sweep hit an exact zero");
      brackets.emplace_back(x_prev, x);
    }
    x_prev = x;
    f_prev = f;
  }
  if (static_cast<int>(brackets.size()) != m)
    throw CertificationFailed("roots_of_Fc: expected " + std::to_string(m) +
                              " bracketed sign changes, found " +
                              std::to_string(brackets.size()));

  std::vector<long double> roots;
  for (auto [lo_x, hi_x] : brackets) {
    long double f_lo = detail::poly_eval(coef, lo_x);
    for (int iter = 0; iter < 90; ++iter) {
      const long double mid = 0.5L * (lo_x + hi_x);
      const long double f_mid = detail::poly_eval(coef, mid);
      if ((f_mid < 0.0L) == (f_lo < 0.0L)) {
        lo_x = mid;
        f_lo = f_mid;
      } else {
        hi_x = mid;
      }
    }
    long double root = 0.5L * (lo_x + hi_x);
    for (int iter = 0; iter < 4; ++iter) {
      const long double deriv = detail::poly_deriv_eval(coef, root);
      if (std::abs(deriv) < derivative_margin) break;
      root -= detail::poly_eval(coef, root) / deriv;
    }
    if (!(root > 0.0L))
      throw CertificationFailed("roots_of_Fc: nonpositive root");
    if (std::abs(detail::poly_deriv_eval(coef, root)) <= derivative_margin)
      throw CertificationFailed("roots_of_Fc: simplicity margin violated");
    roots.push_back(root);
  }
  return roots;
}

struct AdmissibleInterval {
  long double eta0 = 0;
  int grid_points = 65;
  long double derivative_margin = 0;
};

namespace detail {

inline long double derivative_margin_for(const ReferencePoints &rp) {
  // 0.25 * min_i prod_{j != i} |a_i - a_j|, the reference-root derivative scale.
  long double margin = 1e300L;
  for (int i = 0; i < rp.m; ++i) {
    long double prod = 1.0L;
    for (int j = 0; j < rp.m; ++j)
      if (j != i) prod *= std::abs(to_long_double(rp.a[i]) - to_long_double(rp.a[j]));
    margin = std::min(margin, prod);
  }
  return 0.25L * margin;
}

inline bool grid_certifies(const std::vector<Rational> &e, long double c_star, long double eta,
                           int grid_points, long double margin) {
  for (int g = 0; g < grid_points; ++g) {
    const long double c =
        c_star - eta + 2.0L * eta * static_cast<long double>(g) / (grid_points - 1);
    try {
      roots_of_Fc(e, c, margin);
    } catch (const CertificationFailed &) {
      return false;
    }
  }
  return true;
}

}  // namespace detail

/**
 * Half-width eta0 > 0 such that F_c has certified simple positive roots on a
 * 65-point grid over [c* - eta0, c* + eta0], endpoints included. Starts from
 * half of c* and halves until the whole grid certifies.
 */
inline AdmissibleInterval admissible_interval(int t) {
  const ReferencePoints rp = reference_points(t);
  const auto e = elementary_from_points(rp.a);
  const long double c_star = to_long_double(e[rp.m - 1]);
  AdmissibleInterval out;
  out.derivative_margin = detail::derivative_margin_for(rp);
  long double eta = c_star / 2.0L;
  for (int attempt = 0; attempt < 200; ++attempt) {
    if (detail::grid_certifies(e, c_star, eta, out.grid_points, out.derivative_margin)) {
      out.eta0 = eta;
      return out;
    }
    eta /= 2.0L;
  }
  throw CertificationFailed("admissible_interval: no certifiable half-width found");
}

/**
 * The moment-matched hard pair for order t: spectra p (at c0 = c*) and
 * q (at c1 = c* + eta0/2) sharing their first s power sums, with a
 * certified lower bound delta_t = t mu_t eta0 / 2 on the order-t gap.
 */
struct HardPair {
  int t = 0, s = 0, m = 0;
  std::vector<Rational> a;      // reference points
  std::vector<Rational> e;      // frozen elementary symmetric polynomials
  Rational c_star;
  long double eta0 = 0;
  int grid_points = 65;
  long double c0 = 0, c1 = 0;
  std::vector<long double> p, q;
  long double mu_t = 0;         // 0.99 * grid minimum of h_{t-s-1}
  long double delta_t = 0;
  long double gap = 0;          // |sum p^t - sum q^t|
  std::vector<long double> ledger_p, ledger_q;  // power sums s_1..s_s

  std::vector<double> p_weights() const { return std::vector<double>(p.begin(), p.end()); }
  std::vector<double> q_weights() const { return std::vector<double>(q.begin(), q.end()); }
};

inline HardPair build_hard_pair(int t) {
  const ReferencePoints rp = reference_points(t);
  const auto e = elementary_from_points(rp.a);
  const AdmissibleInterval interval = admissible_interval(t);

  HardPair hp;
  hp.t = t;
  hp.s = rp.s;
  hp.m = rp.m;
  hp.a = rp.a;
  hp.e = e;
  hp.c_star = e[rp.m - 1];
  hp.eta0 = interval.eta0;
  hp.grid_points = interval.grid_points;
  hp.c0 = to_long_double(hp.c_star);
  hp.c1 = hp.c0 + hp.eta0 / 2.0L;
  hp.p = roots_of_Fc(e, hp.c0, interval.derivative_margin);
  hp.q = roots_of_Fc(e, hp.c1, interval.derivative_margin);

  const int j = t - hp.s - 1;  // degree of the h controlling d m_t / dc
  long double h_min = 1e300L;
  for (int g = 0; g < interval.grid_points; ++g) {
    const long double c = hp.c0 - hp.eta0 +
                          2.0L * hp.eta0 * static_cast<long double>(g) /
                              (interval.grid_points - 1);
    const auto roots = roots_of_Fc(e, c, interval.derivative_margin);
    h_min = std::min(h_min, complete_homogeneous(roots, j));
  }
  hp.mu_t = 0.99L * h_min;
  hp.delta_t = static_cast<long double>(t) * hp.mu_t * hp.eta0 / 2.0L;

  hp.ledger_p = power_sums_from_points(hp.p, hp.s);
  hp.ledger_q = power_sums_from_points(hp.q, hp.s);
  const long double mt_p = power_sums_from_points(hp.p, t)[t - 1];
  const long double mt_q = power_sums_from_points(hp.q, t)[t - 1];
  hp.gap = std::abs(mt_p - mt_q);

  if (!(hp.delta_t > 0) || hp.gap < hp.delta_t)
    throw CertificationFailed("build_hard_pair: certified gap bound failed");
  for (int r = 0; r < hp.s; ++r)
    if (std::abs(hp.ledger_p[r] - hp.ledger_q[r]) > 1e-12L)
      throw CertificationFailed("build_hard_pair: frozen power sums drifted");
  return hp;
}

struct DerivativeCheck {
  double finite_difference = 0;
  double formula_value = 0;
  double residual = 0;
};

/**
 * Central finite difference of m_r(c) against the closed form
 * (-1)^s r h_{r-s-1}(c), for r >= s+1 and c interior to the certified
 * interval.
 */
inline DerivativeCheck derivative_formula_check(int t, long double c, int r,
                                                long double step = 1e-6L) {
  const ReferencePoints rp = reference_points(t);
  if (r < rp.s + 1)
    throw std::invalid_argument("derivative_formula_check: requires r >= s+1");
  const auto e = elementary_from_points(rp.a);
  const long double margin = detail::derivative_margin_for(rp);

  auto m_r = [&](long double cc) {
    return power_sums_from_points(roots_of_Fc(e, cc, margin), r)[r - 1];
  };
  const long double fd = (m_r(c + step) - m_r(c - step)) / (2.0L * step);
  const auto roots = roots_of_Fc(e, c, margin);
  long double formula = static_cast<long double>(r) * complete_homogeneous(roots, r - rp.s - 1);
  if (rp.s % 2 == 1) formula = -formula;
  return DerivativeCheck{static_cast<double>(fd), static_cast<double>(formula),
                         static_cast<double>(fd - formula)};
}

inline nlohmann::json to_json(const HardPair &hp) {
  nlohmann::json j;
  j["t"] = hp.t;
  j["s"] = hp.s;
  j["m"] = hp.m;
  nlohmann::json a = nlohmann::json::array();
  for (const auto &x : hp.a) a.push_back(to_string(x));
  j["a"] = a;
  j["c_star"] = to_string(hp.c_star);
  j["c0"] = static_cast<double>(hp.c0);
  j["c1"] = static_cast<double>(hp.c1);
  j["eta0"] = static_cast<double>(hp.eta0);
  j["grid_points"] = hp.grid_points;
  j["p"] = hp.p_weights();
  j["q"] = hp.q_weights();
  j["mu_t"] = static_cast<double>(hp.mu_t);
  j["delta_t"] = static_cast<double>(hp.delta_t);
  j["gap"] = static_cast<double>(hp.gap);
  j["powersum_ledger"] = {
      {"p", std::vector<double>(hp.ledger_p.begin(), hp.ledger_p.end())},
      {"q", std::vector<double>(hp.ledger_q.begin(), hp.ledger_q.end())},
  };
  return j;
}

}  // namespace momentlab
