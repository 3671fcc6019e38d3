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
#include <string>

#include "json.hpp"

namespace momentlab {

/// Fitted constant plus where it came from; the provenance tag travels with
/// every number derived from it.
struct EmpiricalConstant {
  double value = 0;
  std::string provenance;
};

/**
 * One evaluation of the closure chain 0.02 + 4(kT)^2/d + C' kT m sqrt(ln m)/sqrt(d)
 * against the 1/3 testing threshold. The first two terms are proven bounds;
 * the third uses the empirically fitted rounding constant.
 */
struct ClosureEvaluation {
  long d = 0;
  int k = 0, T = 0, m = 0;
  double term_const = 0.02;
  double term_match = 0;
  double term_round = 0;
  std::string round_provenance;
  double total = 0;
  bool excluded = false;  // total < 1/3: success probability 2/3 is impossible
};

inline ClosureEvaluation closure_evaluate(long d, int k, int T, int m,
                                          const EmpiricalConstant &c_emp) {
  if (m < 2) throw std::invalid_argument("closure_evaluate: m must be >= 2");
  if (d < 1 || k < 1 || T < 1) throw std::invalid_argument("closure_evaluate: bad parameters");
  ClosureEvaluation ev;
  ev.d = d;
  ev.k = k;
  ev.T = T;
  ev.m = m;
  const double kt = static_cast<double>(k) * T;
  ev.term_match = 4.0 * kt * kt / static_cast<double>(d);
  ev.term_round = c_emp.value * kt * m * std::sqrt(std::log(static_cast<double>(m))) /
                  std::sqrt(static_cast<double>(d));
  ev.round_provenance = c_emp.provenance;
  ev.total = ev.term_const + ev.term_match + ev.term_round;
  ev.excluded = ev.total < 1.0 / 3.0;
  return ev;
}

/**
 * Smallest kT for which the closure total reaches 1/3 at dimension d: the
 * empirical finite-d analogue of the sample lower bound. Never a proof; the
 * constant is fitted.
 */
inline long sample_bound(long d, int m, const EmpiricalConstant &c_emp) {
  if (m < 2) throw std::invalid_argument("sample_bound: m must be >= 2");
  const double a = 4.0 / static_cast<double>(d);
  const double b = c_emp.value * m * std::sqrt(std::log(static_cast<double>(m))) /
                   std::sqrt(static_cast<double>(d));
  const double c = 0.02 - 1.0 / 3.0;
  // a x^2 + b x + c >= 0, positive root.
  const double root = (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
  long kt = std::max(1L, static_cast<long>(std::floor(root)));
  auto total = [&](long x) {
    const double xx = static_cast<double>(x);
    return 0.02 + a * xx * xx + b * xx;
  };
  while (total(kt) < 1.0 / 3.0) ++kt;
  while (kt > 1 && total(kt - 1) >= 1.0 / 3.0) --kt;
  return kt;
}

/// Least-squares slope of log(sample_bound) against log(d).
inline double sample_bound_slope(const std::vector<long> &d_list, int m,
                                 const EmpiricalConstant &c_emp) {
  const int n = static_cast<int>(d_list.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (long d : d_list) {
    const double x = std::log(static_cast<double>(d));
    const double y = std::log(static_cast<double>(sample_bound(d, m, c_emp)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline nlohmann::json to_json(const ClosureEvaluation &ev) {
  return nlohmann::json{{"d", ev.d},
                        {"k", ev.k},
                        {"T", ev.T},
                        {"m", ev.m},
                        {"term_const", ev.term_const},
                        {"term_match", ev.term_match},
                        {"term_round", ev.term_round},
                        {"term_round_provenance", ev.round_provenance},
                        {"term_provenance",
                         {{"term_const", "proven"},
                          {"term_match", "proven"},
                          {"term_round", "empirical"}}},
                        {"total", ev.total},
                        {"excluded", ev.excluded}};
}

}  // namespace momentlab
