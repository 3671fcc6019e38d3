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

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace momentlab {

/** Exact arbitrary-precision rational, backed by GMP. */
using Rational = mpq_class;

inline Rational make_rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("rational: zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Rational rat(long num, long den = 1) { return make_rational(num, den); }

inline Rational rational_pow(const Rational &base, unsigned exp) {
  Rational acc(1);
  Rational b = base;
  while (exp > 0) {
    if (exp & 1u) acc *= b;
    b *= b;
    exp >>= 1u;
  }
  return acc;
}

inline Rational rational_abs(const Rational &x) { return x < 0 ? Rational(-x) : x; }

inline double to_double(const Rational &x) { return x.get_d(); }

/// "num/den" (or "num" when the denominator is 1), always canonical.
inline std::string to_string(const Rational &x) {
  Rational c = x;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline std::vector<double> to_doubles(const std::vector<Rational> &xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (const auto &x : xs) out.push_back(to_double(x));
  return out;
}

}  // namespace momentlab
