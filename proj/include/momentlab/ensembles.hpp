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

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "momentlab/symfun.hpp"
#include "momentlab/tensorperm.hpp"

namespace momentlab {

/// Probability weights of a finite spectrum.
using Spectrum = std::vector<double>;

struct GramTooFar : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline CVec sample_haar_state(int d, Rng &rng) { return haar_state(d, rng); }

/// Hermitian to 1e-12, eigenvalues >= -1e-10, trace 1 +- 1e-12.
inline bool is_valid_density(const CMat &rho) {
  if (hermiticity_deviation(rho) > 1e-12) return false;
  if (std::abs(rho.trace().real() - 1.0) > 1e-12) return false;
  return hermitian_eigenvalues(rho).minCoeff() >= -1e-10;
}

/// rho = sum_r a_r |psi_r><psi_r|.
inline CMat assemble_state(const Spectrum &a, const std::vector<CVec> &states) {
  if (a.size() != states.size())
    throw std::invalid_argument("assemble_state: weight/state count mismatch");
  if (states.empty()) throw std::invalid_argument("assemble_state: empty ensemble");
  const Eigen::Index d = states[0].size();
  CMat rho = CMat::Zero(d, d);
  for (std::size_t r = 0; r < a.size(); ++r) {
    if (states[r].size() != d) throw std::invalid_argument("assemble_state: dimension mismatch");
    rho.noalias() += a[r] * (states[r] * states[r].adjoint());
  }
  return rho;
}

/**
 * Exact E[rho^{tensor k}] for rho drawn from the Haar-assembled ensemble with
 * weights a, via the partition expansion: one term per set partition of the
 * k slots, weighted by the monomial symmetric polynomial of the block sizes
 * and normalized symmetrizers on the blocks.
 */
inline CMat exact_k_copy_average(const Spectrum &a, int d, int k) {
  if (k < 1 || k > 5) throw std::invalid_argument("exact_k_copy_average: k out of range");
  const long side = tensor_dim(d, k);
  CMat total = CMat::Zero(side, side);
  for (const auto &blocks : set_partitions(k)) {
    std::vector<int> sizes;
    for (const auto &b : blocks) sizes.push_back(static_cast<int>(b.size()));
    const double coeff = monomial_symmetric(Partition{sizes}, a);
    if (coeff == 0.0) continue;
    CMat op = CMat::Identity(side, side);
    double norm = 1.0;
    for (const auto &b : blocks) {
      apply_symmetrizer_left(op, b, k, d);
      norm *= static_cast<double>(rising_factorial(d, static_cast<int>(b.size())));
    }
    total.noalias() += (coeff / norm) * op;
  }
  return total;
}

struct MatchingResult {
  bool precondition_ok = false;  // first k power sums agree to 1e-12
  double max_powersum_dev = 0;
  double deviation = 0;  // operator norm of the difference of the two averages
};

/**
 * Operator-norm distance between the exact k-copy averages of the two
 * ensembles. When the first k power sums agree, the averages coincide;
 * a violated precondition is reported, not thrown.
 */
inline MatchingResult verify_matching(const Spectrum &p, const Spectrum &q, int d, int k) {
  MatchingResult res;
  const auto sp = power_sums_from_points(p, k);
  const auto sq = power_sums_from_points(q, k);
  for (int r = 0; r < k; ++r)
    res.max_powersum_dev = std::max(res.max_powersum_dev, std::abs(sp[r] - sq[r]));
  res.precondition_ok = res.max_powersum_dev <= 1e-12;
  res.deviation = op_norm_hermitian(exact_k_copy_average(p, d, k) - exact_k_copy_average(q, d, k));
  return res;
}

struct GramData {
  CMat G;
  double frobenius_dev = 0;  // ||G - I||_F
  double eig_min = 0, eig_max = 0;
};

namespace detail {

struct RoundingCore {
  GramData gram;
  double h_frobenius = 0;  // ||G^{1/2} - I||_F
  double h_op = 0;         // ||G^{1/2} - I||_op
  double trace_distance = 0;
  CMat g_inv_sqrt;
};

/// Everything about one rounding that only needs the m x m Gram block.
inline RoundingCore rounding_core(const Spectrum &a, const CMat &psi) {
  const int m = static_cast<int>(psi.cols());
  if (static_cast<int>(a.size()) != m)
    throw std::invalid_argument("gram_round: weight/state count mismatch");
  RoundingCore core;
  core.gram.G = psi.adjoint() * psi;
  core.gram.frobenius_dev = (core.gram.G - CMat::Identity(m, m)).norm();

  Eigen::SelfAdjointEigenSolver<CMat> es(core.gram.G);
  const RVec ev = es.eigenvalues();
  core.gram.eig_min = ev.minCoeff();
  core.gram.eig_max = ev.maxCoeff();
  const double op_dev = std::max(std::abs(core.gram.eig_min - 1.0),
                                 std::abs(core.gram.eig_max - 1.0));
  if (op_dev >= 0.5) throw GramTooFar("gram_round: ||G - I|| >= 1/2");

  RVec sqrt_ev(m), inv_sqrt_ev(m), h_ev(m);
  for (int i = 0; i < m; ++i) {
    sqrt_ev(i) = std::sqrt(ev(i));
    inv_sqrt_ev(i) = 1.0 / sqrt_ev(i);
    h_ev(i) = sqrt_ev(i) - 1.0;
  }
  const CMat v = es.eigenvectors();
  const CMat h = v * h_ev.asDiagonal() * v.adjoint();
  core.g_inv_sqrt = v * inv_sqrt_ev.asDiagonal() * v.adjoint();
  core.h_frobenius = h.norm();
  core.h_op = h_ev.cwiseAbs().maxCoeff();

  CMat diag_a = CMat::Zero(m, m);
  for (int i = 0; i < m; ++i) diag_a(i, i) = a[i];
  // rho - sigma = Phi (HA + AH + HAH) Phi^dagger with Phi an isometry.
  const CMat mixed = h * diag_a + diag_a * h + h * diag_a * h;
  core.trace_distance = trace_norm_hermitian(mixed);
  return core;
}

}  // namespace detail

struct GramRound {
  CMat sigma;  // rounded state with exact spectrum a
  double trace_distance = 0;
  GramData gram;
  double h_frobenius = 0;
  double h_op = 0;
  double bound = 0;     // 2 ||H||_2 + ||H||_2^2 (Frobenius)
  double bound_op = 0;  // same chain with operator norms (tighter)
};

/**
 * Rounds rho = sum_r a_r psi_r to the exact-spectrum state
 * sigma = Phi diag(a) Phi^dagger with Phi = Psi G^{-1/2}. Throws GramTooFar
 * when ||G - I|| >= 1/2; callers resample or increase d.
 */
inline GramRound gram_round(const Spectrum &a, const std::vector<CVec> &states) {
  const int m = static_cast<int>(states.size());
  if (m == 0) throw std::invalid_argument("gram_round: empty ensemble");
  const Eigen::Index d = states[0].size();
  CMat psi(d, m);
  for (int r = 0; r < m; ++r) psi.col(r) = states[r];

  const auto core = detail::rounding_core(a, psi);
  GramRound out;
  out.gram = core.gram;
  out.h_frobenius = core.h_frobenius;
  out.h_op = core.h_op;
  out.trace_distance = core.trace_distance;
  out.bound = 2.0 * core.h_frobenius + core.h_frobenius * core.h_frobenius;
  out.bound_op = 2.0 * core.h_op + core.h_op * core.h_op;

  const CMat phi = psi * core.g_inv_sqrt;
  CMat diag_a = CMat::Zero(m, m);
  for (int i = 0; i < m; ++i) diag_a(i, i) = a[i];
  out.sigma = phi * diag_a * phi.adjoint();
  return out;
}

struct RoundingRow {
  int d = 0;
  int trials = 0;
  double quantile99 = 0;
  double mean = 0;
  double gram_fail_rate = 0;
  double c_emp = 0;  // quantile99 * sqrt(d) / (m sqrt(ln m))
  double max_bound_violation = 0;
};

struct RoundingTable {
  int m = 0;
  std::uint64_t seed = 0;
  std::vector<RoundingRow> rows;
  double slope = 0;       // least-squares slope of log q99 vs log d
  double c_emp_median = 0;
};

/**
 * Trace-distance-to-exact-spectrum scaling experiment: per d, the empirical
 * 0.99 quantile over seeded trials, a per-trial check of the
 * 2||H|| + ||H||^2 bound, and the fitted log-log slope across d.
 */
inline RoundingTable rounding_scaling_experiment(int m, const Spectrum &a,
                                                 const std::vector<int> &d_list, int trials,
                                                 std::uint64_t seed) {
  if (static_cast<int>(a.size()) != m)
    throw std::invalid_argument("rounding_scaling_experiment: |a| != m");
  RoundingTable table;
  table.m = m;
  table.seed = seed;
  const Rng master(seed);

  for (std::size_t di = 0; di < d_list.size(); ++di) {
    const int d = d_list[di];
    if (d < 4 * m)
      throw std::invalid_argument("rounding_scaling_experiment: requires d >= 4m");
    RoundingRow row;
    row.d = d;
    row.trials = trials;
    std::vector<double> distances;
    distances.reserve(trials);
    int fails = 0;
    double mean_acc = 0;
    double worst_violation = -1e300;
    for (int trial = 0; trial < trials; ++trial) {
      Rng rng = master.derive((static_cast<std::uint64_t>(di) << 32) ^ trial);
      CMat psi(d, m);
      for (int r = 0; r < m; ++r) psi.col(r) = haar_state(d, rng);
      try {
        const auto core = detail::rounding_core(a, psi);
        const double bound =
            2.0 * core.h_frobenius + core.h_frobenius * core.h_frobenius;
        worst_violation = std::max(worst_violation, core.trace_distance - bound);
        distances.push_back(core.trace_distance);
        mean_acc += core.trace_distance;
      } catch (const GramTooFar &) {
        ++fails;
      }
    }
    row.gram_fail_rate = static_cast<double>(fails) / trials;
    row.max_bound_violation = distances.empty() ? 0 : worst_violation;
    if (!distances.empty()) {
      row.mean = mean_acc / static_cast<double>(distances.size());
      std::sort(distances.begin(), distances.end());
      const std::size_t idx = std::min(
          distances.size() - 1,
          static_cast<std::size_t>(std::ceil(0.99 * distances.size())) - 1);
      row.quantile99 = distances[idx];
      row.c_emp = row.quantile99 * std::sqrt(static_cast<double>(d)) /
                  (m * std::sqrt(std::log(static_cast<double>(m))));
    }
    table.rows.push_back(row);
  }

  // log-log least squares.
  const int n = static_cast<int>(table.rows.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto &row : table.rows) {
    const double x = std::log(static_cast<double>(row.d));
    const double y = std::log(row.quantile99);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  table.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  std::vector<double> cs;
  for (const auto &row : table.rows) cs.push_back(row.c_emp);
  std::sort(cs.begin(), cs.end());
  table.c_emp_median = cs.empty() ? 0 : cs[cs.size() / 2];
  return table;
}

struct TensorPowerTraceCheck {
  double lhs = 0;  // ||rho^{tensor n} - sigma^{tensor n}||_1
  double rhs = 0;  // n ||rho - sigma||_1
};

inline TensorPowerTraceCheck tensor_power_trace_check(const CMat &rho, const CMat &sigma,
                                                      int n) {
  tensor_dim(static_cast<int>(rho.rows()), n);
  CMat rho_n = CMat::Identity(1, 1), sigma_n = CMat::Identity(1, 1);
  for (int i = 0; i < n; ++i) {
    rho_n = kron(rho_n, rho);
    sigma_n = kron(sigma_n, sigma);
  }
  return TensorPowerTraceCheck{trace_norm_hermitian(rho_n - sigma_n),
                               n * trace_norm_hermitian(rho - sigma)};
}

inline nlohmann::json to_json(const RoundingTable &table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto &r : table.rows) {
    rows.push_back({{"d", r.d},
                    {"trials", r.trials},
                    {"quantile99", r.quantile99},
                    {"mean", r.mean},
                    {"gram_fail_rate", r.gram_fail_rate},
                    {"c_emp", r.c_emp},
                    {"max_bound_violation", r.max_bound_violation}});
  }
  return nlohmann::json{{"m", table.m},
                        {"seed", table.seed},
                        {"rows", rows},
                        {"slope", table.slope},
                        {"c_emp_median", table.c_emp_median}};
}

inline std::string to_csv(const RoundingTable &table) {
  std::ostringstream os;
  os << "d,trials,quantile99,mean,gram_fail_rate\n";
  os.precision(17);
  for (const auto &r : table.rows)
    os << r.d << "," << r.trials << "," << r.quantile99 << "," << r.mean << ","
       << r.gram_fail_rate << "\n";
  return os.str();
}

}  // namespace momentlab
