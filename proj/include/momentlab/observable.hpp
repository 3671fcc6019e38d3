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
#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"
#include "momentlab/hardpair.hpp"
#include "momentlab/haarmoments.hpp"
#include "momentlab/linalg.hpp"

namespace momentlab {

/** Hermitian observable with cached operator and trace norms. */
struct Observable {
  CMat mat;
  double op_norm = 0;
  double trace_norm = 0;

  int dim() const { return static_cast<int>(mat.rows()); }
};

/// Wraps a Hermitian matrix, computing norms; rejects ||O||_inf > 1 + 1e-12.
inline Observable make_observable(const CMat &m) {
  if (hermiticity_deviation(m) > 1e-10)
    throw std::invalid_argument("make_observable: matrix is not Hermitian");
  Observable o;
  o.mat = hermitize(m);
  const RVec ev = hermitian_eigenvalues(o.mat);
  o.op_norm = ev.cwiseAbs().maxCoeff();
  o.trace_norm = ev.cwiseAbs().sum();
  if (o.op_norm > 1.0 + 1e-12)
    throw std::invalid_argument("make_observable: operator norm exceeds 1");
  return o;
}

/**
 * Hermitian Pauli string on n qubits. The all-identity string is rejected:
 * it has trace d and belongs to the large-trace-observable route, where the
 * identity observable is constructed directly.
 */
inline Observable pauli_string(int n_qubits, const std::string &letters) {
  if (static_cast<int>(letters.size()) != n_qubits)
    throw std::invalid_argument("pauli_string: letter count != qubit count");
  if (letters.find_first_not_of("IXYZ") != std::string::npos)
    throw std::invalid_argument("pauli_string: letters must be I, X, Y, or Z");
  if (letters.find_first_not_of('I') == std::string::npos)
    throw std::invalid_argument(
        "pauli_string: all-identity string; use the identity observable (large-trace route)");
  CMat x(2, 2), y(2, 2), z(2, 2), id = CMat::Identity(2, 2);
  x << 0, 1, 1, 0;
  y << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  z << 1, 0, 0, -1;
  CMat total = CMat::Identity(1, 1);
  for (char c : letters) {
    switch (c) {
      case 'I': total = kron(total, id); break;
      case 'X': total = kron(total, x); break;
      case 'Y': total = kron(total, y); break;
      default: total = kron(total, z); break;
    }
  }
  return make_observable(total);
}

inline Observable identity_observable(int d) { return make_observable(CMat::Identity(d, d)); }

/// Seeded diagonal observable with entries of magnitude in [1/2, 1] and
/// random signs; trace norm is at least d/2, so eta = 1/2 is a valid promise.
inline Observable random_diagonal_observable(int d, std::uint64_t seed) {
  Rng rng(seed);
  CMat m = CMat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double mag = 0.5 + 0.5 * rng.uniform();
    m(i, i) = (rng.uniform() < 0.5 ? -1.0 : 1.0) * mag;
  }
  return make_observable(m);
}

/**
 * Top-block compression of an observable with macroscopic trace norm:
 * a rank-D projection (D = floor(d/2)) onto the top eigenvectors after the
 * sign normalization P >= N, with |tr B| >= eta D / 2. block holds the raw
 * compression V+ O V; sign_flipped records whether downstream use negates it,
 * so biased_block(-O) is biased_block(O) with the flag toggled and B negated.
 */
struct BiasedBlock {
  int D = 0;
  CMat isometry;   // d x D, columns are the chosen eigenvectors; V V+ = Pi
  CMat block;      // B = V+ O V
  bool sign_flipped = false;
  double trace_B = 0;
  double eta = 0;

  CMat effective_block() const { return (sign_flipped ? -1.0 : 1.0) * block; }
};

inline BiasedBlock biased_block(const Observable &o, double eta) {
  const int d = o.dim();
  if (o.trace_norm < eta * d - 1e-9)
    throw std::invalid_argument("biased_block: trace norm below eta * d");

  Eigen::SelfAdjointEigenSolver<CMat> es(o.mat);
  const RVec ev = es.eigenvalues();
  double positive_mass = 0, negative_mass = 0;
  for (int i = 0; i < d; ++i)
    (ev(i) >= 0 ? positive_mass : negative_mass) += std::abs(ev(i));

  BiasedBlock bb;
  bb.eta = eta;
  bb.sign_flipped = positive_mass < negative_mass;
  const double sign = bb.sign_flipped ? -1.0 : 1.0;
  bb.D = d / 2;

  // Top-D indices by effective eigenvalue, descending; ties keep the
  // eigensolver's basis order.
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return sign * ev(i) > sign * ev(j); });

  bb.isometry = CMat(d, bb.D);
  for (int i = 0; i < bb.D; ++i) bb.isometry.col(i) = es.eigenvectors().col(order[i]);
  bb.block = bb.isometry.adjoint() * o.mat * bb.isometry;
  bb.trace_B = bb.block.trace().real();
  if (sign * bb.trace_B < eta * bb.D / 2.0 - 1e-9)
    throw std::logic_error("biased_block: compressed trace below eta D / 2");
  return bb;
}

/**
 * Experiment report for the embedded hard-pair gap of the observable-weighted
 * moment: formula means/variances of X = tr(B U A U+), Monte Carlo means,
 * interval hit rates at radius Delta/2, and the ambient-vs-compressed audit.
 */
struct GapReport {
  int t = 0;
  double eta = 0;
  int D = 0;
  double mean_p = 0, mean_q = 0;  // formula means
  double Delta = 0;               // eta delta_t / 4
  double var_p = 0, var_q = 0;    // formula variances
  double hit_p = 0, hit_q = 0;    // empirical interval probabilities
  int trials = 0;
  std::uint64_t seed = 0;

  double mc_mean_p = 0, mc_mean_q = 0;
  double se_p = 0, se_q = 0;
  double delta_t = 0, gap = 0;
  double audit_max_dev = 0;
  int audit_count = 0;
  bool sign_flipped = false;
  bool variance_condition_met = false;  // max(var) <= Delta^2 / 48
  double trace_B = 0;
  std::string basis_hash;
};

namespace detail {

inline std::string fnv1a_hash(const CMat &m) {
  std::uint64_t h = 1469598103934665603ull;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const Complex v = m(i, j);
      const double parts[2] = {v.real(), v.imag()};
      const unsigned char *bytes = reinterpret_cast<const unsigned char *>(parts);
      for (std::size_t b = 0; b < sizeof(parts); ++b) {
        h ^= bytes[b];
        h *= 1099511628211ull;
      }
    }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace detail

inline GapReport embedded_gap_experiment(const HardPair &hp, const Observable &o, double eta,
                                         int trials, std::uint64_t seed) {
  const BiasedBlock bb = biased_block(o, eta);
  const int D = bb.D;
  const int m = hp.m;
  if (D < m) throw std::invalid_argument("embedded_gap_experiment: D < m");

  const std::vector<double> p = hp.p_weights();
  const std::vector<double> q = hp.q_weights();
  std::vector<double> pt(m), qt(m);
  for (int r = 0; r < m; ++r) {
    pt[r] = std::pow(p[r], hp.t);
    qt[r] = std::pow(q[r], hp.t);
  }

  // Formula moments of X_A = tr(B U A U+) for A = diag(a^t, 0...).
  auto diag_block = [&](const std::vector<double> &vals) {
    CMat a = CMat::Zero(D, D);
    for (int r = 0; r < m; ++r) a(r, r) = vals[r];
    return a;
  };
  const CMat a_p = diag_block(pt), a_q = diag_block(qt);
  const CMat b_eff = bb.effective_block();
  const HaarMeanVar f_p = haar_mean_var(a_p, b_eff);
  const HaarMeanVar f_q = haar_mean_var(a_q, b_eff);

  GapReport rep;
  rep.t = hp.t;
  rep.eta = eta;
  rep.D = D;
  rep.trials = trials;
  rep.seed = seed;
  rep.sign_flipped = bb.sign_flipped;
  rep.trace_B = bb.trace_B;
  rep.delta_t = static_cast<double>(hp.delta_t);
  rep.gap = static_cast<double>(hp.gap);
  rep.Delta = eta * rep.delta_t / 4.0;
  rep.mean_p = f_p.mean;
  rep.mean_q = f_q.mean;
  rep.var_p = f_p.variance;
  rep.var_q = f_q.variance;
  rep.variance_condition_met =
      std::max(f_p.variance, f_q.variance) <= rep.Delta * rep.Delta / 48.0;
  rep.basis_hash = detail::fnv1a_hash(bb.isometry);

  if (std::abs(rep.mean_p - rep.mean_q) < 2.0 * rep.Delta - 1e-9)
    throw std::logic_error("embedded_gap_experiment: interval centers not separated");

  const CMat o_eff = (bb.sign_flipped ? -1.0 : 1.0) * o.mat;
  const Rng master(seed);
  double sum_p = 0, sumsq_p = 0, sum_q = 0, sumsq_q = 0;
  int hits_p = 0, hits_q = 0;
  rep.audit_count = std::min(trials, 10);
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = master.derive(trial);
    const CMat u = haar_isometry(D, m, rng);
    double x_p = 0, x_q = 0;
    for (int r = 0; r < m; ++r) {
      const double quad = (u.col(r).adjoint() * b_eff * u.col(r))(0, 0).real();
      x_p += pt[r] * quad;
      x_q += qt[r] * quad;
    }
    sum_p += x_p;
    sumsq_p += x_p * x_p;
    sum_q += x_q;
    sumsq_q += x_q * x_q;
    if (std::abs(x_p - rep.mean_p) <= rep.Delta / 2.0) ++hits_p;
    if (std::abs(x_q - rep.mean_q) <= rep.Delta / 2.0) ++hits_q;

    if (trial < rep.audit_count) {
      // Ambient route: rho = V sigma V+ and tr(O rho^t) must reproduce x_p.
      CMat sigma = CMat::Zero(D, D);
      for (int r = 0; r < m; ++r)
        sigma.noalias() += p[r] * (u.col(r) * u.col(r).adjoint());
      const CMat rho = bb.isometry * sigma * bb.isometry.adjoint();
      CMat rho_t = rho;
      for (int i = 1; i < hp.t; ++i) rho_t = rho_t * rho;
      const double ambient = (o_eff * rho_t).trace().real();
      rep.audit_max_dev = std::max(rep.audit_max_dev, std::abs(ambient - x_p));
    }
  }
  rep.mc_mean_p = sum_p / trials;
  rep.mc_mean_q = sum_q / trials;
  const double var_hat_p =
      (sumsq_p / trials - rep.mc_mean_p * rep.mc_mean_p) * trials / (trials - 1.0);
  const double var_hat_q =
      (sumsq_q / trials - rep.mc_mean_q * rep.mc_mean_q) * trials / (trials - 1.0);
  rep.se_p = std::sqrt(std::max(var_hat_p, 0.0) / trials);
  rep.se_q = std::sqrt(std::max(var_hat_q, 0.0) / trials);
  rep.hit_p = static_cast<double>(hits_p) / trials;
  rep.hit_q = static_cast<double>(hits_q) / trials;
  return rep;
}

struct MidpointThreshold {
  double tau = 0;
  bool p_above = false;  // whether mean_p sits above tau
};

/// tau = (mean_p + mean_q)/2; the classifier compares the estimate to tau.
inline MidpointThreshold midpoint_threshold(const GapReport &rep) {
  return MidpointThreshold{0.5 * (rep.mean_p + rep.mean_q), rep.mean_p > rep.mean_q};
}

inline nlohmann::json to_json(const GapReport &r) {
  return nlohmann::json{{"t", r.t},
                        {"eta", r.eta},
                        {"D", r.D},
                        {"mean_p", r.mean_p},
                        {"mean_q", r.mean_q},
                        {"Delta", r.Delta},
                        {"var_p", r.var_p},
                        {"var_q", r.var_q},
                        {"hit_p", r.hit_p},
                        {"hit_q", r.hit_q},
                        {"trials", r.trials},
                        {"seed", r.seed},
                        {"mc_mean_p", r.mc_mean_p},
                        {"mc_mean_q", r.mc_mean_q},
                        {"se_p", r.se_p},
                        {"se_q", r.se_q},
                        {"delta_t", r.delta_t},
                        {"gap", r.gap},
                        {"audit_max_dev", r.audit_max_dev},
                        {"audit_count", r.audit_count},
                        {"sign_flipped", r.sign_flipped},
                        {"variance_condition_met", r.variance_condition_met},
                        {"trace_B", r.trace_B},
                        {"basis_hash", r.basis_hash}};
}

}  // namespace momentlab
