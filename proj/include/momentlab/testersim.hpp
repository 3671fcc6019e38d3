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
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "momentlab/ensembles.hpp"
#include "momentlab/tensorperm.hpp"

namespace momentlab {

/// Exact configuration enumeration is used only below this many labelings.
inline constexpr long kConfigCap = 100000;

/**
 * One per-round labeling of the k T tensor slots by the m ensemble labels:
 * count matrix b_r^(t) with row sums k, and the placement cells I_{t,r}.
 * Global slots are numbered round-major (round t owns slots tk..tk+k-1).
 */
struct Configuration {
  int k = 0, T = 0, m = 0;
  std::vector<int> labels;  // labels[slot] in [0, m)

  std::vector<std::vector<int>> counts() const {
    std::vector<std::vector<int>> b(T, std::vector<int>(m, 0));
    for (int slot = 0; slot < k * T; ++slot) ++b[slot / k][labels[slot]];
    return b;
  }

  std::vector<std::vector<std::vector<int>>> cells() const {
    std::vector<std::vector<std::vector<int>>> out(T,
                                                   std::vector<std::vector<int>>(m));
    for (int slot = 0; slot < k * T; ++slot) out[slot / k][labels[slot]].push_back(slot);
    return out;
  }

  /// Q_r: slots of label r merged across rounds.
  std::vector<std::vector<int>> merged() const {
    std::vector<std::vector<int>> q(m);
    for (int slot = 0; slot < k * T; ++slot) q[labels[slot]].push_back(slot);
    return q;
  }

  /// A_r = |Q_r|.
  std::vector<int> totals() const {
    std::vector<int> a(m, 0);
    for (int slot = 0; slot < k * T; ++slot) ++a[labels[slot]];
    return a;
  }
};

/// I.i.d. categorical labels per slot: multinomial counts per round and
/// uniform placements given the counts, in one stroke.
inline Configuration sample_configuration(const Spectrum &p, int k, int T, Rng &rng) {
  Configuration cfg;
  cfg.k = k;
  cfg.T = T;
  cfg.m = static_cast<int>(p.size());
  cfg.labels.resize(static_cast<std::size_t>(k) * T);
  for (auto &l : cfg.labels) l = rng.categorical(p);
  return cfg;
}

struct ConditionalSources {
  CMat joint;    // tensor_r S^{Q_r} / d^{up A_r}
  CMat product;  // tensor_{t,r} S^{I_{t,r}} / d^{up b_r^(t)}
};

/// Conditional averaged states of the joint and roundwise-product sources.
inline ConditionalSources conditional_sources(const Configuration &cfg, int d) {
  const int n = cfg.k * cfg.T;
  const long side = tensor_dim(d, n);
  ConditionalSources out;

  out.joint = CMat::Identity(side, side);
  double joint_norm = 1.0;
  for (const auto &q : cfg.merged()) {
    if (q.empty()) continue;
    apply_symmetrizer_left(out.joint, q, n, d);
    joint_norm *= static_cast<double>(rising_factorial(d, static_cast<int>(q.size())));
  }
  out.joint /= joint_norm;

  out.product = CMat::Identity(side, side);
  double prod_norm = 1.0;
  for (const auto &round : cfg.cells())
    for (const auto &cell : round) {
      if (cell.empty()) continue;
      apply_symmetrizer_left(out.product, cell, n, d);
      prod_norm *= static_cast<double>(rising_factorial(d, static_cast<int>(cell.size())));
    }
  out.product /= prod_norm;
  return out;
}

struct PochhammerCheck {
  Rational ratio;        // prod_t d^{up y_t} / d^{up Y}, exact
  double ratio_value = 0;
  double refined_bound = 0;  // exp(-(1/d) sum_{u<t} y_u y_t)
  double bound = 0;          // exp(-Y^2/d)
  bool holds = false;
};

/// Exact-rational Pochhammer ratio against its two exponential lower bounds.
inline PochhammerCheck pochhammer_ratio_check(int d, const std::vector<int> &y) {
  long long total = 0;
  for (int v : y) {
    if (v < 0) throw std::invalid_argument("pochhammer_ratio_check: negative entry");
    total += v;
  }
  PochhammerCheck out;
  Rational num(1);
  for (int v : y) num *= Rational(static_cast<long>(rising_factorial(d, v)));
  out.ratio = num / Rational(static_cast<long>(rising_factorial(d, static_cast<int>(total))));
  out.ratio_value = to_double(out.ratio);

  double cross = 0;
  for (std::size_t u = 0; u < y.size(); ++u)
    for (std::size_t t = u + 1; t < y.size(); ++t) cross += static_cast<double>(y[u]) * y[t];
  out.refined_bound = std::exp(-cross / d);
  out.bound = std::exp(-static_cast<double>(total) * total / d);
  out.holds = out.ratio_value + 1e-15 >= out.refined_bound &&
              out.refined_bound + 1e-15 >= out.bound;
  return out;
}

struct ExpectedAr2 {
  std::vector<double> per_label;  // T(T-1)(k p_r)^2 + T(k(k-1)p_r^2 + k p_r)
  double total = 0;               // sum over labels
  double kT_bound = 0;            // (kT)^2 + kT
};

inline ExpectedAr2 expected_Ar2(const Spectrum &p, int k, int T) {
  ExpectedAr2 out;
  const double kt = static_cast<double>(k) * T;
  for (double pr : p) {
    const double v = T * (T - 1.0) * (k * pr) * (k * pr) +
                     T * (k * (k - 1.0) * pr * pr + k * pr);
    out.per_label.push_back(v);
    out.total += v;
  }
  out.kT_bound = kt * kt + kt;
  return out;
}

// ---------------------------------------------------------------------------
// Product POVMs and the induced total-variation distance.
// ---------------------------------------------------------------------------

/** General product POVM: each outcome is a T-fold product of PSD factors. */
struct ProductPovm {
  int T = 0;
  long block_side = 0;  // d^k
  std::vector<std::vector<CMat>> outcome_factors;

  CMat outcome_operator(std::size_t i) const {
    CMat f = CMat::Identity(1, 1);
    for (const auto &factor : outcome_factors[i]) f = kron(f, factor);
    return f;
  }
};

/// Completeness deviation max|sum_y F_y - I|; the caller decides the budget.
inline double povm_completeness_deviation(const ProductPovm &povm) {
  long side = 1;
  for (int t = 0; t < povm.T; ++t) side *= povm.block_side;
  CMat total = CMat::Zero(side, side);
  for (std::size_t i = 0; i < povm.outcome_factors.size(); ++i)
    total += povm.outcome_operator(i);
  return (total - CMat::Identity(side, side)).cwiseAbs().maxCoeff();
}

inline std::vector<double> outcome_distribution(const ProductPovm &povm, const CMat &source) {
  std::vector<double> p;
  p.reserve(povm.outcome_factors.size());
  for (std::size_t i = 0; i < povm.outcome_factors.size(); ++i)
    p.push_back((povm.outcome_operator(i) * source).trace().real());
  return p;
}

/**
 * Projective product POVM: per round a Haar-random orthonormal basis of the
 * d^k block; outcomes are tuples of basis indices. Complete by construction.
 */
struct ProjectiveProductPovm {
  int T = 0;
  long block_side = 0;
  std::vector<CMat> round_bases;  // unitary per round, columns = outcome vectors
};

inline ProjectiveProductPovm random_projective_product_povm(int d, int k, int T, Rng &rng) {
  ProjectiveProductPovm povm;
  povm.T = T;
  povm.block_side = tensor_dim(d, k);
  for (int t = 0; t < T; ++t)
    povm.round_bases.push_back(haar_unitary(static_cast<int>(povm.block_side), rng));
  return povm;
}

namespace detail {

/// M <- (I x U+ x I) M, with U acting on the round digit at position `pos`
/// of a T-digit base-`block` row index. For each column, the affected rows
/// form an after x block strided slice, contracted against conj(U) as one
/// matrix product.
inline void apply_round_adjoint_left(CMat &m, const CMat &u, int pos, int T, long block) {
  long after = 1;
  for (int i = pos + 1; i < T; ++i) after *= block;
  long before = 1;
  for (int i = 0; i < pos; ++i) before *= block;
  const CMat u_conj = u.conjugate();
  using StridedMap = Eigen::Map<CMat, 0, Eigen::OuterStride<>>;
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    Complex *col_ptr = m.data() + static_cast<long>(col) * m.rows();
    for (long a = 0; a < before; ++a) {
      StridedMap slice(col_ptr + a * block * after, after, block,
                       Eigen::OuterStride<>(after));
      slice = CMat(slice * u_conj);
    }
  }
}

}  // namespace detail

/// Outcome distribution diag(L+ source L) with L = tensor of the round bases.
inline std::vector<double> outcome_distribution(const ProjectiveProductPovm &povm,
                                                const CMat &source) {
  CMat b = source;
  for (int t = 0; t < povm.T; ++t)
    detail::apply_round_adjoint_left(b, povm.round_bases[t], t, povm.T, povm.block_side);
  CMat c = b.adjoint();
  for (int t = 0; t < povm.T; ++t)
    detail::apply_round_adjoint_left(c, povm.round_bases[t], t, povm.T, povm.block_side);
  std::vector<double> p(c.rows());
  for (Eigen::Index i = 0; i < c.rows(); ++i) p[i] = c(i, i).real();
  return p;
}

inline double total_variation(const std::vector<double> &p, const std::vector<double> &q) {
  if (p.size() != q.size()) throw std::invalid_argument("total_variation: size mismatch");
  double acc = 0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return 0.5 * acc;
}

/// Induced distance d_M between two explicit sources; exact, no sampling.
inline double estimate_dM(const ProductPovm &povm, const CMat &s1, const CMat &s2) {
  if (povm_completeness_deviation(povm) > 1e-10)
    throw std::invalid_argument("estimate_dM: POVM is not complete");
  for (const auto &factors : povm.outcome_factors)
    for (const auto &f : factors)
      if (hermiticity_deviation(f) > 1e-10 || hermitian_eigenvalues(f).minCoeff() < -1e-10)
        throw std::invalid_argument("estimate_dM: outcome factor is not PSD");
  return total_variation(outcome_distribution(povm, s1), outcome_distribution(povm, s2));
}

inline double estimate_dM(const ProjectiveProductPovm &povm, const CMat &s1, const CMat &s2) {
  return total_variation(outcome_distribution(povm, s1), outcome_distribution(povm, s2));
}

// ---------------------------------------------------------------------------
// Indistinguishability experiment.
// ---------------------------------------------------------------------------

struct IndistRow {
  int d = 0, k = 0, T = 0, povm_id = 0;
  double dM_gamma_pi_p = 0;
  double dM_gamma_pi_q = 0;
  double dM_gamma_pq = 0;
  double bound_pi = 0;  // ((kT)^2 + kT)/d
  double bound_pq = 0;  // 4 (kT)^2 / d
  bool vacuous_flag = false;
  double pointwise_min_margin = 0;  // min over configs/outcomes of P - c Q
  double convexity_margin = 0;      // sum_a l_a dTV(P_a,Q_a) - dTV(P,Q), for p
};

struct IndistResult {
  bool exact_enumeration = false;  // convexity/Pi-equality asserted only when true
  long n_configurations = 0;
  double pi_pq_deviation = 0;  // operator norm of Pi_p - Pi_q
  double max_bound_violation = 0;
  std::vector<IndistRow> rows;
};

namespace detail {

struct SourceSet {
  CMat gamma_p, gamma_q, pi_p, pi_q;
  // Unique conditional operators plus one (joint, product) index pair per
  // distinct configuration class, with aggregated p-weights and c_alpha,
  // for the pointwise-domination and convexity checks.
  std::vector<CMat> joint_ops, prod_ops;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<double> weights_p;
  std::vector<double> c_alphas;
};

inline std::string partition_key(const std::vector<std::vector<int>> &blocks) {
  std::vector<std::string> parts;
  for (const auto &b : blocks) {
    if (b.empty()) continue;
    std::string s;
    for (int x : b) s += std::to_string(x) + ",";
    parts.push_back(s);
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto &s : parts) out += s + ";";
  return out;
}

class SourceAccumulator {
 public:
  SourceAccumulator(int d, int k, int T) : d_(d), k_(k), T_(T) {
    const long side = tensor_dim(d, k * T);
    src_.gamma_p = CMat::Zero(side, side);
    src_.gamma_q = CMat::Zero(side, side);
    src_.pi_p = CMat::Zero(side, side);
    src_.pi_q = CMat::Zero(side, side);
  }

  void add(const Configuration &cfg, double w_p, double w_q) {
    const std::string jkey = partition_key(cfg.merged());
    const std::string pkey = partition_key([&] {
      std::vector<std::vector<int>> flat;
      for (const auto &round : cfg.cells())
        for (const auto &cell : round) flat.push_back(cell);
      return flat;
    }());

    auto jit = joint_index_.find(jkey);
    auto pit = prod_index_.find(pkey);
    if (jit == joint_index_.end() || pit == prod_index_.end()) {
      const ConditionalSources cs = conditional_sources(cfg, d_);
      if (jit == joint_index_.end()) {
        jit = joint_index_.emplace(jkey, src_.joint_ops.size()).first;
        src_.joint_ops.push_back(cs.joint);
      }
      if (pit == prod_index_.end()) {
        pit = prod_index_.emplace(pkey, src_.prod_ops.size()).first;
        src_.prod_ops.push_back(cs.product);
      }
    }
    const CMat &joint = src_.joint_ops[jit->second];
    const CMat &prod = src_.prod_ops[pit->second];
    src_.gamma_p.noalias() += w_p * joint;
    src_.gamma_q.noalias() += w_q * joint;
    src_.pi_p.noalias() += w_p * prod;
    src_.pi_q.noalias() += w_q * prod;

    const std::string pair_key = jkey + "|" + pkey;
    auto dit = pair_index_.find(pair_key);
    if (dit == pair_index_.end()) {
      pair_index_.emplace(pair_key, src_.pairs.size());
      src_.pairs.emplace_back(jit->second, pit->second);
      src_.weights_p.push_back(w_p);
      double a2 = 0;
      for (int ar : cfg.totals()) a2 += static_cast<double>(ar) * ar;
      src_.c_alphas.push_back(std::exp(-a2 / d_));
    } else {
      src_.weights_p[dit->second] += w_p;
    }
  }

  SourceSet take() { return std::move(src_); }

 private:
  int d_, k_, T_;
  SourceSet src_;
  std::map<std::string, std::size_t> joint_index_, prod_index_, pair_index_;
};

inline SourceSet enumerate_sources(const Spectrum &p, const Spectrum &q, int d, int k, int T) {
  const int m = static_cast<int>(p.size());
  const int n = k * T;
  SourceAccumulator acc(d, k, T);
  Configuration cfg;
  cfg.k = k;
  cfg.T = T;
  cfg.m = m;
  cfg.labels.assign(n, 0);
  while (true) {
    double w_p = 1.0, w_q = 1.0;
    for (int slot = 0; slot < n; ++slot) {
      w_p *= p[cfg.labels[slot]];
      w_q *= q[cfg.labels[slot]];
    }
    acc.add(cfg, w_p, w_q);
    int slot = 0;
    for (; slot < n; ++slot) {
      if (++cfg.labels[slot] < m) break;
      cfg.labels[slot] = 0;
    }
    if (slot == n) break;
  }
  return acc.take();
}

/// Importance-sampled fallback above the enumeration cap: labelings drawn
/// i.i.d. from the p-measure, with per-sample likelihood ratios reweighting
/// the q-side sources. Unbiased; the exact-equality assertions do not apply.
inline SourceSet sample_sources(const Spectrum &p, const Spectrum &q, int d, int k, int T,
                                int n_samples, Rng &rng) {
  SourceAccumulator acc(d, k, T);
  const double w = 1.0 / n_samples;
  for (int i = 0; i < n_samples; ++i) {
    const Configuration cfg = sample_configuration(p, k, T, rng);
    double likelihood_ratio = 1.0;
    for (int label : cfg.labels) likelihood_ratio *= q[label] / p[label];
    acc.add(cfg, w, w * likelihood_ratio);
  }
  return acc.take();
}

}  // namespace detail

/**
 * Configuration-averaged comparison of the joint Haar source Gamma, the
 * roundwise-product source Pi, and the cross pair, against n_povms seeded
 * random projective product POVMs. Enumeration is exact up to exact_cap
 * labelings (k is the replica count per round; k = s for hard pairs); above
 * the cap, configurations are importance-sampled from the p-measure.
 */
inline IndistResult indistinguishability_experiment(const Spectrum &p, const Spectrum &q,
                                                    int d, int k, int T,
                                                    std::uint64_t povm_seed, int n_povms,
                                                    long exact_cap = kConfigCap,
                                                    int n_config_samples = 20000) {
  const int m = static_cast<int>(p.size());
  if (q.size() != p.size())
    throw std::invalid_argument("indistinguishability_experiment: |p| != |q|");
  const int n = k * T;
  tensor_dim(d, n);
  double configs = 1;
  for (int i = 0; i < n; ++i) configs *= m;

  IndistResult res;
  res.exact_enumeration = configs <= static_cast<double>(exact_cap);
  detail::SourceSet src;
  if (res.exact_enumeration) {
    src = detail::enumerate_sources(p, q, d, k, T);
    res.n_configurations = static_cast<long>(configs);
  } else {
    Rng cfg_rng = Rng(povm_seed).derive(0xC0FFEE);
    src = detail::sample_sources(p, q, d, k, T, n_config_samples, cfg_rng);
    res.n_configurations = n_config_samples;
  }
  // Operator norm on desk-scale sides; on larger instances the Frobenius
  // norm is reported instead (a sound upper bound at O(N^2) cost).
  res.pi_pq_deviation = src.pi_p.rows() <= 512
                            ? op_norm_hermitian(src.pi_p - src.pi_q)
                            : (src.pi_p - src.pi_q).norm();

  const double kt = static_cast<double>(k) * T;
  const double bound_pi = (kt * kt + kt) / d;
  const double bound_pq = 4.0 * kt * kt / d;

  const Rng master(povm_seed);
  for (int id = 0; id < n_povms; ++id) {
    Rng rng = master.derive(id);
    const ProjectiveProductPovm povm = random_projective_product_povm(d, k, T, rng);

    IndistRow row;
    row.d = d;
    row.k = k;
    row.T = T;
    row.povm_id = id;
    row.bound_pi = bound_pi;
    row.bound_pq = bound_pq;
    row.vacuous_flag = bound_pi > 1.0 || bound_pq > 1.0;

    const auto dist_gamma_p = outcome_distribution(povm, src.gamma_p);
    const auto dist_gamma_q = outcome_distribution(povm, src.gamma_q);
    const auto dist_pi_p = outcome_distribution(povm, src.pi_p);
    const auto dist_pi_q = outcome_distribution(povm, src.pi_q);
    row.dM_gamma_pi_p = total_variation(dist_gamma_p, dist_pi_p);
    row.dM_gamma_pi_q = total_variation(dist_gamma_q, dist_pi_q);
    row.dM_gamma_pq = total_variation(dist_gamma_p, dist_gamma_q);

    res.max_bound_violation = std::max(
        {res.max_bound_violation, row.dM_gamma_pi_p - bound_pi, row.dM_gamma_pi_q - bound_pi,
         row.dM_gamma_pq - bound_pq});

    // Pointwise domination P_a(y) >= c_a Q_a(y) and convexity of TV under the
    // common configuration mixture. Distributions are computed once per
    // unique conditional operator.
    std::vector<std::vector<double>> joint_dists, prod_dists;
    for (const CMat &op : src.joint_ops) joint_dists.push_back(outcome_distribution(povm, op));
    for (const CMat &op : src.prod_ops) prod_dists.push_back(outcome_distribution(povm, op));
    row.pointwise_min_margin = 1e300;
    double weighted_tv = 0;
    for (std::size_t a = 0; a < src.pairs.size(); ++a) {
      const auto &pa = joint_dists[src.pairs[a].first];
      const auto &qa = prod_dists[src.pairs[a].second];
      for (std::size_t y = 0; y < pa.size(); ++y)
        row.pointwise_min_margin =
            std::min(row.pointwise_min_margin, pa[y] - src.c_alphas[a] * qa[y]);
      weighted_tv += src.weights_p[a] * total_variation(pa, qa);
    }
    row.convexity_margin = weighted_tv - row.dM_gamma_pi_p;
    res.rows.push_back(row);
  }
  return res;
}

inline std::string to_csv(const IndistResult &res) {
  std::ostringstream os;
  os << "d,k,T,povm_id,dM_gamma_pi_p,dM_gamma_pi_q,dM_gamma_pq,bound_pi,bound_pq,vacuous_flag\n";
  os.precision(17);
  for (const auto &r : res.rows)
    os << r.d << "," << r.k << "," << r.T << "," << r.povm_id << "," << r.dM_gamma_pi_p << ","
       << r.dM_gamma_pi_q << "," << r.dM_gamma_pq << "," << r.bound_pi << "," << r.bound_pq
       << "," << (r.vacuous_flag ? 1 : 0) << "\n";
  return os.str();
}

inline nlohmann::json to_json(const IndistResult &res) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto &r : res.rows)
    rows.push_back({{"d", r.d},
                    {"k", r.k},
                    {"T", r.T},
                    {"povm_id", r.povm_id},
                    {"dM_gamma_pi_p", r.dM_gamma_pi_p},
                    {"dM_gamma_pi_q", r.dM_gamma_pi_q},
                    {"dM_gamma_pq", r.dM_gamma_pq},
                    {"bound_pi", r.bound_pi},
                    {"bound_pq", r.bound_pq},
                    {"vacuous_flag", r.vacuous_flag},
                    {"pointwise_min_margin", r.pointwise_min_margin},
                    {"convexity_margin", r.convexity_margin}});
  return nlohmann::json{{"exact_enumeration", res.exact_enumeration},
                        {"n_configurations", res.n_configurations},
                        {"pi_pq_deviation", res.pi_pq_deviation},
                        {"max_bound_violation", res.max_bound_violation},
                        {"rows", rows}};
}

}  // namespace momentlab
