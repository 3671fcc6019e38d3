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
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "momentlab/linalg.hpp"

namespace momentlab {

/// Hard cap on dense tensor-power dimensions: d^n must stay <= 4096.
inline constexpr long kDimCap = 4096;

struct SizeCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// d^n, throwing when the result would exceed the dense cap.
inline long tensor_dim(int d, int n_slots) {
  if (d < 2) throw std::invalid_argument("tensor_dim: d < 2");
  if (n_slots < 0) throw std::invalid_argument("tensor_dim: negative slot count");
  long side = 1;
  for (int i = 0; i < n_slots; ++i) {
    side *= d;
    if (side > kDimCap)
      throw SizeCapError("tensor dimension " + std::to_string(d) + "^" +
                         std::to_string(n_slots) + " exceeds cap " + std::to_string(kDimCap));
  }
  return side;
}

/// d^{up r} = d (d+1) ... (d+r-1), exact; d^{up 0} = 1.
inline long long rising_factorial(int d, int r) {
  if (r < 0) throw std::invalid_argument("rising_factorial: r < 0");
  __int128 acc = 1;
  for (int i = 0; i < r; ++i) {
    acc *= (d + i);
    if (acc > static_cast<__int128>(9'000'000'000'000'000'000LL))
      throw std::overflow_error("rising_factorial overflow");
  }
  return static_cast<long long>(acc);
}

/**
 * Dense operator on (C^d)^{tensor n}. Slot 0 is the leftmost tensor factor
 * (most significant digit of the basis index).
 */
struct TensorOperator {
  int d = 2;
  int slots = 0;
  CMat mat;

  long side() const { return mat.rows(); }
  Complex trace() const { return mat.trace(); }
};

namespace tensidx {

/// Digit of basis index `idx` at slot `slot` (slot 0 most significant).
inline int digit(long idx, int slot, int d, int n_slots) {
  long div = 1;
  for (int i = n_slots - 1; i > slot; --i) div *= d;
  return static_cast<int>((idx / div) % d);
}

/// Basis index with the digits at slots x and y exchanged.
inline long swap_digits(long idx, int x, int y, int d, int n_slots) {
  long px = 1, py = 1;
  for (int i = n_slots - 1; i > x; --i) px *= d;
  for (int i = n_slots - 1; i > y; --i) py *= d;
  const long dx = (idx / px) % d;
  const long dy = (idx / py) % d;
  return idx + (dy - dx) * px + (dx - dy) * py;
}

}  // namespace tensidx

inline int cycle_count(const std::vector<int> &sigma) {
  const int n = static_cast<int>(sigma.size());
  std::vector<bool> seen(n, false);
  int cycles = 0;
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    ++cycles;
    for (int j = i; !seen[j]; j = sigma[j]) seen[j] = true;
  }
  return cycles;
}

inline std::vector<int> compose(const std::vector<int> &sigma, const std::vector<int> &tau) {
  std::vector<int> out(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) out[i] = sigma[tau[i]];
  return out;
}

/**
 * Permutation operator U_sigma on (C^d)^{tensor n}: moves the state in
 * slot i to slot sigma(i), so that U_sigma U_tau = U_{sigma tau} and
 * tr(U_sigma) = d^{#cycles(sigma)}.
 */
inline TensorOperator perm_operator(const std::vector<int> &sigma, int d) {
  const int n = static_cast<int>(sigma.size());
  const long side = tensor_dim(d, n);
  CMat mat = CMat::Zero(side, side);
  std::vector<long> place(n, 1);
  for (int i = n - 2; i >= 0; --i) place[i] = place[i + 1] * d;
  for (long c = 0; c < side; ++c) {
    long r = 0;
    long rem = c;
    for (int i = 0; i < n; ++i) {
      const int digit = static_cast<int>(rem / place[i]);
      rem %= place[i];
      r += static_cast<long>(digit) * place[sigma[i]];
    }
    mat(r, c) = 1.0;
  }
  return TensorOperator{d, n, std::move(mat)};
}

/**
 * In-place left multiplication m <- S^{subset} m by the symmetrizer over a
 * subset of slots, using the coset recursion S^{I+x} = (1 + sum_y SWAP(x,y)) S^I:
 * each step is a handful of row permutations, never a dense matrix product
 * and never an enumeration of |I|! permutations.
 */
inline void apply_symmetrizer_left(CMat &m, const std::vector<int> &subset, int n_slots,
                                   int d) {
  const long side = tensor_dim(d, n_slots);
  if (m.rows() != side) throw std::invalid_argument("apply_symmetrizer_left: side mismatch");
  std::vector<int> processed;
  for (int x : subset) {
    if (x < 0 || x >= n_slots)
      throw std::invalid_argument("apply_symmetrizer_left: slot out of range");
    if (!processed.empty()) {
      CMat next = m;
      for (int y : processed) {
        for (long r = 0; r < side; ++r)
          next.row(r) += m.row(tensidx::swap_digits(r, x, y, d, n_slots));
      }
      m = std::move(next);
    }
    processed.push_back(x);
  }
}

/// Symmetrizer over a subset of slots, embedded in an n-slot space.
inline CMat symmetrizer_on(const std::vector<int> &subset, int n_slots, int d) {
  CMat m = CMat::Identity(tensor_dim(d, n_slots), tensor_dim(d, n_slots));
  apply_symmetrizer_left(m, subset, n_slots, d);
  return m;
}

/// Symmetrizer S^I on |I| slots; tr(S^I) = d^{up |I|} and S^I/|I|! is idempotent.
inline TensorOperator symmetrizer(int n_slots, int d) {
  std::vector<int> all(n_slots);
  std::iota(all.begin(), all.end(), 0);
  return TensorOperator{d, n_slots, symmetrizer_on(all, n_slots, d)};
}

/**
 * Operator-norm deviation between the Monte Carlo average of psi^{tensor r}
 * over Haar states and S / d^{up r}. Scales as O(trials^{-1/2}).
 */
inline double haar_identity_check(int d, int r, int trials, std::uint64_t seed) {
  const long side = tensor_dim(d, r);
  Rng rng(seed);
  CMat avg = CMat::Zero(side, side);
  for (int trial = 0; trial < trials; ++trial) {
    const CVec psi = haar_state(d, rng);
    CVec prod = CVec::Ones(1);
    for (int i = 0; i < r; ++i) {
      CVec next(prod.size() * d);
      for (long a = 0; a < prod.size(); ++a)
        for (int b = 0; b < d; ++b) next(a * d + b) = prod(a) * psi(b);
      prod = std::move(next);
    }
    avg.noalias() += prod * prod.adjoint();
  }
  avg /= static_cast<double>(trials);
  const CMat expected =
      symmetrizer(r, d).mat / static_cast<double>(rising_factorial(d, r));
  return op_norm_hermitian(avg - expected);
}

// ---------------------------------------------------------------------------
// Sector machinery: crossing numbers, sector decomposition, sector identity.
// Slots 0..a-1 form A and slots a..a+b-1 form B.
// ---------------------------------------------------------------------------

inline int crossing_number(const std::vector<int> &sigma, int a) {
  int j = 0;
  for (int i = 0; i < a; ++i)
    if (sigma[i] >= a) ++j;
  return j;
}

/// The standard representative pi_j: swaps the first j slots of A with the
/// first j slots of B, fixing everything else.
inline std::vector<int> pi_j_permutation(int a, int b, int j) {
  if (j < 0 || j > std::min(a, b)) throw std::invalid_argument("pi_j: bad crossing number");
  std::vector<int> sigma(a + b);
  std::iota(sigma.begin(), sigma.end(), 0);
  for (int i = 0; i < j; ++i) std::swap(sigma[i], sigma[a + i]);
  return sigma;
}

inline std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<std::vector<int>> out;
  do out.push_back(sigma);
  while (std::next_permutation(sigma.begin(), sigma.end()));
  return out;
}

/**
 * Sector operators S_j = sum of U_sigma over permutations of A and B with
 * crossing number j. The returned list is indexed by j = 0..min(a,b) and
 * sums to the full symmetrizer S^{A+B}.
 */
inline std::vector<TensorOperator> sector_decompose(int a, int b, int d) {
  const int n = a + b;
  const long side = tensor_dim(d, n);
  std::vector<TensorOperator> sectors;
  for (int j = 0; j <= std::min(a, b); ++j)
    sectors.push_back(TensorOperator{d, n, CMat::Zero(side, side)});
  for (const auto &sigma : all_permutations(n))
    sectors[crossing_number(sigma, a)].mat += perm_operator(sigma, d).mat;
  return sectors;
}

struct SectorIdentityResult {
  long long multiplicity = 0;   // integer recovered from the matrix identity
  long long fiber_count = 0;    // |{(hL,hR) in HxH : hL pi_j hR = pi_j}|
  long long sector_size = 0;    // number of permutations with crossing number j
  double max_abs_deviation = 0; // entrywise |lhs - multiplicity * S_j|
};

/**
 * Verifies (S^A x S^B) U_{pi_j} (S^A x S^B) = m_{A,B,j} S_j by dense matrix
 * products, recovering the integer multiplicity, and cross-checks it against
 * brute-force double-coset fiber counting.
 */
inline SectorIdentityResult sector_identity_check(int a, int b, int j, int d) {
  const int n = a + b;
  tensor_dim(d, n);
  const CMat k = kron(symmetrizer(a, d).mat, symmetrizer(b, d).mat);
  const CMat u_pi = perm_operator(pi_j_permutation(a, b, j), d).mat;
  const CMat lhs = k * u_pi * k;
  const std::vector<TensorOperator> sectors = sector_decompose(a, b, d);
  const CMat &sj = sectors[j].mat;

  // Recover the multiplicity from the largest-magnitude entry of S_j.
  long rr = 0, cc = 0;
  sj.cwiseAbs().maxCoeff(&rr, &cc);
  const double ratio = lhs(rr, cc).real() / sj(rr, cc).real();
  const long long multiplicity = std::llround(ratio);
  const double dev = (lhs - static_cast<double>(multiplicity) * sj).cwiseAbs().maxCoeff();

  // Independent oracle: count fiber pairs over H x H with hL pi_j hR = pi_j.
  const auto pi = pi_j_permutation(a, b, j);
  const auto perms_a = all_permutations(a);
  const auto perms_b = all_permutations(b);
  auto h_elements = [&]() {
    std::vector<std::vector<int>> out;
    for (const auto &pa : perms_a)
      for (const auto &pb : perms_b) {
        std::vector<int> h(n);
        for (int i = 0; i < a; ++i) h[i] = pa[i];
        for (int i = 0; i < b; ++i) h[a + i] = a + pb[i];
        out.push_back(std::move(h));
      }
    return out;
  }();
  long long fiber = 0;
  for (const auto &hl : h_elements)
    for (const auto &hr : h_elements)
      if (compose(hl, compose(pi, hr)) == pi) ++fiber;

  long long sector_size = 0;
  for (const auto &sigma : all_permutations(n))
    if (crossing_number(sigma, a) == j) ++sector_size;

  return SectorIdentityResult{multiplicity, fiber, sector_size, dev};
}

// ---------------------------------------------------------------------------
// Permutation inequality: merged-label symmetrizers dominate the roundwise
// separated ones against any PSD operator that factorizes across rounds.
// ---------------------------------------------------------------------------

/**
 * Slot layout for a T-round, m-label placement. Global slots are numbered
 * round-major: round t occupies the contiguous block starting at
 * round_offset(t). cells[t][r] lists the global slots of label r in round t
 * (cells may be empty).
 */
struct PlacementSpec {
  int d = 2;
  std::vector<int> round_sizes;                  // slots per round
  std::vector<std::vector<std::vector<int>>> cells;  // [t][r] -> global slots

  int rounds() const { return static_cast<int>(round_sizes.size()); }
  int labels() const { return cells.empty() ? 0 : static_cast<int>(cells[0].size()); }
  int total_slots() const { return std::accumulate(round_sizes.begin(), round_sizes.end(), 0); }

  std::vector<std::vector<int>> merged_sets() const {
    std::vector<std::vector<int>> q(labels());
    for (const auto &round : cells)
      for (std::size_t r = 0; r < round.size(); ++r)
        q[r].insert(q[r].end(), round[r].begin(), round[r].end());
    return q;
  }
};

struct PermutationInequalityResult {
  double lhs = 0;
  double rhs = 0;
  double margin = 0;          // lhs - rhs
  double relative_margin = 0; // margin / max(|lhs|, tiny)
};

/**
 * tr(G prod_r S^{Q_r}) vs tr(G prod_{t,r} S^{I_{t,r}}) for G = G_1 x ... x G_T
 * with PSD round factors. The merged side can only be larger.
 */
inline PermutationInequalityResult permutation_inequality_check(
    const PlacementSpec &spec, const std::vector<CMat> &round_factors) {
  const int n = spec.total_slots();
  const int d = spec.d;
  tensor_dim(d, n);
  if (static_cast<int>(round_factors.size()) != spec.rounds())
    throw std::invalid_argument("permutation_inequality_check: per-round factor count mismatch");

  CMat g = CMat::Identity(1, 1);
  for (int t = 0; t < spec.rounds(); ++t) {
    if (round_factors[t].rows() != tensor_dim(d, spec.round_sizes[t]))
      throw std::invalid_argument("permutation_inequality_check: factor dimension mismatch");
    g = kron(g, round_factors[t]);
  }

  CMat merged = CMat::Identity(g.rows(), g.cols());
  for (const auto &q : spec.merged_sets())
    if (!q.empty()) apply_symmetrizer_left(merged, q, n, d);

  CMat separated = CMat::Identity(g.rows(), g.cols());
  for (const auto &round : spec.cells)
    for (const auto &cell : round)
      if (!cell.empty()) apply_symmetrizer_left(separated, cell, n, d);

  const double lhs = (g * merged).trace().real();
  const double rhs = (g * separated).trace().real();
  const double margin = lhs - rhs;
  return PermutationInequalityResult{lhs, rhs, margin,
                                     margin / std::max(std::abs(lhs), 1e-300)};
}

/// PSD operator M^dagger M from a seeded complex Gaussian square matrix.
inline CMat wishart_psd(long side, Rng &rng) {
  CMat m(side, side);
  for (long i = 0; i < side; ++i)
    for (long j = 0; j < side; ++j) m(i, j) = rng.complex_gaussian();
  return m.adjoint() * m;
}

}  // namespace momentlab
