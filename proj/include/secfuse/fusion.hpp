/*
 * Copyright 2026 The secfuse Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Attack-resilient fusion of redundant scalar measurements.
//
// Given N copies of one scalar state of which at most q carry an arbitrary
// additive corruption, the estimate is the mean of the (N - q)-subset whose
// readings are most tightly clustered around their own mean. With honest
// noise bounded by g and q < N/2 the estimate is within 3g of the truth,
// whatever values the corrupted readings take.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "secfuse/error.hpp"
#include "secfuse/types.hpp"

namespace secfuse {

struct FusionOptions {
  /// Largest stack accepted; enumeration visits C(N, N - q) subsets.
  std::size_t max_sources = 24;
};

struct FusionOutcome {
  double estimate = 0.0;
  SubsetIndex selected;
  double spread = 0.0;
  std::size_t q_used = 0;
  bool reconstructible = false;
};

/// Two explanations of one corrupted stack that differ in the underlying state.
struct AmbiguityWitness {
  double x = 0.0;
  double x_bar = 0.0;
  std::vector<double> a;
  std::vector<double> a_bar;
};

/// A unique state is recoverable from N copies with up to q corrupted iff q < N/2.
constexpr bool check_reconstructible(std::size_t n, std::size_t q) { return 2 * q < n; }

/// Largest q still satisfying check_reconstructible: ceil(N/2) - 1.
constexpr std::size_t default_attack_budget(std::size_t n) { return n == 0 ? 0 : (n + 1) / 2 - 1; }

inline double subset_mean(const MeasurementStack& stack, const SubsetIndex& subset) {
  validate_subset(stack, subset);
  double sum = 0.0;
  for (std::size_t p : subset.members()) sum += stack.value(p);
  return sum / static_cast<double>(subset.size());
}

/// Largest absolute deviation of the subset's readings from the subset mean.
inline double subset_spread(const MeasurementStack& stack, const SubsetIndex& subset) {
  const double mean = subset_mean(stack, subset);
  double spread = 0.0;
  for (std::size_t p : subset.members()) spread = std::max(spread, std::abs(mean - stack.value(p)));
  return spread;
}

namespace detail {

inline void check_fusion_preconditions(std::size_t n, std::size_t q, const FusionOptions& options) {
  if (n < 3) {
    throw Error(ErrorKind::kInsufficientRedundancy,
                "fusion needs at least 3 sources, got " + std::to_string(n));
  }
  if (!check_reconstructible(n, q)) {
    throw Error(ErrorKind::kNotReconstructible,
                "attack budget q=" + std::to_string(q) + " is not below N/2 for N=" + std::to_string(n));
  }
  if (n > options.max_sources) {
    throw Error(ErrorKind::kEnumerationCap, "stack of " + std::to_string(n) + " sources exceeds cap of " +
                                                std::to_string(options.max_sources));
  }
}

// Advances `idx` (strictly increasing, values < n) to the next combination in
// lexicographic order; false once exhausted.
inline bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  std::size_t i = k;
  while (i > 0) {
    --i;
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// The (N - q)-subset of minimal spread. Subsets are visited in lexicographic
/// order and only a strictly smaller spread replaces the incumbent, so ties go
/// to the lexicographically smallest subset.
inline SubsetIndex select_min_spread_subset(const MeasurementStack& stack, std::size_t q,
                                            const FusionOptions& options = {}) {
  const std::size_t n = stack.size();
  detail::check_fusion_preconditions(n, q, options);

  const std::size_t k = n - q;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;

  std::vector<std::size_t> best = idx;
  double best_spread = std::numeric_limits<double>::infinity();
  do {
    double sum = 0.0;
    for (std::size_t p : idx) sum += stack.value(p);
    const double mean = sum / static_cast<double>(k);
    double spread = 0.0;
    for (std::size_t p : idx) spread = std::max(spread, std::abs(mean - stack.value(p)));
    if (spread < best_spread) {
      best_spread = spread;
      best = idx;
    }
  } while (detail::next_combination(idx, n));
  return SubsetIndex(std::move(best));
}

inline FusionOutcome fuse(const MeasurementStack& stack, std::size_t q, const FusionOptions& options = {}) {
  FusionOutcome out;
  out.selected = select_min_spread_subset(stack, q, options);
  out.estimate = subset_mean(stack, out.selected);
  out.spread = subset_spread(stack, out.selected);
  out.q_used = q;
  out.reconstructible = check_reconstructible(stack.size(), q);
  return out;
}

inline FusionOutcome fuse(const MeasurementStack& stack, const FusionOptions& options = {}) {
  return fuse(stack, default_attack_budget(stack.size()), options);
}

/// For q >= N/2, builds attack vectors with supports {1..q} and {N-q+1..N}
/// under which states x and x_bar produce the same noise-free stack.
inline AmbiguityWitness construct_ambiguity(std::size_t n, std::size_t q, double x, double x_bar) {
  if (n == 0 || q > n) {
    throw Error(ErrorKind::kInvalidArgument,
                "need 0 < N and q <= N, got N=" + std::to_string(n) + " q=" + std::to_string(q));
  }
  if (check_reconstructible(n, q)) {
    throw Error(ErrorKind::kReconstructibleRegime,
                "q=" + std::to_string(q) + " < N/2 for N=" + std::to_string(n) + "; no ambiguity exists");
  }
  if (x == x_bar) throw Error(ErrorKind::kInvalidArgument, "x and x_bar must differ");

  AmbiguityWitness w{x, x_bar, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  // Zero-based: W = [0, q), W_bar = [n - q, n). 2q >= n so they cover every index.
  const std::size_t w_bar_begin = n - q;
  for (std::size_t j = 0; j < n; ++j) {
    const bool in_w = j < q;
    const bool in_w_bar = j >= w_bar_begin;
    if (in_w && in_w_bar) {
      w.a[j] = x_bar;
      w.a_bar[j] = x;
    } else if (in_w) {
      w.a[j] = x_bar - x;
    } else {
      w.a_bar[j] = x - x_bar;
    }
  }
  return w;
}

}  // namespace secfuse
