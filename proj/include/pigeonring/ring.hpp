// Copyright 2026 The Pigeonring Authors
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

// Chain arithmetic over a ring of m boxes.
//
// Boxes b_0..b_{m-1} sit on a ring (b_{m-1} is adjacent to b_0). A chain is l
// consecutive boxes starting at some index. Given a bound n on the sum of all
// boxes, a chain is viable when its sum stays within its quota; a chain is
// prefix-viable when every one of its prefixes is viable. If the boxes sum to
// at most n, every length l in [1..m] has at least one prefix-viable chain,
// which is what the search modules use as their filtering condition.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pigeonring/errors.hpp"

namespace pigeonring::ring {

enum class Direction { kAtMost, kAtLeast };

/// Resolves a (possibly overflowing) ring index. Every module goes through this.
constexpr std::size_t wrap(std::size_t i, std::size_t m) noexcept { return i < m ? i : i % m; }

class BoxSequence {
 public:
  explicit BoxSequence(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[wrap(i, values_.size())]; }
  std::span<const double> values() const noexcept { return values_; }
  double sum() const noexcept;

  /// Rotates left by k: result[i] = this[i + k].
  BoxSequence rotated(std::size_t k) const;

 private:
  std::vector<double> values_;
};

struct Chain {
  std::size_t start = 0;
  std::size_t length = 1;
};

/// How the quota of a chain is derived, plus the comparison direction.
///
/// FixedQuota(n): quota(l) = l*n/m.
/// Variable(T): quota = sum of t_j over the chain.
/// IntegerReduction(T): quota = l-1 + sum t_j (AtMost) or 1-l + sum t_j (AtLeast).
class ThresholdSpec {
 public:
  enum class Mode { kFixedQuota, kVariable, kIntegerReduction };

  static ThresholdSpec fixed_quota(double n, Direction direction = Direction::kAtMost);
  static ThresholdSpec variable(std::vector<double> t, Direction direction = Direction::kAtMost);
  static ThresholdSpec integer_reduction(std::vector<std::int64_t> t,
                                         Direction direction = Direction::kAtMost);

  Mode mode() const noexcept { return mode_; }
  Direction direction() const noexcept { return direction_; }
  double n() const noexcept { return n_; }
  std::span<const double> variable_thresholds() const noexcept { return t_real_; }
  std::span<const std::int64_t> integer_thresholds() const noexcept { return t_int_; }

  /// Per-box threshold t_i as a real number (n/m for a fixed quota).
  double box_threshold(std::size_t i, std::size_t m) const;

  /// Throws ConfigError when a T vector does not have m entries.
  void validate(std::size_t m) const;

  /// Whether T satisfies the sum constraint that makes filtering complete for bound n:
  /// Variable needs sum(T) = n; IntegerReduction needs n-m+1 (AtMost) or n+m-1 (AtLeast).
  /// Always true for a fixed quota.
  bool consistent_with_bound(double n, std::size_t m) const;

  /// Same spec with every T rotated left by k (t'_i = t_{i+k}).
  ThresholdSpec rotated(std::size_t k) const;

 private:
  ThresholdSpec(Mode mode, Direction direction) : mode_(mode), direction_(direction) {}

  Mode mode_;
  Direction direction_;
  double n_ = 0.0;
  std::vector<double> t_real_;
  std::vector<std::int64_t> t_int_;
};

/// Incremental viability test for one chain being extended box by box.
/// Fixed quotas are compared by cross-multiplication (m*sum vs l*n) so integer and
/// half-integer boxes never hit rounding at the boundary.
/// Relative slack applied to Variable quotas.
inline constexpr double kVariableTolerance = 1e-9;

class QuotaCursor {
 public:
  QuotaCursor(const ThresholdSpec& spec, std::size_t m) noexcept : spec_(&spec), m_(m) {}

  /// Adds box j (already wrapped) with value `value`; returns whether the
  /// chain extended so far is viable.
  bool extend(std::size_t j, double value) noexcept {
    ++length_;
    sum_ += value;
    switch (spec_->mode()) {
      case ThresholdSpec::Mode::kFixedQuota: {
        const long double lhs = static_cast<long double>(sum_) * static_cast<long double>(m_);
        const long double rhs = static_cast<long double>(length_) * spec_->n();
        return compare(lhs, rhs);
      }
      case ThresholdSpec::Mode::kVariable:
        quota_ += spec_->variable_thresholds()[j];
        return compare(sum_, quota_ + slack(quota_));
      case ThresholdSpec::Mode::kIntegerReduction: {
        int_quota_ += spec_->integer_thresholds()[j];
        const auto l = static_cast<std::int64_t>(length_);
        const std::int64_t q =
            spec_->direction() == Direction::kAtMost ? int_quota_ + l - 1 : int_quota_ + 1 - l;
        return compare(sum_, static_cast<double>(q));
      }
    }
    return false;
  }

  std::size_t length() const noexcept { return length_; }
  double sum() const noexcept { return sum_; }

 private:
  // Real-valued T accumulates rounding error; lean toward viable.
  double slack(double quota) const noexcept {
    const double eps = kVariableTolerance * std::max(1.0, std::abs(quota));
    return spec_->direction() == Direction::kAtMost ? eps : -eps;
  }

  template <typename T>
  bool compare(T lhs, T rhs) const noexcept {
    return spec_->direction() == Direction::kAtMost ? lhs <= rhs : lhs >= rhs;
  }

  const ThresholdSpec* spec_;
  std::size_t m_;
  std::size_t length_ = 0;
  double sum_ = 0.0;
  double quota_ = 0.0;
  std::int64_t int_quota_ = 0;
};

struct PrefixCheck {
  bool viable = false;
  /// Length of the first non-viable prefix; 0 when viable.
  std::size_t failed_length = 0;
  /// Number of boxes evaluated.
  std::size_t box_evals = 0;
};

/// Checks whether the chain (start, l) is prefix-viable, pulling box values
/// lazily from `box(j)` with j already wrapped into [0, m). Stops at the first
/// failing prefix.
template <typename BoxFn>
PrefixCheck check_prefix(const ThresholdSpec& spec, std::size_t m, std::size_t start,
                         std::size_t l, BoxFn&& box) {
  QuotaCursor cursor(spec, m);
  PrefixCheck out;
  for (std::size_t k = 0; k < l; ++k) {
    const std::size_t j = wrap(start + k, m);
    ++out.box_evals;
    if (!cursor.extend(j, static_cast<double>(box(j)))) {
      out.failed_length = k + 1;
      return out;
    }
  }
  out.viable = true;
  return out;
}

/// Sum of the boxes in chain c. Throws ConfigError for length 0 or > m.
double chain_sum(const BoxSequence& boxes, Chain c);

/// Quota of chain c as a real number.
double chain_quota(const ThresholdSpec& spec, Chain c, std::size_t m);

/// Non-strict: ties are viable.
bool is_viable(const BoxSequence& boxes, const ThresholdSpec& spec, Chain c);

/// Every prefix of (start, l) viable? Reports the failing prefix length otherwise.
PrefixCheck is_prefix_viable(const BoxSequence& boxes, const ThresholdSpec& spec,
                             std::size_t start, std::size_t l);

/// All starts whose length-l chain is prefix-viable, ascending. A start whose
/// check fails at prefix length l' lets the scan jump over [start, start+l').
std::vector<std::size_t> find_prefix_viable_starts(const BoxSequence& boxes,
                                                   const ThresholdSpec& spec, std::size_t l);

/// l = 1 degeneration: some single box within its threshold.
bool pigeonhole_candidate(const BoxSequence& boxes, const ThresholdSpec& spec);

/// Suffix-side and non-viable variants, used by the exhaustive verifier.
bool is_suffix_viable(const BoxSequence& boxes, const ThresholdSpec& spec, std::size_t start,
                      std::size_t l);
bool is_prefix_non_viable(const BoxSequence& boxes, const ThresholdSpec& spec, std::size_t start,
                          std::size_t l);
bool is_suffix_non_viable(const BoxSequence& boxes, const ThresholdSpec& spec, std::size_t start,
                          std::size_t l);

struct TheoremReport {
  std::size_t m = 0;
  std::int64_t n = 0;
  std::size_t omega = 0;
  std::uint64_t sequences = 0;
  std::uint64_t within_bound = 0;  ///< sequences with sum <= n
  std::uint64_t checks = 0;        ///< (sequence, l, property) triples checked
  std::uint64_t violations = 0;
  /// First few violating sequences, for diagnostics.
  std::vector<std::pair<std::vector<int>, std::string>> examples;
};

/// Upper bound on the (omega+1)^m sequences verify_theorems_exhaustive will enumerate.
inline constexpr std::uint64_t kMaxExhaustiveSequences = 10'000'000;

/// Enumerates every B in [0..omega]^m and checks, for every l in [1..m], the
/// basic form, the strong form (prefix- and suffix-viable chains exist when
/// sum(B) <= n) and its non-viable counterpart (prefix- and suffix-non-viable
/// chains exist when sum(B) > n), all under FixedQuota(n).
TheoremReport verify_theorems_exhaustive(std::size_t m, std::int64_t n, std::size_t omega);

}  // namespace pigeonring::ring
