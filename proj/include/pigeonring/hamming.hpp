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

// Hamming distance search over d-dimensional binary vectors.
//
// Dimensions are cut into m contiguous parts; box i is the Hamming distance
// over part i, so the boxes sum exactly to the full distance. The index maps
// each part value to the objects holding it. A query enumerates, per part,
// every value within the part's threshold (first step), then extends a chain
// of part distances from each hit until it is proven prefix-viable or fails
// (second step). Survivors are verified with a full popcount.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pigeonring/query_stats.hpp"
#include "pigeonring/ring.hpp"

namespace pigeonring::hamming {

/// Bit d lives in word d / 64 at bit position 63 - d % 64 (dimension 0 is the MSB).
class BinaryVector {
 public:
  BinaryVector() = default;
  explicit BinaryVector(std::size_t dim) : words_((dim + 63) / 64, 0), dim_(dim) {}

  /// Parses a '0'/'1' string, or "0x" followed by hex digits (4 dimensions per digit).
  static BinaryVector parse(std::string_view text);

  std::size_t dim() const noexcept { return dim_; }
  bool bit(std::size_t d) const noexcept { return (words_[d >> 6] >> (63 - (d & 63))) & 1u; }
  void set(std::size_t d, bool v) noexcept {
    const std::uint64_t mask = std::uint64_t{1} << (63 - (d & 63));
    words_[d >> 6] = v ? (words_[d >> 6] | mask) : (words_[d >> 6] & ~mask);
  }
  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::string to_string() const;

  friend bool operator==(const BinaryVector&, const BinaryVector&) = default;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t dim_ = 0;
};

std::size_t hamming_distance(const BinaryVector& a, const BinaryVector& b);

/// m contiguous, disjoint bit ranges covering [0, d). Widths differ by at most one,
/// wider parts first.
class PartLayout {
 public:
  PartLayout() = default;
  PartLayout(std::size_t dim, std::vector<std::size_t> offsets);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t parts() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t begin(std::size_t i) const noexcept { return offsets_[i]; }
  std::size_t width(std::size_t i) const noexcept { return offsets_[i + 1] - offsets_[i]; }

 private:
  std::size_t dim_ = 0;
  std::vector<std::size_t> offsets_;
};

PartLayout partition_dims(std::size_t dim, std::size_t parts);

/// floor(d / 16), at least 1.
std::size_t default_parts(std::size_t dim);

/// Even integer-reduction split of tau over m parts: sum(T) = tau - m + 1 exactly,
/// entries differ by at most one, larger entries first. When tau < m - 1 some
/// entries are negative; those parts never seed a candidate.
ring::ThresholdSpec allocate_thresholds(std::int64_t tau, std::size_t parts);

/// Value of part i with its first dimension as the most significant bit.
std::uint64_t part_value(const BinaryVector& v, const PartLayout& layout, std::size_t i);

int part_distance(const BinaryVector& x, const BinaryVector& q, const PartLayout& layout,
                  std::size_t i);

struct BuildOptions {
  /// When set, dimensions are shuffled with this seed before partitioning.
  std::optional<std::uint64_t> permutation_seed;
};

class HammingIndex {
 public:
  /// Throws ConfigError if a part is wider than 64 bits, DataFormatError on a
  /// dimension mismatch.
  static HammingIndex build(std::span<const BinaryVector> data, PartLayout layout,
                            BuildOptions options = {});

  /// Integer-reduction thresholds from allocate_thresholds().
  QueryResult query(const BinaryVector& q, std::int64_t tau, std::size_t chain_length) const;

  /// Explicit thresholds. Fixed quotas use n as given (normally tau); Variable
  /// and IntegerReduction must hold one entry per part. Direction must be AtMost.
  QueryResult query(const BinaryVector& q, std::int64_t tau, std::size_t chain_length,
                    const ring::ThresholdSpec& spec) const;

  /// Objects whose part `part` equals `key` (after any permutation), ascending.
  std::span<const std::uint32_t> postings(std::size_t part, std::uint64_t key) const;

  std::size_t size() const noexcept { return count_; }
  std::size_t dim() const noexcept { return layout_.dim(); }
  const PartLayout& layout() const noexcept { return layout_; }

 private:
  std::vector<std::uint64_t> encode(const BinaryVector& v) const;

  PartLayout layout_;
  std::vector<std::size_t> permutation_;  // empty means identity
  std::size_t count_ = 0;
  std::vector<std::uint64_t> parts_;  // count_ x m, row-major
  std::vector<std::unordered_map<std::uint64_t, std::vector<std::uint32_t>>> maps_;
};

}  // namespace pigeonring::hamming
