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

// Edit distance search with pivotal q-gram prefixes.
//
// Every string is split into positional grams of length kappa, sorted by a
// global order. The first kappa*tau+1 grams form the prefix, and tau+1
// position-disjoint prefix grams are the pivots; pivots in position order are
// the m = tau+1 boxes of the ring. A box is bounded below by comparing the
// pivot's symbol signature against the other string's kappa-windows near the
// pivot's position. Candidates need an exact pivot match (box 0) that starts
// a prefix-viable chain under a fixed quota of tau.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pigeonring/query_stats.hpp"

namespace pigeonring::strsim {

/// Full O(|a||b|) edit distance.
std::size_t edit_distance(std::string_view a, std::string_view b);

/// ed(a, b) <= tau, via a (2*tau+1)-wide band with early exit.
bool verify_edit_distance(std::string_view a, std::string_view b, std::size_t tau);

/// 128-bit set of hashed symbols.
struct Signature {
  std::array<std::uint64_t, 2> w{};

  static Signature of(std::string_view s) noexcept;
  void add(unsigned char c) noexcept;
  friend bool operator==(const Signature&, const Signature&) = default;
};

int signature_distance(const Signature& a, const Signature& b) noexcept;

/// Signatures of every kappa-window of s; empty when |s| < kappa.
std::vector<Signature> window_signatures(std::string_view s, std::size_t kappa);

/// Global gram order: increasing occurrence frequency over the data, then bytes.
/// Grams absent from the dictionary sort before all known grams.
class GramDictionary {
 public:
  static GramDictionary build(std::span<const std::string> data, std::size_t kappa);
  /// Ranks follow the given order exactly.
  static GramDictionary from_order(std::vector<std::string> grams, std::size_t kappa);

  std::size_t kappa() const noexcept { return kappa_; }
  std::size_t size() const noexcept { return grams_.size(); }
  std::optional<std::uint32_t> rank(std::string_view gram) const;
  const std::string& gram(std::uint32_t rank) const { return grams_.at(rank); }

 private:
  std::size_t kappa_ = 2;
  std::vector<std::string> grams_;
  std::unordered_map<std::string, std::uint32_t> ranks_;
};

struct PositionalGram {
  /// Rank in the global order; unknown grams get negative keys ordered by bytes.
  std::int64_t key = 0;
  std::uint32_t pos = 0;
};

/// All |s|-kappa+1 positional grams sorted by (key, position).
std::vector<PositionalGram> sorted_grams(std::string_view s, const GramDictionary& dict);

/// One string's view for one tau.
struct GramProfile {
  std::vector<PositionalGram> grams;  ///< sorted_grams(s)
  std::size_t prefix = 0;             ///< kappa*tau+1, or 0 for a short string
  std::size_t extended = 0;           ///< prefix plus later grams tied with its last key
  std::vector<PositionalGram> pivots; ///< tau+1 disjoint prefix grams, by position
  bool short_string = true;           ///< fewer than kappa*tau+1 grams: verify only

  std::int64_t last_key() const { return grams[prefix - 1].key; }
  std::span<const PositionalGram> prefix_grams() const { return {grams.data(), prefix}; }
  std::span<const PositionalGram> extended_grams() const { return {grams.data(), extended}; }
};

GramProfile make_profile(std::string_view s, std::size_t tau, const GramDictionary& dict);

/// Greedy in the given (global) order, skipping grams that overlap a chosen
/// one; falls back to earliest-end selection by position if greedy comes up
/// short. Returns exactly tau+1 grams sorted by position, or nothing when the
/// input has no tau+1 disjoint grams.
std::optional<std::vector<PositionalGram>> select_pivots(std::span<const PositionalGram> grams,
                                                         std::size_t kappa, std::size_t tau);

/// Lower bound on min ed(pivot, other[u..v]) over substrings an alignment
/// with at most tau edits can map the pivot to: 0 for an exact window match,
/// else max(1, ceil(H/2)) over kappa-windows starting in
/// [pos-tau, pos+tau]; kappa minus the range length when no window fits.
std::size_t box_lower_bound(std::string_view pivot, std::size_t pos, std::string_view other,
                            std::span<const Signature> other_windows, std::size_t tau);

/// Side whose pivots act as boxes for a pair: the data side unless its last
/// prefix key is larger than the query's.
enum class PivotSide { kData, kQuery };
PivotSide pivot_side(const GramProfile& x, const GramProfile& q);

struct PairEvaluation {
  PivotSide side = PivotSide::kData;
  std::vector<std::size_t> boxes;       ///< lower bound of every pivot box, by position
  std::vector<std::size_t> matched;     ///< pivots found exactly in the other's extended prefix
  bool pigeonhole = false;              ///< some pivot matched (the l = 1 filter)
  bool candidate = false;
};

/// The filter decision for one pair, computed without an index.
PairEvaluation evaluate_pair(std::string_view x, std::string_view q, std::size_t tau,
                             std::size_t chain_length, const GramDictionary& dict);

struct IndexOptions {
  std::size_t kappa = 2;
  std::size_t max_tau = 4;
};

class StringIndex {
 public:
  static StringIndex build(std::vector<std::string> data, IndexOptions options = {});

  /// Exact answer to {x : ed(x, q) <= tau}; tau <= max_tau, chain length in [1, tau+1].
  QueryResult query(std::string_view q, std::size_t tau, std::size_t chain_length) const;

  std::size_t size() const noexcept { return data_.size(); }
  const std::string& at(std::uint32_t id) const { return data_.at(id); }
  const GramDictionary& dictionary() const noexcept { return dict_; }
  const IndexOptions& options() const noexcept { return options_; }

 private:
  struct PivotPosting {
    std::uint32_t object;
    std::uint32_t pivot;
    std::uint32_t pos;
  };
  struct GramPosting {
    std::uint32_t object;
    std::uint32_t pos;
  };
  struct Bucket {
    std::vector<GramProfile> profiles;
    std::vector<std::vector<PivotPosting>> pivots;  // by gram rank
    std::vector<std::vector<GramPosting>> grams;    // extended prefixes, by gram rank
    std::vector<std::uint32_t> short_ids;
  };

  IndexOptions options_;
  std::vector<std::string> data_;
  GramDictionary dict_;
  std::vector<std::vector<Signature>> windows_;
  std::vector<Bucket> buckets_;  // by tau
  std::vector<std::uint32_t> by_length_;
};

}  // namespace pigeonring::strsim
