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

// Set similarity search under Jaccard similarity.
//
// A Jaccard threshold is turned into an overlap threshold per pair. Tokens
// follow a global order (increasing frequency) and the universe is split into
// m-1 classes. Each record keeps a prefix long enough that any pair reaching
// the overlap threshold shares at least k prefix tokens of some class k. The
// m boxes are the suffix box b_0 followed by the per-class prefix overlaps
// b_1..b_{m-1}; thresholds come from the query's prefix and sum to tau+m-1,
// so chains are checked with integer reduction in the AtLeast direction.

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

namespace pigeonring::setsim {

/// Exact non-negative rational, used for Jaccard thresholds.
struct Ratio {
  std::int64_t num = 1;
  std::int64_t den = 1;

  /// Accepts "a/b" or a decimal such as "0.75".
  static Ratio parse(std::string_view text);
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
};

/// ceil((|x| + |q|) * tj / (1 + tj)): Jaccard >= tj  <=>  overlap >= this.
std::int64_t overlap_threshold(std::size_t x_size, std::size_t q_size, Ratio jaccard);

/// Whether J(x, q) = overlap / (|x| + |q| - overlap) >= tj. Empty sets never match.
bool jaccard_at_least(std::size_t overlap, std::size_t x_size, std::size_t q_size, Ratio jaccard);

/// Token -> dense ID in global order (increasing document frequency, ties by
/// first appearance).
class TokenDictionary {
 public:
  static TokenDictionary build(const std::vector<std::vector<std::string>>& records);
  /// IDs follow the given order exactly.
  static TokenDictionary from_order(std::vector<std::string> tokens);

  std::optional<std::uint32_t> id(std::string_view token) const;
  std::size_t size() const noexcept { return tokens_.size(); }
  const std::string& token(std::uint32_t id) const { return tokens_.at(id); }
  std::uint64_t frequency(std::uint32_t id) const { return frequency_.at(id); }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> frequency_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

/// Token ID -> class in [1..classes]. Tokens unknown to the dictionary
/// (negative IDs) belong to class 1.
class ClassMap {
 public:
  /// Contiguous ranges of the global order with roughly equal occurrence mass.
  static ClassMap balanced(const TokenDictionary& dict, std::size_t classes);
  /// first_ids[k] is the first token ID of class k+1; first_ids[0] must be 0.
  static ClassMap from_boundaries(std::size_t universe, std::vector<std::uint32_t> first_ids);

  std::size_t classes() const noexcept { return classes_; }
  std::size_t class_of(std::int64_t id) const noexcept {
    return id < 0 ? 1 : class_of_[static_cast<std::size_t>(id)];
  }

 private:
  std::size_t classes_ = 0;
  std::vector<std::uint16_t> class_of_;
};

/// A record's token IDs (ascending; unknown tokens negative) and its prefix for
/// one overlap threshold.
struct RecordView {
  std::vector<std::int64_t> tokens;
  std::int64_t overlap = 0;
  std::size_t prefix_length = 0;
  /// class_counts[k] = cnt(x, p_x, k) for k in [1..classes]; index 0 unused.
  std::vector<std::size_t> class_counts;
  /// False when no prefix satisfies the defining equation (including overlap > |x|).
  bool reachable = false;

  std::size_t size() const noexcept { return tokens.size(); }
  /// ID of the last prefix token; only meaningful when prefix_length > 0.
  std::int64_t last_prefix_token() const { return tokens[prefix_length - 1]; }
};

/// Smallest p with sum_k max(0, cnt(x, p, k) - k + 1) = |x| - overlap + 1.
/// Throws ConfigError for overlap <= 0.
RecordView compute_prefix(std::vector<std::int64_t> tokens, std::int64_t overlap,
                          const ClassMap& classes);

/// t_0 = |q| - p_q + 1; t_i = i if cnt(q, p_q, i) >= i else cnt(q, p_q, i) + 1.
/// Integer reduction, AtLeast. Throws std::logic_error unless sum(T) = overlap + m - 1.
ring::ThresholdSpec query_thresholds(const RecordView& q, std::size_t parts);

/// All m boxes of a pair, with b_0 taken as the remainder so the boxes sum to
/// the overlap exactly.
std::vector<double> pair_boxes(const RecordView& x, const RecordView& q, const ClassMap& classes);

/// Upper bound on b_0 that needs no suffix intersection.
std::int64_t suffix_box_bound(const RecordView& x, const RecordView& q,
                              std::span<const std::int64_t> class_boxes);

struct ChainOutcome {
  bool viable_box = false;  ///< some class box meets its threshold (the l = 1 filter)
  bool candidate = false;
  std::size_t viable_boxes = 0;
  std::size_t box_checks = 0;
};

/// Ring filter over class boxes b_1..b_{m-1} (class_boxes[0] is ignored). A
/// chain from a class box that reaches b_0 makes the pair a candidate without
/// evaluating b_0; the chain starting at b_0 uses `suffix_bound` in its place.
ChainOutcome ring_filter(std::span<const std::int64_t> class_boxes, std::int64_t suffix_bound,
                         const ring::ThresholdSpec& thresholds, std::size_t chain_length);

struct IndexOptions {
  std::size_t parts = 4;  ///< m: one suffix box plus m-1 classes
  /// Lowest Jaccard threshold the index will be queried with.
  Ratio jaccard{1, 2};
  /// Index every record's prefix for this overlap instead of ceil(tj * |x|).
  std::optional<std::int64_t> fixed_overlap;
};

class SetIndex {
 public:
  using Record = std::vector<std::string>;

  static SetIndex build(const std::vector<Record>& records, IndexOptions options = {});
  static SetIndex build(const std::vector<Record>& records, TokenDictionary dict,
                        ClassMap classes, IndexOptions options = {});

  /// Exact answer to {x : J(x, q) >= jaccard}; jaccard must be >= the index's.
  QueryResult query(const Record& q, Ratio jaccard, std::size_t chain_length) const;

  /// Tokens of a record as sorted IDs. Duplicates are dropped; unknown tokens
  /// get distinct negative IDs.
  std::vector<std::int64_t> encode(const Record& record) const;

  std::size_t size() const noexcept { return objects_.size(); }
  std::size_t parts() const noexcept { return options_.parts; }
  const TokenDictionary& dictionary() const noexcept { return dict_; }
  const ClassMap& classes() const noexcept { return classes_; }
  const RecordView& view(std::uint32_t id) const { return objects_.at(id).view; }

 private:
  struct Object {
    RecordView view;
    /// Indexed prefix cannot be trusted; always verify.
    bool forced = false;
  };
  struct Posting {
    std::uint32_t object;
    std::uint32_t rank;
  };

  IndexOptions options_;
  TokenDictionary dict_;
  ClassMap classes_;
  std::vector<Object> objects_;
  std::vector<std::vector<Posting>> postings_;  // by token ID
  std::vector<std::uint32_t> by_size_;          // object IDs ordered by set size
  std::vector<std::uint32_t> forced_;
};

}  // namespace pigeonring::setsim
