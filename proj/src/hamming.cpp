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

#include "pigeonring/hamming.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "pigeonring/errors.hpp"

namespace pigeonring::hamming {

namespace {

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::uint64_t elapsed_ns(std::chrono::steady_clock::time_point since) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - since)
          .count());
}

// Sum of C(width, r) for r in [0, radius], saturating at `cap`.
std::uint64_t ball_size(std::size_t width, std::int64_t radius, std::uint64_t cap) {
  if (radius < 0) return 0;
  std::uint64_t total = 0;
  std::uint64_t binom = 1;  // C(width, r)
  for (std::int64_t r = 0; r <= radius && r <= static_cast<std::int64_t>(width); ++r) {
    total += binom;
    if (total >= cap) return cap;
    const auto ru = static_cast<std::uint64_t>(r);
    // C(w, r+1) = C(w, r) * (w - r) / (r + 1); saturate before overflow.
    if (binom > cap) return cap;
    binom = binom * (width - ru) / (ru + 1);
  }
  return total;
}

// Visits every value within Hamming distance `radius` of `center` over `width`
// bits, by increasing number of flipped bits.
template <typename Fn>
void for_each_in_ball(std::uint64_t center, std::size_t width, std::int64_t radius, Fn&& fn) {
  const std::int64_t max_flips = std::min<std::int64_t>(radius, static_cast<std::int64_t>(width));
  const std::uint64_t limit = width == 64 ? 0 : (std::uint64_t{1} << width);
  for (std::int64_t r = 0; r <= max_flips; ++r) {
    if (r == 0) {
      fn(center);
      continue;
    }
    // Gosper's hack over width-bit masks with r bits set.
    std::uint64_t mask = (r == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << r) - 1);
    while (true) {
      fn(center ^ mask);
      const std::uint64_t c = mask & (~mask + 1);
      const std::uint64_t hi = mask + c;
      if (hi == 0) break;  // ran off the top of a 64-bit word
      mask = (((hi ^ mask) >> 2) / c) | hi;
      if (limit != 0 && mask >= limit) break;
    }
  }
}

// Largest box value that is still viable on its own for part i.
std::int64_t first_step_radius(const ring::ThresholdSpec& spec, std::size_t i, std::size_t m) {
  switch (spec.mode()) {
    case ring::ThresholdSpec::Mode::kFixedQuota: {
      // b * m <= n  <=>  b <= floor(n / m)
      const double n = spec.n();
      if (n < 0) return -1;
      return static_cast<std::int64_t>(std::floor(n / static_cast<double>(m)));
    }
    case ring::ThresholdSpec::Mode::kVariable:
    {
      const double t = spec.variable_thresholds()[i];
      return static_cast<std::int64_t>(
          std::floor(t + ring::kVariableTolerance * std::max(1.0, std::abs(t))));
    }
    case ring::ThresholdSpec::Mode::kIntegerReduction:
      return spec.integer_thresholds()[i];
  }
  return -1;
}

}  // namespace

BinaryVector BinaryVector::parse(std::string_view text) {
  while (!text.empty() && (text.back() == '\r' || text.back() == ' ' || text.back() == '\t'))
    text.remove_suffix(1);
  if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    const std::string_view digits = text.substr(2);
    if (digits.empty()) throw DataFormatError("empty hex vector");
    BinaryVector v(digits.size() * 4);
    for (std::size_t k = 0; k < digits.size(); ++k) {
      const int h = hex_digit(digits[k]);
      if (h < 0) throw DataFormatError(std::string("invalid hex digit '") + digits[k] + "'");
      for (int b = 0; b < 4; ++b) v.set(k * 4 + b, (h >> (3 - b)) & 1);
    }
    return v;
  }
  if (text.empty()) throw DataFormatError("empty vector");
  BinaryVector v(text.size());
  for (std::size_t d = 0; d < text.size(); ++d) {
    if (text[d] != '0' && text[d] != '1')
      throw DataFormatError(std::string("invalid bit character '") + text[d] + "'");
    v.set(d, text[d] == '1');
  }
  return v;
}

std::string BinaryVector::to_string() const {
  std::string out(dim_, '0');
  for (std::size_t d = 0; d < dim_; ++d) out[d] = bit(d) ? '1' : '0';
  return out;
}

std::size_t hamming_distance(const BinaryVector& a, const BinaryVector& b) {
  if (a.dim() != b.dim()) throw DataFormatError("dimension mismatch");
  std::size_t total = 0;
  for (std::size_t w = 0; w < a.words().size(); ++w)
    total += static_cast<std::size_t>(std::popcount(a.words()[w] ^ b.words()[w]));
  return total;
}

PartLayout::PartLayout(std::size_t dim, std::vector<std::size_t> offsets)
    : dim_(dim), offsets_(std::move(offsets)) {
  if (offsets_.size() < 2 || offsets_.front() != 0 || offsets_.back() != dim_)
    throw ConfigError("part offsets must run from 0 to the dimension");
  for (std::size_t i = 1; i < offsets_.size(); ++i)
    if (offsets_[i] <= offsets_[i - 1]) throw ConfigError("parts must be non-empty");
}

PartLayout partition_dims(std::size_t dim, std::size_t parts) {
  if (parts == 0 || parts > dim)
    throw ConfigError("part count " + std::to_string(parts) + " outside [1.." +
                      std::to_string(dim) + "]");
  std::vector<std::size_t> offsets(parts + 1, 0);
  const std::size_t base = dim / parts;
  const std::size_t extra = dim % parts;
  for (std::size_t i = 0; i < parts; ++i) offsets[i + 1] = offsets[i] + base + (i < extra ? 1 : 0);
  return PartLayout(dim, std::move(offsets));
}

std::size_t default_parts(std::size_t dim) { return std::max<std::size_t>(1, dim / 16); }

ring::ThresholdSpec allocate_thresholds(std::int64_t tau, std::size_t parts) {
  if (parts == 0) throw ConfigError("part count must be positive");
  if (tau < 0) throw ConfigError("tau must be non-negative");
  const auto m = static_cast<std::int64_t>(parts);
  const std::int64_t total = tau - m + 1;
  // Floor division so negative totals still spread evenly.
  std::int64_t base = total / m;
  if (total % m != 0 && total < 0) --base;
  const std::int64_t extra = total - base * m;
  std::vector<std::int64_t> t(parts);
  for (std::int64_t i = 0; i < m; ++i) t[static_cast<std::size_t>(i)] = base + (i < extra ? 1 : 0);
  return ring::ThresholdSpec::integer_reduction(std::move(t), ring::Direction::kAtMost);
}

std::uint64_t part_value(const BinaryVector& v, const PartLayout& layout, std::size_t i) {
  std::uint64_t out = 0;
  const std::size_t begin = layout.begin(i);
  const std::size_t width = layout.width(i);
  for (std::size_t k = 0; k < width; ++k) out = (out << 1) | (v.bit(begin + k) ? 1u : 0u);
  return out;
}

int part_distance(const BinaryVector& x, const BinaryVector& q, const PartLayout& layout,
                  std::size_t i) {
  return std::popcount(part_value(x, layout, i) ^ part_value(q, layout, i));
}

HammingIndex HammingIndex::build(std::span<const BinaryVector> data, PartLayout layout,
                                 BuildOptions options) {
  const std::size_t m = layout.parts();
  if (m == 0) throw ConfigError("layout has no parts");
  for (std::size_t i = 0; i < m; ++i)
    if (layout.width(i) > 64) throw ConfigError("part wider than 64 bits");

  HammingIndex index;
  index.layout_ = std::move(layout);
  if (options.permutation_seed) {
    index.permutation_.resize(index.layout_.dim());
    std::iota(index.permutation_.begin(), index.permutation_.end(), std::size_t{0});
    std::mt19937_64 rng(*options.permutation_seed);
    std::shuffle(index.permutation_.begin(), index.permutation_.end(), rng);
  }
  index.count_ = data.size();
  index.parts_.reserve(data.size() * m);
  index.maps_.resize(m);
  for (std::size_t id = 0; id < data.size(); ++id) {
    if (data[id].dim() != index.layout_.dim())
      throw DataFormatError("object " + std::to_string(id) + " has dimension " +
                            std::to_string(data[id].dim()) + ", expected " +
                            std::to_string(index.layout_.dim()));
    const std::vector<std::uint64_t> parts = index.encode(data[id]);
    for (std::size_t i = 0; i < m; ++i) {
      index.parts_.push_back(parts[i]);
      index.maps_[i][parts[i]].push_back(static_cast<std::uint32_t>(id));
    }
  }
  return index;
}

std::vector<std::uint64_t> HammingIndex::encode(const BinaryVector& v) const {
  const std::size_t m = layout_.parts();
  std::vector<std::uint64_t> out(m);
  if (permutation_.empty()) {
    for (std::size_t i = 0; i < m; ++i) out[i] = part_value(v, layout_, i);
    return out;
  }
  BinaryVector shuffled(v.dim());
  for (std::size_t d = 0; d < v.dim(); ++d) shuffled.set(d, v.bit(permutation_[d]));
  for (std::size_t i = 0; i < m; ++i) out[i] = part_value(shuffled, layout_, i);
  return out;
}

std::span<const std::uint32_t> HammingIndex::postings(std::size_t part, std::uint64_t key) const {
  const auto& map = maps_.at(part);
  const auto it = map.find(key);
  if (it == map.end()) return {};
  return it->second;
}

QueryResult HammingIndex::query(const BinaryVector& q, std::int64_t tau,
                                std::size_t chain_length) const {
  return query(q, tau, chain_length, allocate_thresholds(tau, layout_.parts()));
}

QueryResult HammingIndex::query(const BinaryVector& q, std::int64_t tau, std::size_t chain_length,
                                const ring::ThresholdSpec& spec) const {
  const std::size_t m = layout_.parts();
  if (q.dim() != layout_.dim())
    throw DataFormatError("query has dimension " + std::to_string(q.dim()) + ", expected " +
                          std::to_string(layout_.dim()));
  if (tau < 0) throw ConfigError("tau must be non-negative");
  if (chain_length == 0 || chain_length > m)
    throw ConfigError("chain length must lie in [1.." + std::to_string(m) + "]");
  if (spec.direction() != ring::Direction::kAtMost)
    throw ConfigError("Hamming search needs AtMost thresholds");
  spec.validate(m);

  QueryResult result;
  QueryStats& stats = result.stats;
  const auto filter_start = std::chrono::steady_clock::now();
  const std::vector<std::uint64_t> qparts = encode(q);

  enum : std::uint8_t { kUnseen = 0, kSeen = 1, kCandidate = 2 };
  std::vector<std::uint8_t> state(count_, kUnseen);
  std::vector<std::uint32_t> skip_until(count_, 0);

  auto box = [&](std::uint32_t id) {
    const std::uint64_t* row = parts_.data() + static_cast<std::size_t>(id) * m;
    return [row, &qparts](std::size_t j) { return std::popcount(row[j] ^ qparts[j]); };
  };

  auto on_hit = [&](std::uint32_t id, std::size_t i) {
    ++stats.viable_boxes;
    if (state[id] == kUnseen) {
      state[id] = kSeen;
      ++stats.pigeonhole_candidates;
    }
    if (state[id] == kCandidate || i < skip_until[id]) return;
    const ring::PrefixCheck check = ring::check_prefix(spec, m, i, chain_length, box(id));
    // The first box is known viable from the probe; only extensions count toward C_C2.
    stats.box_checks += check.box_evals - 1;
    if (check.viable) {
      state[id] = kCandidate;
      result.candidates.push_back(id);
    } else {
      skip_until[id] = static_cast<std::uint32_t>(i + check.failed_length);
    }
  };

  for (std::size_t i = 0; i < m; ++i) {
    const std::int64_t radius = first_step_radius(spec, i, m);
    if (radius < 0) continue;
    const auto& map = maps_[i];
    const std::size_t width = layout_.width(i);
    const std::uint64_t enumerated = ball_size(width, radius, map.size() + 1);
    if (enumerated > map.size()) {
      // Ball bigger than the key set: test every key instead.
      for (const auto& [key, ids] : map) {
        ++stats.probes;
        if (std::popcount(key ^ qparts[i]) > radius) continue;
        stats.postings += ids.size();
        for (const std::uint32_t id : ids) on_hit(id, i);
      }
    } else {
      for_each_in_ball(qparts[i], width, radius, [&](std::uint64_t key) {
        ++stats.probes;
        const auto it = map.find(key);
        if (it == map.end()) return;
        stats.postings += it->second.size();
        for (const std::uint32_t id : it->second) on_hit(id, i);
      });
    }
  }
  std::sort(result.candidates.begin(), result.candidates.end());
  stats.candidates = result.candidates.size();
  stats.filter_ns = elapsed_ns(filter_start);

  const auto verify_start = std::chrono::steady_clock::now();
  for (const std::uint32_t id : result.candidates) {
    ++stats.verifications;
    const std::uint64_t* row = parts_.data() + static_cast<std::size_t>(id) * m;
    std::int64_t distance = 0;
    for (std::size_t j = 0; j < m && distance <= tau; ++j)
      distance += std::popcount(row[j] ^ qparts[j]);
    if (distance <= tau) result.ids.push_back(id);
  }
  stats.results = result.ids.size();
  stats.verify_ns = elapsed_ns(verify_start);
  return result;
}

}  // namespace pigeonring::hamming
