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

#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "pigeonring/hamming.hpp"

using namespace pigeonring;
using namespace pigeonring::hamming;
using ring::ThresholdSpec;

namespace {

using Ids = std::vector<std::uint32_t>;

HammingIndex golden_index() {
  const auto data = oracle::golden_hamming_data();
  return HammingIndex::build(data, partition_dims(10, 5));
}

std::vector<std::int64_t> ints(const ThresholdSpec& s) {
  return {s.integer_thresholds().begin(), s.integer_thresholds().end()};
}

}  // namespace

TEST_SUITE("hamming") {

TEST_CASE("vector parsing") {
  const auto v = BinaryVector::parse("0x9f");
  CHECK(v.dim() == 8);
  CHECK(v.to_string() == "10011111");
  CHECK(BinaryVector::parse("0101\r").to_string() == "0101");
  CHECK_THROWS_AS(BinaryVector::parse("01x1"), DataFormatError);
  CHECK_THROWS_AS(BinaryVector::parse("0xZZ"), DataFormatError);
  CHECK_THROWS_AS(BinaryVector::parse(""), DataFormatError);
  const auto wide = BinaryVector::parse(std::string(70, '1'));
  CHECK(hamming_distance(wide, BinaryVector(70)) == 70);
}

TEST_CASE("partitioning") {
  const auto a = partition_dims(10, 5);
  CHECK(a.parts() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(a.width(i) == 2);
  const auto b = partition_dims(256, 16);
  for (std::size_t i = 0; i < 16; ++i) CHECK(b.width(i) == 16);
  const auto c = partition_dims(7, 3);
  CHECK(c.width(0) == 3);
  CHECK(c.width(1) == 2);
  CHECK(c.width(2) == 2);
  CHECK(c.begin(2) == 5);
  CHECK_THROWS_AS(partition_dims(4, 5), ConfigError);
  CHECK_THROWS_AS(partition_dims(4, 0), ConfigError);
  CHECK(default_parts(256) == 16);
  CHECK(default_parts(10) == 1);
}

TEST_CASE("threshold allocation") {
  CHECK(ints(allocate_thresholds(5, 5)) == std::vector<std::int64_t>{1, 0, 0, 0, 0});
  CHECK(ints(allocate_thresholds(4, 5)) == std::vector<std::int64_t>{0, 0, 0, 0, 0});
  CHECK(ints(allocate_thresholds(8, 5)) == std::vector<std::int64_t>{1, 1, 1, 1, 0});
  for (std::int64_t tau = 0; tau < 20; ++tau)
    for (std::size_t m = 1; m < 9; ++m) {
      const auto t = ints(allocate_thresholds(tau, m));
      std::int64_t sum = 0;
      for (auto v : t) sum += v;
      CHECK(sum == tau - static_cast<std::int64_t>(m) + 1);
      CHECK(*std::max_element(t.begin(), t.end()) - *std::min_element(t.begin(), t.end()) <= 1);
      CHECK(std::is_sorted(t.rbegin(), t.rend()));
    }
  CHECK_THROWS_AS(allocate_thresholds(-1, 3), ConfigError);
}

TEST_CASE("part distances of the golden example") {
  const auto data = oracle::golden_hamming_data();
  const auto q = oracle::golden_hamming_query();
  const auto layout = partition_dims(10, 5);
  std::vector<int> b;
  for (std::size_t i = 0; i < 5; ++i) b.push_back(part_distance(data[0], q, layout, i));
  CHECK(b == std::vector<int>{2, 1, 2, 2, 1});
  CHECK(hamming_distance(data[0], q) == 8);
  CHECK(hamming_distance(data[1], q) == 5);
  CHECK(hamming_distance(data[2], q) == 7);
  for (std::size_t i = 0; i < 5; ++i) CHECK(part_distance(q, q, layout, i) == 0);
  BinaryVector comp(10);
  for (std::size_t d = 0; d < 10; ++d) comp.set(d, !q.bit(d));
  for (std::size_t i = 0; i < 5; ++i) CHECK(part_distance(comp, q, layout, i) == 2);
}

TEST_CASE("index construction") {
  const auto idx = golden_index();
  CHECK(idx.size() == 4);
  CHECK(std::vector<std::uint32_t>(idx.postings(0, 0b00).begin(), idx.postings(0, 0b00).end()) == Ids{1});
  CHECK(std::vector<std::uint32_t>(idx.postings(0, 0b01).begin(), idx.postings(0, 0b01).end()) == Ids{2});
  CHECK(std::vector<std::uint32_t>(idx.postings(0, 0b11).begin(), idx.postings(0, 0b11).end()) == Ids{0, 3});
  CHECK(idx.postings(0, 0b10).empty());
  const std::vector<BinaryVector> none;
  const auto empty = HammingIndex::build(none, partition_dims(8, 2));
  CHECK(empty.size() == 0);
  CHECK(empty.query(BinaryVector(8), 3, 2).ids.empty());
  const std::vector<BinaryVector> mixed{BinaryVector(8), BinaryVector(9)};
  CHECK_THROWS_AS(HammingIndex::build(mixed, partition_dims(8, 2)), DataFormatError);
  const std::vector<BinaryVector> wide{BinaryVector(130)};
  CHECK_THROWS_AS(HammingIndex::build(wide, partition_dims(130, 2)), ConfigError);
}

TEST_CASE("golden queries") {
  const auto idx = golden_index();
  const auto q = oracle::golden_hamming_query();

  const auto plain = idx.query(q, 5, 1, ThresholdSpec::variable({1, 1, 1, 1, 1}));
  CHECK(plain.candidates == Ids{0, 1, 2});
  CHECK(plain.ids == Ids{1});

  const auto ring2 = idx.query(q, 5, 2, ThresholdSpec::fixed_quota(5));
  CHECK(ring2.candidates == Ids{1, 2});
  CHECK(ring2.ids == Ids{1});
  CHECK(ring2.stats.pigeonhole_candidates == 3);
  CHECK(ring2.stats.candidates == 2);
  CHECK(ring2.stats.verifications == 2);

  const auto var = idx.query(q, 5, 2, ThresholdSpec::variable({1, 2, 0, 1, 1}));
  CHECK(std::find(var.candidates.begin(), var.candidates.end(), 0u) == var.candidates.end());
  CHECK(var.ids == Ids{1});

  const auto ired = idx.query(q, 5, 2, ThresholdSpec::integer_reduction({1, 0, 0, 0, 0}));
  CHECK(std::find(ired.candidates.begin(), ired.candidates.end(), 2u) == ired.candidates.end());
  CHECK(ired.ids == Ids{1});

  CHECK_THROWS_AS(idx.query(q, 5, 0), ConfigError);
  CHECK_THROWS_AS(idx.query(q, 5, 6), ConfigError);
  CHECK_THROWS_AS(idx.query(BinaryVector(12), 5, 1), DataFormatError);
  CHECK_THROWS_AS(idx.query(q, 5, 1, ThresholdSpec::variable({1, 1})), ConfigError);
}

TEST_CASE("exact duplicates at tau = 0") {
  std::vector<BinaryVector> data{BinaryVector::parse("10101010"), BinaryVector::parse("10101011"),
                                 BinaryVector::parse("10101010")};
  const auto idx = HammingIndex::build(data, partition_dims(8, 2));
  CHECK(idx.query(data[0], 0, 1).ids == Ids{0, 2});
  CHECK(idx.query(data[0], 0, 2).ids == Ids{0, 2});
  CHECK(idx.query(data[0], 1, 2).ids == Ids{0, 1, 2});
}

TEST_CASE("scan equivalence and candidate monotonicity on random data") {
  std::mt19937_64 rng(21);
  for (int inst = 0; inst < 12; ++inst) {
    const std::size_t dim = 8 + rng() % 57;
    const std::size_t n = 300 + rng() % 700;
    std::vector<BinaryVector> data;
    for (std::size_t i = 0; i < n; ++i)
      data.push_back(i > 0 && rng() % 2 ? oracle::flip_bits(data[rng() % i], rng, rng() % 6)
                                        : oracle::random_vector(rng, dim));
    const std::size_t m = 1 + rng() % std::min<std::size_t>(8, dim);
    BuildOptions opts;
    if (inst % 3 == 0) opts.permutation_seed = rng();
    const auto idx = HammingIndex::build(data, partition_dims(dim, m), opts);
    for (int qi = 0; qi < 6; ++qi) {
      const auto q = oracle::flip_bits(data[rng() % n], rng, rng() % 8);
      const auto tau = static_cast<std::int64_t>(rng() % (dim / 3 + 2));
      const auto truth = oracle::hamming_scan(data, q, tau);
      const auto specs = {allocate_thresholds(tau, m),
                          ThresholdSpec::fixed_quota(static_cast<double>(tau)),
                          ThresholdSpec::variable(std::vector<double>(m, static_cast<double>(tau) / m))};
      for (const auto& spec : specs) {
        std::uint64_t prev = n + 1;
        for (std::size_t l = 1; l <= m; ++l) {
          const auto r = idx.query(q, tau, l, spec);
          REQUIRE(r.ids == truth);
          CHECK(std::includes(r.candidates.begin(), r.candidates.end(), r.ids.begin(), r.ids.end()));
          CHECK(r.stats.candidates <= prev);
          CHECK(r.stats.candidates == r.stats.verifications);
          if (l == 1) CHECK(r.stats.candidates == r.stats.pigeonhole_candidates);
          if (l == m) CHECK(r.stats.candidates == r.stats.results);
          prev = r.stats.candidates;
        }
      }
    }
  }
}

TEST_CASE("sum of part distances equals the Hamming distance") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 200; ++i) {
    const std::size_t dim = 1 + rng() % 100;
    const auto a = oracle::random_vector(rng, dim), b = oracle::random_vector(rng, dim);
    const auto layout = partition_dims(dim, 1 + rng() % std::min<std::size_t>(dim, 10));
    if (layout.width(0) > 64) continue;
    std::size_t sum = 0;
    for (std::size_t p = 0; p < layout.parts(); ++p)
      sum += static_cast<std::size_t>(part_distance(a, b, layout, p));
    CHECK(sum == hamming_distance(a, b));
  }
}

}  // TEST_SUITE
