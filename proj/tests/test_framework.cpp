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

#include <cmath>

#include "oracles.hpp"
#include "pigeonring/framework.hpp"
#include "pigeonring/hamming.hpp"
#include "pigeonring/setsim.hpp"
#include "pigeonring/strsim.hpp"

using namespace pigeonring;
using namespace pigeonring::framework;
using hamming::BinaryVector;

namespace {

FilterInstance<BinaryVector> hamming_instance(std::size_t dim, std::size_t m) {
  const auto layout = hamming::partition_dims(dim, m);
  FilterInstance<BinaryVector> inst;
  inst.featurize = [](const BinaryVector& v) { return v; };
  inst.box_eval = [layout](const BinaryVector& x, const BinaryVector& q, std::size_t i, std::size_t,
                           double) { return static_cast<double>(hamming::part_distance(x, q, layout, i)); };
  inst.box_count = [m](const BinaryVector&, double) { return m; };
  inst.bound = [](double tau) { return tau; };
  return inst;
}

ToyUniverse<BinaryVector> all_vectors(std::size_t dim) {
  ToyUniverse<BinaryVector> u;
  for (std::uint32_t v = 0; v < (1u << dim); ++v) {
    BinaryVector b(dim);
    for (std::size_t d = 0; d < dim; ++d) b.set(d, (v >> (dim - 1 - d)) & 1u);
    u.objects.push_back(b);
  }
  u.f = [](const BinaryVector& x, const BinaryVector& q) {
    return static_cast<double>(hamming::hamming_distance(x, q));
  };
  return u;
}

}  // namespace

TEST_SUITE("framework") {

TEST_CASE("Hamming instance on the golden example") {
  const auto inst = hamming_instance(10, 5);
  const auto data = oracle::golden_hamming_data();
  const auto q = oracle::golden_hamming_query();
  const auto b = evaluate_boxes(inst, data[0], q, 5);
  CHECK(std::vector<double>(b.values().begin(), b.values().end()) == std::vector<double>{2, 1, 2, 2, 1});
  CHECK(evaluate_boxes(inst, q, q, 5).sum() == 0);
  CHECK(is_candidate(inst, data[1], q, 5, 2));
  CHECK(is_candidate(inst, data[2], q, 5, 2));
  CHECK_FALSE(is_candidate(inst, data[0], q, 5, 2));
  CHECK_FALSE(is_candidate(inst, data[3], q, 5, 2));
  // f(x^2, q) = 5 = tau.
  CHECK(is_candidate(inst, data[1], q, 5, 1));
  CHECK_THROWS_AS(is_candidate(inst, data[1], q, 5, 6), ConfigError);
}

TEST_CASE("Hamming instance is complete and tight on all 4-bit vectors") {
  const auto inst = hamming_instance(4, 2);
  const auto u = all_vectors(4);
  CHECK(check_completeness(inst, u, 2).empty());
  CHECK(check_tightness(inst, u, 2).empty());
  for (double tau = 0; tau <= 4; ++tau)
    for (const auto& x : u.objects)
      for (const auto& qv : u.objects) {
        const bool result = u.f(x, qv) <= tau;
        bool prev = true;
        for (std::size_t l = 1; l <= 2; ++l) {
          const bool c = is_candidate(inst, x, qv, tau, l);
          if (result) CHECK(c);
          CHECK((prev || !c));
          prev = c;
        }
        CHECK(is_candidate(inst, x, qv, tau, 2) == result);
      }
}

TEST_CASE("a box sum above D(f) breaks completeness") {
  auto inst = hamming_instance(3, 1);
  inst.box_eval = [](const BinaryVector& x, const BinaryVector& q, std::size_t, std::size_t, double) {
    return static_cast<double>(hamming::hamming_distance(x, q)) + 1;
  };
  const auto v = check_completeness(inst, all_vectors(3), 1);
  REQUIRE_FALSE(v.empty());
  CHECK(v.front().condition == 1);
}

TEST_CASE("trivial instance m = 1, b_0 = -1, D = 0 is complete") {
  FilterInstance<BinaryVector> inst;
  inst.featurize = [](const BinaryVector& v) { return v; };
  inst.box_eval = [](const BinaryVector&, const BinaryVector&, std::size_t, std::size_t, double) { return -1.0; };
  inst.box_count = [](const BinaryVector&, double) { return std::size_t{1}; };
  inst.bound = [](double) { return 0.0; };
  CHECK(check_completeness(inst, all_vectors(3), 1).empty());
  CHECK_FALSE(check_tightness(inst, all_vectors(3), 1).empty());
}

TEST_CASE("an edit distance instance with lower-bounding boxes is not tight") {
  FilterInstance<std::string> inst;
  inst.featurize = [](const std::string& s) { return s; };
  inst.box_eval = [](const std::string& x, const std::string& q, std::size_t, std::size_t, double) {
    const auto len = x.size() > q.size() ? x.size() - q.size() : q.size() - x.size();
    const auto h = strsim::signature_distance(strsim::Signature::of(x), strsim::Signature::of(q));
    return static_cast<double>(std::max<std::size_t>(len, static_cast<std::size_t>(h + 1) / 2));
  };
  inst.box_count = [](const std::string&, double) { return std::size_t{1}; };
  inst.bound = [](double tau) { return tau; };
  ToyUniverse<std::string> u;
  u.objects = {"", "a", "b", "ab", "ba", "aa", "bb", "aba", "bab", "abb"};
  u.f = [](const std::string& x, const std::string& q) {
    return static_cast<double>(strsim::edit_distance(x, q));
  };
  CHECK(check_completeness(inst, u, 1).empty());
  CHECK_FALSE(check_tightness(inst, u, 1).empty());
}

TEST_CASE("a constant selection function is vacuously tight") {
  const auto inst = hamming_instance(3, 1);
  ToyUniverse<BinaryVector> u;
  u.objects = {BinaryVector::parse("101"), BinaryVector::parse("101")};
  u.f = [](const BinaryVector&, const BinaryVector&) { return 0.0; };
  CHECK(check_tightness(inst, u, 0).empty());
}

TEST_CASE("set similarity instance on the worked pair") {
  using namespace pigeonring::setsim;
  std::vector<std::string> order;
  for (char c = 'A'; c <= 'P'; ++c) order.emplace_back(1, c);
  const auto dict = TokenDictionary::from_order(order);
  const auto classes = ClassMap::from_boundaries(16, {0, 2, 4, 6});
  auto enc = [&](std::string_view s) {
    std::vector<std::int64_t> v;
    for (char c : s) v.push_back(*dict.id(std::string(1, c)));
    return v;
  };
  FilterInstance<std::string, RecordView> inst;
  inst.direction = ring::Direction::kAtLeast;
  inst.featurize = [&](const std::string& s) { return compute_prefix(enc(s), 9, classes); };
  inst.box_eval = [&](const RecordView& x, const RecordView& q, std::size_t i, std::size_t, double) {
    return pair_boxes(x, q, classes)[i];
  };
  inst.box_count = [](const std::string&, double) { return std::size_t{5}; };
  inst.bound = [](double tau) { return tau; };
  inst.threshold_builder = [&](const std::string& q, double, std::size_t m) {
    return query_thresholds(compute_prefix(enc(q), 9, classes), m);
  };
  const std::string x = "ACDEGHIJKLMN", q = "BCDFGHILMNOP";
  const auto b = evaluate_boxes(inst, x, q, 9);
  CHECK(b[2] == 2);
  CHECK(b.sum() == 8);
  CHECK(is_candidate(inst, x, q, 9, 1));
  CHECK_FALSE(is_candidate(inst, x, q, 9, 2));
}

}  // TEST_SUITE
