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

// Filtering instances <F, B, D> and exhaustive checks on small universes.
//
// An instance featurizes objects, evaluates m boxes for a (data, query) pair
// and bounds their sum by D(tau). It is complete when sum(B) within D(f) is a
// necessary condition for f(x, q) within tau, and tight when it is also
// sufficient. The checkers below verify both on every pair of a finite universe.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "pigeonring/errors.hpp"
#include "pigeonring/ring.hpp"

namespace pigeonring::framework {

template <typename Object, typename Features = Object>
struct FilterInstance {
  std::function<Features(const Object&)> featurize;
  /// Box i of m for (data features, query features) at threshold tau.
  std::function<double(const Features& x, const Features& q, std::size_t i, std::size_t m,
                       double tau)>
      box_eval;
  std::function<std::size_t(const Object& q, double tau)> box_count;
  std::function<double(double tau)> bound;
  ring::Direction direction = ring::Direction::kAtMost;
  /// Defaults to FixedQuota(bound(tau)) when empty.
  std::function<ring::ThresholdSpec(const Object& q, double tau, std::size_t m)> threshold_builder;
};

template <typename Object>
struct ToyUniverse {
  std::vector<Object> objects;
  std::function<double(const Object& x, const Object& q)> f;
};

struct Violation {
  int condition = 0;  ///< 1 or 2
  std::size_t x1 = 0, q1 = 0;
  std::size_t x2 = 0, q2 = 0;  ///< unused (equal to x1, q1) for condition 1
  std::string detail;
};

template <typename Object, typename Features>
ring::BoxSequence evaluate_boxes(const FilterInstance<Object, Features>& inst, const Object& x,
                                 const Object& q, double tau) {
  const std::size_t m = inst.box_count(q, tau);
  if (m == 0) throw ConfigError("instance produced no boxes");
  const Features fx = inst.featurize(x);
  const Features fq = inst.featurize(q);
  std::vector<double> b(m);
  for (std::size_t i = 0; i < m; ++i) b[i] = inst.box_eval(fx, fq, i, m, tau);
  return ring::BoxSequence(std::move(b));
}

template <typename Object, typename Features>
ring::ThresholdSpec instance_thresholds(const FilterInstance<Object, Features>& inst,
                                        const Object& q, double tau, std::size_t m) {
  if (inst.threshold_builder) return inst.threshold_builder(q, tau, m);
  return ring::ThresholdSpec::fixed_quota(inst.bound(tau), inst.direction);
}

template <typename Object, typename Features>
bool is_candidate(const FilterInstance<Object, Features>& inst, const Object& x, const Object& q,
                  double tau, std::size_t l) {
  const auto boxes = evaluate_boxes(inst, x, q, tau);
  if (l == 0 || l > boxes.size()) throw ConfigError("chain length must lie in [1, m]");
  const auto spec = instance_thresholds(inst, q, tau, boxes.size());
  return !ring::find_prefix_viable_starts(boxes, spec, l).empty();
}

namespace detail {

struct PairPoint {
  double f;    // oriented so that "better" is smaller
  double sum;  // oriented likewise
  double d;    // oriented D(f)
  std::size_t x, q;
};

template <typename Object, typename Features>
std::vector<PairPoint> pair_points(const FilterInstance<Object, Features>& inst,
                                   const ToyUniverse<Object>& u, double tau) {
  const double sign = inst.direction == ring::Direction::kAtMost ? 1.0 : -1.0;
  std::vector<PairPoint> pts;
  pts.reserve(u.objects.size() * u.objects.size());
  for (std::size_t qi = 0; qi < u.objects.size(); ++qi)
    for (std::size_t xi = 0; xi < u.objects.size(); ++xi) {
      const double f = u.f(u.objects[xi], u.objects[qi]);
      const double s = evaluate_boxes(inst, u.objects[xi], u.objects[qi], tau).sum();
      pts.push_back({sign * f, sign * s, sign * inst.bound(f), xi, qi});
    }
  std::stable_sort(pts.begin(), pts.end(),
                   [](const PairPoint& a, const PairPoint& b) { return a.f < b.f; });
  return pts;
}

}  // namespace detail

/// Empty iff sum(B(x, q)) is bounded by D(f(x, q)) for every pair (condition
/// 1) and no pair with smaller f has sum(B) beyond D of a larger f (condition
/// 2). `tau` is passed to box_count and box_eval.
template <typename Object, typename Features>
std::vector<Violation> check_completeness(const FilterInstance<Object, Features>& inst,
                                          const ToyUniverse<Object>& u, double tau,
                                          std::size_t max_reports = 16) {
  std::vector<Violation> out;
  const auto pts = detail::pair_points(inst, u, tau);
  for (const auto& p : pts)
    if (p.sum > p.d && out.size() < max_reports)
      out.push_back({1, p.x, p.q, p.x, p.q, "sum of boxes exceeds D(f)"});
  // Running max of sum(B) over strictly smaller f.
  bool have = false;
  std::size_t best = 0;
  for (std::size_t a = 0; a < pts.size();) {
    std::size_t e = a;
    while (e < pts.size() && pts[e].f == pts[a].f) ++e;
    if (have)
      for (std::size_t k = a; k < e && out.size() < max_reports; ++k)
        if (pts[best].sum > pts[k].d)
          out.push_back({2, pts[best].x, pts[best].q, pts[k].x, pts[k].q,
                         "smaller f with sum of boxes beyond D of a larger f"});
    for (std::size_t k = a; k < e; ++k)
      if (!have || pts[k].sum > pts[best].sum) best = k, have = true;
    a = e;
  }
  return out;
}

/// Empty iff no pair with smaller f has D(f) reaching the box sum of a pair
/// with larger f, i.e. the filter never lets a non-result through.
template <typename Object, typename Features>
std::vector<Violation> check_tightness(const FilterInstance<Object, Features>& inst,
                                       const ToyUniverse<Object>& u, double tau,
                                       std::size_t max_reports = 16) {
  std::vector<Violation> out;
  const auto pts = detail::pair_points(inst, u, tau);
  bool have = false;
  std::size_t best = 0;  // max D(f) over strictly smaller f
  for (std::size_t a = 0; a < pts.size();) {
    std::size_t e = a;
    while (e < pts.size() && pts[e].f == pts[a].f) ++e;
    if (have)
      for (std::size_t k = a; k < e && out.size() < max_reports; ++k)
        if (pts[best].d >= pts[k].sum)
          out.push_back({2, pts[best].x, pts[best].q, pts[k].x, pts[k].q,
                         "D of a smaller f reaches the box sum of a larger f"});
    for (std::size_t k = a; k < e; ++k)
      if (!have || pts[k].d > pts[best].d) best = k, have = true;
    a = e;
  }
  return out;
}

}  // namespace pigeonring::framework
