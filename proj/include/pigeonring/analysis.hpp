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

// Candidate probability of the ring filter for m i.i.d. integer boxes.
//
// Boxes take values 0..omega with a shared pmf, the bound is n = tau and a
// chain of length l' has quota l'*tau/m. Pr(CAND_l) comes from the word-set
// recurrences (M for target chains, N for chains without a candidate start);
// Pr(RES) is the probability that all m boxes sum to at most tau. Number is
// double or an exact rational type.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "pigeonring/errors.hpp"

namespace pigeonring::analysis {

template <typename Number>
struct DiscretePdf {
  std::vector<Number> mass;  ///< mass[v] = Pr(box = v), v in [0..omega]

  std::size_t omega() const noexcept { return mass.empty() ? 0 : mass.size() - 1; }

  static DiscretePdf uniform(std::size_t omega) {
    DiscretePdf p;
    p.mass.assign(omega + 1, Number(1) / Number(static_cast<long long>(omega + 1)));
    return p;
  }

  static DiscretePdf point(std::size_t value) {
    DiscretePdf p;
    p.mass.assign(value + 1, Number(0));
    p.mass[value] = Number(1);
    return p;
  }

  /// Throws ConfigError unless the masses are nonnegative and sum to 1
  /// (within 1e-12 for floating point, exactly otherwise).
  void validate() const {
    if (mass.empty()) throw ConfigError("pmf has no entries");
    Number sum(0);
    for (const auto& v : mass) {
      if (v < Number(0)) throw ConfigError("pmf has a negative entry");
      sum += v;
    }
    if constexpr (std::is_floating_point_v<Number>) {
      if (sum - 1 > 1e-12 || 1 - sum > 1e-12) throw ConfigError("pmf does not sum to 1");
    } else {
      if (sum != Number(1)) throw ConfigError("pmf does not sum to 1");
    }
  }
};

struct AnalysisParams {
  std::size_t m = 1;
  std::int64_t tau = 0;
  std::size_t l = 1;

  void validate() const {
    if (m == 0) throw ConfigError("m must be positive");
    if (l == 0 || l > m) throw ConfigError("l must lie in [1, m]");
  }
  /// s <= j*tau/m, by cross-multiplication.
  bool within(std::int64_t s, std::size_t j) const noexcept {
    return s * static_cast<std::int64_t>(m) <= static_cast<std::int64_t>(j) * tau;
  }
};

template <typename Number>
struct AnalysisReport {
  AnalysisParams params;
  std::vector<Number> word;  ///< word[i] = Pr(w^i), i in [1..l]; word[0] unused
  std::vector<Number> M;     ///< M[x], x in [0..m]
  std::vector<Number> N;     ///< N[x], x in [1..m]; N[0] unused
  Number cand{0};            ///< Pr(CAND_l) = 1 - N(m)
  Number res{0};             ///< Pr(RES)
};

/// f(j, s): probability that j boxes sum to s with every partial sum within
/// its quota. Indexed by s.
template <typename Number>
std::vector<Number> prefix_viable_mass(const DiscretePdf<Number>& p, const AnalysisParams& params,
                                       std::size_t j) {
  std::vector<Number> f{Number(1)};
  for (std::size_t step = 1; step <= j; ++step) {
    std::vector<Number> g(f.size() + p.omega(), Number(0));
    std::size_t top = 0;
    for (std::size_t s = 0; s < f.size(); ++s) {
      if (f[s] == Number(0)) continue;
      for (std::size_t v = 0; v < p.mass.size(); ++v) {
        const auto t = static_cast<std::int64_t>(s + v);
        if (!params.within(t, step)) break;
        g[s + v] += f[s] * p.mass[v];
        top = std::max(top, s + v);
      }
    }
    g.resize(top + 1);
    f = std::move(g);
  }
  return f;
}

/// Pr(w^i): the first i-1 boxes form a prefix-viable chain and the i boxes
/// together exceed the quota i*tau/m.
template <typename Number>
Number word_prob(const DiscretePdf<Number>& p, const AnalysisParams& params, std::size_t i) {
  if (i == 0) throw ConfigError("word length must be positive");
  const auto f = prefix_viable_mass(p, params, i - 1);
  Number total(0);
  for (std::size_t s = 0; s < f.size(); ++s) {
    if (f[s] == Number(0)) continue;
    Number tail(0);
    for (std::size_t v = 0; v < p.mass.size(); ++v)
      if (!params.within(static_cast<std::int64_t>(s + v), i)) tail += p.mass[v];
    total += f[s] * tail;
  }
  return total;
}

/// Pr(sum of m boxes <= tau).
template <typename Number>
Number result_prob(const DiscretePdf<Number>& p, const AnalysisParams& params) {
  if (params.tau < 0) return Number(0);
  const auto cap = static_cast<std::size_t>(params.tau);
  std::vector<Number> f{Number(1)};
  for (std::size_t step = 0; step < params.m; ++step) {
    std::vector<Number> g(std::min(f.size() + p.omega(), cap + 1), Number(0));
    for (std::size_t s = 0; s < f.size(); ++s)
      for (std::size_t v = 0; v < p.mass.size() && s + v <= cap; ++v) g[s + v] += f[s] * p.mass[v];
    f = std::move(g);
  }
  Number total(0);
  for (const auto& v : f) total += v;
  return total;
}

template <typename Number>
AnalysisReport<Number> analyze(const DiscretePdf<Number>& p, const AnalysisParams& params) {
  p.validate();
  params.validate();
  AnalysisReport<Number> r;
  r.params = params;
  const std::size_t m = params.m, l = params.l;
  r.word.assign(l + 1, Number(0));
  for (std::size_t i = 1; i <= l; ++i) r.word[i] = word_prob(p, params, i);
  r.M.assign(m + 1, Number(0));
  r.M[0] = Number(1);
  for (std::size_t x = 1; x <= m; ++x)
    for (std::size_t i = 1; i <= std::min(x, l); ++i) r.M[x] += r.M[x - i] * r.word[i];
  r.N.assign(m + 1, Number(0));
  for (std::size_t x = 1; x <= m; ++x) {
    r.N[x] = r.M[x];
    for (std::size_t i = 2; i <= std::min(x, l); ++i)
      r.N[x] += r.M[x - i] * Number(static_cast<long long>(i - 1)) * r.word[i];
  }
  r.cand = Number(1) - r.N[m];
  r.res = result_prob(p, params);
  return r;
}

template <typename Number>
Number candidate_prob(const DiscretePdf<Number>& p, const AnalysisParams& params) {
  return analyze(p, params).cand;
}

struct RatioPoint {
  std::size_t l = 0;
  double cand = 0;
  double res = 0;
  double ratio = 0;   ///< Pr(CAND_l) / Pr(RES)
  double excess = 0;  ///< (Pr(CAND_l) - Pr(RES)) / Pr(RES)
};

template <typename Number>
double to_double(const Number& v) {
  if constexpr (std::is_floating_point_v<Number>) {
    return static_cast<double>(v);
  } else {
    return v.template convert_to<double>();
  }
}

/// One point per l in [l_min, l_max]. Ratios are infinite when Pr(RES) = 0.
template <typename Number>
std::vector<RatioPoint> ratio_curve(const DiscretePdf<Number>& p, std::size_t m, std::int64_t tau,
                                    std::size_t l_min, std::size_t l_max) {
  std::vector<RatioPoint> out;
  for (std::size_t l = l_min; l <= l_max; ++l) {
    const auto r = analyze(p, AnalysisParams{m, tau, l});
    RatioPoint pt;
    pt.l = l;
    pt.cand = to_double(r.cand);
    pt.res = to_double(r.res);
    pt.ratio = to_double(r.cand) / pt.res;
    pt.excess = (to_double(r.cand) - pt.res) / pt.res;
    if (r.res != Number(0)) {
      const Number q = r.cand / r.res;
      pt.ratio = to_double(q);
      pt.excess = to_double(q - Number(1));
    }
    out.push_back(pt);
  }
  return out;
}

/// "uniform:omega" or comma-separated masses.
DiscretePdf<double> parse_pdf(std::string_view text);

struct MonteCarloEstimate {
  std::uint64_t samples = 0;
  double cand = 0;
  double res = 0;
  double cand_se = 0;
  double res_se = 0;
};

/// Samples rings of m i.i.d. boxes. Partition k draws from its own generator
/// seeded by (seed, k), so results depend only on (seed, partitions).
MonteCarloEstimate monte_carlo(const DiscretePdf<double>& p, const AnalysisParams& params,
                               std::uint64_t samples, std::uint64_t seed,
                               std::size_t partitions = 1);

}  // namespace pigeonring::analysis
