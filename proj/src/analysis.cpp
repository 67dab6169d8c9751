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

#include "pigeonring/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>

#include "pigeonring/ring.hpp"

namespace pigeonring::analysis {

DiscretePdf<double> parse_pdf(std::string_view text) {
  constexpr std::string_view kUniform = "uniform:";
  DiscretePdf<double> p;
  if (text.starts_with(kUniform)) {
    const auto digits = text.substr(kUniform.size());
    std::size_t omega = 0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), omega);
    if (ec != std::errc{} || end != digits.data() + digits.size() || omega > 1'000'000)
      throw ConfigError("bad pmf: " + std::string(text));
    p = DiscretePdf<double>::uniform(omega);
  } else {
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto comma = std::min(text.find(',', start), text.size());
      const std::string item(text.substr(start, comma - start));
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(item, &used);
      } catch (const std::exception&) {
        used = std::string::npos;
      }
      if (item.empty() || used != item.size()) throw ConfigError("bad pmf entry: " + item);
      p.mass.push_back(v);
      start = comma + 1;
    }
  }
  p.validate();
  return p;
}

MonteCarloEstimate monte_carlo(const DiscretePdf<double>& p, const AnalysisParams& params,
                               std::uint64_t samples, std::uint64_t seed, std::size_t partitions) {
  p.validate();
  params.validate();
  if (samples == 0) throw ConfigError("need at least one sample");
  if (partitions == 0) partitions = 1;
  std::vector<double> cdf(p.mass.size());
  std::partial_sum(p.mass.begin(), p.mass.end(), cdf.begin());
  cdf.back() = 1.0;
  const auto spec = ring::ThresholdSpec::fixed_quota(static_cast<double>(params.tau));

  std::uint64_t cand = 0, res = 0;
  std::vector<double> boxes(params.m);
  for (std::size_t part = 0; part < partitions; ++part) {
    std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(part)};
    std::mt19937_64 rng(sq);
    const std::uint64_t quota = samples / partitions + (part < samples % partitions ? 1 : 0);
    for (std::uint64_t s = 0; s < quota; ++s) {
      std::int64_t sum = 0;
      for (auto& b : boxes) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const auto v = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        b = static_cast<double>(std::min(v, p.omega()));
        sum += static_cast<std::int64_t>(b);
      }
      const ring::BoxSequence seq(boxes);
      if (!ring::find_prefix_viable_starts(seq, spec, params.l).empty()) ++cand;
      if (sum <= params.tau) ++res;
    }
  }
  MonteCarloEstimate e;
  e.samples = samples;
  const auto n = static_cast<double>(samples);
  e.cand = static_cast<double>(cand) / n;
  e.res = static_cast<double>(res) / n;
  e.cand_se = std::sqrt(e.cand * (1 - e.cand) / n);
  e.res_se = std::sqrt(e.res * (1 - e.res) / n);
  return e;
}

}  // namespace pigeonring::analysis
