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

#include "pigeonring/ring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pigeonring::ring {

BoxSequence::BoxSequence(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ConfigError("box sequence must hold at least one box");
}

double BoxSequence::sum() const noexcept {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

BoxSequence BoxSequence::rotated(std::size_t k) const {
  std::vector<double> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)[i + k];
  return BoxSequence(std::move(out));
}

ThresholdSpec ThresholdSpec::fixed_quota(double n, Direction direction) {
  ThresholdSpec spec(Mode::kFixedQuota, direction);
  spec.n_ = n;
  return spec;
}

ThresholdSpec ThresholdSpec::variable(std::vector<double> t, Direction direction) {
  if (t.empty()) throw ConfigError("threshold vector must not be empty");
  ThresholdSpec spec(Mode::kVariable, direction);
  spec.n_ = std::accumulate(t.begin(), t.end(), 0.0);
  spec.t_real_ = std::move(t);
  return spec;
}

ThresholdSpec ThresholdSpec::integer_reduction(std::vector<std::int64_t> t, Direction direction) {
  if (t.empty()) throw ConfigError("threshold vector must not be empty");
  ThresholdSpec spec(Mode::kIntegerReduction, direction);
  const auto m = static_cast<std::int64_t>(t.size());
  const std::int64_t total = std::accumulate(t.begin(), t.end(), std::int64_t{0});
  spec.n_ = static_cast<double>(direction == Direction::kAtMost ? total + m - 1 : total - m + 1);
  spec.t_int_ = std::move(t);
  return spec;
}

double ThresholdSpec::box_threshold(std::size_t i, std::size_t m) const {
  switch (mode_) {
    case Mode::kFixedQuota:
      return n_ / static_cast<double>(m);
    case Mode::kVariable:
      return t_real_[wrap(i, t_real_.size())];
    case Mode::kIntegerReduction:
      return static_cast<double>(t_int_[wrap(i, t_int_.size())]);
  }
  return 0.0;
}

void ThresholdSpec::validate(std::size_t m) const {
  if (m == 0) throw ConfigError("box count must be positive");
  if (mode_ == Mode::kVariable && t_real_.size() != m)
    throw ConfigError("variable thresholds have " + std::to_string(t_real_.size()) +
                      " entries, expected " + std::to_string(m));
  if (mode_ == Mode::kIntegerReduction && t_int_.size() != m)
    throw ConfigError("integer thresholds have " + std::to_string(t_int_.size()) +
                      " entries, expected " + std::to_string(m));
}

bool ThresholdSpec::consistent_with_bound(double n, std::size_t m) const {
  switch (mode_) {
    case Mode::kFixedQuota:
      return true;
    case Mode::kVariable:
      return std::abs(std::accumulate(t_real_.begin(), t_real_.end(), 0.0) - n) <=
             kVariableTolerance * std::max(1.0, std::abs(n));
    case Mode::kIntegerReduction: {
      const double total =
          static_cast<double>(std::accumulate(t_int_.begin(), t_int_.end(), std::int64_t{0}));
      const double md = static_cast<double>(m);
      return direction_ == Direction::kAtMost ? total == n - md + 1 : total == n + md - 1;
    }
  }
  return false;
}

ThresholdSpec ThresholdSpec::rotated(std::size_t k) const {
  ThresholdSpec out = *this;
  if (!t_real_.empty())
    for (std::size_t i = 0; i < t_real_.size(); ++i)
      out.t_real_[i] = t_real_[wrap(i + k, t_real_.size())];
  if (!t_int_.empty())
    for (std::size_t i = 0; i < t_int_.size(); ++i)
      out.t_int_[i] = t_int_[wrap(i + k, t_int_.size())];
  return out;
}

namespace {

void check_length(std::size_t l, std::size_t m) {
  if (l == 0 || l > m)
    throw ConfigError("chain length " + std::to_string(l) + " outside [1.." + std::to_string(m) +
                      "]");
}

}  // namespace

double chain_sum(const BoxSequence& boxes, Chain c) {
  check_length(c.length, boxes.size());
  double total = 0.0;
  for (std::size_t k = 0; k < c.length; ++k) total += boxes[c.start + k];
  return total;
}

double chain_quota(const ThresholdSpec& spec, Chain c, std::size_t m) {
  check_length(c.length, m);
  spec.validate(m);
  const auto l = static_cast<double>(c.length);
  switch (spec.mode()) {
    case ThresholdSpec::Mode::kFixedQuota:
      return l * spec.n() / static_cast<double>(m);
    case ThresholdSpec::Mode::kVariable: {
      double q = 0.0;
      for (std::size_t k = 0; k < c.length; ++k) q += spec.box_threshold(c.start + k, m);
      return q;
    }
    case ThresholdSpec::Mode::kIntegerReduction: {
      double q = 0.0;
      for (std::size_t k = 0; k < c.length; ++k) q += spec.box_threshold(c.start + k, m);
      return spec.direction() == Direction::kAtMost ? q + l - 1 : q + 1 - l;
    }
  }
  return 0.0;
}

bool is_viable(const BoxSequence& boxes, const ThresholdSpec& spec, Chain c) {
  const std::size_t m = boxes.size();
  check_length(c.length, m);
  spec.validate(m);
  QuotaCursor cursor(spec, m);
  bool last = false;
  for (std::size_t k = 0; k < c.length; ++k) {
    const std::size_t j = wrap(c.start + k, m);
    last = cursor.extend(j, boxes[j]);
  }
  return last;
}

PrefixCheck is_prefix_viable(const BoxSequence& boxes, const ThresholdSpec& spec,
                             std::size_t start, std::size_t l) {
  const std::size_t m = boxes.size();
  check_length(l, m);
  spec.validate(m);
  return check_prefix(spec, m, wrap(start, m), l, [&](std::size_t j) { return boxes[j]; });
}

std::vector<std::size_t> find_prefix_viable_starts(const BoxSequence& boxes,
                                                   const ThresholdSpec& spec, std::size_t l) {
  const std::size_t m = boxes.size();
  check_length(l, m);
  spec.validate(m);
  std::vector<std::size_t> starts;
  std::size_t i = 0;
  while (i < m) {
    const PrefixCheck r = check_prefix(spec, m, i, l, [&](std::size_t j) { return boxes[j]; });
    if (r.viable) {
      starts.push_back(i);
      ++i;
    } else {
      // No chain starting inside [i, i + failed_length) is prefix-viable.
      i += r.failed_length;
    }
  }
  return starts;
}

bool pigeonhole_candidate(const BoxSequence& boxes, const ThresholdSpec& spec) {
  return !find_prefix_viable_starts(boxes, spec, 1).empty();
}

namespace {

// Walks chain (start, l) in prefix or suffix order and requires every partial
// chain to be viable (want_viable) or non-viable (!want_viable).
bool all_partials(const BoxSequence& boxes, const ThresholdSpec& spec, std::size_t start,
                  std::size_t l, bool suffix_order, bool want_viable) {
  const std::size_t m = boxes.size();
  check_length(l, m);
  spec.validate(m);
  QuotaCursor cursor(spec, m);
  for (std::size_t k = 0; k < l; ++k) {
    const std::size_t j = suffix_order ? wrap(start + l - 1 - k, m) : wrap(start + k, m);
    if (cursor.extend(j, boxes[j]) != want_viable) return false;
  }
  return true;
}

}  // namespace

bool is_suffix_viable(const BoxSequence& boxes, const ThresholdSpec& spec, std::size_t start,
                      std::size_t l) {
  return all_partials(boxes, spec, start, l, true, true);
}

bool is_prefix_non_viable(const BoxSequence& boxes, const ThresholdSpec& spec, std::size_t start,
                          std::size_t l) {
  return all_partials(boxes, spec, start, l, false, false);
}

bool is_suffix_non_viable(const BoxSequence& boxes, const ThresholdSpec& spec, std::size_t start,
                          std::size_t l) {
  return all_partials(boxes, spec, start, l, true, false);
}

TheoremReport verify_theorems_exhaustive(std::size_t m, std::int64_t n, std::size_t omega) {
  if (m == 0) throw ConfigError("m must be positive");
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < m; ++i) {
    total *= omega + 1;
    if (total > kMaxExhaustiveSequences)
      throw ConfigError("exhaustive verification over (omega+1)^m sequences exceeds " +
                        std::to_string(kMaxExhaustiveSequences));
  }

  TheoremReport report;
  report.m = m;
  report.n = n;
  report.omega = omega;
  const ThresholdSpec spec = ThresholdSpec::fixed_quota(static_cast<double>(n));

  std::vector<int> digits(m, 0);
  std::vector<double> values(m, 0.0);
  // Longest run for which every partial chain is (non-)viable, per start/end.
  std::vector<std::size_t> pv(m), sv(m), pnv(m), snv(m);

  auto record = [&](const std::string& what) {
    ++report.violations;
    if (report.examples.size() < 8) report.examples.emplace_back(digits, what);
  };

  for (std::uint64_t seq = 0; seq < total; ++seq) {
    for (std::size_t i = 0; i < m; ++i) values[i] = digits[i];
    const BoxSequence boxes(values);
    const bool within = boxes.sum() <= static_cast<double>(n);
    report.within_bound += within ? 1 : 0;

    for (std::size_t i = 0; i < m; ++i) {
      QuotaCursor fwd(spec, m), bwd(spec, m), fwd_nv(spec, m), bwd_nv(spec, m);
      pv[i] = sv[i] = pnv[i] = snv[i] = 0;
      bool a = true, b = true, c = true, d = true;
      for (std::size_t k = 0; k < m; ++k) {
        const std::size_t jf = wrap(i + k, m);
        const std::size_t jb = wrap(i + m - k, m);  // walking backwards from i
        if (a && (a = fwd.extend(jf, boxes[jf]))) pv[i] = k + 1;
        if (b && (b = bwd.extend(jb, boxes[jb]))) sv[i] = k + 1;
        if (c && (c = !fwd_nv.extend(jf, boxes[jf]))) pnv[i] = k + 1;
        if (d && (d = !bwd_nv.extend(jb, boxes[jb]))) snv[i] = k + 1;
      }
    }

    for (std::size_t l = 1; l <= m; ++l) {
      if (within) {
        bool basic = false;
        for (std::size_t i = 0; i < m && !basic; ++i) basic = is_viable(boxes, spec, {i, l});
        const bool prefix = std::any_of(pv.begin(), pv.end(), [&](std::size_t r) { return r >= l; });
        const bool suffix = std::any_of(sv.begin(), sv.end(), [&](std::size_t r) { return r >= l; });
        report.checks += 3;
        if (!basic) record("basic form: no viable chain of length " + std::to_string(l));
        if (!prefix) record("strong form: no prefix-viable chain of length " + std::to_string(l));
        if (!suffix) record("strong form: no suffix-viable chain of length " + std::to_string(l));
      } else {
        const bool prefix =
            std::any_of(pnv.begin(), pnv.end(), [&](std::size_t r) { return r >= l; });
        const bool suffix =
            std::any_of(snv.begin(), snv.end(), [&](std::size_t r) { return r >= l; });
        report.checks += 2;
        if (!prefix) record("no prefix-non-viable chain of length " + std::to_string(l));
        if (!suffix) record("no suffix-non-viable chain of length " + std::to_string(l));
      }
    }

    // Odometer increment over [0..omega]^m.
    for (std::size_t i = 0; i < m; ++i) {
      if (static_cast<std::size_t>(++digits[i]) <= omega) break;
      digits[i] = 0;
    }
  }
  report.sequences = total;
  return report;
}

}  // namespace pigeonring::ring
