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

#include "pigeonring/setsim.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "pigeonring/errors.hpp"

namespace pigeonring::setsim {
namespace {

using i128 = __int128;

std::uint64_t elapsed_ns(std::chrono::steady_clock::time_point since) {
  return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(
                                        std::chrono::steady_clock::now() - since)
                                        .count());
}

std::int64_t parse_digits(std::string_view s, std::string_view whole) {
  if (s.empty() || s.size() > 12) throw ConfigError("bad ratio: " + std::string(whole));
  std::int64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw ConfigError("bad ratio: " + std::string(whole));
    v = v * 10 + (c - '0');
  }
  return v;
}

std::size_t overlap_count(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  std::size_t i = 0, j = 0, c = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++c, ++i, ++j;
    }
  }
  return c;
}

// Sorted merge that gives up once `need` is out of reach.
bool overlap_at_least(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                      std::size_t need) {
  std::size_t i = 0, j = 0, c = 0;
  while (i < a.size() && j < b.size()) {
    if (c + std::min(a.size() - i, b.size() - j) < need) return false;
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++c, ++i, ++j;
    }
  }
  return c >= need;
}

void check_ratio(Ratio r) {
  if (r.num <= 0 || r.den <= 0 || r.num > r.den)
    throw ConfigError("Jaccard threshold must lie in (0, 1]");
}

}  // namespace

Ratio Ratio::parse(std::string_view text) {
  Ratio r;
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    r.num = parse_digits(text.substr(0, slash), text);
    r.den = parse_digits(text.substr(slash + 1), text);
    if (r.den == 0) throw ConfigError("bad ratio: " + std::string(text));
  } else {
    const auto dot = text.find('.');
    const auto whole = text.substr(0, dot);
    std::int64_t frac = 0, scale = 1;
    if (dot != std::string_view::npos) {
      const auto digits = text.substr(dot + 1);
      frac = parse_digits(digits, text);
      for (std::size_t i = 0; i < digits.size(); ++i) scale *= 10;
    }
    const std::int64_t w = whole.empty() && dot != std::string_view::npos ? 0 : parse_digits(whole, text);
    r.num = w * scale + frac;
    r.den = scale;
  }
  const std::int64_t g = std::gcd(r.num, r.den);
  if (g > 1) r.num /= g, r.den /= g;
  return r;
}

std::int64_t overlap_threshold(std::size_t x_size, std::size_t q_size, Ratio jaccard) {
  const i128 top = static_cast<i128>(x_size + q_size) * jaccard.num;
  const i128 bot = jaccard.num + jaccard.den;
  return static_cast<std::int64_t>((top + bot - 1) / bot);
}

bool jaccard_at_least(std::size_t overlap, std::size_t x_size, std::size_t q_size,
                      Ratio jaccard) {
  if (x_size == 0 || q_size == 0) return false;
  const i128 uni = static_cast<i128>(x_size + q_size - overlap);
  return static_cast<i128>(overlap) * jaccard.den >= uni * jaccard.num;
}

TokenDictionary TokenDictionary::build(const std::vector<std::vector<std::string>>& records) {
  std::unordered_map<std::string, std::uint32_t> first;
  std::vector<std::string> seen;
  std::vector<std::uint64_t> df;
  for (const auto& rec : records) {
    std::unordered_set<std::string_view> in_record;
    for (const auto& tok : rec) {
      if (!in_record.insert(tok).second) continue;
      auto [it, fresh] = first.emplace(tok, static_cast<std::uint32_t>(seen.size()));
      if (fresh) {
        seen.push_back(tok);
        df.push_back(0);
      }
      ++df[it->second];
    }
  }
  std::vector<std::uint32_t> order(seen.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return df[a] < df[b]; });
  TokenDictionary d;
  d.tokens_.reserve(order.size());
  for (auto o : order) {
    d.ids_.emplace(seen[o], static_cast<std::uint32_t>(d.tokens_.size()));
    d.tokens_.push_back(std::move(seen[o]));
    d.frequency_.push_back(df[o]);
  }
  return d;
}

TokenDictionary TokenDictionary::from_order(std::vector<std::string> tokens) {
  TokenDictionary d;
  for (auto& t : tokens) {
    if (!d.ids_.emplace(t, static_cast<std::uint32_t>(d.tokens_.size())).second)
      throw ConfigError("duplicate token in order: " + t);
    d.tokens_.push_back(std::move(t));
    d.frequency_.push_back(1);
  }
  return d;
}

std::optional<std::uint32_t> TokenDictionary::id(std::string_view token) const {
  const auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

ClassMap ClassMap::balanced(const TokenDictionary& dict, std::size_t classes) {
  if (classes == 0) throw ConfigError("need at least one token class");
  ClassMap c;
  c.classes_ = classes;
  c.class_of_.resize(dict.size());
  long double mass = 0;
  for (std::uint32_t i = 0; i < dict.size(); ++i) mass += static_cast<long double>(dict.frequency(i));
  long double before = 0;
  for (std::uint32_t i = 0; i < dict.size(); ++i) {
    const auto k = mass > 0 ? static_cast<std::size_t>(before * classes / mass) : 0;
    c.class_of_[i] = static_cast<std::uint16_t>(std::min(classes, k + 1));
    before += static_cast<long double>(dict.frequency(i));
  }
  return c;
}

ClassMap ClassMap::from_boundaries(std::size_t universe, std::vector<std::uint32_t> first_ids) {
  if (first_ids.empty() || first_ids[0] != 0 ||
      !std::is_sorted(first_ids.begin(), first_ids.end()))
    throw ConfigError("class boundaries must start at 0 and be ascending");
  ClassMap c;
  c.classes_ = first_ids.size();
  c.class_of_.resize(universe);
  std::size_t k = 0;
  for (std::size_t i = 0; i < universe; ++i) {
    while (k + 1 < first_ids.size() && i >= first_ids[k + 1]) ++k;
    c.class_of_[i] = static_cast<std::uint16_t>(k + 1);
  }
  return c;
}

RecordView compute_prefix(std::vector<std::int64_t> tokens, std::int64_t overlap,
                          const ClassMap& classes) {
  if (overlap <= 0) throw ConfigError("overlap threshold must be positive");
  RecordView v;
  v.tokens = std::move(tokens);
  v.overlap = overlap;
  v.class_counts.assign(classes.classes() + 1, 0);
  const auto n = static_cast<std::int64_t>(v.tokens.size());
  if (overlap > n) {
    for (auto t : v.tokens) ++v.class_counts[classes.class_of(t)];
    v.prefix_length = v.tokens.size();
    return v;
  }
  const std::int64_t target = n - overlap + 1;
  std::int64_t sum = 0;
  for (std::size_t r = 0; r < v.tokens.size(); ++r) {
    const std::size_t k = classes.class_of(v.tokens[r]);
    if (++v.class_counts[k] >= k) ++sum;
    if (sum == target) {
      v.prefix_length = r + 1;
      v.reachable = true;
      return v;
    }
  }
  v.prefix_length = v.tokens.size();
  return v;
}

ring::ThresholdSpec query_thresholds(const RecordView& q, std::size_t parts) {
  if (parts < 2) throw ConfigError("set similarity needs m >= 2");
  if (q.class_counts.size() != parts) throw ConfigError("class count does not match m - 1");
  std::vector<std::int64_t> t(parts);
  t[0] = static_cast<std::int64_t>(q.size() - q.prefix_length) + 1;
  for (std::size_t i = 1; i < parts; ++i) {
    const auto c = static_cast<std::int64_t>(q.class_counts[i]);
    t[i] = c >= static_cast<std::int64_t>(i) ? static_cast<std::int64_t>(i) : c + 1;
  }
  const std::int64_t sum = std::accumulate(t.begin(), t.end(), std::int64_t{0});
  if (sum != q.overlap + static_cast<std::int64_t>(parts) - 1)
    throw std::logic_error("query thresholds do not sum to tau + m - 1");
  return ring::ThresholdSpec::integer_reduction(std::move(t), ring::Direction::kAtLeast);
}

namespace {

std::vector<std::int64_t> class_overlaps(const RecordView& x, const RecordView& q,
                                         const ClassMap& classes) {
  std::vector<std::int64_t> b(classes.classes() + 1, 0);
  std::size_t i = 0, j = 0;
  while (i < x.prefix_length && j < q.prefix_length) {
    if (x.tokens[i] < q.tokens[j]) {
      ++i;
    } else if (q.tokens[j] < x.tokens[i]) {
      ++j;
    } else {
      ++b[classes.class_of(x.tokens[i])];
      ++i, ++j;
    }
  }
  return b;
}

}  // namespace

std::vector<double> pair_boxes(const RecordView& x, const RecordView& q, const ClassMap& classes) {
  const auto b = class_overlaps(x, q, classes);
  std::vector<double> out(b.begin(), b.end());
  const auto prefix_total = std::accumulate(b.begin() + 1, b.end(), std::int64_t{0});
  out[0] = static_cast<double>(static_cast<std::int64_t>(overlap_count(x.tokens, q.tokens)) -
                               prefix_total);
  return out;
}

std::int64_t suffix_box_bound(const RecordView& x, const RecordView& q,
                              std::span<const std::int64_t> class_boxes) {
  const auto taken = std::accumulate(class_boxes.begin() + 1, class_boxes.end(), std::int64_t{0});
  const auto cap = static_cast<std::int64_t>(std::min(x.size(), q.size())) - taken;
  const bool x_side = x.prefix_length > 0 && q.prefix_length > 0 &&
                      x.last_prefix_token() <= q.last_prefix_token();
  const auto rest = x_side ? x.size() - x.prefix_length : q.size() - q.prefix_length;
  return std::min(cap, static_cast<std::int64_t>(rest));
}

ChainOutcome ring_filter(std::span<const std::int64_t> class_boxes, std::int64_t suffix_bound,
                         const ring::ThresholdSpec& thresholds, std::size_t chain_length) {
  const std::size_t m = class_boxes.size();
  const auto t = thresholds.integer_thresholds();
  ChainOutcome out;
  for (std::size_t k = 1; k < m; ++k)
    if (class_boxes[k] >= t[k]) ++out.viable_boxes;
  out.viable_box = out.viable_boxes > 0;
  if (!out.viable_box) return out;
  if (chain_length <= 1) {
    out.candidate = true;
    return out;
  }
  for (std::size_t i = 1; i < m;) {
    if (class_boxes[i] < t[i]) {
      ++i;
      continue;
    }
    ring::QuotaCursor cursor(thresholds, m);
    cursor.extend(i, static_cast<double>(class_boxes[i]));
    std::size_t k = 1;
    bool failed = false;
    for (; k < chain_length; ++k) {
      const std::size_t j = ring::wrap(i + k, m);
      if (j == 0) break;
      ++out.box_checks;
      if (!cursor.extend(j, static_cast<double>(class_boxes[j]))) {
        failed = true;
        break;
      }
    }
    if (!failed) {
      out.candidate = true;
      return out;
    }
    i += k + 1;
  }
  const auto from_zero = ring::check_prefix(thresholds, m, 0, chain_length, [&](std::size_t j) {
    return j == 0 ? suffix_bound : class_boxes[j];
  });
  out.box_checks += from_zero.box_evals;
  out.candidate = from_zero.viable;
  return out;
}

SetIndex SetIndex::build(const std::vector<Record>& records, IndexOptions options) {
  auto dict = TokenDictionary::build(records);
  if (options.parts < 2) throw ConfigError("set similarity needs m >= 2");
  auto classes = ClassMap::balanced(dict, options.parts - 1);
  return build(records, std::move(dict), std::move(classes), options);
}

SetIndex SetIndex::build(const std::vector<Record>& records, TokenDictionary dict,
                         ClassMap classes, IndexOptions options) {
  if (options.parts < 2) throw ConfigError("set similarity needs m >= 2");
  if (classes.classes() != options.parts - 1)
    throw ConfigError("class map must have m - 1 classes");
  check_ratio(options.jaccard);
  if (options.fixed_overlap && *options.fixed_overlap <= 0)
    throw ConfigError("overlap threshold must be positive");
  SetIndex idx;
  idx.options_ = options;
  idx.dict_ = std::move(dict);
  idx.classes_ = std::move(classes);
  idx.postings_.resize(idx.dict_.size());
  idx.objects_.reserve(records.size());
  for (std::uint32_t id = 0; id < records.size(); ++id) {
    auto tokens = idx.encode(records[id]);
    if (!tokens.empty() && tokens.front() < 0)
      throw ConfigError("record token missing from the dictionary");
    const auto n = static_cast<std::int64_t>(tokens.size());
    std::int64_t tau = 0;
    if (options.fixed_overlap) {
      tau = *options.fixed_overlap;
    } else {
      const i128 top = static_cast<i128>(n) * options.jaccard.num;
      tau = static_cast<std::int64_t>((top + options.jaccard.den - 1) / options.jaccard.den);
    }
    Object obj;
    if (n == 0) {
      obj.view.tokens.clear();
      obj.view.class_counts.assign(idx.classes_.classes() + 1, 0);
    } else {
      obj.view = compute_prefix(std::move(tokens), std::max<std::int64_t>(tau, 1), idx.classes_);
      obj.forced = !obj.view.reachable;
      if (obj.forced) idx.forced_.push_back(id);
      if (!obj.forced)
        for (std::uint32_t r = 0; r < obj.view.prefix_length; ++r)
          idx.postings_[static_cast<std::size_t>(obj.view.tokens[r])].push_back({id, r});
    }
    idx.objects_.push_back(std::move(obj));
  }
  idx.by_size_.resize(idx.objects_.size());
  std::iota(idx.by_size_.begin(), idx.by_size_.end(), 0u);
  std::stable_sort(idx.by_size_.begin(), idx.by_size_.end(), [&](std::uint32_t a, std::uint32_t b) {
    return idx.objects_[a].view.size() < idx.objects_[b].view.size();
  });
  return idx;
}

std::vector<std::int64_t> SetIndex::encode(const Record& record) const {
  std::vector<std::int64_t> out;
  out.reserve(record.size());
  std::unordered_map<std::string_view, std::int64_t> unknown;
  for (const auto& tok : record) {
    if (const auto id = dict_.id(tok)) {
      out.push_back(*id);
    } else {
      auto [it, fresh] = unknown.emplace(tok, -static_cast<std::int64_t>(unknown.size()) - 1);
      if (fresh) out.push_back(it->second);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

QueryResult SetIndex::query(const Record& q_record, Ratio jaccard, std::size_t chain_length) const {
  check_ratio(jaccard);
  const std::size_t m = options_.parts;
  if (chain_length == 0 || chain_length > m) throw ConfigError("chain length must lie in [1, m]");

  QueryResult res;
  auto& st = res.stats;
  const auto t0 = std::chrono::steady_clock::now();
  auto q_tokens = encode(q_record);
  const std::size_t nq = q_tokens.size();
  if (nq == 0) return res;

  const auto lo_i = (static_cast<i128>(nq) * jaccard.num + jaccard.den - 1) / jaccard.den;
  const auto hi_i = static_cast<i128>(nq) * jaccard.den / jaccard.num;
  const std::size_t lo = static_cast<std::size_t>(std::max<i128>(lo_i, 1));
  const std::size_t hi = static_cast<std::size_t>(std::min<i128>(hi_i, 1 << 30));
  auto tau_of = [&](std::size_t s) { return overlap_threshold(s, nq, jaccard); };
  auto feasible = [&](std::size_t s) {
    return tau_of(s) <= static_cast<std::int64_t>(std::min(s, nq));
  };

  struct QView {
    RecordView view;
    std::optional<ring::ThresholdSpec> spec;
  };
  std::map<std::int64_t, QView> views;
  auto view_for = [&](std::int64_t tau) -> const QView& {
    auto it = views.find(tau);
    if (it == views.end()) {
      QView v{compute_prefix(q_tokens, tau, classes_), std::nullopt};
      if (v.view.reachable) v.spec = query_thresholds(v.view, m);
      it = views.emplace(tau, std::move(v)).first;
    }
    return it->second;
  };

  auto size_less = [&](std::uint32_t id, std::size_t s) { return objects_[id].view.size() < s; };
  auto size_greater = [&](std::size_t s, std::uint32_t id) { return s < objects_[id].view.size(); };
  const auto size_begin = std::lower_bound(by_size_.begin(), by_size_.end(), lo, size_less);
  const auto size_end = std::upper_bound(size_begin, by_size_.end(), hi, size_greater);

  // Objects the prefix filter cannot speak for: unreachable prefixes on
  // either side, or an indexed prefix shorter than this query needs.
  std::vector<std::uint32_t> forced;
  for (auto id : forced_) {
    const std::size_t s = objects_[id].view.size();
    if (s >= lo && s <= hi && feasible(s)) forced.push_back(id);
  }
  const bool short_index = options_.fixed_overlap.has_value() ||
                           static_cast<i128>(jaccard.num) * options_.jaccard.den <
                               static_cast<i128>(options_.jaccard.num) * jaccard.den;
  for (auto it = size_begin; it != size_end;) {
    const std::size_t s = objects_[*it].view.size();
    const auto group_end = std::upper_bound(it, size_end, s, size_greater);
    const auto tau = tau_of(s);
    const bool q_open = feasible(s) && !view_for(tau).view.reachable;
    if (q_open || (short_index && feasible(s))) {
      for (auto g = it; g != group_end; ++g) {
        const auto& obj = objects_[*g];
        if (obj.forced) continue;
        if (q_open || (short_index && obj.view.overlap > tau)) forced.push_back(*g);
      }
    }
    it = group_end;
  }

  const std::int64_t tau_min =
      lo <= hi && feasible(lo) ? tau_of(lo) : std::numeric_limits<std::int64_t>::max();
  std::vector<std::pair<std::uint32_t, std::uint32_t>> hits;
  if (tau_min != std::numeric_limits<std::int64_t>::max()) {
    const auto& probe = view_for(tau_min).view;
    for (std::uint32_t r = 0; r < probe.prefix_length; ++r) {
      const auto tok = q_tokens[r];
      if (tok < 0) continue;
      ++st.probes;
      const auto& list = postings_[static_cast<std::size_t>(tok)];
      st.postings += list.size();
      for (const auto& p : list) {
        const std::size_t s = objects_[p.object].view.size();
        if (s >= lo && s <= hi) hits.emplace_back(p.object, r);
      }
    }
  }
  std::sort(hits.begin(), hits.end());

  std::vector<std::uint32_t> cands = forced;
  st.pigeonhole_candidates += forced.size();
  std::vector<std::int64_t> b(m, 0);
  for (std::size_t a = 0; a < hits.size();) {
    const std::uint32_t x = hits[a].first;
    std::size_t e = a;
    while (e < hits.size() && hits[e].first == x) ++e;
    const auto& xv = objects_[x].view;
    const std::size_t s = xv.size();
    if (!feasible(s) || objects_[x].forced || xv.overlap > tau_of(s)) {
      a = e;
      continue;
    }
    const auto& qv = view_for(tau_of(s));
    if (!qv.view.reachable) {
      a = e;
      continue;
    }
    std::fill(b.begin(), b.end(), 0);
    for (std::size_t h = a; h < e; ++h)
      if (hits[h].second < qv.view.prefix_length) ++b[classes_.class_of(q_tokens[hits[h].second])];
    a = e;
    const auto bound = suffix_box_bound(xv, qv.view, b);
    const auto out = ring_filter(b, bound, *qv.spec, chain_length);
    st.viable_boxes += out.viable_boxes;
    st.box_checks += out.box_checks;
    if (out.viable_box) ++st.pigeonhole_candidates;
    if (out.candidate) cands.push_back(x);
  }
  std::sort(cands.begin(), cands.end());
  st.candidates = cands.size();
  st.filter_ns = elapsed_ns(t0);

  const auto t1 = std::chrono::steady_clock::now();
  for (auto x : cands) {
    ++st.verifications;
    const auto& xv = objects_[x].view;
    const auto tau = tau_of(xv.size());
    if (overlap_at_least(xv.tokens, q_tokens, static_cast<std::size_t>(tau))) res.ids.push_back(x);
  }
  st.results = res.ids.size();
  st.verify_ns = elapsed_ns(t1);
  res.candidates = std::move(cands);
  return res;
}

}  // namespace pigeonring::setsim
