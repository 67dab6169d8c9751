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

#include "pigeonring/strsim.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <limits>
#include <map>
#include <numeric>

#include "pigeonring/errors.hpp"
#include "pigeonring/ring.hpp"

namespace pigeonring::strsim {
namespace {

std::uint64_t elapsed_ns(std::chrono::steady_clock::time_point since) {
  return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(
                                        std::chrono::steady_clock::now() - since)
                                        .count());
}

std::size_t abs_diff(std::size_t a, std::size_t b) { return a < b ? b - a : a - b; }

bool key_less(const PositionalGram& a, const PositionalGram& b) {
  return a.key != b.key ? a.key < b.key : a.pos < b.pos;
}

// Starts from every matched pivot, skipping starts covered by a failed chain.
template <typename BoxFn>
bool chain_from_matches(std::span<const std::size_t> matched, std::size_t m,
                        std::size_t chain_length, std::size_t tau, BoxFn&& box,
                        std::uint64_t& box_checks) {
  const auto spec = ring::ThresholdSpec::fixed_quota(static_cast<double>(tau));
  std::size_t skip_until = 0;
  for (const auto i : matched) {
    if (i < skip_until) continue;
    const auto check = ring::check_prefix(spec, m, i, chain_length, [&](std::size_t j) {
      return j == i ? std::size_t{0} : box(j);
    });
    box_checks += check.box_evals - 1;
    if (check.viable) return true;
    skip_until = i + check.failed_length;
  }
  return false;
}

}  // namespace

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

bool verify_edit_distance(std::string_view a, std::string_view b, std::size_t tau) {
  if (abs_diff(a.size(), b.size()) > tau) return false;
  const std::size_t inf = tau + 1;
  // row[j] holds D(i, j) for j in [i - tau, i + tau], stored at offset j - i + tau.
  const std::size_t width = 2 * tau + 1;
  std::vector<std::size_t> prev(width + 2, inf), cur(width + 2, inf);
  for (std::size_t d = 0; d <= tau && d <= b.size(); ++d) prev[tau + d] = d;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::fill(cur.begin(), cur.end(), inf);
    std::size_t best = inf;
    for (std::size_t off = 0; off < width; ++off) {
      if (i + off < tau) continue;
      const std::size_t j = i + off - tau;
      if (j > b.size()) break;
      std::size_t v = inf;
      if (j == 0) {
        v = i;
      } else {
        v = prev[off] + (a[i - 1] == b[j - 1] ? 0 : 1);     // D(i-1, j-1)
        v = std::min(v, prev[off + 1] + 1);                 // D(i-1, j)
        if (off > 0) v = std::min(v, cur[off - 1] + 1);     // D(i, j-1)
      }
      cur[off] = std::min(v, inf);
      best = std::min(best, cur[off]);
    }
    if (best > tau) return false;
    std::swap(prev, cur);
  }
  const std::size_t off = b.size() + tau - a.size();
  return prev[off] <= tau;
}

void Signature::add(unsigned char c) noexcept {
  const std::uint32_t bit = (static_cast<std::uint32_t>(c) * 0x9E3779B1u) & 127u;
  w[bit >> 6] |= std::uint64_t{1} << (bit & 63u);
}

Signature Signature::of(std::string_view s) noexcept {
  Signature sig;
  for (unsigned char c : s) sig.add(c);
  return sig;
}

int signature_distance(const Signature& a, const Signature& b) noexcept {
  return std::popcount(a.w[0] ^ b.w[0]) + std::popcount(a.w[1] ^ b.w[1]);
}

std::vector<Signature> window_signatures(std::string_view s, std::size_t kappa) {
  std::vector<Signature> out;
  if (kappa == 0 || s.size() < kappa) return out;
  out.reserve(s.size() - kappa + 1);
  for (std::size_t p = 0; p + kappa <= s.size(); ++p) out.push_back(Signature::of(s.substr(p, kappa)));
  return out;
}

GramDictionary GramDictionary::build(std::span<const std::string> data, std::size_t kappa) {
  if (kappa == 0) throw ConfigError("gram length must be positive");
  std::unordered_map<std::string, std::uint64_t> freq;
  for (const auto& s : data)
    for (std::size_t p = 0; p + kappa <= s.size(); ++p) ++freq[s.substr(p, kappa)];
  std::vector<std::pair<std::uint64_t, std::string>> order;
  order.reserve(freq.size());
  for (auto& [g, f] : freq) order.emplace_back(f, g);
  std::sort(order.begin(), order.end());
  std::vector<std::string> grams;
  grams.reserve(order.size());
  for (auto& [f, g] : order) grams.push_back(std::move(g));
  return from_order(std::move(grams), kappa);
}

GramDictionary GramDictionary::from_order(std::vector<std::string> grams, std::size_t kappa) {
  if (kappa == 0) throw ConfigError("gram length must be positive");
  GramDictionary d;
  d.kappa_ = kappa;
  for (auto& g : grams) {
    if (g.size() != kappa) throw ConfigError("gram of wrong length: " + g);
    if (!d.ranks_.emplace(g, static_cast<std::uint32_t>(d.grams_.size())).second)
      throw ConfigError("duplicate gram: " + g);
    d.grams_.push_back(std::move(g));
  }
  return d;
}

std::optional<std::uint32_t> GramDictionary::rank(std::string_view gram) const {
  const auto it = ranks_.find(std::string(gram));
  if (it == ranks_.end()) return std::nullopt;
  return it->second;
}

std::vector<PositionalGram> sorted_grams(std::string_view s, const GramDictionary& dict) {
  const std::size_t k = dict.kappa();
  std::vector<PositionalGram> out;
  if (s.size() < k) return out;
  out.reserve(s.size() - k + 1);
  std::map<std::string_view, std::vector<std::size_t>> unknown;
  for (std::size_t p = 0; p + k <= s.size(); ++p) {
    const auto g = s.substr(p, k);
    if (const auto r = dict.rank(g)) {
      out.push_back({static_cast<std::int64_t>(*r), static_cast<std::uint32_t>(p)});
    } else {
      unknown[g].push_back(out.size());
      out.push_back({0, static_cast<std::uint32_t>(p)});
    }
  }
  auto key = -static_cast<std::int64_t>(unknown.size());
  for (const auto& [g, slots] : unknown) {
    for (auto slot : slots) out[slot].key = key;
    ++key;
  }
  std::sort(out.begin(), out.end(), key_less);
  return out;
}

std::optional<std::vector<PositionalGram>> select_pivots(std::span<const PositionalGram> grams,
                                                         std::size_t kappa, std::size_t tau) {
  const std::size_t want = tau + 1;
  auto disjoint = [&](const PositionalGram& a, const PositionalGram& b) {
    return abs_diff(a.pos, b.pos) >= kappa;
  };
  std::vector<PositionalGram> chosen;
  for (const auto& g : grams) {
    if (std::all_of(chosen.begin(), chosen.end(), [&](const auto& c) { return disjoint(c, g); }))
      chosen.push_back(g);
    if (chosen.size() == want) break;
  }
  if (chosen.size() < want) {
    std::vector<PositionalGram> by_pos(grams.begin(), grams.end());
    std::sort(by_pos.begin(), by_pos.end(),
              [](const auto& a, const auto& b) { return a.pos < b.pos; });
    chosen.clear();
    for (const auto& g : by_pos) {
      if (!chosen.empty() && g.pos < chosen.back().pos + kappa) continue;
      chosen.push_back(g);
      if (chosen.size() == want) break;
    }
    if (chosen.size() < want) return std::nullopt;
  }
  std::sort(chosen.begin(), chosen.end(), [](const auto& a, const auto& b) { return a.pos < b.pos; });
  return chosen;
}

GramProfile make_profile(std::string_view s, std::size_t tau, const GramDictionary& dict) {
  GramProfile p;
  p.grams = sorted_grams(s, dict);
  const std::size_t want = dict.kappa() * tau + 1;
  if (p.grams.size() < want) return p;
  auto pivots = select_pivots(std::span(p.grams).first(want), dict.kappa(), tau);
  if (!pivots) throw std::logic_error("prefix without tau+1 disjoint grams");
  p.prefix = want;
  p.extended = want;
  while (p.extended < p.grams.size() && p.grams[p.extended].key == p.grams[want - 1].key)
    ++p.extended;
  p.pivots = std::move(*pivots);
  p.short_string = false;
  return p;
}

std::size_t box_lower_bound(std::string_view pivot, std::size_t pos, std::string_view other,
                            std::span<const Signature> other_windows, std::size_t tau) {
  const std::size_t k = pivot.size();
  const std::size_t lo = pos > tau ? pos - tau : 0;
  const std::size_t hi_end = std::min(pos + k + tau, other.size());  // exclusive
  if (hi_end <= lo || hi_end - lo < k) return hi_end <= lo ? k : k - (hi_end - lo);
  const Signature sig = Signature::of(pivot);
  int best = std::numeric_limits<int>::max();
  bool exact = false;
  for (std::size_t s = lo; s + k <= hi_end; ++s) {
    const int h = signature_distance(sig, other_windows[s]);
    if (h == 0 && other.substr(s, k) == pivot) {
      exact = true;
      break;
    }
    best = std::min(best, h);
  }
  if (exact) return 0;
  return std::max<std::size_t>(1, static_cast<std::size_t>(best + 1) / 2);
}

PivotSide pivot_side(const GramProfile& x, const GramProfile& q) {
  return x.last_key() <= q.last_key() ? PivotSide::kData : PivotSide::kQuery;
}

PairEvaluation evaluate_pair(std::string_view x, std::string_view q, std::size_t tau,
                             std::size_t chain_length, const GramDictionary& dict) {
  if (chain_length == 0 || chain_length > tau + 1)
    throw ConfigError("chain length must lie in [1, tau+1]");
  PairEvaluation ev;
  const auto px = make_profile(x, tau, dict);
  const auto pq = make_profile(q, tau, dict);
  if (px.short_string || pq.short_string) {
    ev.pigeonhole = ev.candidate = abs_diff(x.size(), q.size()) <= tau;
    return ev;
  }
  ev.side = pivot_side(px, pq);
  const bool data = ev.side == PivotSide::kData;
  const auto& pivots = data ? px.pivots : pq.pivots;
  const std::string_view owner = data ? x : q;
  const std::string_view other = data ? q : x;
  const auto& other_profile = data ? pq : px;
  const auto windows = window_signatures(other, dict.kappa());
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    const auto& pv = pivots[i];
    ev.boxes.push_back(box_lower_bound(owner.substr(pv.pos, dict.kappa()), pv.pos, other, windows, tau));
    for (const auto& g : other_profile.extended_grams())
      if (g.key == pv.key && pv.key >= 0 && abs_diff(g.pos, pv.pos) <= tau) {
        ev.matched.push_back(i);
        break;
      }
  }
  if (abs_diff(x.size(), q.size()) > tau) return ev;
  ev.pigeonhole = !ev.matched.empty();
  std::uint64_t checks = 0;
  ev.candidate = chain_from_matches(ev.matched, pivots.size(), chain_length, tau,
                                    [&](std::size_t j) { return ev.boxes[j]; }, checks);
  return ev;
}

StringIndex StringIndex::build(std::vector<std::string> data, IndexOptions options) {
  if (options.kappa == 0) throw ConfigError("gram length must be positive");
  StringIndex idx;
  idx.options_ = options;
  idx.data_ = std::move(data);
  idx.dict_ = GramDictionary::build(idx.data_, options.kappa);
  idx.windows_.reserve(idx.data_.size());
  for (const auto& s : idx.data_) idx.windows_.push_back(window_signatures(s, options.kappa));
  idx.buckets_.resize(options.max_tau + 1);
  for (std::size_t tau = 0; tau <= options.max_tau; ++tau) {
    auto& b = idx.buckets_[tau];
    b.pivots.resize(idx.dict_.size());
    b.grams.resize(idx.dict_.size());
    b.profiles.reserve(idx.data_.size());
    for (std::uint32_t id = 0; id < idx.data_.size(); ++id) {
      auto prof = make_profile(idx.data_[id], tau, idx.dict_);
      if (prof.short_string) {
        b.short_ids.push_back(id);
      } else {
        for (std::uint32_t i = 0; i < prof.pivots.size(); ++i)
          b.pivots[static_cast<std::size_t>(prof.pivots[i].key)].push_back({id, i, prof.pivots[i].pos});
        for (const auto& g : prof.extended_grams())
          b.grams[static_cast<std::size_t>(g.key)].push_back({id, g.pos});
      }
      b.profiles.push_back(std::move(prof));
    }
  }
  idx.by_length_.resize(idx.data_.size());
  std::iota(idx.by_length_.begin(), idx.by_length_.end(), 0u);
  std::stable_sort(idx.by_length_.begin(), idx.by_length_.end(), [&](auto a, auto b) {
    return idx.data_[a].size() < idx.data_[b].size();
  });
  return idx;
}

QueryResult StringIndex::query(std::string_view q, std::size_t tau, std::size_t chain_length) const {
  if (tau > options_.max_tau) throw ConfigError("tau exceeds the index's max_tau");
  if (chain_length == 0 || chain_length > tau + 1)
    throw ConfigError("chain length must lie in [1, tau+1]");
  QueryResult res;
  auto& st = res.stats;
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t k = options_.kappa;
  const auto& bucket = buckets_[tau];
  const auto pq = make_profile(q, tau, dict_);
  auto length_ok = [&](std::uint32_t id) { return abs_diff(data_[id].size(), q.size()) <= tau; };

  std::vector<std::uint32_t> cands;
  if (pq.short_string) {
    const std::size_t lo = q.size() > tau ? q.size() - tau : 0;
    auto it = std::lower_bound(by_length_.begin(), by_length_.end(), lo,
                               [&](std::uint32_t id, std::size_t n) { return data_[id].size() < n; });
    for (; it != by_length_.end() && data_[*it].size() <= q.size() + tau; ++it) cands.push_back(*it);
    st.pigeonhole_candidates = cands.size();
  } else {
    for (auto id : bucket.short_ids)
      if (length_ok(id)) cands.push_back(id);
    st.pigeonhole_candidates = cands.size();

    const std::int64_t kq = pq.last_key();
    // (object, pivot index) pairs with an exact match.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> hits;
    for (const auto& g : pq.extended_grams()) {
      if (g.key < 0) continue;
      ++st.probes;
      const auto& list = bucket.pivots[static_cast<std::size_t>(g.key)];
      st.postings += list.size();
      for (const auto& p : list)
        if (bucket.profiles[p.object].last_key() <= kq && abs_diff(p.pos, g.pos) <= tau &&
            length_ok(p.object))
          hits.emplace_back(p.object, p.pivot);
    }
    for (std::uint32_t j = 0; j < pq.pivots.size(); ++j) {
      const auto& pv = pq.pivots[j];
      if (pv.key < 0) continue;
      ++st.probes;
      const auto& list = bucket.grams[static_cast<std::size_t>(pv.key)];
      st.postings += list.size();
      for (const auto& p : list)
        if (bucket.profiles[p.object].last_key() > kq && abs_diff(p.pos, pv.pos) <= tau &&
            length_ok(p.object))
          hits.emplace_back(p.object, j);
    }
    std::sort(hits.begin(), hits.end());
    hits.erase(std::unique(hits.begin(), hits.end()), hits.end());

    const auto q_windows = window_signatures(q, k);
    const std::size_t m = tau + 1;
    std::vector<std::size_t> matched;
    std::vector<std::size_t> cache(m);
    std::vector<bool> cached(m);
    for (std::size_t a = 0; a < hits.size();) {
      const std::uint32_t x = hits[a].first;
      matched.clear();
      for (; a < hits.size() && hits[a].first == x; ++a) matched.push_back(hits[a].second);
      ++st.pigeonhole_candidates;
      st.viable_boxes += matched.size();
      const bool data_side = bucket.profiles[x].last_key() <= kq;
      const auto& pivots = data_side ? bucket.profiles[x].pivots : pq.pivots;
      const std::string_view owner = data_side ? std::string_view(data_[x]) : q;
      const std::string_view other = data_side ? q : std::string_view(data_[x]);
      const auto& windows = data_side ? q_windows : windows_[x];
      std::fill(cached.begin(), cached.end(), false);
      auto box = [&](std::size_t j) {
        if (!cached[j]) {
          const auto& pv = pivots[j];
          cache[j] = box_lower_bound(owner.substr(pv.pos, k), pv.pos, other, windows, tau);
          cached[j] = true;
        }
        return cache[j];
      };
      if (chain_from_matches(matched, m, chain_length, tau, box, st.box_checks)) cands.push_back(x);
    }
  }
  std::sort(cands.begin(), cands.end());
  st.candidates = cands.size();
  st.filter_ns = elapsed_ns(t0);

  const auto t1 = std::chrono::steady_clock::now();
  for (auto x : cands) {
    ++st.verifications;
    if (verify_edit_distance(data_[x], q, tau)) res.ids.push_back(x);
  }
  st.results = res.ids.size();
  st.verify_ns = elapsed_ns(t1);
  res.candidates = std::move(cands);
  return res;
}

}  // namespace pigeonring::strsim
