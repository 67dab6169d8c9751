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

#include <cstdint>
#include <vector>

namespace pigeonring {

/// Measurable terms of the filter cost model: C = C_C1 + C_C2 + |A| * c_V.
struct QueryStats {
  std::uint64_t probes = 0;            ///< index lookups in the first step (C_C1)
  std::uint64_t postings = 0;          ///< posting entries scanned in the first step (C_C1)
  std::uint64_t viable_boxes = 0;      ///< |V|: viable single boxes found by the first step
  std::uint64_t box_checks = 0;        ///< boxes evaluated in the second step (C_C2)
  std::uint64_t pigeonhole_candidates = 0;  ///< objects with a viable box, i.e. the l = 1 count
  std::uint64_t candidates = 0;        ///< |A_PR|
  std::uint64_t verifications = 0;
  std::uint64_t results = 0;
  std::uint64_t filter_ns = 0;
  std::uint64_t verify_ns = 0;

  QueryStats& operator+=(const QueryStats& o) {
    probes += o.probes;
    postings += o.postings;
    viable_boxes += o.viable_boxes;
    box_checks += o.box_checks;
    pigeonhole_candidates += o.pigeonhole_candidates;
    candidates += o.candidates;
    verifications += o.verifications;
    results += o.results;
    filter_ns += o.filter_ns;
    verify_ns += o.verify_ns;
    return *this;
  }
};

/// Answer to one threshold query. Both ID lists are sorted ascending.
struct QueryResult {
  std::vector<std::uint32_t> ids;
  std::vector<std::uint32_t> candidates;
  QueryStats stats;
};

}  // namespace pigeonring
