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

#include "pigeonring/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "pigeonring/analysis.hpp"
#include "pigeonring/errors.hpp"
#include "pigeonring/hamming.hpp"
#include "pigeonring/io.hpp"
#include "pigeonring/ring.hpp"
#include "pigeonring/setsim.hpp"
#include "pigeonring/strsim.hpp"

namespace pigeonring::cli {
namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

struct Common {
  std::string data;
  std::string queries;
  std::string out;
  std::string stats;
  std::optional<std::size_t> chain;
  bool timings = false;
};

struct HammingArgs {
  std::int64_t tau = -1;
  std::optional<std::size_t> parts;
  std::string mode = "intred";
  std::string thresholds;
  std::optional<std::uint64_t> seed;
};

struct SetArgs {
  std::string jaccard;
  std::size_t parts = 4;
};

struct StringArgs {
  std::int64_t tau = -1;
  std::size_t kappa = 2;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::uint64_t ns_since(Clock::time_point t) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t).count());
}

std::size_t worker_count() {
  if (const char* env = std::getenv("PIGEONRING_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 1024) throw ConfigError("bad PIGEONRING_THREADS value");
    return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, n) on a worker pool; results keep input order.
std::vector<QueryResult> run_all(std::size_t n, const std::function<QueryResult(std::size_t)>& fn) {
  std::vector<QueryResult> out(n);
  const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) {
        try {
          out[i] = fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t used = 0;
    try {
      v.push_back(std::stod(item, &used));
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != item.size()) throw ConfigError("bad number in list: " + item);
  }
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> v;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) v.push_back(item);
  return v;
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      os_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw ConfigError("cannot write " + path);
      os_ = file_.get();
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

json stats_record(std::size_t query, const QueryStats& s, bool timings) {
  json j;
  j["query"] = query;
  j["probes"] = s.probes;
  j["postings"] = s.postings;
  j["viable_boxes"] = s.viable_boxes;
  j["box_checks"] = s.box_checks;
  j["pigeonhole_candidates"] = s.pigeonhole_candidates;
  j["candidates"] = s.candidates;
  j["verifications"] = s.verifications;
  j["results"] = s.results;
  if (timings) {
    j["filter_ns"] = s.filter_ns;
    j["verify_ns"] = s.verify_ns;
  }
  return j;
}

void write_results(const Common& c, const std::vector<QueryResult>& results, std::uint64_t build_ns,
                   std::ostream& out, std::ostream& err) {
  Output o(c.out, out);
  for (std::size_t i = 0; i < results.size(); ++i) {
    *o << i << '\t';
    for (std::size_t k = 0; k < results[i].ids.size(); ++k)
      *o << (k ? " " : "") << results[i].ids[k];
    *o << '\n';
  }
  QueryStats total;
  for (const auto& r : results) total += r.stats;
  if (!c.stats.empty()) {
    Output s(c.stats, out);
    for (std::size_t i = 0; i < results.size(); ++i)
      *s << stats_record(i, results[i].stats, c.timings).dump() << '\n';
  }
  err << "queries=" << results.size() << " candidates=" << total.candidates
      << " pigeonhole_candidates=" << total.pigeonhole_candidates << " results=" << total.results;
  if (c.timings)
    err << " build_ms=" << fmt(build_ns / 1e6) << " filter_ms=" << fmt(total.filter_ns / 1e6)
        << " verify_ms=" << fmt(total.verify_ns / 1e6);
  err << '\n';
}

// A built index plus a way to answer query i at one threshold and chain length.
struct Engine {
  std::size_t queries = 0;
  std::function<std::size_t(const std::string& threshold)> parts;
  std::function<QueryResult(std::size_t query, const std::string& threshold, std::size_t l)> query;
  std::function<std::size_t(std::size_t m)> recommended_chain;
  std::uint64_t build_ns = 0;
};

void require_paths(const Common& c) {
  if (c.data.empty() || c.queries.empty()) throw ConfigError("--data and --queries are required");
}

std::int64_t parse_int(const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = std::string::npos;
  }
  if (used != s.size()) throw ConfigError("bad integer: " + s);
  return v;
}

Engine hamming_engine(const Common& c, const HammingArgs& a, std::int64_t max_tau) {
  require_paths(c);
  auto data = std::make_shared<std::vector<hamming::BinaryVector>>(
      io::parse_vectors(io::read_lines(c.data)));
  auto queries = std::make_shared<std::vector<hamming::BinaryVector>>(
      io::parse_vectors(io::read_lines(c.queries)));
  if (data->empty()) throw DataFormatError("dataset is empty");
  const std::size_t dim = data->front().dim();
  for (std::size_t i = 0; i < queries->size(); ++i)
    if ((*queries)[i].dim() != dim)
      throw DataFormatError("query dimension differs from the dataset", i + 1);
  const std::size_t m = a.parts.value_or(hamming::default_parts(dim));
  if (m == 0 || m > dim) throw ConfigError("--parts must lie in [1, d]");
  if (a.mode != "fixed" && a.mode != "variable" && a.mode != "intred")
    throw ConfigError("--mode must be fixed, variable or intred");
  if (max_tau < 0) throw ConfigError("--tau must be nonnegative");

  hamming::BuildOptions opts;
  opts.permutation_seed = a.seed;
  const auto t0 = Clock::now();
  auto index = std::make_shared<hamming::HammingIndex>(
      hamming::HammingIndex::build(*data, hamming::partition_dims(dim, m), opts));
  Engine e;
  e.build_ns = ns_since(t0);
  e.queries = queries->size();
  e.parts = [m](const std::string&) { return m; };
  e.recommended_chain = [](std::size_t parts) { return std::min<std::size_t>(5, parts); };
  const auto explicit_t = a.thresholds.empty() ? std::vector<double>{} : parse_doubles(a.thresholds);
  if (!explicit_t.empty() && explicit_t.size() != m)
    throw ConfigError("--thresholds needs one entry per part");
  const std::string mode = a.mode;
  e.query = [=](std::size_t qi, const std::string& threshold, std::size_t l) {
    const std::int64_t tau = parse_int(threshold);
    if (tau < 0) throw ConfigError("--tau must be nonnegative");
    std::optional<ring::ThresholdSpec> spec;
    if (mode == "fixed") {
      spec = ring::ThresholdSpec::fixed_quota(static_cast<double>(tau));
    } else if (mode == "variable") {
      std::vector<double> t = explicit_t;
      if (t.empty()) t.assign(m, static_cast<double>(tau) / static_cast<double>(m));
      spec = ring::ThresholdSpec::variable(std::move(t));
      if (!spec->consistent_with_bound(static_cast<double>(tau), m))
        throw ConfigError("variable thresholds must sum to tau");
    } else if (!explicit_t.empty()) {
      std::vector<std::int64_t> t;
      for (double v : explicit_t) {
        if (v != static_cast<double>(static_cast<std::int64_t>(v)))
          throw ConfigError("integer-reduction thresholds must be integers");
        t.push_back(static_cast<std::int64_t>(v));
      }
      spec = ring::ThresholdSpec::integer_reduction(std::move(t));
      if (!spec->consistent_with_bound(static_cast<double>(tau), m))
        throw ConfigError("integer-reduction thresholds must sum to tau - m + 1");
    }
    if (spec) return index->query((*queries)[qi], tau, l, *spec);
    return index->query((*queries)[qi], tau, l);
  };
  return e;
}

Engine set_engine(const Common& c, const SetArgs& a, setsim::Ratio min_jaccard) {
  require_paths(c);
  auto data = io::parse_records(io::read_lines(c.data));
  auto queries = std::make_shared<std::vector<setsim::SetIndex::Record>>(
      io::parse_records(io::read_lines(c.queries)));
  if (a.parts < 2) throw ConfigError("--parts must be at least 2 for set similarity");
  setsim::IndexOptions opts;
  opts.parts = a.parts;
  opts.jaccard = min_jaccard;
  const auto t0 = Clock::now();
  auto index = std::make_shared<setsim::SetIndex>(setsim::SetIndex::build(data, opts));
  Engine e;
  e.build_ns = ns_since(t0);
  e.queries = queries->size();
  const std::size_t m = a.parts;
  e.parts = [m](const std::string&) { return m; };
  e.recommended_chain = [](std::size_t parts) { return std::min<std::size_t>(3, parts); };
  e.query = [=](std::size_t qi, const std::string& threshold, std::size_t l) {
    return index->query((*queries)[qi], setsim::Ratio::parse(threshold), l);
  };
  return e;
}

Engine string_engine(const Common& c, const StringArgs& a, std::int64_t max_tau) {
  require_paths(c);
  auto data = io::read_lines(c.data);
  auto queries = std::make_shared<std::vector<std::string>>(io::read_lines(c.queries));
  if (max_tau < 0) throw ConfigError("--tau must be nonnegative");
  if (a.kappa == 0) throw ConfigError("--kappa must be positive");
  strsim::IndexOptions opts;
  opts.kappa = a.kappa;
  opts.max_tau = static_cast<std::size_t>(max_tau);
  const auto t0 = Clock::now();
  auto index =
      std::make_shared<strsim::StringIndex>(strsim::StringIndex::build(std::move(data), opts));
  Engine e;
  e.build_ns = ns_since(t0);
  e.queries = queries->size();
  e.parts = [](const std::string& threshold) {
    return static_cast<std::size_t>(parse_int(threshold)) + 1;
  };
  e.recommended_chain = [](std::size_t parts) { return std::min<std::size_t>(3, parts); };
  e.query = [=](std::size_t qi, const std::string& threshold, std::size_t l) {
    const auto tau = parse_int(threshold);
    if (tau < 0) throw ConfigError("--tau must be nonnegative");
    return index->query((*queries)[qi], static_cast<std::size_t>(tau), l);
  };
  return e;
}

int run_search(const Engine& e, const Common& c, const std::string& threshold, std::ostream& out,
               std::ostream& err) {
  const std::size_t m = e.parts(threshold);
  const std::size_t l = c.chain.value_or(e.recommended_chain(m));
  if (l == 0 || l > m) throw ConfigError("--chain must lie in [1, m]");
  const auto results = run_all(e.queries, [&](std::size_t i) { return e.query(i, threshold, l); });
  write_results(c, results, e.build_ns, out, err);
  return kExitOk;
}

struct SweepArgs {
  std::string problem;
  std::string thresholds;
  std::string chains;
};

int run_sweep(const Common& c, const SweepArgs& s, const HammingArgs& ha, const SetArgs& sa,
              const StringArgs& sta, std::ostream& out, std::ostream& err) {
  const auto levels = split_list(s.thresholds);
  if (levels.empty()) throw ConfigError("--thresholds-list needs at least one value");
  Engine e;
  if (s.problem == "hamming" || s.problem == "string") {
    std::int64_t hi = 0;
    for (const auto& t : levels) hi = std::max(hi, parse_int(t));
    e = s.problem == "hamming" ? hamming_engine(c, ha, hi) : string_engine(c, sta, hi);
  } else if (s.problem == "set") {
    auto lo = setsim::Ratio::parse(levels.front());
    for (const auto& t : levels) {
      const auto r = setsim::Ratio::parse(t);
      if (static_cast<__int128>(r.num) * lo.den < static_cast<__int128>(lo.num) * r.den) lo = r;
    }
    e = set_engine(c, sa, lo);
  } else {
    throw ConfigError("--problem must be hamming, set or string");
  }
  Output o(c.out, out);
  std::unique_ptr<Output> stats;
  if (!c.stats.empty()) stats = std::make_unique<Output>(c.stats, out);
  *o << "threshold\tl\tqueries\tcandidates\tpigeonhole_candidates\tresults\tbox_checks\tverifications";
  if (c.timings) *o << "\tfilter_ms\tverify_ms";
  *o << '\n';
  for (const auto& t : levels) {
    const std::size_t m = e.parts(t);
    std::vector<std::size_t> ls;
    if (s.chains.empty()) {
      for (std::size_t l = 1; l <= m; ++l) ls.push_back(l);
    } else {
      for (const auto& v : split_list(s.chains)) ls.push_back(static_cast<std::size_t>(parse_int(v)));
    }
    for (const auto l : ls) {
      if (l == 0 || l > m) throw ConfigError("chain length outside [1, m]");
      const auto results = run_all(e.queries, [&](std::size_t i) { return e.query(i, t, l); });
      QueryStats total;
      for (const auto& r : results) total += r.stats;
      *o << t << '\t' << l << '\t' << results.size() << '\t' << total.candidates << '\t'
         << total.pigeonhole_candidates << '\t' << total.results << '\t' << total.box_checks
         << '\t' << total.verifications;
      if (c.timings) *o << '\t' << fmt(total.filter_ns / 1e6) << '\t' << fmt(total.verify_ns / 1e6);
      *o << '\n';
      if (stats) {
        json j;
        j["problem"] = s.problem;
        j["threshold"] = t;
        j["l"] = l;
        j["m"] = m;
        auto rec = stats_record(results.size(), total, c.timings);
        rec.erase("query");
        j["queries"] = results.size();
        for (auto& [k, v] : rec.items()) j[k] = v;
        **stats << j.dump() << '\n';
      }
    }
  }
  if (c.timings) err << "build_ms=" << fmt(e.build_ns / 1e6) << '\n';
  return kExitOk;
}

struct AnalyzeArgs {
  std::string pdf;
  std::size_t m = 0;
  std::int64_t tau = 0;
  std::size_t l_min = 1;
  std::optional<std::size_t> l_max;
  bool exact = false;
  std::uint64_t samples = 0;
  std::uint64_t seed = 1;
  std::size_t partitions = 1;
};

int run_analyze(const Common& c, const AnalyzeArgs& a, std::ostream& out) {
  using Rational = boost::multiprecision::cpp_rational;
  const auto pdf = analysis::parse_pdf(a.pdf);
  const std::size_t l_max = a.l_max.value_or(a.m);
  if (a.m == 0) throw ConfigError("--m must be positive");
  if (a.l_min == 0 || a.l_min > l_max || l_max > a.m) throw ConfigError("need 1 <= l-min <= l-max <= m");
  std::vector<analysis::RatioPoint> curve;
  if (a.exact) {
    analysis::DiscretePdf<Rational> exact;
    if (a.pdf.starts_with("uniform:")) {
      exact = analysis::DiscretePdf<Rational>::uniform(pdf.omega());
    } else {
      for (const auto& item : split_list(a.pdf)) {
        const auto r = setsim::Ratio::parse(item);
        exact.mass.emplace_back(r.num, r.den);
      }
    }
    curve = analysis::ratio_curve(exact, a.m, a.tau, a.l_min, l_max);
  } else {
    curve = analysis::ratio_curve(pdf, a.m, a.tau, a.l_min, l_max);
  }
  Output o(c.out, out);
  *o << "l\tcand\tres\tratio\texcess";
  if (a.samples) *o << "\tmc_cand\tmc_cand_se\tmc_res\tmc_res_se";
  *o << '\n';
  json record;
  record["pdf"] = a.pdf;
  record["m"] = a.m;
  record["tau"] = a.tau;
  record["exact"] = a.exact;
  record["samples"] = a.samples;
  record["seed"] = a.seed;
  json rows = json::array();
  for (const auto& p : curve) {
    *o << p.l << '\t' << fmt(p.cand) << '\t' << fmt(p.res) << '\t' << fmt(p.ratio) << '\t'
       << fmt(p.excess);
    json row;
    row["l"] = p.l;
    row["cand"] = p.cand;
    row["res"] = p.res;
    row["ratio"] = p.ratio;
    row["excess"] = p.excess;
    if (a.samples) {
      const auto mc = analysis::monte_carlo(pdf, {a.m, a.tau, p.l}, a.samples, a.seed, a.partitions);
      *o << '\t' << fmt(mc.cand) << '\t' << fmt(mc.cand_se) << '\t' << fmt(mc.res) << '\t'
         << fmt(mc.res_se);
      row["mc_cand"] = mc.cand;
      row["mc_cand_se"] = mc.cand_se;
      row["mc_res"] = mc.res;
      row["mc_res_se"] = mc.res_se;
    }
    *o << '\n';
    rows.push_back(std::move(row));
  }
  record["curve"] = std::move(rows);
  if (!c.stats.empty()) {
    Output s(c.stats, out);
    *s << record.dump() << '\n';
  }
  return kExitOk;
}

int run_verify(const Common& c, std::size_t m, std::int64_t n, std::size_t omega, std::ostream& out) {
  const auto rep = ring::verify_theorems_exhaustive(m, n, omega);
  Output o(c.out, out);
  *o << "m=" << rep.m << " n=" << rep.n << " omega=" << rep.omega << " sequences=" << rep.sequences
     << " within_bound=" << rep.within_bound << " checks=" << rep.checks << '\n';
  for (const auto& [seq, what] : rep.examples) {
    *o << "violation: " << what << " B=(";
    for (std::size_t i = 0; i < seq.size(); ++i) *o << (i ? "," : "") << seq[i];
    *o << ")\n";
  }
  *o << rep.violations << " violations\n";
  return rep.violations == 0 ? kExitOk : kExitFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pigeonring similarity search and filter analysis"};
  app.require_subcommand(1);
  Common common;
  HammingArgs ha;
  SetArgs sa;
  StringArgs sta;
  SweepArgs sw;
  AnalyzeArgs an;
  std::size_t vm = 0, vomega = 0;
  std::int64_t vn = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--data", common.data, "dataset file");
    sub->add_option("--queries", common.queries, "query file");
    sub->add_option("--chain,-l", common.chain, "chain length l");
    sub->add_option("--out", common.out, "results file (default stdout)");
    sub->add_option("--stats", common.stats, "per-query stats file, one JSON object per line");
    sub->add_flag("--timings", common.timings, "include wall-clock times");
  };
  auto add_hamming = [&](CLI::App* sub) {
    sub->add_option("--parts", ha.parts, "number of parts m (default d/16)");
    sub->add_option("--mode", ha.mode, "fixed, variable or intred")->capture_default_str();
    sub->add_option("--thresholds", ha.thresholds, "per-part thresholds t0,t1,...");
    sub->add_option("--seed", ha.seed, "shuffle dimensions with this seed");
  };

  auto* ham = app.add_subcommand("hamming", "Hamming distance search");
  add_common(ham);
  add_hamming(ham);
  ham->add_option("--tau", ha.tau, "distance threshold")->required();

  auto* set = app.add_subcommand("set", "Jaccard similarity search");
  add_common(set);
  set->add_option("--jaccard", sa.jaccard, "similarity threshold, e.g. 0.8 or 4/5")->required();
  set->add_option("--parts", sa.parts, "number of boxes m (m-1 token classes)")->capture_default_str();
  std::string set_mode = "intred";
  set->add_option("--mode", set_mode, "only intred is supported");

  auto* str = app.add_subcommand("string", "edit distance search");
  add_common(str);
  str->add_option("--tau", sta.tau, "edit distance threshold")->required();
  str->add_option("--kappa", sta.kappa, "gram length")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "candidate counts over thresholds and chain lengths");
  add_common(sweep);
  add_hamming(sweep);
  sweep->add_option("--problem", sw.problem, "hamming, set or string")->required();
  sweep->add_option("--thresholds-list", sw.thresholds, "comma-separated tau (or Jaccard) values")
      ->required();
  sweep->add_option("--chains", sw.chains, "comma-separated chain lengths (default 1..m)");
  sweep->add_option("--kappa", sta.kappa, "gram length (string)")->capture_default_str();
  sweep->add_option("--set-parts", sa.parts, "boxes for set similarity")->capture_default_str();

  auto* ana = app.add_subcommand("analyze", "candidate probability vs chain length");
  ana->add_option("--pdf", an.pdf, "uniform:omega or comma-separated masses")->required();
  ana->add_option("--m", an.m, "number of boxes")->required();
  ana->add_option("--tau", an.tau, "threshold (n = tau)")->required();
  ana->add_option("--l-min", an.l_min, "first chain length")->capture_default_str();
  ana->add_option("--l-max", an.l_max, "last chain length (default m)");
  ana->add_flag("--exact", an.exact, "rational arithmetic");
  ana->add_option("--monte-carlo", an.samples, "Monte Carlo samples per l (0 = off)");
  ana->add_option("--seed", an.seed, "Monte Carlo seed")->capture_default_str();
  ana->add_option("--partitions", an.partitions, "Monte Carlo generator partitions")
      ->capture_default_str();
  ana->add_option("--out", common.out, "TSV file (default stdout)");
  ana->add_option("--stats", common.stats, "JSON record file");

  auto* ver = app.add_subcommand("verify-theorems", "exhaustive check of the ring theorems");
  ver->add_option("--m", vm, "number of boxes")->required();
  ver->add_option("--n", vn, "bound n")->required();
  ver->add_option("--omega", vomega, "max box value")->required();
  ver->add_option("--out", common.out, "report file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (*ham) {
      return run_search(hamming_engine(common, ha, ha.tau), common, std::to_string(ha.tau), out, err);
    }
    if (*set) {
      if (set_mode != "intred") throw ConfigError("set similarity only supports --mode intred");
      const auto r = setsim::Ratio::parse(sa.jaccard);
      return run_search(set_engine(common, sa, r), common, sa.jaccard, out, err);
    }
    if (*str) {
      return run_search(string_engine(common, sta, sta.tau), common, std::to_string(sta.tau), out,
                        err);
    }
    if (*sweep) return run_sweep(common, sw, ha, sa, sta, out, err);
    if (*ana) return run_analyze(common, an, out);
    if (*ver) return run_verify(common, vm, vn, vomega, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataFormatError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitConfig;
}

}  // namespace pigeonring::cli
