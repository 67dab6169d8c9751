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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "pigeonring/cli.hpp"

namespace fs = std::filesystem;
using pigeonring::cli::run;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "pigeonring");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("pigeonring-cli-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string write(const std::string& name, const std::string& body) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << body;
    return p.string();
  }
  std::string path(const std::string& name) const { return (path_ / name).string(); }
  static std::string read(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

 private:
  fs::path path_;
};

std::vector<nlohmann::ordered_json> json_lines(const std::string& text) {
  std::vector<nlohmann::ordered_json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(nlohmann::ordered_json::parse(line));
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("hamming command on the golden fixture") {
  TempDir dir;
  const auto d = dir.write("d.txt", "1111101110\n0001011110\n0101100110\n1101101100\n");
  const auto q = dir.write("q.txt", "0010010011\n");
  const auto r = invoke({"hamming", "--data", d, "--queries", q, "--tau", "5", "--parts", "5",
                         "--chain", "2", "--mode", "fixed", "--stats", dir.path("s.jsonl")});
  CHECK(r.code == 0);
  CHECK(r.out == "0\t1\n");
  const auto stats = json_lines(TempDir::read(dir.path("s.jsonl")));
  REQUIRE(stats.size() == 1);
  CHECK(stats[0]["candidates"] == 2);
  CHECK(stats[0]["pigeonhole_candidates"] == 3);
  CHECK(stats[0]["results"] == 1);
  CHECK(stats[0]["verifications"] == stats[0]["candidates"]);
  CHECK_FALSE(stats[0].contains("filter_ns"));
  CHECK(stats[0].begin().key() == "query");

  const auto var = invoke({"hamming", "--data", d, "--queries", q, "--tau", "5", "--parts", "5",
                           "--chain", "2", "--mode", "variable", "--thresholds", "1,2,0,1,1"});
  CHECK(var.code == 0);
  CHECK(var.out == "0\t1\n");
  const auto bad_sum = invoke({"hamming", "--data", d, "--queries", q, "--tau", "5", "--parts", "5",
                               "--mode", "variable", "--thresholds", "1,1,1,1,0"});
  CHECK(bad_sum.code == 2);
}

TEST_CASE("output is deterministic across runs and worker counts") {
  TempDir dir;
  std::mt19937_64 rng(61);
  std::string data, queries;
  for (int i = 0; i < 400; ++i) data += oracle::random_vector(rng, 32).to_string() + "\n";
  for (int i = 0; i < 40; ++i) queries += oracle::random_vector(rng, 32).to_string() + "\n";
  const auto d = dir.write("d.txt", data), q = dir.write("q.txt", queries);
  std::vector<std::string> outs;
  for (const char* threads : {"1", "3", "1"}) {
    setenv("PIGEONRING_THREADS", threads, 1);
    const auto r = invoke({"hamming", "--data", d, "--queries", q, "--tau", "9", "--parts", "4",
                           "--stats", dir.path("s.jsonl")});
    CHECK(r.code == 0);
    outs.push_back(r.out + TempDir::read(dir.path("s.jsonl")));
  }
  unsetenv("PIGEONRING_THREADS");
  CHECK(outs[0] == outs[1]);
  CHECK(outs[0] == outs[2]);
  setenv("PIGEONRING_THREADS", "zero", 1);
  CHECK(invoke({"hamming", "--data", d, "--queries", q, "--tau", "9"}).code == 2);
  unsetenv("PIGEONRING_THREADS");
}

TEST_CASE("set and string commands") {
  TempDir dir;
  const auto d = dir.write("sets.txt", "a b c d\na b c\nx y z\n\n");
  const auto q = dir.write("setq.txt", "a b c d\nq\n");
  const auto r = invoke({"set", "--data", d, "--queries", q, "--jaccard", "0.75", "--chain", "2"});
  CHECK(r.code == 0);
  CHECK(r.out == "0\t0 1\n1\t\n");
  CHECK(invoke({"set", "--data", d, "--queries", q, "--jaccard", "2"}).code == 2);
  CHECK(invoke({"set", "--data", d, "--queries", q, "--jaccard", "0.5", "--mode", "fixed"}).code == 2);

  const auto sd = dir.write("s.txt", "llabcdefkk\nllabcdefkx\nzzzz\n");
  const auto sq = dir.write("sq.txt", "llabghijkk\nllabcdefkk\n");
  const auto s = invoke({"string", "--data", sd, "--queries", sq, "--tau", "2", "--chain", "2"});
  CHECK(s.code == 0);
  CHECK(s.out == "0\t\n1\t0 1\n");
}

TEST_CASE("analyze command") {
  const auto r = invoke({"analyze", "--pdf", "uniform:1", "--m", "3", "--tau", "1", "--l-max", "3"});
  CHECK(r.code == 0);
  CHECK(r.out == "l\tcand\tres\tratio\texcess\n1\t0.875\t0.5\t1.75\t0.75\n2\t0.5\t0.5\t1\t0\n3\t0.5\t0.5\t1\t0\n");
  const auto e = invoke({"analyze", "--pdf", "0.5,0.5", "--m", "3", "--tau", "1", "--exact"});
  CHECK(e.out == r.out);
  TempDir dir;
  const auto mc = invoke({"analyze", "--pdf", "uniform:1", "--m", "3", "--tau", "1", "--monte-carlo",
                          "1000", "--seed", "5", "--stats", dir.path("a.json")});
  CHECK(mc.code == 0);
  const auto rec = json_lines(TempDir::read(dir.path("a.json")));
  REQUIRE(rec.size() == 1);
  CHECK(rec[0]["curve"].size() == 3);
  CHECK(rec[0]["curve"][1]["cand"] == 0.5);
  CHECK(rec[0]["curve"][1].contains("mc_cand"));
  CHECK(invoke({"analyze", "--pdf", "0.5,0.6", "--m", "3", "--tau", "1"}).code == 2);
  CHECK(invoke({"analyze", "--pdf", "uniform:1", "--m", "3", "--tau", "1", "--l-max", "4"}).code == 2);
}

TEST_CASE("verify-theorems command") {
  const auto r = invoke({"verify-theorems", "--m", "4", "--n", "4", "--omega", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("0 violations") != std::string::npos);
  CHECK(invoke({"verify-theorems", "--m", "40", "--n", "4", "--omega", "2"}).code == 2);
}

TEST_CASE("sweep command") {
  TempDir dir;
  std::mt19937_64 rng(62);
  std::string data, queries;
  std::vector<oracle::BinaryVector> base;
  for (int i = 0; i < 600; ++i) {
    base.push_back(i > 0 && rng() % 2 ? oracle::flip_bits(base[rng() % base.size()], rng, 3)
                                      : oracle::random_vector(rng, 48));
    data += base.back().to_string() + "\n";
  }
  for (int i = 0; i < 30; ++i) queries += oracle::flip_bits(base[rng() % base.size()], rng, 4).to_string() + "\n";
  const auto d = dir.write("d.txt", data), q = dir.write("q.txt", queries);
  const auto r = invoke({"sweep", "--problem", "hamming", "--data", d, "--queries", q,
                         "--thresholds-list", "6,10", "--parts", "4", "--stats", dir.path("s.jsonl")});
  REQUIRE(r.code == 0);
  const auto rows = json_lines(TempDir::read(dir.path("s.jsonl")));
  REQUIRE(rows.size() == 8);
  for (std::size_t t = 0; t < 2; ++t) {
    for (std::size_t l = 1; l < 4; ++l)
      CHECK(rows[t * 4 + l]["candidates"] <= rows[t * 4 + l - 1]["candidates"]);
    CHECK(rows[t * 4]["candidates"] == rows[t * 4]["pigeonhole_candidates"]);
    CHECK(rows[t * 4 + 3]["candidates"] == rows[t * 4 + 3]["results"]);
  }
  CHECK(r.out.rfind("threshold\tl\tqueries\tcandidates", 0) == 0);
  // l = 1 of the sweep equals a plain run.
  const auto plain = invoke({"hamming", "--data", d, "--queries", q, "--tau", "6", "--parts", "4",
                             "--chain", "1", "--stats", dir.path("p.jsonl")});
  std::uint64_t total = 0;
  for (const auto& rec : json_lines(TempDir::read(dir.path("p.jsonl")))) total += rec["candidates"].get<std::uint64_t>();
  CHECK(rows[0]["candidates"] == total);
  CHECK(invoke({"sweep", "--problem", "nope", "--data", d, "--queries", q, "--thresholds-list", "1"}).code == 2);
}

TEST_CASE("error handling and exit codes") {
  TempDir dir;
  const auto bad = dir.write("bad.txt", "0101\n0121\n");
  const auto ok = dir.write("ok.txt", "0101\n");
  auto r = invoke({"hamming", "--data", bad, "--queries", ok, "--tau", "1"});
  CHECK(r.code == 3);
  CHECK(r.err.find("line 2") != std::string::npos);
  const auto ragged = dir.write("ragged.txt", "0101\n01010\n");
  CHECK(invoke({"hamming", "--data", ragged, "--queries", ok, "--tau", "1"}).code == 3);
  CHECK(invoke({"hamming", "--data", dir.path("missing"), "--queries", ok, "--tau", "1"}).code == 2);
  CHECK(invoke({"hamming", "--data", ok, "--queries", ok, "--tau", "1", "--chain", "9"}).code == 2);
  CHECK(invoke({"hamming", "--data", ok, "--queries", ok, "--tau", "1", "--mode", "odd"}).code == 2);
  CHECK(invoke({"hamming", "--data", ok, "--queries", ok}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
}

}  // TEST_SUITE
