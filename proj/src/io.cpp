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

#include "pigeonring/io.hpp"

#include <fstream>

#include "pigeonring/errors.hpp"

namespace pigeonring::io {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));
  return lines;
}

std::vector<hamming::BinaryVector> parse_vectors(const std::vector<std::string>& lines) {
  std::vector<hamming::BinaryVector> out;
  out.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      out.push_back(hamming::BinaryVector::parse(lines[i]));
    } catch (const DataFormatError& e) {
      throw DataFormatError(e.what(), i + 1);
    }
    if (out.back().dim() != out.front().dim())
      throw DataFormatError("expected " + std::to_string(out.front().dim()) + " dimensions, got " +
                                std::to_string(out.back().dim()),
                            i + 1);
  }
  return out;
}

std::vector<std::vector<std::string>> parse_records(const std::vector<std::string>& lines) {
  std::vector<std::vector<std::string>> out;
  out.reserve(lines.size());
  auto space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
  };
  for (const auto& line : lines) {
    auto& rec = out.emplace_back();
    for (std::size_t i = 0; i < line.size();) {
      while (i < line.size() && space(line[i])) ++i;
      const std::size_t start = i;
      while (i < line.size() && !space(line[i])) ++i;
      if (i > start) rec.emplace_back(line.substr(start, i - start));
    }
  }
  return out;
}

}  // namespace pigeonring::io
