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

// Line-oriented dataset files.

#include <string>
#include <vector>

#include "pigeonring/hamming.hpp"

namespace pigeonring::io {

/// Every line of the file without its trailing newline. Throws ConfigError
/// if the file cannot be opened.
std::vector<std::string> read_lines(const std::string& path);

/// One vector per line ('0'/'1' or 0x-hex), all of one dimensionality.
std::vector<hamming::BinaryVector> parse_vectors(const std::vector<std::string>& lines);

/// One record per line, tokens separated by ASCII whitespace.
std::vector<std::vector<std::string>> parse_records(const std::vector<std::string>& lines);

}  // namespace pigeonring::io
