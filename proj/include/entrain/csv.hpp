// Copyright 2026 The Entrain Authors
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

#ifndef ENTRAIN_CSV_HPP_
#define ENTRAIN_CSV_HPP_

// Minimal CSV helpers shared by the import/export paths. Fields never contain
// commas or quotes in any of the formats this library reads or writes.

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace entrain::csv {

/// Shortest round-trip decimal form; "nan" for NaN.
std::string format_number(double v);

std::vector<std::string> split_line(std::string_view line);

/// Strict: the whole field must parse. Throws Error(kParseError).
double parse_number(std::string_view field, std::string_view what);

/// Reads non-empty lines, stripping '\r'. Returns false at end of input.
bool next_line(std::istream& in, std::string& line);

/// Reads the header line and checks it matches `expected` exactly (after
/// trimming whitespace around fields).
void expect_header(std::istream& in, const std::vector<std::string_view>& expected);

}  // namespace entrain::csv

#endif  // ENTRAIN_CSV_HPP_
