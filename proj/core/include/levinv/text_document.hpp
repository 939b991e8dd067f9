// Copyright 2026 The levinv Authors. All rights reserved.
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

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace levinv {

/// Line-oriented "key=value" header followed by named numeric sections.
///
///   # comment
///   n=3
///   A:
///   1 2
///   3 4
///
/// Shared by instance files and generator sidecars.
struct TextDocument {
  std::map<std::string, std::string> header;
  std::vector<std::pair<std::string, std::vector<double>>> sections;

  bool has_section(std::string_view name) const;
  const std::vector<double>& section(std::string_view name) const;  // throws ParseError
  const std::string& value(const std::string& key) const;             // throws ParseError
  long long integer(const std::string& key) const;
  double real(const std::string& key) const;
};

/// Throws ParseError on malformed lines and on non-finite numbers.
TextDocument parse_text_document(std::string_view text, const std::string& source);

/// Shortest decimal string that round-trips at 17 significant digits.
std::string format_double(double value);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace levinv
