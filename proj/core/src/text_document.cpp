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
#include "levinv/text_document.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "levinv/error.hpp"

namespace levinv {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) return false;
  }
  return true;
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
  throw ParseError(source + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

bool TextDocument::has_section(std::string_view name) const {
  for (const auto& [key, values] : sections) {
    if (key == name) return true;
  }
  return false;
}

const std::vector<double>& TextDocument::section(std::string_view name) const {
  for (const auto& [key, values] : sections) {
    if (key == name) return values;
  }
  throw ParseError("missing section '" + std::string(name) + ":'");
}

const std::string& TextDocument::value(const std::string& key) const {
  auto it = header.find(key);
  if (it == header.end()) throw ParseError("missing header key '" + key + "'");
  return it->second;
}

long long TextDocument::integer(const std::string& key) const {
  const std::string& text = value(key);
  long long out = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("header '" + key + "' is not an integer: " + text);
  }
  return out;
}

double TextDocument::real(const std::string& key) const {
  const std::string& text = value(key);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(out)) {
    throw ParseError("header '" + key + "' is not a finite number: " + text);
  }
  return out;
}

TextDocument parse_text_document(std::string_view text, const std::string& source) {
  TextDocument doc;
  std::vector<double>* current = nullptr;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.back() == ':' && is_identifier(trim(line.substr(0, line.size() - 1)))) {
      std::string name(trim(line.substr(0, line.size() - 1)));
      if (doc.has_section(name)) fail(source, line_no, "duplicate section '" + name + "'");
      doc.sections.emplace_back(std::move(name), std::vector<double>{});
      current = &doc.sections.back().second;
      continue;
    }

    if (const auto eq = line.find('='); eq != std::string_view::npos && current == nullptr) {
      std::string key(trim(line.substr(0, eq)));
      if (!is_identifier(key)) fail(source, line_no, "bad header key '" + key + "'");
      if (doc.header.count(key)) fail(source, line_no, "duplicate header key '" + key + "'");
      doc.header.emplace(std::move(key), std::string(trim(line.substr(eq + 1))));
      continue;
    }

    if (current == nullptr) fail(source, line_no, "numbers outside of a section");

    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      std::string_view token = line.substr(i, j - i);
      // from_chars rejects a leading '+', accept it for hand-written files.
      if (token.size() > 1 && token.front() == '+') token.remove_prefix(1);
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec != std::errc() || ptr != token.data() + token.size()) {
        fail(source, line_no, "cannot parse number '" + std::string(token) + "'");
      }
      if (!std::isfinite(value)) fail(source, line_no, "non-finite value '" + std::string(token) + "'");
      current->push_back(value);
      i = j;
    }
  }
  return doc;
}

std::string format_double(double value) {
  char buf[64];
  // Try shorter representations first; 17 digits always round-trips.
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    double back = 0.0;
    std::from_chars(buf, buf + std::char_traits<char>::length(buf), back);
    if (back == value) break;
  }
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << contents;
  out.flush();
  if (!out) throw IoError("error while writing '" + path + "'");
}

}  // namespace levinv
