// Copyright 2026 The Ripple Authors
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

// Internal helpers for the tab-separated input formats.

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "ripple/error.hpp"

namespace ripple::detail {

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

// Calls fn(fields, line_number) for each data line. Skips blank lines and
// lines whose first character is '#'; strips a trailing '\r'. Rejects lines
// whose field count differs from `expected` or that contain an empty field.
// `lines_consumed` offsets line numbers when the caller already read a header.
template <class Fn>
void for_each_record(std::istream& in, std::size_t expected,
                     std::string_view what, Fn&& fn,
                     std::size_t lines_consumed = 0) {
  std::string line;
  std::size_t line_no = lines_consumed;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_tabs(line);
    if (fields.size() != expected) {
      throw ParseError(std::string(what) + ": line " + std::to_string(line_no) +
                           ": expected " + std::to_string(expected) +
                           " tab-separated fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    for (const auto f : fields) {
      if (f.empty()) {
        throw ParseError(std::string(what) + ": line " +
                             std::to_string(line_no) + ": empty field",
                         line_no);
      }
    }
    fn(fields, line_no);
  }
}

}  // namespace ripple::detail
