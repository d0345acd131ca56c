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

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ripple/dataset.hpp"
#include "ripple/model.hpp"

namespace ripple {

// Everything a CLI run needs. Loaded from `key=value` lines ('#' starts a
// comment) and then overridden key by key from the command line.
struct RunConfig {
  std::filesystem::path kg;
  std::filesystem::path ratings;
  std::filesystem::path item_map;
  std::filesystem::path out = "ripple_out";
  std::filesystem::path checkpoint;  // empty: <out>/model.ckpt

  std::optional<double> threshold;  // rating threshold; "none" = all positive
  SplitRatios split;
  Hyperparams hp;

  double explain_threshold = -1.0;
  std::vector<std::size_t> topk;  // empty: no top-K table
  std::size_t pair_count = 10000;
  int max_hop = 4;

  std::set<std::string> given;  // keys set explicitly

  std::filesystem::path checkpoint_path() const {
    return checkpoint.empty() ? out / "model.ckpt" : checkpoint;
  }
};

// Throws ParseError for unknown keys or unparsable values.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

// Parses a whole config stream; errors carry the line number.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

// Accepted keys, for --help text.
const std::vector<std::string>& config_keys();

// `key=value` lines for every setting, in config_keys() order.
std::string dump_config(const RunConfig& cfg);

}  // namespace ripple
