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

#include "ripple/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ripple/error.hpp"

namespace ripple {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw ParseError("invalid value for '" + std::string(key) + "': '" +
                       std::string(value) + "'",
                   0);
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
  T v{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end) bad_value(key, value);
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(v)) bad_value(key, value);
  }
  return v;
}

std::vector<std::string_view> split_commas(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(',', start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string join_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "kg",        "ratings",    "item_map",   "out",         "checkpoint",
      "threshold", "split",      "dim",        "hops",        "ripple_size",
      "l2_weight", "kge_weight", "lr",         "batch_size",  "epochs",
      "seed",      "explain_threshold", "topk", "pair_count", "max_hop"};
  return keys;
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  value = trim(value);
  key = trim(key);
  if (key == "kg") {
    cfg.kg = std::string(value);
  } else if (key == "ratings") {
    cfg.ratings = std::string(value);
  } else if (key == "item_map") {
    cfg.item_map = std::string(value);
  } else if (key == "out") {
    cfg.out = std::string(value);
  } else if (key == "checkpoint") {
    cfg.checkpoint = std::string(value);
  } else if (key == "threshold") {
    if (value == "none" || value.empty()) {
      cfg.threshold.reset();
    } else {
      cfg.threshold = parse_number<double>(key, value);
    }
  } else if (key == "split") {
    const auto parts = split_commas(value);
    if (parts.size() != 3) bad_value(key, value);
    cfg.split = {parse_number<double>(key, parts[0]), parse_number<double>(key, parts[1]),
                 parse_number<double>(key, parts[2])};
  } else if (key == "dim") {
    cfg.hp.dim = parse_number<int>(key, value);
  } else if (key == "hops") {
    cfg.hp.hops = parse_number<int>(key, value);
  } else if (key == "ripple_size") {
    cfg.hp.ripple_size = parse_number<int>(key, value);
  } else if (key == "l2_weight") {
    cfg.hp.l2_weight = parse_number<double>(key, value);
  } else if (key == "kge_weight") {
    cfg.hp.kge_weight = parse_number<double>(key, value);
  } else if (key == "lr") {
    cfg.hp.lr = parse_number<double>(key, value);
  } else if (key == "batch_size") {
    cfg.hp.batch_size = parse_number<int>(key, value);
  } else if (key == "epochs") {
    cfg.hp.epochs = parse_number<int>(key, value);
  } else if (key == "seed") {
    cfg.hp.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "explain_threshold") {
    if (value == "-inf") {
      cfg.explain_threshold = -std::numeric_limits<double>::infinity();
    } else {
      cfg.explain_threshold = parse_number<double>(key, value);
    }
  } else if (key == "topk") {
    cfg.topk.clear();
    if (!value.empty()) {
      for (const auto p : split_commas(value)) {
        const auto k = parse_number<std::size_t>(key, p);
        if (k == 0) bad_value(key, value);
        cfg.topk.push_back(k);
      }
    }
  } else if (key == "pair_count") {
    cfg.pair_count = parse_number<std::size_t>(key, value);
  } else if (key == "max_hop") {
    cfg.max_hop = parse_number<int>(key, value);
  } else {
    throw ParseError("unknown config key '" + std::string(key) + "'", 0);
  }
  cfg.given.insert(std::string(key));
}

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const auto body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("config: line " + std::to_string(line_no) + ": expected key=value",
                       line_no);
    }
    try {
      apply_setting(cfg, body.substr(0, eq), body.substr(eq + 1));
    } catch (const ParseError& e) {
      throw ParseError("config: line " + std::to_string(line_no) + ": " + e.what(), line_no);
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config file " + path.string());
  return parse_config(in);
}

std::string dump_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "kg=" << cfg.kg.string() << '\n'
     << "ratings=" << cfg.ratings.string() << '\n'
     << "item_map=" << cfg.item_map.string() << '\n'
     << "out=" << cfg.out.string() << '\n'
     << "checkpoint=" << cfg.checkpoint.string() << '\n'
     << "threshold=" << (cfg.threshold ? join_double(*cfg.threshold) : "none") << '\n'
     << "split=" << join_double(cfg.split.train) << ',' << join_double(cfg.split.eval) << ','
     << join_double(cfg.split.test) << '\n'
     << "dim=" << cfg.hp.dim << '\n'
     << "hops=" << cfg.hp.hops << '\n'
     << "ripple_size=" << cfg.hp.ripple_size << '\n'
     << "l2_weight=" << join_double(cfg.hp.l2_weight) << '\n'
     << "kge_weight=" << join_double(cfg.hp.kge_weight) << '\n'
     << "lr=" << join_double(cfg.hp.lr) << '\n'
     << "batch_size=" << cfg.hp.batch_size << '\n'
     << "epochs=" << cfg.hp.epochs << '\n'
     << "seed=" << cfg.hp.seed << '\n'
     << "explain_threshold=" << join_double(cfg.explain_threshold) << '\n'
     << "topk=";
  for (std::size_t i = 0; i < cfg.topk.size(); ++i) os << (i ? "," : "") << cfg.topk[i];
  os << '\n' << "pair_count=" << cfg.pair_count << '\n' << "max_hop=" << cfg.max_hop << '\n';
  return os.str();
}

}  // namespace ripple
