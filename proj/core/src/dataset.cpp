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

#include "ripple/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include <spdlog/spdlog.h>

#include "ripple/error.hpp"
#include "tsv.hpp"

namespace ripple {

namespace {

double parse_rating(std::string_view s, std::size_t line_no) {
  // std::from_chars for double is available in libstdc++ 11.
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ParseError("ratings: line " + std::to_string(line_no) +
                         ": rating is not a finite number: '" +
                         std::string(s) + "'",
                     line_no);
  }
  return v;
}

}  // namespace

const char* to_string(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kEval: return "eval";
    case Split::kTest: return "test";
  }
  return "?";
}

std::optional<Split> parse_split(std::string_view s) {
  if (s == "train") return Split::kTrain;
  if (s == "eval") return Split::kEval;
  if (s == "test") return Split::kTest;
  return std::nullopt;
}

RatingTable load_ratings(std::istream& ratings, std::istream& item_map,
                         const KnowledgeGraph& kg) {
  // item name -> entity; std::nullopt marks an ambiguous or unmatched item
  std::map<std::string, std::optional<EntityId>, std::less<>> mapping;
  detail::for_each_record(item_map, 2, "item map", [&](const auto& f, std::size_t) {
    const auto entity = kg.find_entity(f[1]);
    auto [it, inserted] = mapping.try_emplace(std::string(f[0]), entity);
    if (!inserted && it->second != entity) it->second = std::nullopt;
  });

  RatingTable table;
  std::set<std::string, std::less<>> unmapped;
  detail::for_each_record(ratings, 3, "ratings", [&](const auto& f, std::size_t line_no) {
    const double value = parse_rating(f[2], line_no);
    auto it = mapping.find(f[1]);
    if (it == mapping.end() || !it->second) {
      ++table.dropped_ratings;
      unmapped.emplace(f[1]);
      return;
    }
    const UserId u(table.users.intern(f[0]));
    const std::size_t before = table.items.size();
    const ItemId v(table.items.intern(f[1]));
    if (table.items.size() != before) table.item_to_entity.push_back(*it->second);
    table.ratings.push_back(Rating{u, v, value});
  });
  table.dropped_items = unmapped.size();
  return table;
}

RatingTable load_ratings_files(const std::filesystem::path& ratings,
                               const std::filesystem::path& item_map,
                               const KnowledgeGraph& kg) {
  std::ifstream r(ratings);
  if (!r) throw FormatError("cannot open ratings file " + ratings.string());
  std::ifstream m(item_map);
  if (!m) throw FormatError("cannot open item map file " + item_map.string());
  return load_ratings(r, m, kg);
}

std::vector<std::size_t> InteractionDataset::indices(Split s) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < split.size(); ++i) {
    if (split[i] == s) out.push_back(i);
  }
  return out;
}

Reported<InteractionDataset> implicit_transform(const RatingTable& table,
                                                std::optional<double> threshold,
                                                std::uint64_t rng_seed) {
  Reported<InteractionDataset> result;
  InteractionDataset& ds = result.value;
  ds.users = table.users;
  ds.items = table.items;
  ds.item_to_entity = table.item_to_entity;

  const std::size_t n_users = table.user_count();
  const std::size_t n_items = table.item_count();
  std::vector<std::vector<ItemId>> rated(n_users);
  std::vector<std::vector<ItemId>> positives(n_users);
  for (const auto& r : table.ratings) {
    rated[r.user.index()].push_back(r.item);
    if (!threshold || r.rating >= *threshold) {
      positives[r.user.index()].push_back(r.item);
    }
  }

  std::mt19937_64 rng(rng_seed);
  for (std::size_t u = 0; u < n_users; ++u) {
    auto& pos = positives[u];
    std::sort(pos.begin(), pos.end());
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
    auto& seen = rated[u];
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());

    std::vector<ItemId> unrated;
    unrated.reserve(n_items - seen.size());
    for (std::size_t v = 0; v < n_items; ++v) {
      if (!std::binary_search(seen.begin(), seen.end(), ItemId(v))) {
        unrated.emplace_back(v);
      }
    }

    std::size_t wanted = pos.size();
    if (unrated.size() < wanted) {
      result.warnings.push_back(
          "user '" + table.users.name(u) + "' has " + std::to_string(wanted) +
          " positives but only " + std::to_string(unrated.size()) +
          " unrated items; negatives capped");
      spdlog::warn("{}", result.warnings.back());
      wanted = unrated.size();
    }
    std::vector<ItemId> negatives;
    negatives.reserve(wanted);
    std::sample(unrated.begin(), unrated.end(), std::back_inserter(negatives),
                wanted, rng);

    const UserId user(u);
    for (const auto v : pos) ds.examples.push_back(Interaction{user, v, 1});
    for (const auto v : negatives) ds.examples.push_back(Interaction{user, v, 0});
  }
  return result;
}

Reported<InteractionDataset> split(InteractionDataset ds,
                                   const SplitRatios& ratios,
                                   std::uint64_t rng_seed) {
  if (ratios.train < 0 || ratios.eval < 0 || ratios.test < 0 ||
      std::abs(ratios.train + ratios.eval + ratios.test - 1.0) > 1e-9) {
    throw DomainError("split ratios must be non-negative and sum to 1");
  }
  Reported<InteractionDataset> result;
  const std::size_t n = ds.examples.size();
  ds.split.assign(n, Split::kTrain);
  if (n < 3) {
    result.warnings.push_back("only " + std::to_string(n) +
                              " examples; all assigned to train");
    spdlog::warn("{}", result.warnings.back());
    result.value = std::move(ds);
    return result;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(rng_seed);
  std::shuffle(order.begin(), order.end(), rng);

  const auto count = [n](double r) {
    return std::min<std::size_t>(n, static_cast<std::size_t>(std::llround(
                                        static_cast<double>(n) * r)));
  };
  const std::size_t n_train = count(ratios.train);
  const std::size_t n_eval = std::min(n - n_train, count(ratios.eval));
  for (std::size_t i = 0; i < n; ++i) {
    Split s = Split::kTest;
    if (i < n_train) {
      s = Split::kTrain;
    } else if (i < n_train + n_eval) {
      s = Split::kEval;
    }
    ds.split[order[i]] = s;
  }
  result.value = std::move(ds);
  return result;
}

std::vector<EntityId> user_history(const InteractionDataset& ds, UserId user) {
  if (user.index() >= ds.user_count()) {
    throw DomainError("user id " + std::to_string(user.value) + " out of range");
  }
  if (!ds.is_split()) throw DomainError("user_history requires a split dataset");
  std::vector<EntityId> out;
  for (std::size_t i = 0; i < ds.examples.size(); ++i) {
    const auto& ex = ds.examples[i];
    if (ex.user == user && ex.label == 1 && ds.split[i] == Split::kTrain) {
      out.push_back(ds.item_to_entity[ex.item.index()]);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::vector<EntityId>> user_histories(const InteractionDataset& ds) {
  if (!ds.is_split()) throw DomainError("user_histories requires a split dataset");
  std::vector<std::vector<EntityId>> out(ds.user_count());
  for (std::size_t i = 0; i < ds.examples.size(); ++i) {
    const auto& ex = ds.examples[i];
    if (ex.label == 1 && ds.split[i] == Split::kTrain) {
      out[ex.user.index()].push_back(ds.item_to_entity[ex.item.index()]);
    }
  }
  for (auto& h : out) {
    std::sort(h.begin(), h.end());
    h.erase(std::unique(h.begin(), h.end()), h.end());
  }
  return out;
}

std::vector<std::vector<ItemId>> items_by_user(const InteractionDataset& ds,
                                               Split s,
                                               std::optional<int> label) {
  std::vector<std::vector<ItemId>> out(ds.user_count());
  for (std::size_t i = 0; i < ds.examples.size(); ++i) {
    const auto& ex = ds.examples[i];
    const Split si = ds.is_split() ? ds.split[i] : Split::kTrain;
    if (si != s || (label && ex.label != *label)) continue;
    out[ex.user.index()].push_back(ex.item);
  }
  for (auto& v : out) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return out;
}

}  // namespace ripple
