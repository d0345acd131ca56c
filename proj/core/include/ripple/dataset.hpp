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
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ripple/ids.hpp"
#include "ripple/kg.hpp"
#include "ripple/vocabulary.hpp"

namespace ripple {

// A value together with the non-fatal warnings produced while computing it.
template <class T>
struct Reported {
  T value;
  std::vector<std::string> warnings;
};

struct Rating {
  UserId user;
  ItemId item;
  double rating = 0.0;
};

// Raw explicit feedback restricted to items that map to exactly one KG entity.
struct RatingTable {
  Vocabulary users;
  Vocabulary items;
  std::vector<EntityId> item_to_entity;  // indexed by ItemId
  std::vector<Rating> ratings;
  std::size_t dropped_ratings = 0;  // ratings on unmapped items
  std::size_t dropped_items = 0;    // distinct unmapped or ambiguous items

  std::size_t user_count() const { return users.size(); }
  std::size_t item_count() const { return items.size(); }
};

// Reads `user<TAB>item<TAB>rating` and `item<TAB>entity` streams. Items whose
// entity name is not in `kg`, or that are listed with more than one entity,
// are excluded together with their ratings.
RatingTable load_ratings(std::istream& ratings, std::istream& item_map,
                         const KnowledgeGraph& kg);
RatingTable load_ratings_files(const std::filesystem::path& ratings,
                               const std::filesystem::path& item_map,
                               const KnowledgeGraph& kg);

enum class Split : std::uint8_t { kTrain = 0, kEval = 1, kTest = 2 };

const char* to_string(Split s);
std::optional<Split> parse_split(std::string_view s);

struct Interaction {
  UserId user;
  ItemId item;
  int label = 0;  // 0 or 1
};

struct SplitRatios {
  double train = 0.6;
  double eval = 0.2;
  double test = 0.2;
};

// Binary implicit-feedback examples. `split` is empty until split() runs and
// otherwise holds one entry per example.
struct InteractionDataset {
  Vocabulary users;
  Vocabulary items;
  std::vector<EntityId> item_to_entity;
  std::vector<Interaction> examples;
  std::vector<Split> split;

  std::size_t user_count() const { return users.size(); }
  std::size_t item_count() const { return items.size(); }
  bool is_split() const { return !examples.empty() && split.size() == examples.size(); }

  // Example indices in `s`, ascending.
  std::vector<std::size_t> indices(Split s) const;
};

// Positives are ratings >= threshold (every rating when absent). Each user
// then gets as many negatives as positives, drawn without replacement from
// the items that user never rated. A user whose unrated pool is too small
// gets all of it and a warning.
Reported<InteractionDataset> implicit_transform(
    const RatingTable& table, std::optional<double> threshold,
    std::uint64_t rng_seed);

// Uniform random partition of example indices. Fewer than three examples go
// entirely to train with a warning. Ratios must be >= 0 and sum to 1.
Reported<InteractionDataset> split(InteractionDataset ds,
                                   const SplitRatios& ratios,
                                   std::uint64_t rng_seed);

// Entities of the user's label-1 train examples, sorted and unique.
std::vector<EntityId> user_history(const InteractionDataset& ds, UserId user);

// user_history for every user in one pass, indexed by UserId.
std::vector<std::vector<EntityId>> user_histories(const InteractionDataset& ds);

// Items per user among examples in `s`, optionally filtered by label.
// Sorted and unique.
std::vector<std::vector<ItemId>> items_by_user(const InteractionDataset& ds,
                                               Split s,
                                               std::optional<int> label);

}  // namespace ripple
