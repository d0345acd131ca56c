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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ripple/dataset.hpp"
#include "ripple/kg.hpp"

namespace ripple {

// Knobs for a corpus with planted community structure: entities split into
// communities, KG links mostly stay inside a community, and every user clicks
// items of a single community.
struct PlantedConfig {
  int communities = 2;
  int entities_per_community = 50;
  int items_per_community = 20;  // the first entities of each community
  int users = 200;
  int relations = 4;
  int out_degree = 4;             // KG links leaving every entity
  double cross_link_prob = 0.02;  // a link's tail leaves the community
  int positives_per_user = 15;    // own-community items rated 5
  double noise = 0.05;            // a positive is swapped to a foreign item
  std::uint64_t seed = 7;
};

struct RawRating {
  std::string user;
  std::string item;
  double rating;
};

// String-level corpus, the same shape as the TSV inputs.
struct PlantedCorpus {
  std::vector<std::vector<std::string>> triples;  // head, relation, tail
  std::vector<RawRating> ratings;
  std::vector<std::pair<std::string, std::string>> item_map;
  std::vector<int> user_community;  // by user index ("u<i>")
  std::vector<int> item_community;  // by item index ("i<c>_<k>")
};

// Users rate `positives_per_user` of their community's items with 5 and the
// remaining community items with 2, so the only unrated items (and thus the
// sampled negatives) lie outside the community.
PlantedCorpus make_planted_corpus(const PlantedConfig& cfg);

// Writes kg.tsv, ratings.tsv and item_map.tsv into `dir`.
void write_planted_corpus(const PlantedCorpus& corpus,
                          const std::filesystem::path& dir);

// Parsed form, loaded through the same readers as the files.
struct PlantedData {
  KnowledgeGraph kg;
  RatingTable ratings;
};
PlantedData load_planted(const PlantedCorpus& corpus);

}  // namespace ripple
