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

#include "ripple/synthetic.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "ripple/error.hpp"

namespace ripple {

namespace {

std::string entity_name(int community, int k) {
  return "c" + std::to_string(community) + "_e" + std::to_string(k);
}

std::string item_name(int community, int k) {
  return "i" + std::to_string(community) + "_" + std::to_string(k);
}

}  // namespace

PlantedCorpus make_planted_corpus(const PlantedConfig& cfg) {
  if (cfg.communities < 2 || cfg.entities_per_community < 1 ||
      cfg.items_per_community < 1 ||
      cfg.items_per_community > cfg.entities_per_community || cfg.users < 1 ||
      cfg.relations < 1 || cfg.out_degree < 1 || cfg.positives_per_user < 1 ||
      cfg.positives_per_user > cfg.items_per_community) {
    throw DomainError("invalid planted corpus configuration");
  }
  PlantedCorpus corpus;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> rel(0, cfg.relations - 1);
  std::uniform_int_distribution<int> local(0, cfg.entities_per_community - 1);
  std::uniform_int_distribution<int> other(0, cfg.communities - 2);

  for (int c = 0; c < cfg.communities; ++c) {
    for (int k = 0; k < cfg.entities_per_community; ++k) {
      for (int j = 0; j < cfg.out_degree; ++j) {
        int tc = c;
        if (unit(rng) < cfg.cross_link_prob) {
          tc = other(rng);
          if (tc >= c) ++tc;
        }
        int tk = local(rng);
        corpus.triples.push_back({entity_name(c, k), "rel_" + std::to_string(rel(rng)),
                                  entity_name(tc, tk)});
      }
    }
  }

  for (int c = 0; c < cfg.communities; ++c) {
    for (int k = 0; k < cfg.items_per_community; ++k) {
      corpus.item_map.emplace_back(item_name(c, k), entity_name(c, k));
      corpus.item_community.push_back(c);
    }
  }

  std::uniform_int_distribution<int> community(0, cfg.communities - 1);
  std::uniform_int_distribution<int> foreign_item(0, cfg.items_per_community - 1);
  std::vector<int> order(static_cast<std::size_t>(cfg.items_per_community));
  for (int u = 0; u < cfg.users; ++u) {
    const std::string user = "u" + std::to_string(u);
    const int c = community(rng);
    corpus.user_community.push_back(c);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (int j = 0; j < cfg.items_per_community; ++j) {
      const int k = order[static_cast<std::size_t>(j)];
      if (j >= cfg.positives_per_user) {
        corpus.ratings.push_back({user, item_name(c, k), 2.0});
      } else if (unit(rng) < cfg.noise) {
        int fc = other(rng);
        if (fc >= c) ++fc;
        corpus.ratings.push_back({user, item_name(fc, foreign_item(rng)), 5.0});
      } else {
        corpus.ratings.push_back({user, item_name(c, k), 5.0});
      }
    }
  }
  return corpus;
}

void write_planted_corpus(const PlantedCorpus& corpus,
                          const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream kg(dir / "kg.tsv");
  std::ofstream ratings(dir / "ratings.tsv");
  std::ofstream items(dir / "item_map.tsv");
  if (!kg || !ratings || !items) {
    throw FormatError("cannot write planted corpus into " + dir.string());
  }
  kg << "# head\trelation\ttail\n";
  for (const auto& t : corpus.triples) kg << t[0] << '\t' << t[1] << '\t' << t[2] << '\n';
  for (const auto& r : corpus.ratings) {
    ratings << r.user << '\t' << r.item << '\t' << r.rating << '\n';
  }
  for (const auto& [item, entity] : corpus.item_map) items << item << '\t' << entity << '\n';
}

PlantedData load_planted(const PlantedCorpus& corpus) {
  std::stringstream kg_text;
  for (const auto& t : corpus.triples) kg_text << t[0] << '\t' << t[1] << '\t' << t[2] << '\n';
  std::stringstream ratings_text;
  for (const auto& r : corpus.ratings) {
    ratings_text << r.user << '\t' << r.item << '\t' << r.rating << '\n';
  }
  std::stringstream map_text;
  for (const auto& [item, entity] : corpus.item_map) map_text << item << '\t' << entity << '\n';

  PlantedData data;
  data.kg = load_kg(kg_text);
  data.ratings = load_ratings(ratings_text, map_text, data.kg);
  return data;
}

}  // namespace ripple
