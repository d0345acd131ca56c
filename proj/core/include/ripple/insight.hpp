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
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ripple/dataset.hpp"
#include "ripple/kg.hpp"
#include "ripple/model.hpp"

namespace ripple {

struct ExplanationNode {
  EntityId entity;
  int level = 0;  // 0 for seeds, k for tails reached at hop k

  auto operator<=>(const ExplanationNode&) const = default;
};

struct ExplanationEdge {
  int hop = 1;  // 1-based
  Triple triple;
  // Relevance logit probe^T R h, i.e. the log of the unnormalized relevance.
  double score = 0.0;
};

struct ExplanationPath {
  std::vector<ExplanationEdge> edges;  // edges[j].hop == j + 1
};

struct ExplanationGraph {
  ItemId item;
  std::vector<ExplanationNode> nodes;  // sorted by (entity, level)
  std::vector<ExplanationEdge> edges;  // distinct (hop, triple), hop order
  std::vector<ExplanationPath> paths;
  bool truncated = false;  // path enumeration hit max_paths
};

inline constexpr double kDefaultExplainThreshold = -1.0;

// Runs the forward pass and keeps the sampled ripple edges whose relevance
// logit is >= threshold. Paths are the maximal chains through kept edges that
// start at a seed on hop 1 and move one hop at a time.
ExplanationGraph explain(const RippleSets& ripple, ItemId item,
                         const ModelParams& params, double threshold,
                         std::size_t max_paths = 100000);

// Graphviz DOT text; nodes are labelled with entity names and hop levels,
// edges with relation name and score.
void write_dot(std::ostream& out, const ExplanationGraph& graph,
               const KnowledgeGraph& kg, const std::string& title);

// One path per line: `seed -[relation score]-> entity -[...]-> entity`.
void write_paths(std::ostream& out, const ExplanationGraph& graph,
                 const KnowledgeGraph& kg);

struct EntityMass {
  EntityId entity;
  std::vector<double> per_hop;  // attention mass received at each hop
  double total = 0.0;
};

// Sorted by entity id.
struct SuperpositionReport {
  std::vector<EntityMass> entities;

  // Zero mass for entities absent from every ripple set.
  double mass(EntityId e) const;
  double mass(EntityId e, std::size_t hop) const;
};

// Sums relevance probabilities by tail entity, per hop and in total.
SuperpositionReport superposition(const RippleSets& ripple, ItemId item,
                                  const ModelParams& params);

struct OverlapRow {
  int hop = 1;
  std::size_t pairs_with = 0;     // sampled pairs with a common rater
  std::size_t pairs_without = 0;  // sampled pairs without one
  std::optional<double> mean_with;
  std::optional<double> mean_without;
  std::optional<double> ratio;  // mean_with / mean_without
};

// Samples `pair_count` distinct-item pairs, splits them by whether some user
// has both as train positives, and averages the number of shared k-hop
// neighbors of their entities for k = 1..max_hop.
std::vector<OverlapRow> neighbor_overlap_study(const KnowledgeGraph& kg,
                                               const InteractionDataset& ds,
                                               std::size_t pair_count,
                                               int max_hop,
                                               std::uint64_t rng_seed);

void write_overlap_tsv(std::ostream& out, const std::vector<OverlapRow>& rows);

}  // namespace ripple
