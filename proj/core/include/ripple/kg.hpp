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
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "ripple/ids.hpp"
#include "ripple/vocabulary.hpp"

namespace ripple {

// Outgoing link stored in the head-indexed adjacency.
struct Edge {
  RelationId relation;
  EntityId tail;

  constexpr auto operator<=>(const Edge&) const = default;
};

// Immutable knowledge graph: entity/relation vocabularies plus a CSR
// adjacency grouped by head. Triples are unique; order is first appearance.
class KnowledgeGraph {
 public:
  KnowledgeGraph() = default;

  // Builds from already-interned ids. Duplicates are dropped, self-loops kept.
  // Throws DomainError if any id is out of range.
  static KnowledgeGraph from_triples(std::size_t entity_count,
                                     std::size_t relation_count,
                                     std::vector<Triple> triples);

  // Same, with names attached. Vocabulary sizes define the counts.
  static KnowledgeGraph from_triples(Vocabulary entities, Vocabulary relations,
                                     std::vector<Triple> triples);

  std::size_t entity_count() const { return entity_count_; }
  std::size_t relation_count() const { return relation_count_; }
  std::span<const Triple> triples() const { return triples_; }
  bool empty() const { return triples_.empty(); }

  std::span<const Edge> neighbors(EntityId head) const;
  bool contains(const Triple& t) const { return lookup_.contains(t); }
  bool valid(EntityId e) const { return e.index() < entity_count_; }
  bool valid(RelationId r) const { return r.index() < relation_count_; }

  // Names fall back to "#<id>" for graphs built from bare ids.
  std::string entity_name(EntityId e) const;
  std::string relation_name(RelationId r) const;
  std::optional<EntityId> find_entity(std::string_view name) const;
  std::optional<RelationId> find_relation(std::string_view name) const;

  const Vocabulary& entity_vocabulary() const { return entities_; }
  const Vocabulary& relation_vocabulary() const { return relations_; }

 private:
  void build_index();

  std::size_t entity_count_ = 0;
  std::size_t relation_count_ = 0;
  std::vector<Triple> triples_;
  std::vector<std::size_t> offsets_;  // entity_count_ + 1
  std::vector<Edge> edges_;
  std::unordered_set<Triple, TripleHash> lookup_;
  Vocabulary entities_;
  Vocabulary relations_;
};

// Parses `head<TAB>relation<TAB>tail` lines; `#` lines and blank lines are
// skipped. Ids are assigned in first-appearance order (head, relation, tail).
KnowledgeGraph load_kg(std::istream& in);
KnowledgeGraph load_kg_file(const std::filesystem::path& path);

// Exact k-hop relevant entities: level 0 is `seeds`, level k is every tail of
// a triple whose head is in level k-1. Returned sorted and unique.
std::vector<EntityId> relevant_entities(const KnowledgeGraph& kg,
                                        std::span<const EntityId> seeds,
                                        int k);

// All triples whose head is in `frontier`, in (sorted head, adjacency) order.
// `frontier` need not be sorted or unique.
std::vector<Triple> candidate_pool(const KnowledgeGraph& kg,
                                   std::span<const EntityId> frontier);

// Per-user sampled ripple sets: hops[k] holds exactly `size` triples drawn
// with replacement from the triples leaving the previous hop's tails (hop 0
// leaves the seeds). fallback[k] is set when that pool was empty and hop k is
// a verbatim copy of hop k-1.
struct RippleSets {
  UserId user;
  std::vector<EntityId> seeds;
  std::vector<std::vector<Triple>> hops;
  std::vector<bool> fallback;

  std::size_t hop_count() const { return hops.size(); }
  std::size_t size() const { return hops.empty() ? 0 : hops.front().size(); }
};

// Throws DomainError for empty/invalid seeds, hop_count < 1, size < 1, or when
// no triple leaves the seed set (hop 1 cannot fall back).
RippleSets build_ripple_sets(const KnowledgeGraph& kg,
                             std::span<const EntityId> seeds, int hop_count,
                             int size, std::uint64_t rng_seed,
                             UserId user = UserId{});

// |relevant_entities({a}, k) ∩ relevant_entities({b}, k)|
std::size_t common_khop_neighbors(const KnowledgeGraph& kg, EntityId a,
                                  EntityId b, int k);

}  // namespace ripple
