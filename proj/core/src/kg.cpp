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

#include "ripple/kg.hpp"

#include <algorithm>
#include <fstream>
#include <random>

#include "ripple/error.hpp"
#include "tsv.hpp"

namespace ripple {

namespace {

std::vector<Triple> dedup_in_order(std::vector<Triple> triples) {
  std::unordered_set<Triple, TripleHash> seen;
  seen.reserve(triples.size());
  std::vector<Triple> out;
  out.reserve(triples.size());
  for (const auto& t : triples) {
    if (seen.insert(t).second) out.push_back(t);
  }
  return out;
}

void check_seeds(const KnowledgeGraph& kg, std::span<const EntityId> seeds) {
  for (const auto e : seeds) {
    if (!kg.valid(e)) {
      throw DomainError("seed entity id " + std::to_string(e.value) +
                        " out of range (entity_count=" +
                        std::to_string(kg.entity_count()) + ")");
    }
  }
}

std::vector<EntityId> sorted_unique(std::vector<EntityId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

KnowledgeGraph KnowledgeGraph::from_triples(std::size_t entity_count,
                                            std::size_t relation_count,
                                            std::vector<Triple> triples) {
  KnowledgeGraph kg;
  kg.entity_count_ = entity_count;
  kg.relation_count_ = relation_count;
  for (const auto& t : triples) {
    if (t.head.index() >= entity_count || t.tail.index() >= entity_count ||
        t.relation.index() >= relation_count) {
      throw DomainError("triple (" + std::to_string(t.head.value) + ", " +
                        std::to_string(t.relation.value) + ", " +
                        std::to_string(t.tail.value) +
                        ") references an id outside the vocabulary");
    }
  }
  kg.triples_ = dedup_in_order(std::move(triples));
  kg.build_index();
  return kg;
}

KnowledgeGraph KnowledgeGraph::from_triples(Vocabulary entities,
                                            Vocabulary relations,
                                            std::vector<Triple> triples) {
  KnowledgeGraph kg = from_triples(entities.size(), relations.size(),
                                   std::move(triples));
  kg.entities_ = std::move(entities);
  kg.relations_ = std::move(relations);
  return kg;
}

void KnowledgeGraph::build_index() {
  offsets_.assign(entity_count_ + 1, 0);
  for (const auto& t : triples_) ++offsets_[t.head.index() + 1];
  for (std::size_t i = 0; i < entity_count_; ++i) offsets_[i + 1] += offsets_[i];
  edges_.resize(triples_.size());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& t : triples_) {
    edges_[cursor[t.head.index()]++] = Edge{t.relation, t.tail};
  }
  lookup_.clear();
  lookup_.reserve(triples_.size());
  lookup_.insert(triples_.begin(), triples_.end());
}

std::span<const Edge> KnowledgeGraph::neighbors(EntityId head) const {
  if (!valid(head)) {
    throw DomainError("entity id " + std::to_string(head.value) +
                      " out of range");
  }
  return std::span<const Edge>(edges_).subspan(
      offsets_[head.index()], offsets_[head.index() + 1] - offsets_[head.index()]);
}

std::string KnowledgeGraph::entity_name(EntityId e) const {
  if (e.index() < entities_.size()) return entities_.name(e.index());
  return "#" + std::to_string(e.value);
}

std::string KnowledgeGraph::relation_name(RelationId r) const {
  if (r.index() < relations_.size()) return relations_.name(r.index());
  return "#" + std::to_string(r.value);
}

std::optional<EntityId> KnowledgeGraph::find_entity(std::string_view name) const {
  if (auto id = entities_.find(name)) return EntityId(*id);
  return std::nullopt;
}

std::optional<RelationId> KnowledgeGraph::find_relation(
    std::string_view name) const {
  if (auto id = relations_.find(name)) return RelationId(*id);
  return std::nullopt;
}

KnowledgeGraph load_kg(std::istream& in) {
  Vocabulary entities;
  Vocabulary relations;
  std::vector<Triple> triples;
  detail::for_each_record(in, 3, "kg", [&](const auto& f, std::size_t) {
    const EntityId h(entities.intern(f[0]));
    const RelationId r(relations.intern(f[1]));
    const EntityId t(entities.intern(f[2]));
    triples.push_back(Triple{h, r, t});
  });
  return KnowledgeGraph::from_triples(std::move(entities), std::move(relations),
                                      std::move(triples));
}

KnowledgeGraph load_kg_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open knowledge graph file " + path.string());
  return load_kg(in);
}

std::vector<EntityId> relevant_entities(const KnowledgeGraph& kg,
                                        std::span<const EntityId> seeds,
                                        int k) {
  if (k < 0) throw DomainError("hop count must be non-negative");
  check_seeds(kg, seeds);
  std::vector<EntityId> level = sorted_unique({seeds.begin(), seeds.end()});
  for (int hop = 0; hop < k && !level.empty(); ++hop) {
    std::vector<EntityId> next;
    for (const auto h : level) {
      for (const auto& e : kg.neighbors(h)) next.push_back(e.tail);
    }
    level = sorted_unique(std::move(next));
  }
  return level;
}

std::vector<Triple> candidate_pool(const KnowledgeGraph& kg,
                                   std::span<const EntityId> frontier) {
  std::vector<Triple> pool;
  for (const auto h : sorted_unique({frontier.begin(), frontier.end()})) {
    for (const auto& e : kg.neighbors(h)) {
      pool.push_back(Triple{h, e.relation, e.tail});
    }
  }
  return pool;
}

RippleSets build_ripple_sets(const KnowledgeGraph& kg,
                             std::span<const EntityId> seeds, int hop_count,
                             int size, std::uint64_t rng_seed, UserId user) {
  if (seeds.empty()) {
    throw DomainError("cannot build ripple sets from an empty seed set");
  }
  if (hop_count < 1) throw DomainError("hop count must be >= 1");
  if (size < 1) throw DomainError("ripple set size must be >= 1");
  check_seeds(kg, seeds);

  RippleSets rs;
  rs.user = user;
  rs.seeds = sorted_unique({seeds.begin(), seeds.end()});
  rs.hops.reserve(static_cast<std::size_t>(hop_count));
  rs.fallback.reserve(static_cast<std::size_t>(hop_count));

  std::mt19937_64 rng(rng_seed);
  std::vector<EntityId> frontier = rs.seeds;
  for (int hop = 0; hop < hop_count; ++hop) {
    const std::vector<Triple> pool = candidate_pool(kg, frontier);
    if (pool.empty()) {
      if (hop == 0) {
        throw DomainError("no knowledge triple leaves the seed set of user " +
                          std::to_string(user.value));
      }
      rs.hops.push_back(rs.hops.back());
      rs.fallback.push_back(true);
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      std::vector<Triple> sampled;
      sampled.reserve(static_cast<std::size_t>(size));
      for (int i = 0; i < size; ++i) sampled.push_back(pool[pick(rng)]);
      rs.hops.push_back(std::move(sampled));
      rs.fallback.push_back(false);
    }
    frontier.clear();
    for (const auto& t : rs.hops.back()) frontier.push_back(t.tail);
  }
  return rs;
}

std::size_t common_khop_neighbors(const KnowledgeGraph& kg, EntityId a,
                                  EntityId b, int k) {
  const EntityId sa[] = {a};
  const EntityId sb[] = {b};
  const auto ra = relevant_entities(kg, sa, k);
  const auto rb = relevant_entities(kg, sb, k);
  std::size_t common = 0;
  auto ia = ra.begin();
  auto ib = rb.begin();
  while (ia != ra.end() && ib != rb.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return common;
}

}  // namespace ripple
