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

#include "ripple/insight.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "ripple/error.hpp"

namespace ripple {

namespace {

struct EdgeKey {
  int hop;
  Triple triple;
  auto operator<=>(const EdgeKey&) const = default;
};

std::string dot_escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string fmt_score(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

class PathBuilder {
 public:
  PathBuilder(const std::vector<ExplanationEdge>& edges, int hops,
              std::size_t max_paths)
      : by_hop_(static_cast<std::size_t>(hops)), max_paths_(max_paths) {
    for (const auto& e : edges) by_hop_[static_cast<std::size_t>(e.hop - 1)].push_back(&e);
  }

  void run(const std::vector<EntityId>& seeds, ExplanationGraph& g) {
    graph_ = &g;
    for (const auto* e : by_hop_.empty() ? std::vector<const ExplanationEdge*>{} : by_hop_[0]) {
      if (!std::binary_search(seeds.begin(), seeds.end(), e->triple.head)) continue;
      current_.push_back(*e);
      extend();
      current_.pop_back();
      if (g.truncated) return;
    }
  }

 private:
  void extend() {
    if (graph_->truncated) return;
    const std::size_t next = current_.size();
    bool extended = false;
    if (next < by_hop_.size()) {
      for (const auto* e : by_hop_[next]) {
        if (e->triple.head != current_.back().triple.tail) continue;
        extended = true;
        current_.push_back(*e);
        extend();
        current_.pop_back();
        if (graph_->truncated) return;
      }
    }
    if (!extended) {
      if (graph_->paths.size() >= max_paths_) {
        graph_->truncated = true;
        return;
      }
      graph_->paths.push_back(ExplanationPath{current_});
    }
  }

  std::vector<std::vector<const ExplanationEdge*>> by_hop_;
  std::size_t max_paths_;
  std::vector<ExplanationEdge> current_;
  ExplanationGraph* graph_ = nullptr;
};

}  // namespace

ExplanationGraph explain(const RippleSets& ripple, ItemId item,
                         const ModelParams& params, double threshold,
                         std::size_t max_paths) {
  const ForwardTrace trace = propagate(ripple, item, params);
  ExplanationGraph g;
  g.item = item;

  std::map<EdgeKey, double> kept;
  for (std::size_t k = 0; k < ripple.hops.size(); ++k) {
    const auto& triples = ripple.hops[k];
    for (std::size_t i = 0; i < triples.size(); ++i) {
      const double score = trace.hops[k].logits[static_cast<Eigen::Index>(i)];
      if (score >= threshold) {
        kept.emplace(EdgeKey{static_cast<int>(k + 1), triples[i]}, score);
      }
    }
  }

  std::set<ExplanationNode> nodes;
  for (const auto s : ripple.seeds) nodes.insert({s, 0});
  for (const auto& [key, score] : kept) {
    g.edges.push_back({key.hop, key.triple, score});
    nodes.insert({key.triple.head, key.hop - 1});
    nodes.insert({key.triple.tail, key.hop});
  }
  g.nodes.assign(nodes.begin(), nodes.end());

  PathBuilder builder(g.edges, static_cast<int>(ripple.hops.size()), max_paths);
  builder.run(ripple.seeds, g);
  return g;
}

void write_dot(std::ostream& out, const ExplanationGraph& graph,
               const KnowledgeGraph& kg, const std::string& title) {
  const auto node_id = [](EntityId e, int level) {
    return "e" + std::to_string(e.value) + "_" + std::to_string(level);
  };
  out << "digraph explanation {\n";
  out << "  label=\"" << dot_escape(title) << "\";\n";
  out << "  rankdir=LR;\n";
  for (const auto& n : graph.nodes) {
    out << "  " << node_id(n.entity, n.level) << " [label=\""
        << dot_escape(kg.entity_name(n.entity)) << "\", hop=" << n.level << "];\n";
  }
  for (const auto& e : graph.edges) {
    out << "  " << node_id(e.triple.head, e.hop - 1) << " -> "
        << node_id(e.triple.tail, e.hop) << " [label=\""
        << dot_escape(kg.relation_name(e.triple.relation)) << "\", score="
        << fmt_score(e.score) << ", hop=" << e.hop << "];\n";
  }
  out << "}\n";
}

void write_paths(std::ostream& out, const ExplanationGraph& graph,
                 const KnowledgeGraph& kg) {
  for (const auto& p : graph.paths) {
    if (p.edges.empty()) continue;
    out << kg.entity_name(p.edges.front().triple.head);
    for (const auto& e : p.edges) {
      out << " -[" << kg.relation_name(e.triple.relation) << ' ' << fmt_score(e.score)
          << "]-> " << kg.entity_name(e.triple.tail);
    }
    out << '\n';
  }
}

double SuperpositionReport::mass(EntityId e) const {
  auto it = std::lower_bound(entities.begin(), entities.end(), e,
                             [](const EntityMass& m, EntityId id) { return m.entity < id; });
  return it != entities.end() && it->entity == e ? it->total : 0.0;
}

double SuperpositionReport::mass(EntityId e, std::size_t hop) const {
  auto it = std::lower_bound(entities.begin(), entities.end(), e,
                             [](const EntityMass& m, EntityId id) { return m.entity < id; });
  if (it == entities.end() || it->entity != e || hop >= it->per_hop.size()) return 0.0;
  return it->per_hop[hop];
}

SuperpositionReport superposition(const RippleSets& ripple, ItemId item,
                                  const ModelParams& params) {
  const ForwardTrace trace = propagate(ripple, item, params);
  const std::size_t hops = ripple.hops.size();
  std::map<EntityId, EntityMass> acc;
  for (std::size_t k = 0; k < hops; ++k) {
    const auto& triples = ripple.hops[k];
    for (std::size_t i = 0; i < triples.size(); ++i) {
      auto [it, inserted] = acc.try_emplace(triples[i].tail);
      if (inserted) {
        it->second.entity = triples[i].tail;
        it->second.per_hop.assign(hops, 0.0);
      }
      it->second.per_hop[k] += trace.hops[k].probs[static_cast<Eigen::Index>(i)];
    }
  }
  SuperpositionReport report;
  report.entities.reserve(acc.size());
  for (auto& [e, m] : acc) {
    for (const double v : m.per_hop) m.total += v;
    report.entities.push_back(std::move(m));
  }
  return report;
}

std::vector<OverlapRow> neighbor_overlap_study(const KnowledgeGraph& kg,
                                               const InteractionDataset& ds,
                                               std::size_t pair_count,
                                               int max_hop,
                                               std::uint64_t rng_seed) {
  if (max_hop < 1) throw DomainError("max_hop must be >= 1");
  const std::size_t n_items = ds.item_count();
  if (n_items < 2) throw DomainError("overlap study needs at least two items");

  std::vector<std::vector<UserId>> raters(n_items);
  for (std::size_t i = 0; i < ds.examples.size(); ++i) {
    const auto& ex = ds.examples[i];
    const bool train = !ds.is_split() || ds.split[i] == Split::kTrain;
    if (train && ex.label == 1) raters[ex.item.index()].push_back(ex.user);
  }
  for (auto& r : raters) {
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
  }
  const auto co_rated = [&](ItemId a, ItemId b) {
    const auto& ra = raters[a.index()];
    const auto& rb = raters[b.index()];
    auto ia = ra.begin();
    auto ib = rb.begin();
    while (ia != ra.end() && ib != rb.end()) {
      if (*ia < *ib) {
        ++ia;
      } else if (*ib < *ia) {
        ++ib;
      } else {
        return true;
      }
    }
    return false;
  };

  // levels[item][k-1] = relevant_entities({entity(item)}, k), filled lazily
  std::map<std::size_t, std::vector<std::vector<EntityId>>> levels;
  const auto item_levels = [&](ItemId v) -> const std::vector<std::vector<EntityId>>& {
    auto [it, inserted] = levels.try_emplace(v.index());
    if (inserted) {
      std::vector<EntityId> frontier{ds.item_to_entity[v.index()]};
      for (int k = 1; k <= max_hop; ++k) {
        frontier = relevant_entities(kg, frontier, 1);
        it->second.push_back(frontier);
      }
    }
    return it->second;
  };

  std::vector<OverlapRow> rows(static_cast<std::size_t>(max_hop));
  std::vector<double> sum_with(rows.size(), 0.0);
  std::vector<double> sum_without(rows.size(), 0.0);
  std::mt19937_64 rng(rng_seed);
  std::uniform_int_distribution<std::size_t> first(0, n_items - 1);
  std::uniform_int_distribution<std::size_t> second(0, n_items - 2);
  std::size_t with = 0;
  std::size_t without = 0;
  for (std::size_t p = 0; p < pair_count; ++p) {
    const ItemId a(first(rng));
    std::size_t bi = second(rng);
    if (bi >= a.index()) ++bi;
    const ItemId b(bi);
    const bool shared = co_rated(a, b);
    (shared ? with : without) += 1;
    const auto& la = item_levels(a);
    const auto& lb = item_levels(b);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      std::vector<EntityId> common;
      std::set_intersection(la[k].begin(), la[k].end(), lb[k].begin(), lb[k].end(),
                            std::back_inserter(common));
      (shared ? sum_with : sum_without)[k] += static_cast<double>(common.size());
    }
  }

  for (std::size_t k = 0; k < rows.size(); ++k) {
    OverlapRow& row = rows[k];
    row.hop = static_cast<int>(k + 1);
    row.pairs_with = with;
    row.pairs_without = without;
    if (with > 0) row.mean_with = sum_with[k] / static_cast<double>(with);
    if (without > 0) row.mean_without = sum_without[k] / static_cast<double>(without);
    if (row.mean_with && row.mean_without && *row.mean_without > 0.0) {
      row.ratio = *row.mean_with / *row.mean_without;
    }
  }
  return rows;
}

void write_overlap_tsv(std::ostream& out, const std::vector<OverlapRow>& rows) {
  const auto cell = [](const std::optional<double>& v) {
    if (!v) return std::string("NA");
    std::ostringstream os;
    os << std::setprecision(10) << *v;
    return os.str();
  };
  out << "hop\tmean_with\tmean_without\tratio\tpairs_with\tpairs_without\n";
  for (const auto& r : rows) {
    out << r.hop << '\t' << cell(r.mean_with) << '\t' << cell(r.mean_without) << '\t'
        << cell(r.ratio) << '\t' << r.pairs_with << '\t' << r.pairs_without << '\n';
  }
}

}  // namespace ripple
