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

#include "ripple/artifacts.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ripple/error.hpp"
#include "tsv.hpp"

namespace ripple {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("missing prepared file " + path.string());
  return in;
}

std::uint64_t to_u64(std::string_view s, std::size_t line, const std::string& what) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(what + ": line " + std::to_string(line) + ": expected an integer, got '" +
                         std::string(s) + "'",
                     line);
  }
  return v;
}

Vocabulary read_vocabulary(const std::filesystem::path& path) {
  auto in = open_in(path);
  Vocabulary vocab;
  const std::string what = path.filename().string();
  detail::for_each_record(in, 2, what, [&](const auto& f, std::size_t line) {
    const auto id = to_u64(f[0], line, what);
    if (vocab.intern(f[1]) != id || vocab.size() != id + 1) {
      throw ParseError(what + ": line " + std::to_string(line) + ": ids must be dense and unique",
                       line);
    }
  });
  return vocab;
}

void write_vocabulary(const std::filesystem::path& path, const Vocabulary& vocab) {
  auto out = open_out(path);
  out << "# id\tname\n";
  for (std::size_t i = 0; i < vocab.size(); ++i) out << i << '\t' << vocab.name(i) << '\n';
}

}  // namespace

void write_prepared(const std::filesystem::path& dir, const KnowledgeGraph& kg,
                    const InteractionDataset& ds) {
  std::filesystem::create_directories(dir);
  Vocabulary entities = kg.entity_vocabulary();
  if (entities.size() != kg.entity_count()) {
    entities = Vocabulary{};
    for (std::size_t e = 0; e < kg.entity_count(); ++e) entities.intern(kg.entity_name(EntityId(e)));
  }
  Vocabulary relations = kg.relation_vocabulary();
  if (relations.size() != kg.relation_count()) {
    relations = Vocabulary{};
    for (std::size_t r = 0; r < kg.relation_count(); ++r) {
      relations.intern(kg.relation_name(RelationId(r)));
    }
  }
  write_vocabulary(dir / "entities.tsv", entities);
  write_vocabulary(dir / "relations.tsv", relations);
  {
    auto out = open_out(dir / "triples.tsv");
    out << "# head\trelation\ttail\n";
    for (const auto& t : kg.triples()) {
      out << t.head.value << '\t' << t.relation.value << '\t' << t.tail.value << '\n';
    }
  }
  write_vocabulary(dir / "users.tsv", ds.users);
  {
    auto out = open_out(dir / "items.tsv");
    out << "# id\tname\tentity\n";
    for (std::size_t i = 0; i < ds.item_count(); ++i) {
      out << i << '\t' << ds.items.name(i) << '\t' << ds.item_to_entity[i].value << '\n';
    }
  }
  {
    auto out = open_out(dir / "examples.tsv");
    out << "# user\titem\tlabel\tsplit\n";
    for (std::size_t i = 0; i < ds.examples.size(); ++i) {
      const auto& ex = ds.examples[i];
      out << ex.user.value << '\t' << ex.item.value << '\t' << ex.label << '\t'
          << to_string(ds.is_split() ? ds.split[i] : Split::kTrain) << '\n';
    }
  }
}

PreparedData read_prepared(const std::filesystem::path& dir) {
  PreparedData data;
  Vocabulary entities = read_vocabulary(dir / "entities.tsv");
  Vocabulary relations = read_vocabulary(dir / "relations.tsv");
  std::vector<Triple> triples;
  {
    auto in = open_in(dir / "triples.tsv");
    detail::for_each_record(in, 3, "triples.tsv", [&](const auto& f, std::size_t line) {
      triples.push_back(Triple{EntityId(to_u64(f[0], line, "triples.tsv")),
                               RelationId(to_u64(f[1], line, "triples.tsv")),
                               EntityId(to_u64(f[2], line, "triples.tsv"))});
    });
  }
  data.kg = KnowledgeGraph::from_triples(std::move(entities), std::move(relations),
                                         std::move(triples));

  InteractionDataset& ds = data.ds;
  ds.users = read_vocabulary(dir / "users.tsv");
  {
    auto in = open_in(dir / "items.tsv");
    detail::for_each_record(in, 3, "items.tsv", [&](const auto& f, std::size_t line) {
      const auto id = to_u64(f[0], line, "items.tsv");
      const auto entity = to_u64(f[2], line, "items.tsv");
      if (ds.items.intern(f[1]) != id || ds.items.size() != id + 1 ||
          entity >= data.kg.entity_count()) {
        throw ParseError("items.tsv: line " + std::to_string(line) + ": inconsistent item record",
                         line);
      }
      ds.item_to_entity.emplace_back(entity);
    });
  }
  {
    auto in = open_in(dir / "examples.tsv");
    detail::for_each_record(in, 4, "examples.tsv", [&](const auto& f, std::size_t line) {
      const auto user = to_u64(f[0], line, "examples.tsv");
      const auto item = to_u64(f[1], line, "examples.tsv");
      const auto label = to_u64(f[2], line, "examples.tsv");
      const auto s = parse_split(f[3]);
      if (user >= ds.user_count() || item >= ds.item_count() || label > 1 || !s) {
        throw ParseError("examples.tsv: line " + std::to_string(line) + ": invalid example",
                         line);
      }
      ds.examples.push_back(Interaction{UserId(user), ItemId(item), static_cast<int>(label)});
      ds.split.push_back(*s);
    });
  }
  return data;
}

void write_ripple_cache(const std::filesystem::path& path, const RippleIndex& index,
                        std::uint64_t seed) {
  auto out = open_out(path);
  out << "# ripple\thops=" << index.hops << "\tsize=" << index.size << "\tseed=" << seed
      << "\twithout_history=" << index.users_without_history
      << "\twithout_triples=" << index.users_without_triples << '\n';
  out << "# user\thop\thead\trelation\ttail\tfallback\n";
  for (std::size_t u = 0; u < index.by_user.size(); ++u) {
    if (!index.by_user[u]) continue;
    const auto& rs = *index.by_user[u];
    for (std::size_t k = 0; k < rs.hops.size(); ++k) {
      for (const auto& t : rs.hops[k]) {
        out << u << '\t' << k + 1 << '\t' << t.head.value << '\t' << t.relation.value << '\t'
            << t.tail.value << '\t' << (rs.fallback[k] ? 1 : 0) << '\n';
      }
    }
  }
}

std::optional<RippleIndex> read_ripple_cache(const std::filesystem::path& path,
                                             const Hyperparams& hp,
                                             const InteractionDataset& ds) {
  const std::size_t user_count = ds.user_count();
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::string header;
  std::getline(in, header);
  std::ostringstream expected;
  expected << "# ripple\thops=" << hp.hops << "\tsize=" << hp.ripple_size << "\tseed=" << hp.seed
           << '\t';
  if (header.rfind(expected.str(), 0) != 0) return std::nullopt;

  RippleIndex index;
  index.hops = hp.hops;
  index.size = hp.ripple_size;
  index.by_user.resize(user_count);
  {
    std::istringstream fields(header.substr(expected.str().size()));
    std::string field;
    while (std::getline(fields, field, '\t')) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) continue;
      const auto value = to_u64(std::string_view(field).substr(eq + 1), 1, "ripple.tsv");
      if (field.rfind("without_history", 0) == 0) index.users_without_history = value;
      if (field.rfind("without_triples", 0) == 0) index.users_without_triples = value;
    }
  }
  detail::for_each_record(in, 6, "ripple.tsv", [&](const auto& f, std::size_t line) {
    const auto u = to_u64(f[0], line, "ripple.tsv");
    const auto hop = to_u64(f[1], line, "ripple.tsv");
    if (u >= user_count || hop < 1 || hop > static_cast<std::uint64_t>(hp.hops)) {
      throw ParseError("ripple.tsv: line " + std::to_string(line) + ": invalid record", line);
    }
    auto& slot = index.by_user[u];
    if (!slot) {
      slot.emplace();
      slot->user = UserId(u);
      slot->hops.resize(static_cast<std::size_t>(hp.hops));
      slot->fallback.assign(static_cast<std::size_t>(hp.hops), false);
    }
    slot->hops[hop - 1].push_back(Triple{EntityId(to_u64(f[2], line, "ripple.tsv")),
                                         RelationId(to_u64(f[3], line, "ripple.tsv")),
                                         EntityId(to_u64(f[4], line, "ripple.tsv"))});
    slot->fallback[hop - 1] = f[5] == "1";
  }, 1);
  const auto histories = user_histories(ds);
  for (auto& slot : index.by_user) {
    if (!slot) continue;
    slot->seeds = histories[slot->user.index()];
    for (const auto& h : slot->hops) {
      if (h.size() != static_cast<std::size_t>(hp.ripple_size)) {
        throw FormatError("ripple cache has a hop of the wrong size");
      }
    }
  }
  return index;
}

}  // namespace ripple
