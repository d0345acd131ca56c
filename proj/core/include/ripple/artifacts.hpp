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
#include <optional>

#include "ripple/dataset.hpp"
#include "ripple/kg.hpp"
#include "ripple/trainer.hpp"

namespace ripple {

// On-disk form of a prepared run, all UTF-8 TSV with a leading `#` header:
//   entities.tsv   id, name
//   relations.tsv  id, name
//   triples.tsv    head id, relation id, tail id
//   users.tsv      id, name
//   items.tsv      id, name, entity id
//   examples.tsv   user id, item id, label, split
//   ripple.tsv     user id, hop, head, relation, tail, fallback flag
struct PreparedData {
  KnowledgeGraph kg;
  InteractionDataset ds;
};

void write_prepared(const std::filesystem::path& dir, const KnowledgeGraph& kg,
                    const InteractionDataset& ds);

// Throws FormatError if a file is missing and ParseError on a bad line.
PreparedData read_prepared(const std::filesystem::path& dir);

void write_ripple_cache(const std::filesystem::path& path, const RippleIndex& index,
                        std::uint64_t seed);

// nullopt when the file is absent or was built with other hops/size/seed.
// Seeds are restored from the dataset's train histories.
std::optional<RippleIndex> read_ripple_cache(const std::filesystem::path& path,
                                             const Hyperparams& hp,
                                             const InteractionDataset& ds);

}  // namespace ripple
