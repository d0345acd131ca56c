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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace ripple {

// Dense integer id tagged by the vocabulary it indexes. Entity, relation,
// item and user ids live in separate spaces and do not convert into each
// other.
template <class Tag>
struct Id {
  std::uint32_t value = 0;

  constexpr Id() = default;
  constexpr explicit Id(std::uint32_t v) : value(v) {}
  constexpr explicit Id(std::size_t v) : value(static_cast<std::uint32_t>(v)) {}
  constexpr explicit Id(int v) : value(static_cast<std::uint32_t>(v)) {}

  constexpr std::size_t index() const { return value; }
  constexpr auto operator<=>(const Id&) const = default;
};

struct EntityTag {};
struct RelationTag {};
struct ItemTag {};
struct UserTag {};

using EntityId = Id<EntityTag>;
using RelationId = Id<RelationTag>;
using ItemId = Id<ItemTag>;
using UserId = Id<UserTag>;

struct Triple {
  EntityId head;
  RelationId relation;
  EntityId tail;

  constexpr auto operator<=>(const Triple&) const = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept {
    std::uint64_t h = t.head.value;
    h = h * 0x9E3779B97F4A7C15ULL ^ t.relation.value;
    h = h * 0x9E3779B97F4A7C15ULL ^ t.tail.value;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

}  // namespace ripple

template <class Tag>
struct std::hash<ripple::Id<Tag>> {
  std::size_t operator()(const ripple::Id<Tag>& id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
