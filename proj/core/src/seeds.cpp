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

#include "ripple/seeds.hpp"

#include <array>
#include <random>

namespace ripple {

std::uint64_t derive_seed(std::uint64_t root, SeedPurpose purpose,
                          std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(root),
                    static_cast<std::uint32_t>(root >> 32),
                    static_cast<std::uint32_t>(purpose),
                    static_cast<std::uint32_t>(salt),
                    static_cast<std::uint32_t>(salt >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

std::string_view to_string(SeedPurpose purpose) {
  switch (purpose) {
    case SeedPurpose::kNegativeSampling: return "negative_sampling";
    case SeedPurpose::kSplit: return "split";
    case SeedPurpose::kRippleSets: return "ripple_sets";
    case SeedPurpose::kInit: return "init";
    case SeedPurpose::kShuffle: return "shuffle";
    case SeedPurpose::kTripleBatches: return "triple_batches";
    case SeedPurpose::kOverlapStudy: return "overlap_study";
    case SeedPurpose::kSynthetic: return "synthetic";
  }
  return "unknown";
}

}  // namespace ripple
