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
#include <string_view>

namespace ripple {

// Every random stream is derived from one root seed. A purpose tag selects an
// independent stream so that, e.g., changing the split ratio does not perturb
// ripple-set sampling.
enum class SeedPurpose : std::uint32_t {
  kNegativeSampling = 1,
  kSplit = 2,
  kRippleSets = 3,
  kInit = 4,
  kShuffle = 5,
  kTripleBatches = 6,
  kOverlapStudy = 7,
  kSynthetic = 8,
};

// Derives a sub-seed as std::seed_seq{lo(root), hi(root), purpose, salt}.
// seed_seq's mixing is fixed by the standard, so derived streams are
// identical across conforming toolchains.
std::uint64_t derive_seed(std::uint64_t root, SeedPurpose purpose,
                          std::uint64_t salt = 0);

std::string_view to_string(SeedPurpose purpose);

}  // namespace ripple
