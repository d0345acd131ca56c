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
#include <iosfwd>

#include "ripple/model.hpp"

namespace ripple {

// Binary checkpoint, little-endian:
//   "RPLCKPT\0" | u32 version | u32 dim | u64 entities | u64 items |
//   u64 relations | entity rows | item rows | relation matrices (row-major)
// with every parameter stored as its IEEE-754 bit pattern.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(std::ostream& out, const ModelParams& params);
ModelParams read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params);
// Throws FormatError if missing, truncated or of another version.
ModelParams load_checkpoint(const std::filesystem::path& path);

}  // namespace ripple
