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

#include <iosfwd>

namespace ripple::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitMissingFile = 2;
inline constexpr int kExitMalformed = 3;
inline constexpr int kExitMissingCheckpoint = 4;
inline constexpr int kExitUnknownId = 5;
inline constexpr int kExitUsage = 64;

// Entry point for `ripplenet`. Normal output goes to `out`, diagnostics to
// `err`; log records go to stderr through spdlog (level from RIPPLE_LOG).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ripple::cli
