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

#include "ripple/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "ripple/error.hpp"

namespace ripple {

namespace {

constexpr std::array<char, 8> kMagic = {'R', 'P', 'L', 'C', 'K', 'P', 'T', '\0'};
constexpr std::uint64_t kMaxCount = std::uint64_t{1} << 40;

template <class U>
void put(std::ostream& out, U v) {
  std::array<char, sizeof(U)> bytes{};
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  }
  out.write(bytes.data(), bytes.size());
}

template <class U>
U get(std::istream& in) {
  std::array<unsigned char, sizeof(U)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw FormatError("checkpoint truncated");
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    v |= static_cast<U>(bytes[i]) << (8 * i);
  }
  return v;
}

void put_double(std::ostream& out, double v) {
  put<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
}

double get_double(std::istream& in) {
  return std::bit_cast<double>(get<std::uint64_t>(in));
}

}  // namespace

void write_checkpoint(std::ostream& out, const ModelParams& params) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.dim()));
  put<std::uint64_t>(out, params.entity_count());
  put<std::uint64_t>(out, params.item_count());
  put<std::uint64_t>(out, params.relation_count());
  for (Eigen::Index i = 0; i < params.entity.rows(); ++i) {
    for (Eigen::Index j = 0; j < params.entity.cols(); ++j) put_double(out, params.entity(i, j));
  }
  for (Eigen::Index i = 0; i < params.item.rows(); ++i) {
    for (Eigen::Index j = 0; j < params.item.cols(); ++j) put_double(out, params.item(i, j));
  }
  for (const auto& r : params.relation) {
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
      for (Eigen::Index j = 0; j < r.cols(); ++j) put_double(out, r(i, j));
    }
  }
  if (!out) throw FormatError("failed writing checkpoint");
}

ModelParams read_checkpoint(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw FormatError("not a ripple checkpoint");
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw FormatError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto dim = get<std::uint32_t>(in);
  const auto entities = get<std::uint64_t>(in);
  const auto items = get<std::uint64_t>(in);
  const auto relations = get<std::uint64_t>(in);
  if (dim == 0 || dim > 4096 || entities > kMaxCount || items > kMaxCount ||
      relations > kMaxCount) {
    throw FormatError("implausible checkpoint header");
  }
  ModelParams p = ModelParams::zeros(entities, items, relations, static_cast<int>(dim));
  for (Eigen::Index i = 0; i < p.entity.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.entity.cols(); ++j) p.entity(i, j) = get_double(in);
  }
  for (Eigen::Index i = 0; i < p.item.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.item.cols(); ++j) p.item(i, j) = get_double(in);
  }
  for (auto& r : p.relation) {
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
      for (Eigen::Index j = 0; j < r.cols(); ++j) r(i, j) = get_double(in);
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError("trailing bytes after checkpoint payload");
  }
  return p;
}

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write checkpoint " + path.string());
  write_checkpoint(out, params);
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint " + path.string());
  return read_checkpoint(in);
}

}  // namespace ripple
