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

#include "ripple/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ripple/error.hpp"

namespace ripple {

double auc(std::span<const PredictionRecord> records) {
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  std::size_t positives = 0;
  for (const auto& r : records) {
    if (!std::isfinite(r.score)) throw DomainError("auc: non-finite score");
    if (r.label == 1) ++positives;
  }
  const std::size_t negatives = records.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw DomainError("auc needs at least one positive and one negative");
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return records[a].score < records[b].score;
  });

  // Sum of 1-based ranks of positives, tied groups sharing their mean rank.
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    std::size_t group_pos = 0;
    while (j < order.size() && records[order[j]].score == records[order[i]].score) {
      if (records[order[j]].label == 1) ++group_pos;
      ++j;
    }
    const double mean_rank = 0.5 * static_cast<double>(i + 1 + j);
    rank_sum += mean_rank * static_cast<double>(group_pos);
    i = j;
  }
  const double np = static_cast<double>(positives);
  const double nn = static_cast<double>(negatives);
  return (rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

double accuracy(std::span<const PredictionRecord> records, double threshold) {
  if (records.empty()) throw DomainError("accuracy of an empty record set");
  std::size_t correct = 0;
  for (const auto& r : records) {
    if ((r.score >= threshold) == (r.label == 1)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(records.size());
}

std::vector<ScoredItem> top_k(std::vector<ScoredItem> candidates, std::size_t k) {
  const auto better = [](const ScoredItem& a, const ScoredItem& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.item < b.item;
  };
  k = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k),
                    candidates.end(), better);
  candidates.resize(k);
  return candidates;
}

TopKMetrics topk_metrics(std::span<const UserCandidates> users, std::size_t k) {
  if (k < 1) throw DomainError("K must be >= 1");
  TopKMetrics out;
  out.k = k;
  for (const auto& u : users) {
    if (u.test_positives.empty()) continue;
    std::vector<ItemId> positives = u.test_positives;
    std::sort(positives.begin(), positives.end());
    positives.erase(std::unique(positives.begin(), positives.end()), positives.end());

    std::size_t hits = 0;
    for (const auto& s : top_k(u.candidates, k)) {
      if (std::binary_search(positives.begin(), positives.end(), s.item)) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(k);
    const double r = static_cast<double>(hits) / static_cast<double>(positives.size());
    out.precision += p;
    out.recall += r;
    out.f1 += (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    ++out.users;
  }
  if (out.users > 0) {
    const double n = static_cast<double>(out.users);
    out.precision /= n;
    out.recall /= n;
    out.f1 /= n;
  }
  return out;
}

}  // namespace ripple
