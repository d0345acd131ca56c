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

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "ripple/ids.hpp"

namespace ripple {

struct PredictionRecord {
  UserId user;
  ItemId item;
  int label = 0;
  double score = 0.5;
};

// Probability that a random positive outscores a random negative, ties
// counting one half. Rank-sum, O(n log n). Throws DomainError unless both
// classes are present.
double auc(std::span<const PredictionRecord> records);

// Fraction of records with (score >= threshold) == (label == 1).
double accuracy(std::span<const PredictionRecord> records, double threshold = 0.5);

struct ScoredItem {
  ItemId item;
  double score = 0.0;
};

// The k best items by descending score, ties broken by ascending item id.
std::vector<ScoredItem> top_k(std::vector<ScoredItem> candidates, std::size_t k);

struct UserCandidates {
  UserId user;
  std::vector<ScoredItem> candidates;  // items the user did not touch in train
  std::vector<ItemId> test_positives;
};

struct TopKMetrics {
  std::size_t k = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t users = 0;  // users with at least one test positive
};

// Per-user precision = hits/K, recall = hits/|positives|, F1 their harmonic
// mean (0 when both are 0); macro-averaged over users with a test positive.
TopKMetrics topk_metrics(std::span<const UserCandidates> users, std::size_t k);

}  // namespace ripple
