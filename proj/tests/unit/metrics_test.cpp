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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ripple/error.hpp"
#include "ripple/metrics.hpp"

namespace ripple {
namespace {

std::vector<PredictionRecord> records(const std::vector<std::pair<int, double>>& v) {
  std::vector<PredictionRecord> out;
  for (const auto& [label, score] : v) out.push_back({UserId(0), ItemId(0), label, score});
  return out;
}

std::vector<PredictionRecord> random_records(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> coarse(0, 9);  // forces ties
  std::vector<PredictionRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = i < 2 ? static_cast<int>(i) : static_cast<int>(rng() % 2);
    out.push_back({UserId(0), ItemId(i), label, coarse(rng) / 10.0});
  }
  return out;
}

TEST(Auc, PerfectSeparationIsOne) {
  EXPECT_EQ(auc(records({{0, 0.1}, {0, 0.2}, {1, 0.8}, {1, 0.9}})), 1.0);
}

TEST(Auc, AllTiesIsHalf) {
  EXPECT_EQ(auc(records({{0, 0.3}, {1, 0.3}, {1, 0.3}, {0, 0.3}})), 0.5);
}

TEST(Auc, SingleClassIsDomainError) {
  EXPECT_THROW(auc(records({{1, 0.3}, {1, 0.4}})), DomainError);
  EXPECT_THROW(auc({}), DomainError);
}

TEST(Auc, MatchesPairwiseOracle) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto r = random_records(rng, 2 + rng() % 200);
    EXPECT_NEAR(auc(r), oracle::pairwise_auc(r), 1e-12);
  }
}

TEST(Auc, InvariantUnderMonotoneTransform) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    auto r = random_records(rng, 100);
    const double before = auc(r);
    for (auto& x : r) x.score = std::exp(3.0 * x.score) - 7.0;
    EXPECT_NEAR(auc(r), before, 1e-12);
  }
}

TEST(Accuracy, Cases) {
  EXPECT_EQ(accuracy(records({{1, 0.9}, {0, 0.1}})), 1.0);
  EXPECT_EQ(accuracy(records({{0, 0.9}, {1, 0.1}})), 0.0);
  EXPECT_EQ(accuracy(records({{1, 0.9}, {0, 0.1}, {1, 0.6}, {0, 0.7}})), 0.75);
}

TEST(TopK, SortsByScoreThenItem) {
  const auto top = top_k({{ItemId(3), 0.5}, {ItemId(1), 0.9}, {ItemId(2), 0.5}, {ItemId(0), 0.1}}, 3);
  ASSERT_EQ(top.size(), 3u);
  EXPECT_EQ(top[0].item, ItemId(1));
  EXPECT_EQ(top[1].item, ItemId(2));
  EXPECT_EQ(top[2].item, ItemId(3));
}

TEST(TopKMetrics, AllCorrect) {
  const UserCandidates u{UserId(0), {{ItemId(0), 0.9}, {ItemId(1), 0.8}, {ItemId(2), 0.1}},
                         {ItemId(0), ItemId(1)}};
  const auto m = topk_metrics({&u, 1}, 2);
  EXPECT_EQ(m.precision, 1.0);
  EXPECT_EQ(m.recall, 1.0);
  EXPECT_EQ(m.f1, 1.0);
  EXPECT_EQ(m.users, 1u);
}

TEST(TopKMetrics, ZeroHits) {
  const UserCandidates u{UserId(0), {{ItemId(0), 0.9}, {ItemId(1), 0.8}, {ItemId(2), 0.1}},
                         {ItemId(2)}};
  const auto m = topk_metrics({&u, 1}, 2);
  EXPECT_EQ(m.precision, 0.0);
  EXPECT_EQ(m.recall, 0.0);
  EXPECT_EQ(m.f1, 0.0);
}

TEST(TopKMetrics, UsersWithoutPositivesExcluded) {
  const std::vector<UserCandidates> users{
      {UserId(0), {{ItemId(0), 0.9}}, {ItemId(0)}},
      {UserId(1), {{ItemId(0), 0.9}}, {}}};
  const auto m = topk_metrics(users, 1);
  EXPECT_EQ(m.users, 1u);
  EXPECT_EQ(m.precision, 1.0);
}

TEST(TopKMetrics, MatchesSetIntersectionOracle) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> score(0, 1);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<UserCandidates> users;
    for (int u = 0; u < 20; ++u) {
      UserCandidates c;
      c.user = UserId(u);
      for (int v = 0; v < 30; ++v) {
        c.candidates.push_back({ItemId(v), std::round(score(rng) * 20) / 20});
        if (rng() % 5 == 0) c.test_positives.push_back(ItemId(v));
      }
      users.push_back(c);
    }
    for (std::size_t k : {1u, 5u, 10u}) {
      const auto m = topk_metrics(users, k);
      double p = 0, r = 0, f = 0;
      std::size_t n = 0;
      for (const auto& c : users) {
        if (c.test_positives.empty()) continue;
        const auto o = oracle::naive_topk(c.candidates, c.test_positives, k);
        // hit identity: precision * K == recall * |positives|
        EXPECT_NEAR(o.precision * k, o.recall * c.test_positives.size(), 1e-12);
        p += o.precision;
        r += o.recall;
        f += o.f1;
        ++n;
      }
      EXPECT_EQ(m.users, n);
      EXPECT_DOUBLE_EQ(m.precision, p / n);
      EXPECT_DOUBLE_EQ(m.recall, r / n);
      EXPECT_DOUBLE_EQ(m.f1, f / n);
    }
  }
}

}  // namespace
}  // namespace ripple
