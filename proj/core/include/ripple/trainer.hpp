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
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ripple/dataset.hpp"
#include "ripple/kg.hpp"
#include "ripple/metrics.hpp"
#include "ripple/model.hpp"

namespace ripple {

// Ripple sets for every user, computed once before training. Users with no
// train history, or whose seeds have no outgoing triple, have no entry.
struct RippleIndex {
  int hops = 0;
  int size = 0;
  std::vector<std::optional<RippleSets>> by_user;
  std::size_t users_without_history = 0;
  std::size_t users_without_triples = 0;

  const RippleSets* find(UserId u) const {
    if (u.index() >= by_user.size() || !by_user[u.index()]) return nullptr;
    return &*by_user[u.index()];
  }
  std::size_t trainable_users() const;
};

// User u is sampled with derive_seed(hp.seed, kRippleSets, u).
RippleIndex build_ripple_index(const KnowledgeGraph& kg,
                               const InteractionDataset& ds,
                               const Hyperparams& hp);

// Draws minibatches of true triples (uniform over the KG) and false triples
// (a uniform true triple with its tail replaced by a uniform entity, rejecting
// replacements that are themselves in the KG). Half of each batch is true,
// rounding the odd one towards true.
class TripleBatchSampler {
 public:
  TripleBatchSampler(const KnowledgeGraph& kg, std::uint64_t rng_seed);

  std::vector<LabeledTriple> sample(std::size_t batch_size);

 private:
  Triple corrupt(const Triple& t);

  const KnowledgeGraph* kg_;
  std::mt19937_64 rng_;
};

struct EpochRecord {
  int epoch = 0;
  // Minibatch loss parts summed over the epoch and divided by the number of
  // train examples. Zero for the epoch-0 record, which precedes any update.
  double batch_ctr = 0.0;
  double batch_kge = 0.0;
  double batch_reg = 0.0;
  // Mean cross-entropy over the whole train split after the epoch.
  double train_ctr = 0.0;
  std::optional<double> eval_auc;
  std::optional<double> eval_acc;
  double wall_seconds = 0.0;
};

struct TrainReport {
  Hyperparams hp;
  std::size_t trainable_users = 0;
  std::size_t users_without_history = 0;
  std::size_t users_without_triples = 0;
  std::size_t train_examples = 0;
  std::size_t eval_examples = 0;
  EpochRecord initial;
  std::vector<EpochRecord> epochs;  // one per configured epoch
  std::string checkpoint;
};

struct TrainResult {
  ModelParams params;
  TrainReport report;
};

// Minibatch SGD on the joint objective. Each iteration draws one interaction
// minibatch (from an epoch-level shuffle) and one triple minibatch of the same
// size, then steps params -= lr * grad(loss / batch). Deterministic under
// hp.seed. Throws DomainError when no user is trainable.
TrainResult train(const InteractionDataset& ds, const KnowledgeGraph& kg,
                  const Hyperparams& hp, const RippleIndex* ripples = nullptr,
                  const std::function<void(const EpochRecord&)>& on_epoch = {});

// Scores every example of `s` whose user has ripple sets.
std::vector<PredictionRecord> predict_split(const InteractionDataset& ds,
                                            const RippleIndex& ripples,
                                            const ModelParams& params, Split s);

// Line-delimited JSON: a config record, one record per epoch (epoch 0 first)
// and a summary. Wall times are left out so identical runs give identical
// bytes; write_timing_jsonl carries them.
void write_report_jsonl(std::ostream& out, const TrainReport& report);
void write_timing_jsonl(std::ostream& out, const TrainReport& report);

}  // namespace ripple
