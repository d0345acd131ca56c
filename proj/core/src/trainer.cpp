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

#include "ripple/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "ripple/error.hpp"
#include "ripple/seeds.hpp"

namespace ripple {

namespace {

constexpr int kMaxRejections = 64;

double mean_ctr(const std::vector<PredictionRecord>& records) {
  if (records.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : records) {
    sum += r.label == 1 ? -std::log(r.score) : -std::log1p(-r.score);
  }
  return sum / static_cast<double>(records.size());
}

void measure(EpochRecord& rec, const InteractionDataset& ds,
             const RippleIndex& ripples, const ModelParams& params) {
  rec.train_ctr = mean_ctr(predict_split(ds, ripples, params, Split::kTrain));
  const auto eval = predict_split(ds, ripples, params, Split::kEval);
  rec.eval_auc.reset();
  rec.eval_acc.reset();
  if (!eval.empty()) {
    rec.eval_acc = accuracy(eval);
    const auto pos = std::count_if(eval.begin(), eval.end(),
                                   [](const auto& r) { return r.label == 1; });
    if (pos > 0 && static_cast<std::size_t>(pos) < eval.size()) rec.eval_auc = auc(eval);
  }
}

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json epoch_json(const EpochRecord& e) {
  return {{"type", "epoch"},           {"epoch", e.epoch},
          {"batch_ctr", e.batch_ctr},  {"batch_kge", e.batch_kge},
          {"batch_reg", e.batch_reg},  {"train_ctr", e.train_ctr},
          {"eval_auc", optional_json(e.eval_auc)},
          {"eval_acc", optional_json(e.eval_acc)}};
}

}  // namespace

std::size_t RippleIndex::trainable_users() const {
  return static_cast<std::size_t>(
      std::count_if(by_user.begin(), by_user.end(),
                    [](const auto& r) { return r.has_value(); }));
}

RippleIndex build_ripple_index(const KnowledgeGraph& kg,
                               const InteractionDataset& ds,
                               const Hyperparams& hp) {
  RippleIndex index;
  index.hops = hp.hops;
  index.size = hp.ripple_size;
  index.by_user.resize(ds.user_count());
  const auto histories = user_histories(ds);
  for (std::size_t u = 0; u < ds.user_count(); ++u) {
    const auto& seeds = histories[u];
    if (seeds.empty()) {
      ++index.users_without_history;
      continue;
    }
    if (candidate_pool(kg, seeds).empty()) {
      ++index.users_without_triples;
      continue;
    }
    index.by_user[u] = build_ripple_sets(
        kg, seeds, hp.hops, hp.ripple_size,
        derive_seed(hp.seed, SeedPurpose::kRippleSets, u), UserId(u));
  }
  return index;
}

TripleBatchSampler::TripleBatchSampler(const KnowledgeGraph& kg,
                                       std::uint64_t rng_seed)
    : kg_(&kg), rng_(rng_seed) {
  if (kg.empty()) throw DomainError("triple sampler needs a non-empty KG");
}

Triple TripleBatchSampler::corrupt(const Triple& t) {
  std::uniform_int_distribution<std::uint32_t> entity(
      0, static_cast<std::uint32_t>(kg_->entity_count() - 1));
  for (int i = 0; i < kMaxRejections; ++i) {
    const Triple c{t.head, t.relation, EntityId(entity(rng_))};
    if (!kg_->contains(c)) return c;
  }
  // Dense (head, relation): pick uniformly among the remaining tails.
  std::vector<EntityId> free;
  for (std::size_t e = 0; e < kg_->entity_count(); ++e) {
    const Triple c{t.head, t.relation, EntityId(e)};
    if (!kg_->contains(c)) free.push_back(c.tail);
  }
  if (free.empty()) return t;
  std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
  return Triple{t.head, t.relation, free[pick(rng_)]};
}

std::vector<LabeledTriple> TripleBatchSampler::sample(std::size_t batch_size) {
  const auto triples = kg_->triples();
  std::uniform_int_distribution<std::size_t> pick(0, triples.size() - 1);
  const std::size_t n_true = (batch_size + 1) / 2;
  std::vector<LabeledTriple> batch;
  batch.reserve(batch_size);
  for (std::size_t i = 0; i < n_true; ++i) batch.push_back({triples[pick(rng_)], 1});
  for (std::size_t i = n_true; i < batch_size; ++i) {
    Triple c{};
    bool found = false;
    for (std::size_t attempt = 0; attempt < triples.size() + kMaxRejections; ++attempt) {
      const Triple& t = triples[pick(rng_)];
      c = corrupt(t);
      if (c != t) {
        found = true;
        break;
      }
    }
    if (!found) throw DomainError("no corruptible triple: every tail is taken");
    batch.push_back({c, 0});
  }
  return batch;
}

std::vector<PredictionRecord> predict_split(const InteractionDataset& ds,
                                            const RippleIndex& ripples,
                                            const ModelParams& params, Split s) {
  std::vector<PredictionRecord> out;
  for (std::size_t i = 0; i < ds.examples.size(); ++i) {
    if (!ds.is_split() || ds.split[i] != s) continue;
    const auto& ex = ds.examples[i];
    const RippleSets* rs = ripples.find(ex.user);
    if (rs == nullptr) continue;
    out.push_back({ex.user, ex.item, ex.label, predict(*rs, ex.item, params)});
  }
  return out;
}

TrainResult train(const InteractionDataset& ds, const KnowledgeGraph& kg,
                  const Hyperparams& hp, const RippleIndex* ripples,
                  const std::function<void(const EpochRecord&)>& on_epoch) {
  hp.validate();
  if (kg.empty()) throw DomainError("knowledge graph has no triples");
  if (!ds.is_split()) throw DomainError("dataset must be split before training");
  for (const auto e : ds.item_to_entity) {
    if (!kg.valid(e)) throw DomainError("item maps to an entity outside the KG");
  }

  RippleIndex owned;
  if (ripples == nullptr) {
    owned = build_ripple_index(kg, ds, hp);
    ripples = &owned;
  } else if (ripples->hops != hp.hops || ripples->size != hp.ripple_size ||
             ripples->by_user.size() != ds.user_count()) {
    throw DomainError("precomputed ripple sets do not match hyperparameters");
  }

  std::vector<std::size_t> train_idx;
  std::size_t eval_count = 0;
  for (std::size_t i = 0; i < ds.examples.size(); ++i) {
    if (ripples->find(ds.examples[i].user) == nullptr) continue;
    if (ds.split[i] == Split::kTrain) train_idx.push_back(i);
    if (ds.split[i] == Split::kEval) ++eval_count;
  }
  if (train_idx.empty()) throw DomainError("no trainable users");

  TrainResult result;
  TrainReport& report = result.report;
  report.hp = hp;
  report.trainable_users = ripples->trainable_users();
  report.users_without_history = ripples->users_without_history;
  report.users_without_triples = ripples->users_without_triples;
  report.train_examples = train_idx.size();
  report.eval_examples = eval_count;

  result.params = ModelParams::initialize(
      kg.entity_count(), ds.item_count(), kg.relation_count(), hp.dim,
      derive_seed(hp.seed, SeedPurpose::kInit));
  ModelParams& params = result.params;

  std::mt19937_64 shuffle_rng(derive_seed(hp.seed, SeedPurpose::kShuffle));
  TripleBatchSampler sampler(kg, derive_seed(hp.seed, SeedPurpose::kTripleBatches));

  using Clock = std::chrono::steady_clock;
  auto start = Clock::now();
  measure(report.initial, ds, *ripples, params);
  report.initial.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (on_epoch) on_epoch(report.initial);

  const auto batch_size = static_cast<std::size_t>(hp.batch_size);
  std::vector<LabeledExample> batch;
  batch.reserve(batch_size);
  for (int epoch = 1; epoch <= hp.epochs; ++epoch) {
    start = Clock::now();
    std::shuffle(train_idx.begin(), train_idx.end(), shuffle_rng);
    EpochRecord rec;
    rec.epoch = epoch;
    for (std::size_t begin = 0; begin < train_idx.size(); begin += batch_size) {
      const std::size_t end = std::min(train_idx.size(), begin + batch_size);
      batch.clear();
      for (std::size_t j = begin; j < end; ++j) {
        const auto& ex = ds.examples[train_idx[j]];
        batch.push_back({ripples->find(ex.user), ex.item, ex.label});
      }
      const auto triples = sampler.sample(batch_size);
      LossAndGradients lg = loss_and_gradients(batch, triples, params, hp);
      lg.grad *= 1.0 / static_cast<double>(batch.size());
      apply_gradients(params, lg.grad, hp.lr);
      rec.batch_ctr += lg.loss.ctr;
      rec.batch_kge += lg.loss.kge;
      rec.batch_reg += lg.loss.reg;
    }
    if (!params.all_finite()) {
      throw NumericError("parameters became non-finite in epoch " + std::to_string(epoch));
    }
    const double n = static_cast<double>(train_idx.size());
    rec.batch_ctr /= n;
    rec.batch_kge /= n;
    rec.batch_reg /= n;
    measure(rec, ds, *ripples, params);
    rec.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    spdlog::info("epoch {}: ctr={:.5f} kge={:.5f} reg={:.3g} train_ctr={:.5f} eval_auc={}",
                 epoch, rec.batch_ctr, rec.batch_kge, rec.batch_reg, rec.train_ctr,
                 rec.eval_auc ? std::to_string(*rec.eval_auc) : "n/a");
    if (on_epoch) on_epoch(rec);
    report.epochs.push_back(rec);
  }
  return result;
}

void write_report_jsonl(std::ostream& out, const TrainReport& report) {
  const Hyperparams& hp = report.hp;
  const nlohmann::json config = {
      {"type", "config"},
      {"dim", hp.dim},
      {"hops", hp.hops},
      {"ripple_size", hp.ripple_size},
      {"l2_weight", hp.l2_weight},
      {"kge_weight", hp.kge_weight},
      {"lr", hp.lr},
      {"batch_size", hp.batch_size},
      {"epochs", hp.epochs},
      {"seed", hp.seed},
      {"trainable_users", report.trainable_users},
      {"users_without_history", report.users_without_history},
      {"users_without_triples", report.users_without_triples},
      {"train_examples", report.train_examples},
      {"eval_examples", report.eval_examples}};
  out << config.dump() << '\n';
  out << epoch_json(report.initial).dump() << '\n';
  for (const auto& e : report.epochs) out << epoch_json(e).dump() << '\n';
  const nlohmann::json summary = {{"type", "summary"},
                                  {"epochs", report.epochs.size()},
                                  {"checkpoint", report.checkpoint}};
  out << summary.dump() << '\n';
}

void write_timing_jsonl(std::ostream& out, const TrainReport& report) {
  out << nlohmann::json{{"epoch", 0}, {"wall_seconds", report.initial.wall_seconds}}.dump()
      << '\n';
  for (const auto& e : report.epochs) {
    out << nlohmann::json{{"epoch", e.epoch}, {"wall_seconds", e.wall_seconds}}.dump() << '\n';
  }
}

}  // namespace ripple
