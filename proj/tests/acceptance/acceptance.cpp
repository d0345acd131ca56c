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

// Acceptance suite. Prints one PASS/FAIL/SKIP line per criterion and exits
// non-zero if any criterion fails. Pass criterion numbers to run a subset.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "commands.hpp"
#include "oracles.hpp"
#include "ripple/dataset.hpp"
#include "ripple/kg.hpp"
#include "ripple/metrics.hpp"
#include "ripple/model.hpp"
#include "ripple/synthetic.hpp"
#include "ripple/trainer.hpp"

namespace ripple::acceptance {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Pinned tolerances and limits.
constexpr double kFdStep = 1e-5;
constexpr double kGradRelTol = 1e-4;
constexpr double kGradAbsTol = 1e-7;
constexpr double kGradSeconds = 60.0;
constexpr double kConservationTol = 1e-9;
constexpr double kRippleSeconds = 30.0;
constexpr double kAucTol = 1e-12;
constexpr double kPlantedAuc = 0.85;
constexpr double kPlantedSeconds = 120.0;
constexpr double kHopSlack = 0.02;
constexpr double kFullScaleAuc = 0.90;

enum class Outcome { kPass, kFail, kSkip };

struct Result {
  Outcome outcome = Outcome::kFail;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

// 1. Analytic gradients against central differences.
Result gradient_check() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240101);
  const int dims[] = {2, 4, 8};
  const int hops[] = {1, 2, 3};
  const int sizes[] = {1, 2, 4};
  const double weights[] = {0.0, 0.01};
  std::size_t entries = 0;
  std::size_t failures = 0;
  double worst = 0.0;
  for (int instance = 0; instance < 50; ++instance) {
    const int d = dims[rng() % 3];
    const int h = hops[rng() % 3];
    const int s = sizes[rng() % 3];
    Hyperparams hp;
    hp.l2_weight = weights[rng() % 2];
    hp.kge_weight = weights[rng() % 2];
    const std::size_t entities = 8, items = 4, relations = 3;
    const auto params = oracle::random_params(rng, entities, items, relations, d);
    std::vector<RippleSets> ripples;
    for (int i = 0; i < 3; ++i) ripples.push_back(oracle::random_ripple(rng, entities, relations, h, s));
    std::vector<LabeledExample> batch;
    for (int i = 0; i < 3; ++i) batch.push_back({&ripples[i], ItemId(rng() % items), i % 2});
    std::vector<LabeledTriple> triples;
    for (const auto& t : oracle::random_triples(rng, entities, relations, 4)) {
      triples.push_back({t, static_cast<int>(rng() % 2)});
    }
    const Gradients g = gradients(batch, triples, params, hp);
    oracle::finite_differences(
        params, batch, triples, hp.l2_weight, hp.kge_weight, kFdStep,
        [&](int kind, std::size_t id, int row, int col, double numeric) {
          double analytic = 0.0;
          if (kind == 0) analytic = g.entity_row(EntityId(id))(row);
          if (kind == 1) analytic = g.item_row(ItemId(id))(row);
          if (kind == 2) analytic = g.relation_matrix(RelationId(id))(row, col);
          ++entries;
          const double scale = std::max(std::abs(analytic), std::abs(numeric));
          if (scale >= kGradAbsTol) worst = std::max(worst, std::abs(analytic - numeric) / scale);
          if (!oracle::gradient_close(analytic, numeric, kGradRelTol, kGradAbsTol)) ++failures;
        });
  }
  const double secs = seconds_since(start);
  Result r;
  r.outcome = failures == 0 && secs < kGradSeconds ? Outcome::kPass : Outcome::kFail;
  r.detail = "50 instances, " + std::to_string(entries) + " entries, " + std::to_string(failures) +
             " mismatches, max rel err " + fmt("%.2e", worst) + ", " + fmt("%.2f", secs) + " s";
  return r;
}

// 2. Softmax conservation and the open probability interval.
Result forward_conservation() {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  std::size_t out_of_range = 0;
  for (int pass = 0; pass < 1000; ++pass) {
    const int d = 1 + static_cast<int>(rng() % 16);
    const int h = 1 + static_cast<int>(rng() % 4);
    const int s = 1 + static_cast<int>(rng() % 32);
    const auto params = oracle::random_params(rng, 50, 10, 5, d, 1.0 + static_cast<double>(rng() % 3));
    const auto rs = oracle::random_ripple(rng, 50, 5, h, s);
    const auto trace = propagate(rs, ItemId(rng() % 10), params);
    for (const auto& hop : trace.hops) worst = std::max(worst, std::abs(hop.probs.sum() - 1.0));
    if (!(trace.prob > 0.0 && trace.prob < 1.0)) ++out_of_range;
  }
  Result r;
  r.outcome = worst <= kConservationTol && out_of_range == 0 ? Outcome::kPass : Outcome::kFail;
  r.detail = "1000 passes, max |sum p - 1| " + fmt("%.2e", worst) + ", " +
             std::to_string(out_of_range) + " predictions outside (0,1)";
  return r;
}

// 3. relevant_entities and ripple sampling against a triple-scan BFS.
Result ripple_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(99);
  std::size_t level_mismatches = 0;
  std::size_t outside_pool = 0;
  std::size_t bad_fallbacks = 0;
  std::size_t fallbacks = 0;
  std::size_t sampled = 0;
  for (int graph = 0; graph < 100; ++graph) {
    const std::size_t entities = 2 + rng() % 199;
    const std::size_t relations = 1 + rng() % 8;
    const std::size_t edges = 1 + rng() % 1000;
    const auto raw = oracle::random_triples(rng, entities, relations, edges);
    const auto kg = KnowledgeGraph::from_triples(entities, relations, raw);
    std::vector<EntityId> seeds;
    const std::size_t n_seeds = 1 + rng() % 4;
    for (std::size_t i = 0; i < n_seeds; ++i) seeds.push_back(raw[rng() % raw.size()].head);
    std::vector<std::uint32_t> seed_ids;
    for (auto e : seeds) seed_ids.push_back(e.value);

    for (int k = 1; k <= 4; ++k) {
      const auto got = relevant_entities(kg, seeds, k);
      std::set<std::uint32_t> got_set;
      for (auto e : got) got_set.insert(e.value);
      if (got_set != oracle::bfs_level(raw, seed_ids, k)) ++level_mismatches;
    }

    const int hop_count = 1 + static_cast<int>(rng() % 4);
    const int size = 1 + static_cast<int>(rng() % 16);
    const auto rs = build_ripple_sets(kg, seeds, hop_count, size, rng());
    const std::set<Triple> all(raw.begin(), raw.end());
    std::vector<std::uint32_t> frontier = seed_ids;
    for (int k = 0; k < hop_count; ++k) {
      const auto& hop = rs.hops[k];
      if (rs.fallback[k]) {
        ++fallbacks;
        // Fallback fires only when nothing leaves the previous tails.
        bool pool_empty = true;
        const std::set<std::uint32_t> heads(frontier.begin(), frontier.end());
        for (const auto& t : raw) pool_empty = pool_empty && !heads.count(t.head.value);
        if (k == 0 || !pool_empty || hop != rs.hops[k - 1]) ++bad_fallbacks;
        continue;
      }
      // Exact pool: triples whose head is in the (k-1)-hop relevant set.
      const auto level = oracle::bfs_level(raw, seed_ids, k);
      const std::set<std::uint32_t> prev_tails(frontier.begin(), frontier.end());
      std::vector<std::uint32_t> tails;
      for (const auto& t : hop) {
        ++sampled;
        const bool in_pool = all.count(t) && level.count(t.head.value) &&
                             prev_tails.count(t.head.value);
        if (!in_pool) ++outside_pool;
        tails.push_back(t.tail.value);
      }
      frontier = tails;
    }
  }
  const double secs = seconds_since(start);
  Result r;
  const bool ok = level_mismatches == 0 && outside_pool == 0 && bad_fallbacks == 0 &&
                  secs < kRippleSeconds;
  r.outcome = ok ? Outcome::kPass : Outcome::kFail;
  r.detail = "100 graphs, " + std::to_string(level_mismatches) + " level mismatches, " +
             std::to_string(sampled) + " sampled triples (" + std::to_string(outside_pool) +
             " outside pool), " + std::to_string(fallbacks) + " fallback hops (" +
             std::to_string(bad_fallbacks) + " invalid), " + fmt("%.2f", secs) + " s";
  return r;
}

// 4. AUC and top-K metrics against brute-force oracles.
Result metric_oracles() {
  std::mt19937_64 rng(4);
  double worst = 0.0;
  std::size_t topk_mismatches = 0;
  for (int set = 0; set < 100; ++set) {
    const std::size_t n = 2 + rng() % 299;
    const int levels = 1 + static_cast<int>(rng() % 50);
    std::vector<PredictionRecord> records;
    for (std::size_t i = 0; i < n; ++i) {
      const int label = i < 2 ? static_cast<int>(i) : static_cast<int>(rng() % 2);
      records.push_back({UserId(0), ItemId(i), label, static_cast<double>(rng() % levels) / levels});
    }
    worst = std::max(worst, std::abs(auc(records) - oracle::pairwise_auc(records)));

    UserCandidates user;
    const std::size_t items = 1 + rng() % 60;
    for (std::size_t v = 0; v < items; ++v) {
      user.candidates.push_back({ItemId(v), static_cast<double>(rng() % levels)});
      if (rng() % 4 == 0) user.test_positives.push_back(ItemId(v));
    }
    if (user.test_positives.empty()) user.test_positives.push_back(ItemId(0));
    for (std::size_t k : {1u, 3u, 10u, 50u}) {
      const auto m = topk_metrics({&user, 1}, k);
      const auto o = oracle::naive_topk(user.candidates, user.test_positives, k);
      if (m.precision != o.precision || m.recall != o.recall || m.f1 != o.f1) ++topk_mismatches;
    }
  }
  Result r;
  r.outcome = worst <= kAucTol && topk_mismatches == 0 ? Outcome::kPass : Outcome::kFail;
  r.detail = "100 record sets, max |AUC - oracle| " + fmt("%.2e", worst) + ", " +
             std::to_string(topk_mismatches) + " top-K mismatches over 400 cases";
  return r;
}

struct PlantedSetup {
  KnowledgeGraph kg;
  InteractionDataset ds;
};

PlantedSetup planted_setup() {
  const auto data = load_planted(make_planted_corpus(PlantedConfig{}));
  PlantedSetup s;
  s.kg = data.kg;
  s.ds = split(implicit_transform(data.ratings, 4.0, 1).value, SplitRatios{}, 2).value;
  return s;
}

Hyperparams planted_hp() {
  Hyperparams hp;
  hp.dim = 8;
  hp.hops = 2;
  hp.ripple_size = 8;
  hp.lr = 0.02;
  hp.kge_weight = 0.01;
  hp.l2_weight = 1e-7;
  hp.batch_size = 4;
  hp.epochs = 20;
  hp.seed = 3;
  return hp;
}

double test_auc(const PlantedSetup& s, const Hyperparams& hp) {
  const auto index = build_ripple_index(s.kg, s.ds, hp);
  const auto r = train(s.ds, s.kg, hp, &index);
  return auc(predict_split(s.ds, index, r.params, Split::kTest));
}

// 5. Planted two-community corpus is learned.
Result planted_learning() {
  const auto start = Clock::now();
  const auto s = planted_setup();
  // Model-free separability: shared 1-hop neighbors with the train history.
  const auto histories = user_histories(s.ds);
  const std::vector<Triple> triples(s.kg.triples().begin(), s.kg.triples().end());
  std::vector<PredictionRecord> nb;
  for (const auto i : s.ds.indices(Split::kEval)) {
    const auto& ex = s.ds.examples[i];
    nb.push_back({ex.user, ex.item, ex.label,
                  oracle::neighbor_count_score(triples, histories[ex.user.index()],
                                               s.ds.item_to_entity[ex.item.index()])});
  }
  const double separability = oracle::pairwise_auc(nb);

  const auto r = train(s.ds, s.kg, planted_hp());
  const double secs = seconds_since(start);
  const auto& last = r.report.epochs.back();
  const double eval_auc = last.eval_auc.value_or(0.0);
  const bool ok = separability > kPlantedAuc && eval_auc > kPlantedAuc &&
                  last.train_ctr < r.report.initial.train_ctr && secs < kPlantedSeconds;
  Result res;
  res.outcome = ok ? Outcome::kPass : Outcome::kFail;
  res.detail = "neighbor-count oracle AUC " + fmt("%.4f", separability) + ", eval AUC " +
               fmt("%.4f", eval_auc) + ", train CTR " + fmt("%.4f", r.report.initial.train_ctr) +
               " -> " + fmt("%.4f", last.train_ctr) + ", " + fmt("%.2f", secs) + " s";
  return res;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"ripplenet"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

// 6. Two identical prepare+train+eval runs give byte-identical reports.
Result determinism() {
  const fs::path dir = fs::temp_directory_path() / "ripple_acceptance_determinism";
  fs::remove_all(dir);
  Result r;
  if (cli({"synth", "--dir", dir.string()}) != 0) {
    r.detail = "synth failed";
    return r;
  }
  const std::string conf = (dir / "ripple.conf").string();
  const std::vector<std::string> files = {"entities.tsv", "relations.tsv", "triples.tsv",
                                          "users.tsv",    "items.tsv",     "examples.tsv",
                                          "ripple.tsv",   "model.ckpt",    "train_report.jsonl",
                                          "eval_test.tsv"};
  std::vector<std::vector<std::string>> runs;
  for (int attempt = 0; attempt < 2; ++attempt) {
    fs::remove_all(dir / "out");
    for (const char* cmd : {"prepare", "train", "eval"}) {
      if (cli({"--config", conf, cmd}) != 0) {
        r.detail = std::string(cmd) + " failed";
        return r;
      }
    }
    runs.emplace_back();
    for (const auto& f : files) runs.back().push_back(slurp(dir / "out" / f));
  }
  std::size_t differing = 0;
  for (std::size_t i = 0; i < files.size(); ++i) differing += runs[0][i] != runs[1][i];
  r.outcome = differing == 0 ? Outcome::kPass : Outcome::kFail;
  r.detail = std::to_string(files.size()) + " artifacts compared, " + std::to_string(differing) +
             " differ";
  return r;
}

// 7. Larger ripple sets and a second hop do not hurt on the planted corpus.
Result ablation() {
  const auto s = planted_setup();
  auto hp = planted_hp();
  hp.ripple_size = 2;
  const double s2 = test_auc(s, hp);
  hp.ripple_size = 16;
  const double s16 = test_auc(s, hp);
  hp = planted_hp();
  hp.hops = 1;
  const double h1 = test_auc(s, hp);
  hp.hops = 2;
  const double h2 = test_auc(s, hp);
  Result r;
  r.outcome = s16 >= s2 && h2 >= h1 - kHopSlack ? Outcome::kPass : Outcome::kFail;
  r.detail = "test AUC S=2 " + fmt("%.4f", s2) + ", S=16 " + fmt("%.4f", s16) + "; H=1 " +
             fmt("%.4f", h1) + ", H=2 " + fmt("%.4f", h2);
  return r;
}

// 8. Full-scale movie corpus in the public release layout: kg_final.txt
// (head relation tail ids) and ratings_final.txt (user item label, negatives
// included, item ids shared with entity ids).
Result full_scale() {
  const char* dir_env = std::getenv("RIPPLE_ML1M_DIR");
  Result r;
  if (dir_env == nullptr || *dir_env == '\0') {
    r.outcome = Outcome::kSkip;
    r.detail = "set RIPPLE_ML1M_DIR to a directory with kg_final.txt and ratings_final.txt";
    return r;
  }
  const fs::path dir(dir_env);
  std::ifstream kg_in(dir / "kg_final.txt");
  std::ifstream ratings_in(dir / "ratings_final.txt");
  if (!kg_in || !ratings_in) {
    r.detail = "cannot open kg_final.txt / ratings_final.txt in " + dir.string();
    return r;
  }
  // Whitespace-separated ids; rewrite as tab-separated records.
  std::stringstream kg_tsv;
  for (std::string h, rel, t; kg_in >> h >> rel >> t;) kg_tsv << h << '\t' << rel << '\t' << t << '\n';
  const KnowledgeGraph kg = load_kg(kg_tsv);
  InteractionDataset ds;
  for (std::string u, v; ratings_in >> u >> v;) {
    int label = 0;
    ratings_in >> label;
    const auto entity = kg.find_entity(v);
    if (!entity) continue;
    const UserId user(ds.users.intern(u));
    const std::size_t before = ds.items.size();
    const ItemId item(ds.items.intern(v));
    if (ds.items.size() != before) ds.item_to_entity.push_back(*entity);
    ds.examples.push_back({user, item, label});
  }
  ds = split(std::move(ds), SplitRatios{}, 1).value;
  Hyperparams hp;  // d=16, H=2, lambda1=1e-7, lambda2=0.01, eta=0.02
  hp.batch_size = std::getenv("RIPPLE_ML1M_BATCH") ? std::atoi(std::getenv("RIPPLE_ML1M_BATCH")) : 32;
  hp.epochs = std::getenv("RIPPLE_ML1M_EPOCHS") ? std::atoi(std::getenv("RIPPLE_ML1M_EPOCHS")) : 10;
  hp.seed = 1;
  const auto result = train(ds, kg, hp);
  const auto& last = result.report.epochs.back();
  const double eval_auc = last.eval_auc.value_or(0.0);
  r.outcome = eval_auc >= kFullScaleAuc ? Outcome::kPass : Outcome::kFail;
  r.detail = "eval AUC " + fmt("%.4f", eval_auc) + " after " + std::to_string(hp.epochs) +
             " epochs (batch " + std::to_string(hp.batch_size) + ")";
  return r;
}

}  // namespace
}  // namespace ripple::acceptance

int main(int argc, char** argv) {
  using namespace ripple::acceptance;
  spdlog::set_level(spdlog::level::warn);
  struct Criterion {
    int id;
    const char* name;
    std::function<Result()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "gradient correctness", gradient_check},
      {2, "forward-pass conservation", forward_conservation},
      {3, "ripple-set oracle equivalence", ripple_oracle},
      {4, "metric oracles", metric_oracles},
      {5, "planted learning", planted_learning},
      {6, "CLI determinism", determinism},
      {7, "hop/size ablation shape", ablation},
      {8, "full-scale movie corpus (optional)", full_scale},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r.outcome = Outcome::kFail;
      r.detail = std::string("exception: ") + e.what();
    }
    const char* tag = r.outcome == Outcome::kPass ? "PASS" : r.outcome == Outcome::kSkip ? "SKIP" : "FAIL";
    if (r.outcome == Outcome::kFail) ++failures;
    std::printf("[%s] %d %s: %s\n", tag, c.id, c.name, r.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
