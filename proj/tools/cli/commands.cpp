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

#include "commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "ripple/artifacts.hpp"
#include "ripple/checkpoint.hpp"
#include "ripple/config.hpp"
#include "ripple/error.hpp"
#include "ripple/insight.hpp"
#include "ripple/metrics.hpp"
#include "ripple/seeds.hpp"
#include "ripple/synthetic.hpp"
#include "ripple/trainer.hpp"

namespace ripple::cli {

namespace {

namespace fs = std::filesystem;

struct MissingFile : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MissingCheckpoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownId : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr const char* kPreparedFiles[] = {"entities.tsv", "relations.tsv", "triples.tsv",
                                          "users.tsv",    "items.tsv",     "examples.tsv"};

void configure_logging() {
  auto logger = spdlog::get("ripplenet");
  if (!logger) logger = spdlog::stderr_color_mt("ripplenet");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("RIPPLE_LOG");
  const std::string name = env ? env : "info";
  const auto level = spdlog::level::from_str(name);
  if (level == spdlog::level::off && name != "off") {
    spdlog::set_level(spdlog::level::info);
    spdlog::warn("unknown RIPPLE_LOG level '{}', using info", name);
  } else {
    spdlog::set_level(level);
  }
}

void require_file(const fs::path& p, const std::string& what) {
  if (p.empty()) throw MissingFile(what + " path is not configured");
  if (!fs::is_regular_file(p)) throw MissingFile("missing " + what + " file: " + p.string());
}

// Runs `load`, prefixing parse errors with the file they came from.
template <class F>
auto load_from(const fs::path& p, F&& load) {
  try {
    return load();
  } catch (const ParseError& e) {
    throw ParseError(p.string() + ": " + e.what(), e.line());
  }
}

std::string fixed(double v, int precision = 6) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw FormatError("cannot write " + p.string());
}

std::string file_safe(const std::string& s) {
  std::string out;
  for (const char c : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out.push_back(ok ? c : '_');
  }
  return out;
}

PreparedData load_prepared(const RunConfig& cfg) {
  for (const char* f : kPreparedFiles) require_file(cfg.out / f, "prepared");
  return read_prepared(cfg.out);
}

RippleIndex load_index(const RunConfig& cfg, const PreparedData& p) {
  auto cached = read_ripple_cache(cfg.out / "ripple.tsv", cfg.hp, p.ds);
  if (cached) return std::move(*cached);
  spdlog::warn("ripple cache missing or built with other settings; rebuilding in memory");
  return build_ripple_index(p.kg, p.ds, cfg.hp);
}

ModelParams load_model(const RunConfig& cfg, const PreparedData& p) {
  const fs::path path = cfg.checkpoint_path();
  if (!fs::is_regular_file(path)) throw MissingCheckpoint("missing checkpoint: " + path.string());
  ModelParams params = load_checkpoint(path);
  if (params.entity_count() != p.kg.entity_count() || params.item_count() != p.ds.item_count() ||
      params.relation_count() != p.kg.relation_count()) {
    throw DomainError("checkpoint " + path.string() + " does not match the prepared data");
  }
  return params;
}

UserId find_user(const InteractionDataset& ds, const std::string& name) {
  const auto id = ds.users.find(name);
  if (!id) throw UnknownId("unknown user id '" + name + "'");
  return UserId(*id);
}

ItemId find_item(const InteractionDataset& ds, const std::string& name) {
  const auto id = ds.items.find(name);
  if (!id) throw UnknownId("unknown item id '" + name + "'");
  return ItemId(*id);
}

// Scores every item the user did not touch in train.
std::vector<ScoredItem> score_candidates(const InteractionDataset& ds, const RippleSets& ripple,
                                         const std::vector<ItemId>& train_items,
                                         const ModelParams& params) {
  std::vector<ScoredItem> out;
  for (std::size_t v = 0; v < ds.item_count(); ++v) {
    const ItemId item(v);
    if (std::binary_search(train_items.begin(), train_items.end(), item)) continue;
    out.push_back({item, predict(ripple, item, params)});
  }
  return out;
}

const RippleSets& user_ripple(const RippleIndex& index, const InteractionDataset& ds, UserId u) {
  const RippleSets* rs = index.find(u);
  if (rs == nullptr) {
    throw DomainError("user '" + ds.users.name(u.index()) +
                      "' has no usable train history in the knowledge graph");
  }
  return *rs;
}

int cmd_prepare(const RunConfig& cfg, std::ostream& out) {
  require_file(cfg.kg, "knowledge graph");
  require_file(cfg.ratings, "ratings");
  require_file(cfg.item_map, "item map");
  const KnowledgeGraph kg = load_from(cfg.kg, [&] { return load_kg_file(cfg.kg); });
  const RatingTable table = load_from(
      cfg.ratings, [&] { return load_ratings_files(cfg.ratings, cfg.item_map, kg); });
  if (table.dropped_items > 0) {
    spdlog::warn("dropped {} ratings on {} items without a unique KG entity",
                 table.dropped_ratings, table.dropped_items);
  }
  auto implicit = implicit_transform(table, cfg.threshold,
                                     derive_seed(cfg.hp.seed, SeedPurpose::kNegativeSampling));
  auto split_ds = split(std::move(implicit.value), cfg.split,
                        derive_seed(cfg.hp.seed, SeedPurpose::kSplit));
  const InteractionDataset& ds = split_ds.value;

  fs::create_directories(cfg.out);
  write_prepared(cfg.out, kg, ds);
  const RippleIndex index = build_ripple_index(kg, ds, cfg.hp);
  write_ripple_cache(cfg.out / "ripple.tsv", index, cfg.hp.seed);

  const auto row = [&](const char* key, auto value) { out << key << '\t' << value << '\n'; };
  row("entities", kg.entity_count());
  row("relations", kg.relation_count());
  row("triples", kg.triples().size());
  row("users", ds.user_count());
  row("items", ds.item_count());
  row("dropped_items", table.dropped_items);
  row("dropped_ratings", table.dropped_ratings);
  row("examples", ds.examples.size());
  row("train", ds.indices(Split::kTrain).size());
  row("eval", ds.indices(Split::kEval).size());
  row("test", ds.indices(Split::kTest).size());
  row("trainable_users", index.trainable_users());
  row("users_without_history", index.users_without_history);
  row("users_without_triples", index.users_without_triples);
  row("warnings", implicit.warnings.size() + split_ds.warnings.size());
  return kExitOk;
}

int cmd_train(const RunConfig& cfg, std::ostream& out) {
  cfg.hp.validate();
  const PreparedData p = load_prepared(cfg);
  const RippleIndex index = load_index(cfg, p);
  TrainResult r = train(p.ds, p.kg, cfg.hp, &index);
  const fs::path ckpt = cfg.checkpoint_path();
  if (ckpt.has_parent_path()) fs::create_directories(ckpt.parent_path());
  save_checkpoint(ckpt, r.params);
  r.report.checkpoint = ckpt.string();

  std::ostringstream report, timing;
  write_report_jsonl(report, r.report);
  write_timing_jsonl(timing, r.report);
  write_text(cfg.out / "train_report.jsonl", report.str());
  write_text(cfg.out / "timing.jsonl", timing.str());

  const EpochRecord& last = r.report.epochs.empty() ? r.report.initial : r.report.epochs.back();
  out << "epochs\t" << r.report.epochs.size() << '\n';
  out << "train_ctr_initial\t" << fixed(r.report.initial.train_ctr) << '\n';
  out << "train_ctr_final\t" << fixed(last.train_ctr) << '\n';
  out << "eval_auc\t" << (last.eval_auc ? fixed(*last.eval_auc) : "NA") << '\n';
  out << "checkpoint\t" << ckpt.string() << '\n';
  return kExitOk;
}

int cmd_eval(const RunConfig& cfg, const std::string& split_name, std::ostream& out) {
  const auto which = parse_split(split_name);
  if (!which) throw UsageError("--split must be train, eval or test");
  const PreparedData p = load_prepared(cfg);
  const RippleIndex index = load_index(cfg, p);
  const ModelParams params = load_model(cfg, p);
  const auto records = predict_split(p.ds, index, params, *which);
  if (records.empty()) throw DomainError("no scorable examples in split " + split_name);

  std::ostringstream text;
  text << "split\t" << split_name << '\n';
  text << "examples\t" << records.size() << '\n';
  text << "auc\t" << fixed(auc(records)) << '\n';
  text << "acc\t" << fixed(accuracy(records)) << '\n';
  if (!cfg.topk.empty()) {
    const auto train_items = items_by_user(p.ds, Split::kTrain, std::nullopt);
    const auto positives = items_by_user(p.ds, *which, 1);
    std::vector<UserCandidates> users;
    for (std::size_t u = 0; u < p.ds.user_count(); ++u) {
      const RippleSets* rs = index.find(UserId(u));
      if (rs == nullptr || positives[u].empty()) continue;
      users.push_back({UserId(u), score_candidates(p.ds, *rs, train_items[u], params), positives[u]});
    }
    text << "k\tprecision\trecall\tf1\tusers\n";
    for (const auto k : cfg.topk) {
      const auto m = topk_metrics(users, k);
      text << k << '\t' << fixed(m.precision) << '\t' << fixed(m.recall) << '\t' << fixed(m.f1)
           << '\t' << m.users << '\n';
    }
  }
  write_text(cfg.out / ("eval_" + split_name + ".tsv"), text.str());
  out << text.str();
  return kExitOk;
}

int cmd_recommend(const RunConfig& cfg, const std::vector<std::string>& user_names,
                  std::size_t k, std::ostream& out) {
  if (k < 1) throw UsageError("--k must be >= 1");
  const PreparedData p = load_prepared(cfg);
  std::vector<UserId> users;
  for (const auto& name : user_names) users.push_back(find_user(p.ds, name));
  const RippleIndex index = load_index(cfg, p);
  const ModelParams params = load_model(cfg, p);
  const auto train_items = items_by_user(p.ds, Split::kTrain, std::nullopt);
  for (const auto u : users) {
    const RippleSets& rs = user_ripple(index, p.ds, u);
    for (const auto& s : top_k(score_candidates(p.ds, rs, train_items[u.index()], params), k)) {
      out << p.ds.users.name(u.index()) << '\t' << p.ds.items.name(s.item.index()) << '\t'
          << fixed(s.score) << '\n';
    }
  }
  return kExitOk;
}

int cmd_explain(const RunConfig& cfg, const std::string& user_name, const std::string& item_name,
                std::ostream& out) {
  const PreparedData p = load_prepared(cfg);
  const UserId user = find_user(p.ds, user_name);
  const ItemId item = find_item(p.ds, item_name);
  const RippleIndex index = load_index(cfg, p);
  const ModelParams params = load_model(cfg, p);
  const RippleSets& rs = user_ripple(index, p.ds, user);
  const ExplanationGraph g = explain(rs, item, params, cfg.explain_threshold);
  if (g.truncated) spdlog::warn("path list truncated at {} paths", g.paths.size());

  const std::string stem = "explain_" + file_safe(user_name) + "_" + file_safe(item_name);
  const std::string title = "user " + user_name + ", item " + item_name + ", score " +
                            fixed(predict(rs, item, params), 4);
  std::ostringstream dot, paths;
  write_dot(dot, g, p.kg, title);
  write_paths(paths, g, p.kg);
  write_text(cfg.out / (stem + ".dot"), dot.str());
  write_text(cfg.out / (stem + ".paths.txt"), paths.str());
  out << "edges\t" << g.edges.size() << '\n';
  out << "paths\t" << g.paths.size() << '\n';
  out << "graph\t" << (cfg.out / (stem + ".dot")).string() << '\n';
  out << "path_list\t" << (cfg.out / (stem + ".paths.txt")).string() << '\n';
  return kExitOk;
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out) {
  const PreparedData p = load_prepared(cfg);
  const auto rows = neighbor_overlap_study(p.kg, p.ds, cfg.pair_count, cfg.max_hop,
                                           derive_seed(cfg.hp.seed, SeedPurpose::kOverlapStudy));
  std::ostringstream text;
  write_overlap_tsv(text, rows);
  write_text(cfg.out / "analyze.tsv", text.str());
  out << text.str();
  return kExitOk;
}

int cmd_synth(const fs::path& dir, const PlantedConfig& planted, std::ostream& out) {
  const PlantedCorpus corpus = make_planted_corpus(planted);
  write_planted_corpus(corpus, dir);
  RunConfig cfg;
  apply_setting(cfg, "kg", (dir / "kg.tsv").string());
  apply_setting(cfg, "ratings", (dir / "ratings.tsv").string());
  apply_setting(cfg, "item_map", (dir / "item_map.tsv").string());
  apply_setting(cfg, "out", (dir / "out").string());
  apply_setting(cfg, "threshold", "4");
  for (const auto& [key, value] :
       std::vector<std::pair<const char*, const char*>>{{"dim", "8"}, {"hops", "2"},
                                                        {"ripple_size", "8"}, {"lr", "0.02"},
                                                        {"kge_weight", "0.01"}, {"l2_weight", "1e-7"},
                                                        {"batch_size", "4"}, {"epochs", "20"},
                                                        {"topk", "1,5,10"}, {"pair_count", "3000"}}) {
    apply_setting(cfg, key, value);
  }
  write_text(dir / "ripple.conf", dump_config(cfg));
  out << "triples\t" << corpus.triples.size() << '\n';
  out << "ratings\t" << corpus.ratings.size() << '\n';
  out << "items\t" << corpus.item_map.size() << '\n';
  out << "config\t" << (dir / "ripple.conf").string() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  configure_logging();

  CLI::App app{"Preference propagation over a knowledge graph for click-through prediction.",
               "ripplenet"};
  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--set", overrides, "override one config key (key=value), repeatable")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.require_subcommand(1);

  auto* prepare = app.add_subcommand("prepare", "load raw inputs, write dataset and ripple cache");
  auto* train_cmd = app.add_subcommand("train", "train and write a checkpoint and report");
  auto* eval = app.add_subcommand("eval", "print AUC/ACC and an optional top-K table");
  std::string split_name = "test";
  eval->add_option("--split", split_name, "train, eval or test")->capture_default_str();
  auto* recommend = app.add_subcommand("recommend", "top-K unseen items for users");
  std::vector<std::string> rec_users;
  std::size_t rec_k = 10;
  recommend->add_option("--user", rec_users, "user id, repeatable")->required();
  recommend->add_option("--k", rec_k, "items per user")->capture_default_str();
  auto* explain_cmd = app.add_subcommand("explain", "write the explanation graph for a pair");
  std::string ex_user, ex_item, ex_threshold;
  explain_cmd->add_option("--user", ex_user, "user id")->required();
  explain_cmd->add_option("--item", ex_item, "item id")->required();
  explain_cmd->add_option("--threshold", ex_threshold, "edge score cutoff (-inf keeps all)");
  auto* analyze = app.add_subcommand("analyze", "neighbor overlap of co-rated item pairs");
  auto* synth = app.add_subcommand("synth", "write a planted two-community corpus");
  std::string synth_dir;
  PlantedConfig planted;
  synth->add_option("--dir", synth_dir, "output directory")->required();
  synth->add_option("--seed", planted.seed, "generator seed")->capture_default_str();
  synth->add_option("--users", planted.users, "number of users")->capture_default_str();
  for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) {
      require_file(config_path, "config");
      cfg = load_config(config_path);
    }
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
      try {
        apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
      } catch (const ParseError& e) {
        throw UsageError(std::string("--set: ") + e.what());
      }
    }
    if (!ex_threshold.empty()) {
      try {
        apply_setting(cfg, "explain_threshold", ex_threshold);
      } catch (const ParseError& e) {
        throw UsageError(std::string("--threshold: ") + e.what());
      }
    }

    if (*prepare) return cmd_prepare(cfg, out);
    if (*train_cmd) return cmd_train(cfg, out);
    if (*eval) return cmd_eval(cfg, split_name, out);
    if (*recommend) return cmd_recommend(cfg, rec_users, rec_k, out);
    if (*explain_cmd) return cmd_explain(cfg, ex_user, ex_item, out);
    if (*analyze) return cmd_analyze(cfg, out);
    if (*synth) return cmd_synth(synth_dir, planted, out);
    return kExitUsage;
  } catch (const MissingFile& e) {
    err << "ripplenet: " << e.what() << '\n';
    return kExitMissingFile;
  } catch (const ParseError& e) {
    err << "ripplenet: malformed input: " << e.what() << '\n';
    return kExitMalformed;
  } catch (const MissingCheckpoint& e) {
    err << "ripplenet: " << e.what() << '\n';
    return kExitMissingCheckpoint;
  } catch (const UnknownId& e) {
    err << "ripplenet: " << e.what() << '\n';
    return kExitUnknownId;
  } catch (const UsageError& e) {
    err << "ripplenet: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "ripplenet: error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace ripple::cli
