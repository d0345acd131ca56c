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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "commands.hpp"
#include "ripple/artifacts.hpp"
#include "ripple/checkpoint.hpp"

namespace ripple::cli {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "ripplenet");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ripple_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// Two communities of three entities; every entity is also an item. Each user
// rates every item of one community, so negatives all come from the other.
fs::path tiny_corpus(const std::string& name) {
  const auto dir = scratch(name);
  write(dir / "kg.tsv",
        "a0\tr\ta1\na1\tr\ta2\na2\tr\ta0\nb0\tr\tb1\nb1\tr\tb2\nb2\tr\tb0\n");
  write(dir / "item_map.tsv", "A0\ta0\nA1\ta1\nA2\ta2\nB0\tb0\nB1\tb1\nB2\tb2\nX\tmissing\n");
  std::ostringstream ratings;
  for (int u = 0; u < 8; ++u) {
    const char c = u % 2 == 0 ? 'A' : 'B';
    for (int k = 0; k < 3; ++k) ratings << "u" << u << '\t' << c << k << "\t5\n";
  }
  ratings << "u0\tX\t5\n";
  write(dir / "ratings.tsv", ratings.str());
  write(dir / "run.conf",
        "kg=" + (dir / "kg.tsv").string() + "\nratings=" + (dir / "ratings.tsv").string() +
            "\nitem_map=" + (dir / "item_map.tsv").string() + "\nout=" + (dir / "out").string() +
            "\nthreshold=4\nsplit=0.5,0.1,0.4\ndim=2\nhops=1\nripple_size=2\nbatch_size=2\n"
            "epochs=1\nseed=5\n");
  return dir;
}

TEST(CliPrepare, WritesArtifactsAndReportsCounts) {
  const auto dir = tiny_corpus("prepare");
  const auto r = run({"--config", (dir / "run.conf").string(), "prepare"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("entities\t6\n"), std::string::npos);
  EXPECT_NE(r.out.find("triples\t6\n"), std::string::npos);
  EXPECT_NE(r.out.find("dropped_items\t1\n"), std::string::npos);
  EXPECT_NE(r.out.find("dropped_ratings\t1\n"), std::string::npos);
  for (const char* f : {"entities.tsv", "examples.tsv", "ripple.tsv"}) {
    EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
  }
}

TEST(CliPrepare, RerunIsByteIdentical) {
  const auto dir = tiny_corpus("rerun");
  const std::string conf = (dir / "run.conf").string();
  ASSERT_EQ(run({"--config", conf, "prepare"}).code, kExitOk);
  std::vector<std::string> first;
  const std::vector<std::string> files = {"entities.tsv", "relations.tsv", "triples.tsv",
                                          "users.tsv",    "items.tsv",     "examples.tsv",
                                          "ripple.tsv"};
  for (const auto& f : files) first.push_back(slurp(dir / "out" / f));
  ASSERT_EQ(run({"--config", conf, "prepare"}).code, kExitOk);
  for (std::size_t i = 0; i < files.size(); ++i) EXPECT_EQ(slurp(dir / "out" / files[i]), first[i]) << files[i];
}

TEST(CliErrors, ExitCodes) {
  const auto dir = tiny_corpus("errors");
  const std::string conf = (dir / "run.conf").string();
  EXPECT_EQ(run({"--config", conf, "--set", "kg=/nonexistent.tsv", "prepare"}).code, kExitMissingFile);
  EXPECT_EQ(run({"--config", "/nonexistent.conf", "prepare"}).code, kExitMissingFile);

  write(dir / "bad.tsv", "a0\tr\ta1\na1\tr\n");
  const auto malformed = run({"--config", conf, "--set", "kg=" + (dir / "bad.tsv").string(), "prepare"});
  EXPECT_EQ(malformed.code, kExitMalformed);
  EXPECT_NE(malformed.err.find("line 2"), std::string::npos) << malformed.err;

  ASSERT_EQ(run({"--config", conf, "prepare"}).code, kExitOk);
  EXPECT_EQ(run({"--config", conf, "eval"}).code, kExitMissingCheckpoint);
  ASSERT_EQ(run({"--config", conf, "train"}).code, kExitOk);
  EXPECT_EQ(run({"--config", conf, "recommend", "--user", "nobody"}).code, kExitUnknownId);
  EXPECT_EQ(run({"--config", conf, "explain", "--user", "u0", "--item", "nothing"}).code,
            kExitUnknownId);
  EXPECT_EQ(run({"--config", conf, "--set", "dim=abc", "train"}).code, kExitUsage);
  EXPECT_EQ(run({}).code, kExitUsage);
}

TEST(CliEval, PerfectCheckpointScoresAucOne) {
  // Entity embeddings are community indicators, items point at their own
  // community and away from the other, and the relation is the identity:
  // own-community items score sigma(5), the rest sigma(-5).
  const auto dir = tiny_corpus("perfect");
  const std::string conf = (dir / "run.conf").string();
  ASSERT_EQ(run({"--config", conf, "prepare"}).code, kExitOk);
  const auto prepared = read_prepared(dir / "out");
  auto params = ModelParams::zeros(prepared.kg.entity_count(), prepared.ds.item_count(), 1, 2);
  params.relation[0] = Matrix::Identity(2, 2);
  for (std::size_t e = 0; e < prepared.kg.entity_count(); ++e) {
    params.entity(e, prepared.kg.entity_name(EntityId(e))[0] == 'a' ? 0 : 1) = 1.0;
  }
  for (std::size_t v = 0; v < prepared.ds.item_count(); ++v) {
    const int own = prepared.ds.items.name(v)[0] == 'A' ? 0 : 1;
    params.item(v, own) = 5.0;
    params.item(v, 1 - own) = -5.0;
  }
  save_checkpoint(dir / "out" / "model.ckpt", params);
  const auto r = run({"--config", conf, "eval"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("auc\t1.000000\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("acc\t1.000000\n"), std::string::npos) << r.out;
}

class PlantedCli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new fs::path(scratch("planted"));
    ASSERT_EQ(run({"synth", "--dir", (*dir_ / "corpus").string()}).code, kExitOk);
    conf_ = new std::string((*dir_ / "corpus" / "ripple.conf").string());
    ASSERT_EQ(run({"--config", *conf_, "prepare"}).code, kExitOk);
    ASSERT_EQ(run({"--config", *conf_, "train"}).code, kExitOk);
  }
  static void TearDownTestSuite() {
    delete dir_;
    delete conf_;
  }
  static fs::path* dir_;
  static std::string* conf_;
};

fs::path* PlantedCli::dir_ = nullptr;
std::string* PlantedCli::conf_ = nullptr;

TEST_F(PlantedCli, EvalAucAboveThreshold) {
  const auto r = run({"--config", *conf_, "eval", "--split", "eval"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto pos = r.out.find("auc\t");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_GT(std::stod(r.out.substr(pos + 4)), 0.85);
  EXPECT_NE(r.out.find("k\tprecision\trecall\tf1\tusers\n"), std::string::npos);
}

TEST_F(PlantedCli, RecommendPrintsKDescending) {
  const auto r = run({"--config", *conf_, "recommend", "--user", "u7", "--k", "5"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 5u);
  double prev = 2.0;
  for (const auto& row : rows) {
    EXPECT_EQ(row.rfind("u7\t", 0), 0u);
    const double score = std::stod(row.substr(row.rfind('\t') + 1));
    EXPECT_LE(score, prev);
    prev = score;
  }
}

TEST_F(PlantedCli, ExplainAndAnalyzeWriteFiles) {
  const auto r = run({"--config", *conf_, "explain", "--user", "u7", "--item", "i0_0",
                      "--threshold", "-inf"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto out = *dir_ / "corpus" / "out";
  EXPECT_EQ(slurp(out / "explain_u7_i0_0.dot").rfind("digraph", 0), 0u);
  EXPECT_FALSE(slurp(out / "explain_u7_i0_0.paths.txt").empty());
  const auto a = run({"--config", *conf_, "--set", "max_hop=3", "analyze"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(lines(slurp(out / "analyze.tsv")).size(), 4u);
}

TEST_F(PlantedCli, FullPipelineIsDeterministic) {
  const auto out = *dir_ / "corpus" / "out";
  const auto first_report = slurp(out / "train_report.jsonl");
  ASSERT_EQ(run({"--config", *conf_, "eval"}).code, kExitOk);
  const auto first_eval = slurp(out / "eval_test.tsv");
  const auto first_ckpt = slurp(out / "model.ckpt");
  ASSERT_EQ(run({"--config", *conf_, "prepare"}).code, kExitOk);
  ASSERT_EQ(run({"--config", *conf_, "train"}).code, kExitOk);
  ASSERT_EQ(run({"--config", *conf_, "eval"}).code, kExitOk);
  EXPECT_EQ(slurp(out / "train_report.jsonl"), first_report);
  EXPECT_EQ(slurp(out / "eval_test.tsv"), first_eval);
  EXPECT_EQ(slurp(out / "model.ckpt"), first_ckpt);
}

}  // namespace
}  // namespace ripple::cli
