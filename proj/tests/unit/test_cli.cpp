// Copyright 2026 The locmt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <json.hpp>
#include <sys/wait.h>

#include "locmt/cli.hpp"
#include "locmt/corpus.hpp"
#include "locmt/util.hpp"
#include "support.hpp"

using namespace locmt;
namespace t = locmt::testing;

namespace {

// Commands that fail before --output-dir applies write their manifest to ./locmt-out; keep that
// out of the build tree.
struct ScratchCwd {
  t::TempDir dir;
  ScratchCwd() { std::filesystem::current_path(dir.path()); }
} scratch_cwd;

struct Result {
  int code = 0;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "locmt");
  std::ostringstream out, err;
  Result r;
  r.code = cli::dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

nlohmann::json read_json(const std::filesystem::path& p) { return nlohmann::json::parse(read_file(p)); }

std::string fx(const std::string& rel) { return (t::fixture_dir() / rel).string(); }

}  // namespace

TEST_CASE("no arguments prints usage") {
  const auto r = run({});
  CHECK(r.code == cli::kExitValidation);
  CHECK(r.err.find("preprocess") != std::string::npos);
}

TEST_CASE("unknown subcommand") {
  const auto r = run({"translate-everything"});
  CHECK(r.code == cli::kExitValidation);
  CHECK(r.err.find("unknown subcommand") != std::string::npos);
}

TEST_CASE("help exits cleanly") {
  const auto r = run({"--help"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("scenario") != std::string::npos);
}

TEST_CASE("score identical translations") {
  t::TempDir dir;
  t::write_text(dir / "h.txt", "bonjour mon ami\nune belle journée\n");
  const auto r = run({"--output-dir", dir.path().string(), "score", "--task", "mt", "--hyp", (dir / "h.txt").string(), "--ref",
                      (dir / "h.txt").string()});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("combined F 100.0") != std::string::npos);
  const auto m = read_json(dir / "manifest.score.json");
  CHECK(m["exit_code"] == 0);
  CHECK(m["command"] == "score");
  CHECK(m["result"]["combined_f"].get<double>() == doctest::Approx(100.0));
}

TEST_CASE("score classification as json") {
  t::TempDir dir;
  t::write_text(dir / "p.txt", "hate\nno_hate\nhate\n");
  t::write_text(dir / "g.txt", "hate\nhate\nhate\n");
  const auto r = run({"--format", "json", "--output-dir", dir.path().string(), "score", "--task", "classify", "--hyp",
                      (dir / "p.txt").string(), "--ref", (dir / "g.txt").string()});
  REQUIRE(r.code == cli::kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["accuracy"].get<double>() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("score rejects unknown variants and labels") {
  t::TempDir dir;
  t::write_text(dir / "h.txt", "a\n");
  t::write_text(dir / "l.txt", "maybe\n");
  CHECK(run({"--output-dir", dir.path().string(), "score", "--task", "mt", "--variant", "rougeL", "--hyp", (dir / "h.txt").string(),
             "--ref", (dir / "h.txt").string()})
            .code == cli::kExitValidation);
  CHECK(run({"--output-dir", dir.path().string(), "score", "--task", "classify", "--hyp", (dir / "l.txt").string(), "--ref",
             (dir / "l.txt").string()})
            .code == cli::kExitValidation);
  CHECK(run({"score", "--task", "mt"}).code == cli::kExitValidation);
}

TEST_CASE("preprocess plain lines to stdout") {
  t::TempDir dir;
  t::write_text(dir / "in.txt", "Voici un TEST https://x.fr  @bob\n");
  const auto r = run({"--output-dir", dir.path().string(), "preprocess", "--in", (dir / "in.txt").string(), "--pipeline", "nmt-clean"});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(r.out.find("voici un test") == 0);
  CHECK(r.out.find("https") == std::string::npos);
  CHECK(std::filesystem::exists(dir / "manifest.preprocess.json"));
}

TEST_CASE("preprocess a corpus") {
  t::TempDir dir;
  const auto out = (dir / "clean.jsonl").string();
  const auto r = run({"--output-dir", dir.path().string(), "preprocess", "--input", fx("toy/sentiment.fr.jsonl"), "--output", out,
                      "--pipeline", "osb-clean", "--lang", "fr"});
  REQUIRE(r.code == cli::kExitOk);
  const auto c = corpus::load_corpus(out);
  CHECK(c.size() > 0);
  CHECK(run({"preprocess", "--input", fx("toy/sentiment.fr.jsonl"), "--output", out, "--pipeline", "no-such-preset"}).code ==
        cli::kExitValidation);
}

TEST_CASE("split writes exact sizes") {
  t::TempDir dir;
  const auto c = t::labeled_corpus("cli", corpus::Task::hate, {{corpus::Label::hate, 30}, {corpus::Label::no_hate, 20}}, "es");
  corpus::save_corpus(c, dir / "c.jsonl");
  const auto r = run({"--seed", "7", "--output-dir", (dir / "parts").string(), "split", "--input", (dir / "c.jsonl").string(),
                      "--ratios", "train=0.9,test=0.1"});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(corpus::load_corpus(dir / "parts/train.jsonl").size() == 45);
  CHECK(corpus::load_corpus(dir / "parts/test.jsonl").size() == 5);
  CHECK(read_json(dir / "parts/manifest.split.json")["seed"] == 7);
  CHECK(run({"split", "--input", (dir / "c.jsonl").string(), "--ratios", "train=abc"}).code == cli::kExitValidation);
}

TEST_CASE("localize lines through the mock") {
  t::TempDir dir;
  t::write_text(dir / "in.txt", "bonjour 😀\n");
  const auto r = run({"--backend", "mock:" + fx("mock/fr-ar-lev.mock"), "--output-dir", dir.path().string(), "localize", "--in",
                      (dir / "in.txt").string(), "--src", "fr", "--tgt", "ar-lev"});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(r.out == "مرحبا 😀\n");
}

TEST_CASE("localize a corpus") {
  t::TempDir dir;
  const auto out = dir / "loc.jsonl";
  const auto r = run({"--backend", "mock:" + fx("mock/es-ar.mock"), "--output-dir", dir.path().string(), "localize", "--input",
                      fx("toy/hate.es.jsonl"), "--output", out.string(), "--src", "es", "--tgt", "ar-glf"});
  REQUIRE(r.code == cli::kExitOk);
  const auto src = corpus::load_corpus(fx("toy/hate.es.jsonl"));
  const auto loc = corpus::load_corpus(out);
  REQUIRE(loc.size() == src.size());
  for (std::size_t i = 0; i < loc.size(); ++i) {
    CHECK(loc.examples()[i].label == src.examples()[i].label);
    CHECK(loc.examples()[i].utterance.lang.str() == "ar-glf");
  }
}

TEST_CASE("unreachable backend exits with the backend code") {
  t::TempDir dir;
  t::write_text(dir / "in.txt", "bonjour\n");
  const auto url = t::unreachable_url();
  const auto r = run({"--backend", url, "--output-dir", dir.path().string(), "localize", "--in", (dir / "in.txt").string(), "--src",
                      "fr", "--tgt", "ar-lev"});
  CHECK(r.code == cli::kExitBackend);
  CHECK(read_json(dir / "manifest.localize.json")["exit_code"] == cli::kExitBackend);

  const auto s = run({"--backend", url, "--output-dir", (dir / "scen").string(), "scenario", "run", "--config",
                      fx("configs/nmt.yaml")});
  CHECK(s.code == cli::kExitBackend);
}

TEST_CASE("train through the mock") {
  t::TempDir dir;
  const auto r = run({"--output-dir", dir.path().string(), "train", "--config", fx("configs/train-sentiment.yaml")});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(r.out.find("ckpt-3") != std::string::npos);
  const auto m = read_json(dir / "run_manifest.json");
  CHECK(m["status"] == "finished");
  CHECK(std::filesystem::exists(dir / "manifest.train.json"));
  CHECK(run({"train"}).code == cli::kExitValidation);
  CHECK(run({"--backend", t::unreachable_url(), "--output-dir", (dir / "b").string(), "train", "--config",
             fx("configs/train-sentiment.yaml")})
            .code == cli::kExitBackend);
}

TEST_CASE("scenario run writes reports") {
  t::TempDir dir;
  const auto r = run({"--output-dir", dir.path().string(), "scenario", "run", "--kind", "nmt", "--config", fx("configs/nmt.yaml")});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK(std::filesystem::exists(dir / "manifest.scenario.json"));
  CHECK(run({"scenario", "run", "--kind", "hate", "--config", fx("configs/nmt.yaml")}).code == cli::kExitValidation);
  CHECK(run({"scenario", "run", "--config", "/nonexistent/x.yaml"}).code == cli::kExitValidation);
}

TEST_CASE("the installed binary reports exit codes") {
  t::TempDir dir;
  const std::string bin = LOCMT_CLI_BINARY;
  auto status = [&](const std::string& args) {
    const int s = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  CHECK(status("") == 1);
  CHECK(status("bogus") == 1);
  CHECK(status("--output-dir " + dir.path().string() + " scenario run --config " + fx("configs/nmt.yaml")) == 0);
}
