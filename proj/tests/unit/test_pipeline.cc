// Copyright 2026 The neurotalk-cpp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// tests/unit/test_pipeline.cc

#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "common/error.h"
#include "corpus/classes.h"
#include "neurotalk/neurotalk.h"
#include "nn/parameters.h"
#include "pipeline/checkpoint.h"
#include "pipeline/config.h"
#include "pipeline/stages.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace neurotalk::pipeline {
namespace {

json TinyConfig(const fs::path &out) {
  json doc = json::parse(R"({
    "seed": 3,
    "corpus": {"subjects": 2, "trials_per_class": 5, "channels": 16},
    "model": {
      "generator": {"initial_channels": 32, "gru_hidden": 16},
      "discriminator": {"pre_channels": 16, "stage_channels": [12, 10, 8], "gru_hidden": 4},
      "asr": {"conv_channels": 16, "gru_hidden": 16}
    },
    "train": {
      "spoken": {"lr": 0.001, "max_epochs": 2, "batch": 5},
      "adapt": {"lr": 0.0005, "max_epochs": 2, "batch": 5},
      "asr": {"max_epochs": 2, "target_cer": 1000.0, "clips_per_class": 2}
    },
    "eval": {"vocoder": {"gl_iters": 4, "nnls_iters": 20}, "shuffle_permutations": 2}
  })");
  doc["output_dir"] = out.string();
  return doc;
}

fs::path TempDir(const std::string &tag) {
  const fs::path p = fs::temp_directory_path() / ("neurotalk-unit-" + tag + "-" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

ErrorCode CodeOf(const std::function<void()> &f) {
  try {
    f();
  } catch (const Error &e) {
    return e.code();
  }
  return static_cast<ErrorCode>(-1);
}

TEST_CASE("configuration parsing") {
  const RunConfig d = ParseRunConfig(json::object());
  CHECK(d.seed == 1);
  CHECK(ParseRunConfig(ToJson(d)).seed == d.seed);
  CHECK(ToJson(ParseRunConfig(ToJson(d))) == ToJson(d));
  CHECK(CodeOf([] { ParseRunConfig(json{{"sed", 2}}); }) == ErrorCode::kConfig);
  CHECK(CodeOf([] { ParseRunConfig(json{{"corpus", {{"subject", 2}}}}); }) == ErrorCode::kConfig);
  CHECK(CodeOf([] { ParseRunConfig(json{{"seed", "one"}}); }) == ErrorCode::kConfig);
  CHECK(CodeOf([] { ParseRunConfig(json{{"train", {{"ablation", {"attention"}}}}}); }) == ErrorCode::kConfig);
  CHECK(CodeOf([] { ParseRunConfig(json{{"model", {{"generator", {{"gru_hidden", 100}}}}}}); }) == ErrorCode::kConfig);
  CHECK(CodeOf([] { LoadRunConfig("/nonexistent/neurotalk.json"); }) == ErrorCode::kConfig);
}

TEST_CASE("ablation switches edit the configuration") {
  const RunConfig base = ParseRunConfig(json::object());
  CHECK_FALSE(ApplyAblation(base, {"gru"}).model.generator.recurrent);
  CHECK_FALSE(ApplyAblation(base, {"gru"}).model.discriminator.recurrent);
  CHECK(ApplyAblation(base, {"gan_loss"}).train.weights.adv == 0.0);
  CHECK(ApplyAblation(base, {"rec_loss"}).train.weights.rec == 0.0);
  CHECK(ApplyAblation(base, {"ctc_loss"}).train.weights.ctc == 0.0);
  CHECK(ApplyAblation(base, {"da"}).train.weights.rec == base.train.weights.rec);
  Pipeline p(ParseRunConfig(json{{"train", {{"ablation", {"gru"}}}}}), false);
  CHECK(CodeOf([&] { p.Ablate(); }) == ErrorCode::kConfig);
}

TEST_CASE("checkpoint round trip") {
  const fs::path dir = TempDir("ckpt");
  nn::ParameterSet a;
  a.Add("w", 3, 2)->value << 1, 2, 3, 4, 5, 6;
  a.Add("b", 1, 4)->value << -1, 0.5, 1e-300, 7;
  SaveCheckpoint(dir, {&a}, "abc", json{{"epoch", 4}});
  nn::ParameterSet b;
  b.Add("w", 3, 2);
  b.Add("b", 1, 4);
  const CheckpointInfo info = LoadCheckpoint(dir, {&b});
  CHECK(info.fingerprint == "abc");
  CHECK(info.meta["epoch"] == 4);
  CHECK(b.Find("w")->value == a.Find("w")->value);
  CHECK(b.Find("b")->value == a.Find("b")->value);
  nn::ParameterSet wrong;
  wrong.Add("w", 2, 3);
  wrong.Add("b", 1, 4);
  CHECK(CodeOf([&] { LoadCheckpoint(dir, {&wrong}); }) == ErrorCode::kFingerprintMismatch);
  nn::ParameterSet extra;
  extra.Add("w", 3, 2);
  extra.Add("c", 1, 1);
  CHECK(CodeOf([&] { LoadCheckpoint(dir, {&extra}); }) == ErrorCode::kFingerprintMismatch);
  CHECK(CodeOf([&] { LoadCheckpoint(dir / "missing", {&b}); }) == ErrorCode::kMissingArtifact);
  fs::remove_all(dir);
}

TEST_CASE("directory lock is exclusive") {
  const fs::path dir = TempDir("lock");
  fs::create_directories(dir);
  {
    DirectoryLock first(dir);
    CHECK(CodeOf([&] { DirectoryLock second(dir); }) == ErrorCode::kConfig);
  }
  CHECK_NOTHROW(DirectoryLock again(dir));
  fs::remove_all(dir);
}

// Built once per process; doctest re-enters the test case for every subcase.
struct TinyRun {
  fs::path out = TempDir("pipe");
  json doc = TinyConfig(out);
  ~TinyRun() { fs::remove_all(out); }
};

TEST_CASE("stages are content addressed, reusable and forced on request") {
  static TinyRun run;
  static bool built = false;
  const fs::path &out = run.out;
  const json &doc = run.doc;
  Pipeline p(ParseRunConfig(doc), false);

  if (!built) {
    CHECK(CodeOf([&] { p.TrainSpoken(); }) == ErrorCode::kMissingArtifact);
    CHECK(CodeOf([&] { p.Evaluate(); }) == ErrorCode::kMissingArtifact);
  }
  for (const std::string stage : {"corpus", "preprocess", "fit-csp", "train-asr", "train-spoken", "adapt", "evaluate"}) {
    const StageOutcome o = p.Run(stage);
    CHECK_MESSAGE(o.reused == built, stage);
    CHECK(fs::exists(o.dir / "stage.json"));
    CHECK(o.dir == p.StageDir(stage));
    CHECK(o.fingerprint == p.Fingerprint(stage));
    CHECK(p.Complete(stage));
  }
  built = true;

  SUBCASE("reruns reuse completed stages") {
    Pipeline again(ParseRunConfig(doc), false);
    for (const std::string stage : {"corpus", "fit-csp", "evaluate"}) CHECK(again.Run(stage).reused);
  }

  SUBCASE("force recomputes with the same fingerprint") {
    Pipeline forced(ParseRunConfig(doc), true);
    const StageOutcome o = forced.Run("train-spoken");
    CHECK_FALSE(o.reused);
    CHECK(o.fingerprint == p.Fingerprint("train-spoken"));
  }

  SUBCASE("fingerprints follow the configuration they depend on") {
    json changed = doc;
    changed["train"]["spoken"]["lr"] = 0.002;
    Pipeline q(ParseRunConfig(changed), false);
    for (const std::string stage : {"corpus", "preprocess", "fit-csp", "train-asr"})
      CHECK(q.Fingerprint(stage) == p.Fingerprint(stage));
    for (const std::string stage : {"train-spoken", "adapt", "evaluate"})
      CHECK(q.Fingerprint(stage) != p.Fingerprint(stage));
    CHECK_FALSE(q.Complete("train-spoken"));
    CHECK(CodeOf([&] { q.Adapt(); }) == ErrorCode::kMissingArtifact);
    json other_dir = doc;
    other_dir["output_dir"] = (out / "elsewhere").string();
    CHECK(Pipeline(ParseRunConfig(other_dir), false).Fingerprint("evaluate") == p.Fingerprint("evaluate"));
  }

  SUBCASE("partial stage directories need force") {
    fs::remove(p.StageDir("adapt") / "stage.json");
    CHECK_FALSE(p.Complete("adapt"));
    CHECK(CodeOf([&] { Pipeline(ParseRunConfig(doc), false).Adapt(); }) == ErrorCode::kConfig);
    CHECK_FALSE(Pipeline(ParseRunConfig(doc), true).Adapt().reused);
  }

  SUBCASE("evaluation records cover the test split") {
    std::ifstream in(p.StageDir("evaluate") / "records.jsonl");
    std::string line;
    int unseen = 0, total = 0;
    std::string silence_id;
    while (std::getline(in, line)) {
      const json r = json::parse(line);
      ++total;
      const std::string cond = r["condition"];
      if (cond.rfind("unseen", 0) == 0) {
        ++unseen;
        CHECK(r["reference"] == "stop");
      } else {
        CHECK(r["reference"] != "stop");
      }
      if (r["class"] == corpus::SilenceClass() && cond == "imagined") silence_id = r["id"];
    }
    CHECK(unseen > 0);
    CHECK(total > unseen);
    REQUIRE_FALSE(silence_id.empty());

    const InferResult ir = p.Infer(silence_id, out / "silence.wav");
    CHECK(ir.reference.empty());
    CHECK(fs::exists(out / "silence.wav"));
    CHECK(std::isfinite(ir.rms_dbfs));
    CHECK(CodeOf([&] { p.Infer("s99-c00-r000-img", out / "x.wav"); }) == ErrorCode::kInvalidArgument);
  }
}

TEST_CASE("c api utilities") {
  double cer = -1.0;
  CHECK(nt_cer("stop", "stap", &cer) == NT_OK);
  CHECK(cer == doctest::Approx(25.0));
  CHECK(nt_cer(nullptr, "x", &cer) == NT_INVALID_ARGUMENT);
  CHECK(std::string(nt_last_error()).size() > 0);

  const double a[] = {1.0, 3.0};
  const double b[] = {1.0, 2.0, 3.0};
  double cost = -1.0;
  std::size_t path[8];
  std::size_t len = 0;
  CHECK(nt_dtw(a, 2, b, 3, 1, &cost, path, 4, &len) == NT_OK);
  CHECK(cost == doctest::Approx(1.0));
  CHECK(len == 3);
  CHECK(path[0] == 0);
  CHECK(path[1] == 0);
  CHECK(path[2 * len - 2] == 1);
  CHECK(path[2 * len - 1] == 2);

  const double lp[] = {std::log(0.5), std::log(0.5), std::log(0.5), std::log(0.5)};
  const int target[] = {1};
  double loss = 0.0, grad[4];
  CHECK(nt_ctc_loss(lp, 2, 2, target, 1, 0, &loss, grad) == NT_OK);
  CHECK(loss == doctest::Approx(-std::log(0.75)).epsilon(1e-12));
  CHECK(nt_ctc_loss(lp, 2, 2, target, 1, 0, &loss, nullptr) == NT_OK);

  std::vector<double> wave(22050, 0.0);
  std::size_t mels = 0, frames = 0;
  CHECK(nt_mel_spectrogram(wave.data(), wave.size(), nullptr, 0, &mels, &frames) == NT_OK);
  CHECK(mels == 80);
  CHECK(frames == 87);
  std::vector<double> mel(mels * frames);
  CHECK(nt_mel_spectrogram(wave.data(), wave.size(), mel.data(), mel.size() - 1, &mels, &frames) == NT_INVALID_ARGUMENT);
  CHECK(nt_mel_spectrogram(wave.data(), wave.size(), mel.data(), mel.size(), &mels, &frames) == NT_OK);
  CHECK(mel[0] == doctest::Approx(std::log(1e-5)));
}

TEST_CASE("c api sessions") {
  nt_session *s = nullptr;
  CHECK(nt_session_open("/nonexistent/config.json", nullptr, 0, &s) == NT_CONFIG);
  CHECK(s == nullptr);
  CHECK(nt_session_open_json("{\"sed\": 1}", nullptr, 0, &s) == NT_CONFIG);
  CHECK(nt_session_open_json("{not json", nullptr, 0, &s) == NT_CONFIG);
  const fs::path out = TempDir("capi");
  REQUIRE(nt_session_open_json(TinyConfig(out).dump().c_str(), nullptr, 0, &s) == NT_OK);
  CHECK(nt_run_stage(s, "no-such-stage") == NT_CONFIG);
  CHECK(nt_run_stage(s, "preprocess") == NT_MISSING_ARTIFACT);
  CHECK(std::string(nt_last_error()).find("corpus") != std::string::npos);
  CHECK(nt_session_lock(s) == NT_OK);
  nt_session *t = nullptr;
  REQUIRE(nt_session_open_json(TinyConfig(out).dump().c_str(), nullptr, 0, &t) == NT_OK);
  CHECK(nt_session_lock(t) == NT_CONFIG);
  nt_session_close(t);
  CHECK(nt_run_stage(s, "corpus") == NT_OK);
  const json summary = json::parse(nt_session_summary(s));
  CHECK(summary["stage"] == "corpus");
  char buf[1024];
  CHECK(nt_stage_dir(s, "corpus", buf, sizeof(buf)) == NT_OK);
  CHECK(fs::exists(fs::path(buf) / "stage.json"));
  CHECK(nt_stage_dir(s, "corpus", buf, 4) == NT_INVALID_ARGUMENT);
  nt_session_close(s);
  fs::remove_all(out);
}

}  // namespace
}  // namespace neurotalk::pipeline
