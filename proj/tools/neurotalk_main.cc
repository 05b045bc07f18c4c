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

// tools/neurotalk_main.cc
//
// Command-line front end over the C interface.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <string>

#include "neurotalk/neurotalk.h"

namespace {

struct Options {
  std::string config;
  std::string output_dir;
  bool force = false;
  bool quiet = false;
  bool verbose = false;
  int loo_subject = -1;
  std::string trial;
  std::string wave;
};

int ExitCode(nt_status st) {
  switch (st) {
    case NT_OK: return 0;
    case NT_CONFIG:
    case NT_INVALID_ARGUMENT:
    case NT_FINGERPRINT: return 2;
    case NT_MISSING_ARTIFACT: return 3;
    case NT_NUMERICAL: return 4;
    default: return 1;
  }
}

int Report(nt_status st) {
  std::cerr << "neurotalk: error: " << nt_last_error() << '\n';
  return ExitCode(st);
}

int Open(const Options &o, nt_session **session) {
  nt_set_log_level(o.quiet ? 2 : (o.verbose ? 0 : 1));
  nt_status st;
  if (o.loo_subject >= 0) {
    std::ifstream in(o.config);
    if (!in) {
      std::cerr << "neurotalk: error: cannot open config file " << o.config << '\n';
      return 2;
    }
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
      std::cerr << "neurotalk: error: config " << o.config << " is not valid JSON: " << e.what() << '\n';
      return 2;
    }
    doc["train"]["loo_subject"] = o.loo_subject;
    st = nt_session_open_json(doc.dump().c_str(), o.output_dir.c_str(), o.force ? 1 : 0, session);
  } else {
    st = nt_session_open(o.config.c_str(), o.output_dir.c_str(), o.force ? 1 : 0, session);
  }
  if (st != NT_OK) return Report(st);
  st = nt_session_lock(*session);
  if (st != NT_OK) {
    nt_session_close(*session);
    return Report(st);
  }
  return 0;
}

void PrintTable(nt_session *session, const std::string &stage) {
  char dir[4096];
  if (nt_stage_dir(session, stage.c_str(), dir, sizeof(dir)) != NT_OK) return;
  std::ifstream in(std::filesystem::path(dir) / "table.tsv");
  if (in) std::cout << in.rdbuf();
}

int RunStage(const Options &o, const std::string &stage) {
  nt_session *session = nullptr;
  if (const int rc = Open(o, &session)) return rc;
  const nt_status st = nt_run_stage(session, stage.c_str());
  int rc = 0;
  if (st != NT_OK) {
    rc = Report(st);
  } else {
    const auto summary = nlohmann::json::parse(nt_session_summary(session));
    std::cerr << stage << (summary.value("reused", false) ? ": reused " : ": wrote ")
              << summary.value("dir", std::string()) << '\n';
    if (stage == "evaluate" || stage == "ablate" || stage == "loo")
      PrintTable(session, stage);
    else
      std::cout << summary.at("summary").dump(2) << '\n';
  }
  nt_session_close(session);
  return rc;
}

int RunInfer(const Options &o) {
  nt_session *session = nullptr;
  if (const int rc = Open(o, &session)) return rc;
  nt_infer_result r{};
  const nt_status st = nt_infer(session, o.trial.c_str(), o.wave.empty() ? nullptr : o.wave.c_str(), &r);
  int rc = 0;
  if (st != NT_OK) {
    rc = Report(st);
  } else {
    std::cout << "wave\t" << r.wave_path << "\ntranscript\t" << r.transcript << "\nreference\t" << r.reference
              << "\ncer\t" << r.cer << "\nrms_dbfs\t" << r.rms_dbfs << '\n';
  }
  nt_session_close(session);
  return rc;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"EEG-to-speech pipeline: synthetic corpus, CSP embedding, adversarial mel synthesis, evaluation"};
  app.set_version_flag("--version", nt_version());
  app.require_subcommand(1);
  Options o;

  const std::vector<std::pair<std::string, std::string>> stages{
      {"corpus", "synthesize the EEG and voice corpus and its manifest"},
      {"preprocess", "filter and re-reference EEG; compute voice mel-spectrograms"},
      {"fit-csp", "build splits, fit the shared spatial filters, write embeddings"},
      {"train-asr", "train the speech recognizer on synthetic voice clips"},
      {"train-spoken", "train generator and discriminator on spoken EEG"},
      {"adapt", "fine-tune the spoken model on imagined EEG"},
      {"loo", "leave-one-subject-out pretraining, adaptation and evaluation"},
      {"evaluate", "score test trials: RMSE, CER, shuffle baseline, silence detection"},
      {"ablate", "run the six-row ablation grid"},
      {"infer", "synthesize one trial to a wave file and transcribe it"}};

  std::string chosen;
  for (const auto &[name, help] : stages) {
    CLI::App *sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", o.config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--output-dir", o.output_dir, "override the configured output directory");
    sub->add_flag("-f,--force", o.force, "recompute and overwrite existing artifacts of this stage");
    sub->add_flag("-q,--quiet", o.quiet, "only log warnings and errors");
    sub->add_flag("-v,--verbose", o.verbose, "log debug messages");
    if (name == "loo") sub->add_option("--subject", o.loo_subject, "held-out subject (overrides the config)")->check(CLI::NonNegativeNumber);
    if (name == "infer") {
      sub->add_option("-t,--trial", o.trial, "trial id, e.g. s00-c03-r004-img")->required();
      sub->add_option("-w,--wave", o.wave, "output wave path (default <output_dir>/infer/<trial>.wav)");
    }
    sub->callback([&chosen, n = name] { chosen = n; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (chosen == "infer") return RunInfer(o);
  return RunStage(o, chosen);
}
