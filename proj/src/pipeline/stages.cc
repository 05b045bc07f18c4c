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

// pipeline/stages.cc

#include "pipeline/stages.h"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "asr/alphabet.h"
#include "asr/cer.h"
#include "common/array_io.h"
#include "common/error.h"
#include "common/hash.h"
#include "common/log.h"
#include "common/rng.h"
#include "common/wav.h"
#include "corpus/classes.h"
#include "pipeline/checkpoint.h"
#include "vocoder/griffin_lim.h"

namespace neurotalk::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Keys for DeriveSeed; arbitrary but fixed.
enum SeedTag : std::uint64_t {
  kTagGenerator = 101,
  kTagDiscriminator = 102,
  kTagSpokenSchedule = 103,
  kTagAdaptSchedule = 104,
  kTagAsrVoice = 105,
  kTagAsrModel = 106,
  kTagAsrSchedule = 107,
  kTagEval = 108,
  kTagLoo = 109,
};

std::string VoiceKey(const corpus::TrialRef &t) {
  corpus::TrialRef s = t;
  s.condition = corpus::Condition::kSpoken;
  const std::string id = s.Id();
  return id.substr(0, id.size() - 4);
}

json EpochJson(const std::string &stage, const train::EpochRecord &e) {
  return {{"stage", stage}, {"epoch", e.epoch}, {"lr", e.lr},       {"rec", e.rec},
          {"adv", e.adv},   {"ctc", e.ctc},     {"gen_total", e.gen_total}, {"disc", e.disc},
          {"val_rmse", e.val_rmse}, {"val_cer", e.val_cer}};
}

class JsonLines {
 public:
  explicit JsonLines(const fs::path &path) : out_(path, std::ios::app) {
    if (!out_) Fail(ErrorCode::kIo, "cannot open " + path.string());
  }
  void Write(const json &j) {
    out_ << j.dump() << '\n';
    out_.flush();
  }

 private:
  std::ofstream out_;
};

json RowJson(const eval::ConditionRow &r) {
  return {{"condition", r.condition}, {"trials", r.trials},         {"subjects", r.subjects},
          {"rmse_mean", r.rmse_mean}, {"rmse_std", r.rmse_std},     {"cer_mean", r.cer_mean},
          {"cer_std", r.cer_std},     {"shuffle_cer", r.shuffle_cer}, {"silence_trials", r.silence_trials},
          {"silence_empty", r.silence_empty}};
}

json RecordJson(const eval::TrialRecord &r) {
  return {{"id", r.id},         {"subject", r.subject},       {"class", r.class_index},
          {"condition", r.condition}, {"rmse", r.rmse},      {"reference", r.reference},
          {"hypothesis", r.hypothesis}, {"cer", r.cer}};
}

json StageResultJson(const train::StageResult &r) {
  return {{"best_epoch", r.best_epoch}, {"best_val_rmse", r.best.rmse}, {"best_val_cer", r.best.cer},
          {"epochs", r.log.size()}, {"early_stopped", r.early_stopped}};
}

json BankJson(const embedding::CspBank &b) {
  return {{"class_order", b.class_order},
          {"trained_on", b.trained_on},
          {"filters_per_class", b.filters_per_class},
          {"segments", b.segments},
          {"variance_floor", b.variance_floor},
          {"feature_mean", std::vector<double>(b.feature_mean.data(), b.feature_mean.data() + b.feature_mean.size())},
          {"feature_std", std::vector<double>(b.feature_std.data(), b.feature_std.data() + b.feature_std.size())},
          {"hash", b.Hash()}};
}

embedding::CspBank BankFromJson(const json &j, const Mat &filters) {
  embedding::CspBank b;
  b.filters = filters;
  b.class_order = j.at("class_order").get<std::vector<std::string>>();
  b.trained_on = j.at("trained_on").get<std::string>();
  b.filters_per_class = j.at("filters_per_class").get<int>();
  b.segments = j.at("segments").get<int>();
  b.variance_floor = j.at("variance_floor").get<double>();
  const auto mean = j.at("feature_mean").get<std::vector<double>>();
  const auto stddev = j.at("feature_std").get<std::vector<double>>();
  b.feature_mean = Eigen::Map<const Vec>(mean.data(), static_cast<Eigen::Index>(mean.size()));
  b.feature_std = Eigen::Map<const Vec>(stddev.data(), static_cast<Eigen::Index>(stddev.size()));
  if (b.Hash() != j.at("hash").get<std::string>())
    Fail(ErrorCode::kFingerprintMismatch, "stored spatial filters do not match their recorded hash");
  return b;
}

json SplitPlanJson(const corpus::SplitPlan &p) {
  json assignments = json::object();
  for (const auto &[id, s] : p.assignments) assignments[id] = corpus::SplitName(s);
  return {{"assignments", assignments},
          {"unseen_classes", p.unseen_classes},
          {"fold", p.fold},
          {"csp_only", p.csp_only},
          {"loo_subject", p.loo_subject ? json(*p.loo_subject) : json(nullptr)}};
}

corpus::SplitPlan SplitPlanFromJson(const json &j) {
  corpus::SplitPlan p;
  for (auto it = j.at("assignments").begin(); it != j.at("assignments").end(); ++it) {
    const std::string s = it.value().get<std::string>();
    p.assignments[it.key()] = s == "train" ? corpus::Split::kTrain : s == "val" ? corpus::Split::kVal : corpus::Split::kTest;
  }
  p.unseen_classes = j.at("unseen_classes").get<std::set<int>>();
  p.fold = j.at("fold").get<int>();
  p.csp_only = j.at("csp_only").get<std::set<std::string>>();
  if (!j.at("loo_subject").is_null()) p.loo_subject = j.at("loo_subject").get<int>();
  return p;
}

struct Networks {
  std::unique_ptr<model::Generator> gen;
  std::unique_ptr<model::Discriminator> disc;
};

Networks MakeNetworks(const RunConfig &c, std::uint64_t seed) {
  Networks n;
  n.gen = std::make_unique<model::Generator>(c.model.generator);
  n.disc = std::make_unique<model::Discriminator>(c.model.discriminator);
  n.gen->Init(DeriveSeed(seed, {kTagGenerator}));
  n.disc->Init(DeriveSeed(seed, {kTagDiscriminator}));
  return n;
}

void LoadNetworks(const fs::path &dir, const std::string &fingerprint, Networks &n) {
  const CheckpointInfo info = LoadCheckpoint(dir, {&n.gen->params(), &n.disc->params()});
  if (info.fingerprint != fingerprint)
    Fail(ErrorCode::kFingerprintMismatch, "checkpoint " + dir.string() + " carries fingerprint " + info.fingerprint +
                                              ", expected " + fingerprint);
}

// Trains one generator/discriminator stage and writes its checkpoint and log.
train::StageResult TrainAndSave(const std::string &stage, Networks &n, const asr::Recognizer &asr,
                                const train::LossWeights &weights, const train::StageConfig &schedule,
                                const std::vector<train::TrainItem> &train_items,
                                const std::vector<train::TrainItem> &val_items, const fs::path &dir,
                                const std::string &fingerprint, const json &meta) {
  if (train_items.empty()) Fail(ErrorCode::kMissingArtifact, stage + ": no training trials in the split plan");
  LogInfo(stage + ": " + std::to_string(train_items.size()) + " training and " + std::to_string(val_items.size()) +
          " validation trials");
  JsonLines log(dir / "log.jsonl");
  train::Trainer trainer(*n.gen, *n.disc, &asr, weights, schedule);
  const train::StageResult r = trainer.Run(train_items, val_items, [&](const train::EpochRecord &e) {
    log.Write(EpochJson(stage, e));
    LogInfo(stage + " epoch " + std::to_string(e.epoch) + ": rec " + std::to_string(e.rec) + " ctc " +
            std::to_string(e.ctc) + " adv " + std::to_string(e.adv) + " | val rmse " + std::to_string(e.val_rmse) +
            " cer " + std::to_string(e.val_cer));
  });
  json m = meta;
  m["result"] = StageResultJson(r);
  m["generator"] = GeneratorJson(n.gen->config());
  m["discriminator"] = DiscriminatorJson(n.disc->config());
  SaveCheckpoint(dir / "checkpoint", {&n.gen->params(), &n.disc->params()}, fingerprint, m);
  return r;
}

double RmsDbfs(const std::vector<double> &x) {
  double ss = 0.0;
  for (double v : x) ss += v * v;
  const double rms = x.empty() ? 0.0 : std::sqrt(ss / static_cast<double>(x.size()));
  return 20.0 * std::log10(std::max(rms, 1e-12));
}

}  // namespace

DirectoryLock::DirectoryLock(const fs::path &dir) {
  fs::create_directories(dir);
  const fs::path path = dir / ".lock";
  fd_ = ::open(path.c_str(), O_CREAT | O_RDWR, 0644);
  if (fd_ < 0) Fail(ErrorCode::kIo, "cannot open lock file " + path.string());
  if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd_);
    fd_ = -1;
    Fail(ErrorCode::kConfig, "another process is using " + dir.string() + " (lock file " + path.string() + ")");
  }
}

DirectoryLock::~DirectoryLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

Pipeline::Pipeline(RunConfig config, bool force)
    : config_(ApplyAblation(config, config.train.ablation)), force_(force) {
  config_.Validate();
}

json Pipeline::FingerprintDoc(const std::string &stage) const {
  const RunConfig &c = config_;
  json d{{"stage", stage}};
  if (stage == "corpus") {
    d["corpus"] = CorpusJson(c);
  } else if (stage == "preprocess") {
    d["dsp"] = DspJson(c);
    d["upstream"] = {Fingerprint("corpus")};
  } else if (stage == "fit-csp") {
    d["embedding"] = EmbeddingJson(c);
    d["split"] = SplitJson(c);
    d["upstream"] = {Fingerprint("preprocess")};
  } else if (stage == "train-asr") {
    d["model"] = RecognizerJson(c.model.asr);
    d["schedule"] = AsrTrainJson(c.train.asr);
    d["seed"] = c.seed;
    d["upstream"] = {Fingerprint("fit-csp")};
  } else if (stage == "train-spoken") {
    d["generator"] = GeneratorJson(c.model.generator);
    d["discriminator"] = DiscriminatorJson(c.model.discriminator);
    d["weights"] = WeightsJson(c.train.weights);
    d["schedule"] = StageJson(c.train.spoken);
    d["seed"] = c.seed;
    d["upstream"] = {Fingerprint("fit-csp"), Fingerprint("train-asr")};
  } else if (stage == "adapt") {
    d["weights"] = WeightsJson(c.train.weights);
    d["seed"] = c.seed;
    if (DaDisabled()) {
      d["init"] = "random";
      d["generator"] = GeneratorJson(c.model.generator);
      d["discriminator"] = DiscriminatorJson(c.model.discriminator);
      d["schedule"] = StageJson(c.train.spoken);
      d["upstream"] = {Fingerprint("fit-csp"), Fingerprint("train-asr")};
    } else {
      d["init"] = "spoken";
      d["schedule"] = StageJson(c.train.adapt);
      d["upstream"] = {Fingerprint("train-spoken")};
    }
  } else if (stage == "loo") {
    d["loo_subject"] = c.train.loo_subject;
    d["generator"] = GeneratorJson(c.model.generator);
    d["discriminator"] = DiscriminatorJson(c.model.discriminator);
    d["weights"] = WeightsJson(c.train.weights);
    d["spoken"] = StageJson(c.train.spoken);
    d["adapt"] = StageJson(c.train.adapt);
    d["eval"] = EvalJson(c.eval);
    d["seed"] = c.seed;
    d["upstream"] = {Fingerprint("fit-csp"), Fingerprint("train-asr")};
  } else if (stage == "evaluate") {
    d["eval"] = EvalJson(c.eval);
    d["upstream"] = {Fingerprint("train-spoken"), Fingerprint("adapt")};
  } else if (stage == "ablate") {
    json rows = json::array();
    for (const auto &sw : std::vector<std::string>{"", "gru", "gan_loss", "rec_loss", "ctc_loss", "da"}) {
      RunConfig rc = config_;
      rc.train.ablation.clear();
      if (!sw.empty()) rc.train.ablation.insert(sw);
      rows.push_back(Pipeline(rc, false).Fingerprint("evaluate"));
    }
    d["rows"] = rows;
  } else {
    Fail(ErrorCode::kConfig, "unknown stage '" + stage + "'");
  }
  return d;
}

std::string Pipeline::Fingerprint(const std::string &stage) const { return HashHex(FingerprintDoc(stage).dump()); }

fs::path Pipeline::StageDir(const std::string &stage) const {
  return config_.output_dir / stage / Fingerprint(stage);
}

bool Pipeline::Complete(const std::string &stage) const {
  const fs::path marker = StageDir(stage) / "stage.json";
  if (!fs::exists(marker)) return false;
  const json j = ReadJson(marker);
  if (j.value("fingerprint", "") != Fingerprint(stage))
    Fail(ErrorCode::kFingerprintMismatch, "artifact " + marker.string() + " does not match its configuration");
  return true;
}

void Pipeline::RequireStage(const std::string &stage) const {
  if (!Complete(stage))
    Fail(ErrorCode::kMissingArtifact, "missing '" + stage + "' artifacts for this configuration (expected " +
                                          StageDir(stage).string() + "); run `neurotalk " + stage + "` first");
}

bool Pipeline::Begin(const std::string &stage, StageOutcome &out) {
  out.stage = stage;
  out.fingerprint = Fingerprint(stage);
  out.dir = StageDir(stage);
  const fs::path marker = out.dir / "stage.json";
  if (!force_ && Complete(stage)) {
    out.reused = true;
    out.summary = ReadJson(marker).value("summary", json::object());
    LogInfo(stage + ": up to date (" + out.dir.string() + ")");
    return false;
  }
  if (fs::exists(out.dir)) {
    if (!force_)
      Fail(ErrorCode::kConfig, stage + ": incomplete artifacts in " + out.dir.string() +
                                   "; re-run with --force to overwrite them");
    fs::remove_all(out.dir);
  }
  fs::create_directories(out.dir);
  WriteJson(out.dir / "inputs.json", FingerprintDoc(stage));
  LogInfo(stage + ": writing " + out.dir.string());
  return true;
}

void Pipeline::Finish(StageOutcome &out, const json &summary) {
  out.summary = summary;
  WriteJson(out.dir / "stage.json", {{"stage", out.stage}, {"fingerprint", out.fingerprint}, {"summary", summary}});
}

StageOutcome Pipeline::Run(const std::string &stage) {
  if (stage == "corpus") return Corpus();
  if (stage == "preprocess") return Preprocess();
  if (stage == "fit-csp") return FitCsp();
  if (stage == "train-asr") return TrainAsr();
  if (stage == "train-spoken") return TrainSpoken();
  if (stage == "adapt") return Adapt();
  if (stage == "loo") return Loo();
  if (stage == "evaluate") return Evaluate();
  if (stage == "ablate") return Ablate();
  Fail(ErrorCode::kConfig, "unknown stage '" + stage + "'");
}

StageOutcome Pipeline::Corpus() {
  StageOutcome out;
  if (!Begin("corpus", out)) return out;
  const auto &synth = config_.corpus.synth;
  const DType dtype = config_.corpus.storage == "float64" ? DType::kFloat64 : DType::kFloat32;
  const auto trials = corpus::EnumerateTrials(synth);
  fs::create_directories(out.dir / "eeg");
  fs::create_directories(out.dir / "voice");
  json manifest = json::array();
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const corpus::TrialRef &t = trials[i];
    const std::string id = t.Id();
    const corpus::EegTrial eeg = corpus::SynthesizeEeg(t.class_index, t.condition, t.subject, t.seed, synth);
    const json meta{{"id", id},
                    {"subject", t.subject},
                    {"class", t.class_index},
                    {"label", corpus::ClassAt(t.class_index).label},
                    {"condition", corpus::ConditionName(t.condition)},
                    {"seed", t.seed},
                    {"sample_rate", synth.eeg_rate},
                    {"units", "uV"},
                    {"fingerprint", out.fingerprint}};
    WriteArray(out.dir / "eeg" / (id + ".bin"), eeg.samples, dtype, meta);
    const std::string voice = "voice/" + VoiceKey(t) + ".wav";
    if (t.condition == corpus::Condition::kSpoken) {
      const corpus::VoiceClip clip = corpus::SynthesizeVoice(t.class_index, t.subject, t.seed, synth);
      WriteWav16(out.dir / voice, clip.waveform, synth.voice_rate);
    }
    json entry = meta;
    entry["index"] = t.index;
    entry["eeg"] = "eeg/" + id + ".bin";
    entry["voice"] = voice;
    manifest.push_back(entry);
    if ((i + 1) % 200 == 0) LogInfo("corpus: " + std::to_string(i + 1) + "/" + std::to_string(trials.size()));
  }
  WriteJson(out.dir / "manifest.json",
            {{"fingerprint", out.fingerprint}, {"config", CorpusJson(config_)}, {"trials", manifest}});
  Finish(out, {{"trials", trials.size()}, {"subjects", synth.subjects}, {"trials_per_class", synth.trials_per_class}});
  return out;
}

StageOutcome Pipeline::Preprocess() {
  RequireStage("corpus");
  StageOutcome out;
  if (!Begin("preprocess", out)) return out;
  const fs::path corpus_dir = StageDir("corpus");
  const auto trials = corpus::EnumerateTrials(config_.corpus.synth);
  const DType dtype = config_.corpus.storage == "float64" ? DType::kFloat64 : DType::kFloat32;
  fs::create_directories(out.dir / "eeg");
  fs::create_directories(out.dir / "mel");
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const std::string id = trials[i].Id();
    const LoadedArray raw = ReadArray(corpus_dir / "eeg" / (id + ".bin"));
    const Mat clean = dsp::PreprocessEeg(raw.values, config_.dsp.preprocess);
    WriteArray(out.dir / "eeg" / (id + ".bin"), clean, dtype, {{"id", id}, {"fingerprint", out.fingerprint}});
    if (trials[i].condition == corpus::Condition::kSpoken) {
      const std::string key = VoiceKey(trials[i]);
      const WaveData wav = ReadWav16(corpus_dir / "voice" / (key + ".wav"));
      WriteArray(out.dir / "mel" / (key + ".bin"), dsp::LogMel(wav.samples, config_.dsp.stft), DType::kFloat64,
                 {{"voice", key}, {"hop", config_.dsp.stft.hop}, {"sample_rate", config_.dsp.stft.sample_rate},
                  {"scale", "log"}, {"fingerprint", out.fingerprint}});
    }
    if ((i + 1) % 200 == 0) LogInfo("preprocess: " + std::to_string(i + 1) + "/" + std::to_string(trials.size()));
  }
  Finish(out, {{"trials", trials.size()}});
  return out;
}

StageOutcome Pipeline::FitCsp() {
  RequireStage("preprocess");
  StageOutcome out;
  if (!Begin("fit-csp", out)) return out;
  const fs::path pre_dir = StageDir("preprocess");
  const auto trials = corpus::EnumerateTrials(config_.corpus.synth);
  const corpus::SplitPlan plan = corpus::BuildSplits(trials, config_.corpus.unseen, corpus::SplitScheme::kFiveFold,
                                                     config_.corpus.fold, config_.seed);
  auto in_train = [&](const std::string &id) {
    const auto s = plan.Find(id);
    return s && *s == corpus::Split::kTrain;
  };

  embedding::CspFitter fitter(corpus::NumClasses(), config_.corpus.synth.channels, config_.embedding);
  int fitted = 0;
  for (const auto &t : trials) {
    if (t.condition != corpus::Condition::kImagined) continue;
    if (!in_train(t.Id()) && !plan.csp_only.count(t.Id())) continue;
    fitter.Add(ReadArray(pre_dir / "eeg" / (t.Id() + ".bin")).values, t.class_index);
    ++fitted;
  }
  std::vector<std::string> order;
  for (const auto &c : corpus::Classes()) order.push_back(c.label);
  embedding::CspBank bank = fitter.Fit(order, corpus::ConditionName(corpus::Condition::kImagined));
  LogInfo("fit-csp: " + std::to_string(bank.NumFeatures()) + " filters from " + std::to_string(fitted) +
          " imagined trials");

  std::vector<Mat> raw(trials.size());
  std::vector<Mat> train_raw;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    raw[i] = embedding::LogVarianceFeatures(ReadArray(pre_dir / "eeg" / (trials[i].Id() + ".bin")).values, bank);
    if (in_train(trials[i].Id())) train_raw.push_back(raw[i]);
  }
  embedding::FitFeatureNorm(bank, train_raw);
  fs::create_directories(out.dir / "emb");
  for (std::size_t i = 0; i < trials.size(); ++i)
    WriteArray(out.dir / "emb" / (trials[i].Id() + ".bin"), embedding::NormalizeFeatures(raw[i], bank),
               DType::kFloat64, {{"id", trials[i].Id()}, {"csp_hash", bank.Hash()}, {"fingerprint", out.fingerprint}});

  std::vector<Mat> voice_logs;
  for (const auto &t : trials)
    if (t.condition == corpus::Condition::kSpoken && in_train(t.Id()))
      voice_logs.push_back(ReadArray(pre_dir / "mel" / (VoiceKey(t) + ".bin")).values);
  const dsp::MelNormStats norm = dsp::FitNormStats(voice_logs);

  WriteArray(out.dir / "csp_filters.bin", bank.filters, DType::kFloat64, {{"fingerprint", out.fingerprint}});
  json bank_json = BankJson(bank);
  bank_json["fingerprint"] = out.fingerprint;
  WriteJson(out.dir / "csp.json", bank_json);
  json plan_json = SplitPlanJson(plan);
  plan_json["fingerprint"] = out.fingerprint;
  WriteJson(out.dir / "splits.json", plan_json);
  WriteJson(out.dir / "mel_norm.json",
            {{"log_min", norm.log_min}, {"log_max", norm.log_max}, {"fingerprint", out.fingerprint}});
  Finish(out, {{"csp_hash", bank.Hash()}, {"features", bank.NumFeatures()}, {"log_min", norm.log_min},
               {"log_max", norm.log_max}, {"csp_trials", fitted}});
  return out;
}

FeatureSet Pipeline::LoadFeatures() const {
  RequireStage("fit-csp");
  FeatureSet f;
  f.dir = StageDir("fit-csp");
  f.mel_dir = StageDir("preprocess") / "mel";
  const json bank_json = ReadJson(f.dir / "csp.json");
  f.bank = BankFromJson(bank_json, ReadArray(f.dir / "csp_filters.bin").values);
  f.plan = SplitPlanFromJson(ReadJson(f.dir / "splits.json"));
  const json n = ReadJson(f.dir / "mel_norm.json");
  f.norm = {n.at("log_min").get<double>(), n.at("log_max").get<double>()};
  f.trials = corpus::EnumerateTrials(config_.corpus.synth);
  return f;
}

std::vector<train::TrainItem> Pipeline::LoadItems(const FeatureSet &f, corpus::Condition condition,
                                                  corpus::Split split, const corpus::SplitPlan &plan,
                                                  bool unseen_only, bool seen_only) const {
  std::vector<train::TrainItem> items;
  for (const auto &t : f.trials) {
    if (t.condition != condition) continue;
    const auto s = plan.Find(t.Id());
    if (!s || *s != split) continue;
    const bool unseen = plan.unseen_classes.count(t.class_index) > 0;
    if ((unseen_only && !unseen) || (seen_only && unseen)) continue;
    train::TrainItem it;
    it.id = t.Id();
    it.embedding = ReadArray(f.dir / "emb" / (t.Id() + ".bin")).values;
    it.target = dsp::Normalize(ReadArray(f.mel_dir / (VoiceKey(t) + ".bin")).values, f.norm);
    it.text = corpus::ClassAt(t.class_index).transcript;
    it.transcript = asr::Alphabet::Encode(it.text);
    it.class_index = t.class_index;
    it.subject = t.subject;
    items.push_back(std::move(it));
  }
  return items;
}

namespace {

std::unique_ptr<asr::Recognizer> LoadRecognizer(const Pipeline &p) {
  auto rec = std::make_unique<asr::Recognizer>(p.config().model.asr);
  const CheckpointInfo info = LoadCheckpoint(p.StageDir("train-asr") / "checkpoint", {&rec->params()});
  if (info.fingerprint != p.Fingerprint("train-asr"))
    Fail(ErrorCode::kFingerprintMismatch, "recognizer checkpoint does not match this configuration");
  return rec;
}

}  // namespace

StageOutcome Pipeline::TrainAsr() {
  RequireStage("fit-csp");
  StageOutcome out;
  if (!Begin("train-asr", out)) return out;
  const FeatureSet f = LoadFeatures();
  const auto &synth = config_.corpus.synth;
  const auto &sec = config_.train.asr;
  std::vector<asr::AsrExample> train_set, heldout;
  for (int s = 0; s < synth.subjects; ++s) {
    for (int c = 0; c < corpus::NumClasses(); ++c) {
      for (int r = 0; r < sec.clips_per_class + sec.heldout_per_class; ++r) {
        const std::uint64_t seed = DeriveSeed(config_.seed, {kTagAsrVoice, static_cast<std::uint64_t>(s),
                                                             static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(r)});
        const corpus::VoiceClip clip = corpus::SynthesizeVoice(c, s, seed, synth);
        asr::AsrExample ex{dsp::Normalize(dsp::LogMel(Quantize16(clip.waveform), config_.dsp.stft), f.norm),
                           corpus::ClassAt(c).transcript};
        (r < sec.clips_per_class ? train_set : heldout).push_back(std::move(ex));
      }
    }
  }
  asr::Recognizer rec(config_.model.asr);
  rec.Init(DeriveSeed(config_.seed, {kTagAsrModel}));
  asr::AsrTrainConfig schedule = sec.schedule;
  schedule.seed = DeriveSeed(config_.seed, {kTagAsrSchedule});
  const asr::AsrTrainReport report = asr::TrainRecognizer(rec, train_set, heldout, schedule);
  const json report_json{{"epochs", report.epochs},           {"best_epoch", report.best_epoch},
                         {"heldout_cer", report.best_cer},    {"target_cer", schedule.target_cer},
                         {"reached_target", report.reached_target}, {"train_loss", report.train_loss},
                         {"heldout_cer_history", report.heldout_cer}, {"fingerprint", out.fingerprint}};
  WriteJson(out.dir / "report.json", report_json);
  if (!report.reached_target)
    Fail(ErrorCode::kNumerical, "recognizer reached only " + std::to_string(report.best_cer) +
                                    "% held-out CER (target " + std::to_string(schedule.target_cer) +
                                    "%); see " + (out.dir / "report.json").string());
  SaveCheckpoint(out.dir / "checkpoint", {&rec.params()}, out.fingerprint,
                 {{"recognizer", RecognizerJson(config_.model.asr)}, {"report", report_json}});
  Finish(out, {{"heldout_cer", report.best_cer}, {"epochs", report.epochs}});
  return out;
}

StageOutcome Pipeline::TrainSpoken() {
  RequireStage("fit-csp");
  RequireStage("train-asr");
  StageOutcome out;
  if (!Begin("train-spoken", out)) return out;
  const FeatureSet f = LoadFeatures();
  const auto rec = LoadRecognizer(*this);
  const auto train_items = LoadItems(f, corpus::Condition::kSpoken, corpus::Split::kTrain, f.plan);
  const auto val_items = LoadItems(f, corpus::Condition::kSpoken, corpus::Split::kVal, f.plan);
  Networks n = MakeNetworks(config_, config_.seed);
  train::StageConfig schedule = config_.train.spoken;
  schedule.seed = DeriveSeed(config_.seed, {kTagSpokenSchedule});
  const auto r = TrainAndSave("train-spoken", n, *rec, config_.train.weights, schedule, train_items, val_items,
                              out.dir, out.fingerprint,
                              {{"csp_hash", f.bank.Hash()}, {"log_min", f.norm.log_min}, {"log_max", f.norm.log_max}});
  Finish(out, StageResultJson(r));
  return out;
}

StageOutcome Pipeline::Adapt() {
  RequireStage("fit-csp");
  RequireStage("train-asr");
  if (!DaDisabled()) RequireStage("train-spoken");
  StageOutcome out;
  if (!Begin("adapt", out)) return out;
  const FeatureSet f = LoadFeatures();
  const auto rec = LoadRecognizer(*this);
  const auto train_items = LoadItems(f, corpus::Condition::kImagined, corpus::Split::kTrain, f.plan);
  const auto val_items = LoadItems(f, corpus::Condition::kImagined, corpus::Split::kVal, f.plan);
  Networks n = MakeNetworks(config_, DeriveSeed(config_.seed, {kTagAdaptSchedule}));
  train::StageConfig schedule = config_.train.adapt;
  if (DaDisabled()) {
    schedule = config_.train.spoken;
  } else {
    LoadNetworks(StageDir("train-spoken") / "checkpoint", Fingerprint("train-spoken"), n);
  }
  schedule.seed = DeriveSeed(config_.seed, {kTagAdaptSchedule});
  const auto r = TrainAndSave("adapt", n, *rec, config_.train.weights, schedule, train_items, val_items, out.dir,
                              out.fingerprint,
                              {{"csp_hash", f.bank.Hash()}, {"log_min", f.norm.log_min}, {"log_max", f.norm.log_max},
                               {"init", DaDisabled() ? "random" : "spoken"}});
  Finish(out, StageResultJson(r));
  return out;
}

namespace {

eval::EvalOptions MakeEvalOptions(const RunConfig &c, const dsp::MelNormStats &norm) {
  eval::EvalOptions o;
  o.route = c.eval.asr_route;
  o.vocoder = c.eval.vocoder;
  o.vocoder.stft = c.dsp.stft;
  o.norm = norm;
  o.shuffle_permutations = c.eval.shuffle_permutations;
  o.seed = DeriveSeed(c.seed, {kTagEval});
  return o;
}

void AddRecords(std::vector<eval::TrialRecord> &records, const std::vector<train::TrainItem> &items,
                const std::string &condition, const model::Generator &gen, const asr::Recognizer &rec,
                const eval::EvalOptions &options) {
  for (const auto &it : items) records.push_back(eval::EvaluateTrial({it, condition}, gen, rec, options));
}

json WriteReport(const fs::path &dir, const eval::EvalReport &report) {
  {
    std::ofstream tsv(dir / "table.tsv");
    eval::WriteTable(tsv, report);
  }
  {
    std::ofstream lines(dir / "records.jsonl");
    for (const auto &r : report.records) lines << RecordJson(r).dump() << '\n';
  }
  json rows = json::array();
  for (const auto &r : report.rows) rows.push_back(RowJson(r));
  WriteJson(dir / "report.json", {{"fingerprint", report.fingerprint}, {"rows", rows}});
  return rows;
}

}  // namespace

StageOutcome Pipeline::Evaluate() {
  RequireStage("fit-csp");
  RequireStage("train-asr");
  RequireStage("train-spoken");
  RequireStage("adapt");
  StageOutcome out;
  if (!Begin("evaluate", out)) return out;
  const FeatureSet f = LoadFeatures();
  const auto rec = LoadRecognizer(*this);
  Networks spoken = MakeNetworks(config_, config_.seed);
  Networks adapted = MakeNetworks(config_, config_.seed);
  LoadNetworks(StageDir("train-spoken") / "checkpoint", Fingerprint("train-spoken"), spoken);
  LoadNetworks(StageDir("adapt") / "checkpoint", Fingerprint("adapt"), adapted);
  const eval::EvalOptions options = MakeEvalOptions(config_, f.norm);

  eval::EvalReport report;
  report.fingerprint = out.fingerprint;
  using corpus::Condition;
  using corpus::Split;
  AddRecords(report.records, LoadItems(f, Condition::kSpoken, Split::kTest, f.plan, false, true), "spoken",
             *spoken.gen, *rec, options);
  AddRecords(report.records, LoadItems(f, Condition::kImagined, Split::kTest, f.plan, false, true), "imagined",
             *adapted.gen, *rec, options);
  AddRecords(report.records, LoadItems(f, Condition::kSpoken, Split::kTest, f.plan, true, false), "unseen_spoken",
             *spoken.gen, *rec, options);
  AddRecords(report.records, LoadItems(f, Condition::kImagined, Split::kTest, f.plan, true, false),
             "unseen_imagined", *adapted.gen, *rec, options);
  if (report.records.empty()) Fail(ErrorCode::kMissingArtifact, "evaluate: the test split is empty");
  report.rows = eval::Aggregate(report.records, options.shuffle_permutations, options.seed);
  const json rows = WriteReport(out.dir, report);
  Finish(out, {{"rows", rows}, {"route", eval::AsrRouteName(options.route)}});
  return out;
}

StageOutcome Pipeline::Loo() {
  RequireStage("fit-csp");
  RequireStage("train-asr");
  StageOutcome out;
  if (!Begin("loo", out)) return out;
  const FeatureSet f = LoadFeatures();
  const auto rec = LoadRecognizer(*this);
  const int subject = config_.train.loo_subject;
  const corpus::SplitPlan plan =
      corpus::BuildSplits(f.trials, config_.corpus.unseen, corpus::SplitScheme::kLeaveOneOut, config_.corpus.fold,
                          config_.seed, subject);
  json plan_json = SplitPlanJson(plan);
  plan_json["fingerprint"] = out.fingerprint;
  WriteJson(out.dir / "splits.json", plan_json);
  using corpus::Condition;
  using corpus::Split;
  const json meta{{"csp_hash", f.bank.Hash()}, {"loo_subject", subject}};

  Networks n = MakeNetworks(config_, DeriveSeed(config_.seed, {kTagLoo}));
  train::StageConfig spoken = config_.train.spoken;
  spoken.seed = DeriveSeed(config_.seed, {kTagLoo, kTagSpokenSchedule});
  fs::create_directories(out.dir / "pretrain");
  const auto pre = TrainAndSave("loo-pretrain", n, *rec, config_.train.weights, spoken,
                                LoadItems(f, Condition::kSpoken, Split::kTrain, plan),
                                LoadItems(f, Condition::kSpoken, Split::kVal, plan), out.dir / "pretrain",
                                out.fingerprint, meta);
  train::StageConfig adapt = config_.train.adapt;
  adapt.seed = DeriveSeed(config_.seed, {kTagLoo, kTagAdaptSchedule});
  fs::create_directories(out.dir / "adapt");
  const auto ad = TrainAndSave("loo-adapt", n, *rec, config_.train.weights, adapt,
                               LoadItems(f, Condition::kImagined, Split::kTrain, plan),
                               LoadItems(f, Condition::kImagined, Split::kVal, plan), out.dir / "adapt",
                               out.fingerprint, meta);

  const eval::EvalOptions options = MakeEvalOptions(config_, f.norm);
  eval::EvalReport report;
  report.fingerprint = out.fingerprint;
  AddRecords(report.records, LoadItems(f, Condition::kImagined, Split::kTest, plan, false, true), "imagined", *n.gen,
             *rec, options);
  AddRecords(report.records, LoadItems(f, Condition::kImagined, Split::kTest, plan, true, false), "unseen_imagined",
             *n.gen, *rec, options);
  report.rows = eval::Aggregate(report.records, options.shuffle_permutations, options.seed);
  const json rows = WriteReport(out.dir, report);
  Finish(out, {{"loo_subject", subject}, {"pretrain", StageResultJson(pre)}, {"adapt", StageResultJson(ad)},
               {"rows", rows}});
  return out;
}

StageOutcome Pipeline::Ablate() {
  if (!config_.train.ablation.empty())
    Fail(ErrorCode::kConfig, "ablate builds its own rows; train.ablation must be empty");
  RequireStage("fit-csp");
  RequireStage("train-asr");
  StageOutcome out;
  if (!Begin("ablate", out)) return out;
  const std::vector<std::pair<std::string, std::string>> grid{
      {"Baseline", ""},        {"w/o GRU", "gru"},          {"w/o GAN loss", "gan_loss"},
      {"w/o reconstruction loss", "rec_loss"}, {"w/o CTC loss", "ctc_loss"}, {"w/o DA", "da"}};
  json rows = json::array();
  std::ofstream tsv(out.dir / "table.tsv");
  tsv << "input\trmse_mean\trmse_std\tcer_mean\tcer_std\tspoken_rmse\tspoken_cer\tevaluate\n";
  for (const auto &[name, sw] : grid) {
    RunConfig rc = config_;
    rc.train.ablation.clear();
    if (!sw.empty()) rc.train.ablation.insert(sw);
    Pipeline p(rc, false);
    LogInfo("ablate: " + name);
    p.TrainSpoken();
    p.Adapt();
    const StageOutcome ev = p.Evaluate();
    json row{{"input", name}, {"switch", sw}, {"evaluate", ev.fingerprint}};
    for (const auto &r : ev.summary.at("rows")) {
      if (r.at("condition") == "imagined") {
        row["rmse_mean"] = r.at("rmse_mean");
        row["rmse_std"] = r.at("rmse_std");
        row["cer_mean"] = r.at("cer_mean");
        row["cer_std"] = r.at("cer_std");
      } else if (r.at("condition") == "spoken") {
        row["spoken_rmse"] = r.at("rmse_mean");
        row["spoken_cer"] = r.at("cer_mean");
      }
    }
    tsv << name << '\t' << row.value("rmse_mean", 0.0) << '\t' << row.value("rmse_std", 0.0) << '\t'
        << row.value("cer_mean", 0.0) << '\t' << row.value("cer_std", 0.0) << '\t' << row.value("spoken_rmse", 0.0)
        << '\t' << row.value("spoken_cer", 0.0) << '\t' << ev.fingerprint << '\n';
    tsv.flush();
    rows.push_back(row);
  }
  Finish(out, {{"rows", rows}});
  return out;
}

InferResult Pipeline::Infer(const std::string &trial_id, const fs::path &wave_path) {
  const FeatureSet f = LoadFeatures();
  const auto it = std::find_if(f.trials.begin(), f.trials.end(), [&](const auto &t) { return t.Id() == trial_id; });
  if (it == f.trials.end()) Fail(ErrorCode::kInvalidArgument, "unknown trial id '" + trial_id + "'");
  const bool imagined = it->condition == corpus::Condition::kImagined;
  const std::string stage = imagined ? "adapt" : "train-spoken";
  RequireStage("train-asr");
  RequireStage(stage);
  const auto rec = LoadRecognizer(*this);
  Networks n = MakeNetworks(config_, config_.seed);
  LoadNetworks(StageDir(stage) / "checkpoint", Fingerprint(stage), n);

  const Mat emb = ReadArray(f.dir / "emb" / (trial_id + ".bin")).values;
  const Mat mel = n.gen->Forward(emb, nullptr);
  dsp::MelSpectrogram m;
  m.values = mel;
  m.hop = config_.dsp.stft.hop;
  m.sample_rate = config_.dsp.stft.sample_rate;
  m.norm = f.norm;
  vocoder::VocoderSpec spec = config_.eval.vocoder;
  spec.stft = config_.dsp.stft;
  const std::vector<double> wave = vocoder::MelToWaveform(m, spec);

  InferResult r;
  r.trial_id = trial_id;
  r.wave_path = wave_path.empty() ? config_.output_dir / "infer" / (trial_id + ".wav") : wave_path;
  if (r.wave_path.has_parent_path()) fs::create_directories(r.wave_path.parent_path());
  WriteWav16(r.wave_path, wave, config_.dsp.stft.sample_rate);
  WriteArray(fs::path(r.wave_path).replace_extension(".mel.bin"), mel, DType::kFloat32,
             {{"log_min", f.norm.log_min}, {"log_max", f.norm.log_max}, {"trial", trial_id},
              {"fingerprint", Fingerprint(stage)}});
  r.transcript = eval::Recognize(mel, *rec, MakeEvalOptions(config_, f.norm));
  r.reference = corpus::ClassAt(it->class_index).transcript;
  r.cer = asr::Cer(r.reference, r.transcript);
  r.rms_dbfs = RmsDbfs(Quantize16(wave));
  return r;
}

}  // namespace neurotalk::pipeline
