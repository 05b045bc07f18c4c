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

// pipeline/config.cc

#include "pipeline/config.h"

#include <fstream>
#include <functional>

#include "common/error.h"
#include "corpus/classes.h"

namespace neurotalk::pipeline {

using nlohmann::json;

namespace {

class Reader {
 public:
  Reader(const json &j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) Fail(ErrorCode::kConfig, "config: '" + path_ + "' must be an object");
  }

  template <typename T>
  void Get(const char *key, T &out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception &e) {
      Fail(ErrorCode::kConfig, "config: bad value for '" + path_ + "." + key + "': " + e.what());
    }
  }

  void Sub(const char *key, const std::function<void(Reader &)> &fn) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    Reader r(j_.at(key), path_ + "." + key);
    fn(r);
    r.Finish();
  }

  bool Has(const char *key) const { return j_.contains(key); }
  const json &At(const char *key) const { return j_.at(key); }
  void Mark(const char *key) { seen_.insert(key); }

  void Finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) Fail(ErrorCode::kConfig, "config: unknown key '" + path_ + "." + it.key() + "'");
  }

 private:
  const json &j_;
  std::string path_;
  std::set<std::string> seen_;
};

void ReadStage(Reader &r, train::StageConfig &s) {
  r.Get("lr", s.lr);
  r.Get("max_epochs", s.max_epochs);
  r.Get("batch", s.batch);
  r.Get("patience", s.patience);
  r.Get("lr_decay", s.lr_decay);
  r.Get("beta1", s.beta1);
  r.Get("beta2", s.beta2);
  r.Get("weight_decay", s.weight_decay);
  r.Get("clip_norm", s.clip_norm);
}

void ReadGenerator(Reader &r, model::GeneratorConfig &g) {
  r.Get("input_features", g.input_features);
  r.Get("input_steps", g.input_steps);
  r.Get("initial_channels", g.initial_channels);
  r.Get("upsample_rates", g.upsample_rates);
  r.Get("mrf_kernels", g.mrf_kernels);
  r.Get("mrf_dilations", g.mrf_dilations);
  r.Get("gru_hidden", g.gru_hidden);
  r.Get("mel_bands", g.mel_bands);
  r.Get("pre_kernel", g.pre_kernel);
  r.Get("post_kernel", g.post_kernel);
  r.Get("slope", g.slope);
  r.Get("recurrent", g.recurrent);
}

void ReadDiscriminator(Reader &r, model::DiscriminatorConfig &d) {
  r.Get("mel_bands", d.mel_bands);
  r.Get("input_frames", d.input_frames);
  r.Get("pre_channels", d.pre_channels);
  r.Get("stage_channels", d.stage_channels);
  r.Get("downsample_rates", d.downsample_rates);
  r.Get("mrf_kernels", d.mrf_kernels);
  r.Get("mrf_dilations", d.mrf_dilations);
  r.Get("gru_hidden", d.gru_hidden);
  r.Get("pre_kernel", d.pre_kernel);
  r.Get("slope", d.slope);
  r.Get("recurrent", d.recurrent);
}

}  // namespace

void RunConfig::Validate() const {
  auto cfg = [](bool ok, const std::string &msg) {
    if (!ok) Fail(ErrorCode::kConfig, "config: " + msg);
  };
  const auto &s = corpus.synth;
  cfg(s.subjects >= 1, "corpus.subjects must be >= 1");
  cfg(s.trials_per_class >= 5, "corpus.trials_per_class must be >= 5 for five-fold splits");
  cfg(s.channels >= 2, "corpus.channels must be >= 2");
  cfg(corpus.fold >= 0 && corpus.fold < 5, "corpus.fold must be in [0, 5)");
  cfg(corpus.storage == "float32" || corpus.storage == "float64", "corpus.storage must be float32 or float64");
  for (const auto &u : corpus.unseen) {
    try {
      corpus::ClassIndex(u);
    } catch (const Error &) {
      Fail(ErrorCode::kConfig, "config: unseen label '" + u + "' is not a class");
    }
  }
  cfg(std::abs(dsp.preprocess.sample_rate - s.eeg_rate) < 1e-9, "dsp.sample_rate must equal corpus.eeg_rate");
  cfg(std::abs(dsp.preprocess.pre_trial_s - s.pre_trial_s) < 1e-9, "dsp.pre_trial_s must equal corpus.pre_trial_s");
  cfg(dsp.stft.sample_rate == s.voice_rate, "dsp.stft sample rate must equal corpus.voice_rate");
  cfg(embedding.filters_per_class >= 2 && embedding.filters_per_class % 2 == 0,
      "embedding.filters_per_class must be even and >= 2");
  cfg(embedding.segments >= 1, "embedding.segments must be >= 1");
  cfg(model.generator.input_features == corpus::NumClasses() * embedding.filters_per_class,
      "model.generator.input_features must equal 13 * filters_per_class");
  cfg(model.generator.input_steps == embedding.segments, "model.generator.input_steps must equal embedding.segments");
  cfg(model.generator.mel_bands == dsp.stft.n_mels && model.discriminator.mel_bands == dsp.stft.n_mels &&
          model.asr.mel_bands == dsp.stft.n_mels,
      "model mel_bands must equal dsp.n_mels");
  cfg(model.discriminator.input_frames == model.generator.OutputFrames(),
      "model.discriminator.input_frames must equal the generator output length");
  try {
    model.generator.Validate();
    model.discriminator.Validate();
    model.asr.Validate();
    train.weights.Validate();
    train.spoken.Validate();
    train.adapt.Validate();
    eval.vocoder.Validate();
  } catch (const Error &e) {
    Fail(ErrorCode::kConfig, std::string("config: ") + e.what());
  }
  cfg(train.adapt.lr < train.spoken.lr, "train.adapt.lr must be lower than train.spoken.lr");
  for (const auto &a : train.ablation)
    cfg(std::find(kAblationSwitches.begin(), kAblationSwitches.end(), a) != kAblationSwitches.end(),
        "unknown ablation switch '" + a + "'");
  cfg(train.loo_subject >= 0 && train.loo_subject < s.subjects, "train.loo_subject out of range");
  cfg(train.asr.clips_per_class >= 1 && train.asr.heldout_per_class >= 1, "train.asr clip counts must be >= 1");
  cfg(eval.shuffle_permutations >= 1, "eval.shuffle_permutations must be >= 1");
}

RunConfig ParseRunConfig(const json &doc) {
  RunConfig c;
  Reader root(doc, "$");
  root.Get("seed", c.seed);
  std::string out_dir = c.output_dir.string();
  root.Get("output_dir", out_dir);
  c.output_dir = out_dir;

  root.Sub("corpus", [&](Reader &r) {
    auto &s = c.corpus.synth;
    r.Get("subjects", s.subjects);
    r.Get("trials_per_class", s.trials_per_class);
    r.Mark("seed");
    if (r.Has("seed") && !r.At("seed").is_null()) {
      std::uint64_t v = 0;
      r.Get("seed", v);
      c.corpus.seed = v;
    }
    r.Get("channels", s.channels);
    r.Get("eeg_rate", s.eeg_rate);
    r.Get("pre_trial_s", s.pre_trial_s);
    r.Get("trial_s", s.trial_s);
    r.Get("voice_rate", s.voice_rate);
    r.Get("spoken_gain", s.spoken_gain);
    r.Get("imagined_gain", s.imagined_gain);
    r.Get("background_uv", s.background_uv);
    r.Get("sensor_noise_uv", s.sensor_noise_uv);
    r.Get("class_uv", s.class_uv);
    r.Get("phoneme_uv", s.phoneme_uv);
    r.Get("artifact_uv", s.artifact_uv);
    r.Get("dc_offset_uv", s.dc_offset_uv);
    r.Get("subject_pattern_mix", s.subject_pattern_mix);
    r.Get("imagined_jitter_s", s.imagined_jitter_s);
    r.Get("unseen", c.corpus.unseen);
    r.Get("fold", c.corpus.fold);
    r.Get("storage", c.corpus.storage);
  });
  root.Sub("dsp", [&](Reader &r) {
    auto &p = c.dsp.preprocess;
    r.Get("sample_rate", p.sample_rate);
    r.Get("bandpass_order", p.bandpass_order);
    r.Get("band_low_hz", p.band_low_hz);
    r.Get("band_high_hz", p.band_high_hz);
    r.Get("notch_hz", p.notch_hz);
    r.Get("notch_q", p.notch_q);
    r.Get("pre_trial_s", p.pre_trial_s);
    r.Get("edge_pad", p.edge_pad);
    auto &f = c.dsp.stft;
    r.Get("n_fft", f.n_fft);
    r.Get("win_length", f.win_length);
    r.Get("hop", f.hop);
    r.Get("voice_rate", f.sample_rate);
    r.Get("n_mels", f.n_mels);
    r.Get("fmin", f.fmin);
    r.Get("fmax", f.fmax);
    r.Get("log_floor", f.log_floor);
  });
  root.Sub("embedding", [&](Reader &r) {
    r.Get("filters_per_class", c.embedding.filters_per_class);
    r.Get("shrinkage", c.embedding.shrinkage);
    r.Get("segments", c.embedding.segments);
    r.Get("variance_floor", c.embedding.variance_floor);
  });
  root.Sub("model", [&](Reader &r) {
    r.Sub("generator", [&](Reader &g) { ReadGenerator(g, c.model.generator); });
    r.Sub("discriminator", [&](Reader &d) { ReadDiscriminator(d, c.model.discriminator); });
    r.Sub("asr", [&](Reader &a) {
      a.Get("conv_channels", c.model.asr.conv_channels);
      a.Get("conv_kernel", c.model.asr.conv_kernel);
      a.Get("gru_hidden", c.model.asr.gru_hidden);
      a.Get("slope", c.model.asr.slope);
    });
  });
  root.Sub("train", [&](Reader &r) {
    r.Sub("weights", [&](Reader &w) {
      w.Get("rec", c.train.weights.rec);
      w.Get("adv", c.train.weights.adv);
      w.Get("ctc", c.train.weights.ctc);
      w.Get("disc", c.train.weights.disc);
    });
    r.Sub("spoken", [&](Reader &s) { ReadStage(s, c.train.spoken); });
    r.Sub("adapt", [&](Reader &s) { ReadStage(s, c.train.adapt); });
    r.Sub("asr", [&](Reader &a) {
      auto &s = c.train.asr.schedule;
      a.Get("max_epochs", s.max_epochs);
      a.Get("batch", s.batch);
      a.Get("lr", s.lr);
      a.Get("clip_norm", s.clip_norm);
      a.Get("target_cer", s.target_cer);
      a.Get("stretch_min", s.stretch_min);
      a.Get("stretch_max", s.stretch_max);
      a.Get("patience", s.patience);
      a.Get("clips_per_class", c.train.asr.clips_per_class);
      a.Get("heldout_per_class", c.train.asr.heldout_per_class);
    });
    r.Get("ablation", c.train.ablation);
    r.Get("loo_subject", c.train.loo_subject);
  });
  root.Sub("eval", [&](Reader &r) {
    std::string route = eval::AsrRouteName(c.eval.asr_route);
    r.Get("asr_route", route);
    c.eval.asr_route = eval::ParseAsrRoute(route);
    r.Sub("vocoder", [&](Reader &v) {
      std::string kind = vocoder::VocoderKindName(c.eval.vocoder.kind);
      v.Get("kind", kind);
      c.eval.vocoder.kind = vocoder::ParseVocoderKind(kind);
      v.Get("gl_iters", c.eval.vocoder.gl_iters);
      v.Get("nnls_iters", c.eval.vocoder.nnls_iters);
      v.Get("peak", c.eval.vocoder.peak);
      v.Get("external_command", c.eval.vocoder.external_command);
    });
    r.Get("shuffle_permutations", c.eval.shuffle_permutations);
  });
  root.Finish();

  // Derived fields mirror their sources.
  c.corpus.synth.seed = c.CorpusSeed();
  c.eval.vocoder.stft = c.dsp.stft;
  c.Validate();
  return c;
}

RunConfig LoadRunConfig(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kConfig, "cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception &e) {
    Fail(ErrorCode::kConfig, "config " + path.string() + " is not valid JSON: " + e.what());
  }
  return ParseRunConfig(doc);
}

json CorpusJson(const RunConfig &c) {
  const auto &s = c.corpus.synth;
  return {{"subjects", s.subjects},
          {"trials_per_class", s.trials_per_class},
          {"seed", c.CorpusSeed()},
          {"channels", s.channels},
          {"eeg_rate", s.eeg_rate},
          {"pre_trial_s", s.pre_trial_s},
          {"trial_s", s.trial_s},
          {"voice_rate", s.voice_rate},
          {"spoken_gain", s.spoken_gain},
          {"imagined_gain", s.imagined_gain},
          {"background_uv", s.background_uv},
          {"sensor_noise_uv", s.sensor_noise_uv},
          {"class_uv", s.class_uv},
          {"phoneme_uv", s.phoneme_uv},
          {"artifact_uv", s.artifact_uv},
          {"dc_offset_uv", s.dc_offset_uv},
          {"subject_pattern_mix", s.subject_pattern_mix},
          {"imagined_jitter_s", s.imagined_jitter_s},
          {"storage", c.corpus.storage}};
}

json SplitJson(const RunConfig &c) {
  return {{"unseen", c.corpus.unseen}, {"fold", c.corpus.fold}, {"seed", c.seed}};
}

json DspJson(const RunConfig &c) {
  const auto &p = c.dsp.preprocess;
  const auto &f = c.dsp.stft;
  return {{"sample_rate", p.sample_rate}, {"bandpass_order", p.bandpass_order},
          {"band_low_hz", p.band_low_hz}, {"band_high_hz", p.band_high_hz},
          {"notch_hz", p.notch_hz},       {"notch_q", p.notch_q},
          {"pre_trial_s", p.pre_trial_s}, {"edge_pad", p.edge_pad},
          {"n_fft", f.n_fft},             {"win_length", f.win_length},
          {"hop", f.hop},                 {"voice_rate", f.sample_rate},
          {"n_mels", f.n_mels},           {"fmin", f.fmin},
          {"fmax", f.fmax},               {"log_floor", f.log_floor}};
}

json EmbeddingJson(const RunConfig &c) {
  return {{"filters_per_class", c.embedding.filters_per_class},
          {"shrinkage", c.embedding.shrinkage},
          {"segments", c.embedding.segments},
          {"variance_floor", c.embedding.variance_floor}};
}

json GeneratorJson(const model::GeneratorConfig &g) {
  return {{"input_features", g.input_features}, {"input_steps", g.input_steps},
          {"initial_channels", g.initial_channels}, {"upsample_rates", g.upsample_rates},
          {"mrf_kernels", g.mrf_kernels},       {"mrf_dilations", g.mrf_dilations},
          {"gru_hidden", g.gru_hidden},         {"mel_bands", g.mel_bands},
          {"pre_kernel", g.pre_kernel},         {"post_kernel", g.post_kernel},
          {"slope", g.slope},                   {"recurrent", g.recurrent}};
}

json DiscriminatorJson(const model::DiscriminatorConfig &d) {
  return {{"mel_bands", d.mel_bands},         {"input_frames", d.input_frames},
          {"pre_channels", d.pre_channels},   {"stage_channels", d.stage_channels},
          {"downsample_rates", d.downsample_rates}, {"mrf_kernels", d.mrf_kernels},
          {"mrf_dilations", d.mrf_dilations}, {"gru_hidden", d.gru_hidden},
          {"pre_kernel", d.pre_kernel},       {"slope", d.slope},
          {"recurrent", d.recurrent}};
}

json RecognizerJson(const asr::RecognizerConfig &a) {
  return {{"conv_channels", a.conv_channels}, {"conv_kernel", a.conv_kernel},
          {"gru_hidden", a.gru_hidden}, {"slope", a.slope}};
}

json StageJson(const train::StageConfig &s) {
  return {{"lr", s.lr},       {"max_epochs", s.max_epochs},     {"batch", s.batch},
          {"patience", s.patience}, {"lr_decay", s.lr_decay}, {"beta1", s.beta1},
          {"beta2", s.beta2}, {"weight_decay", s.weight_decay}, {"clip_norm", s.clip_norm}};
}

json WeightsJson(const train::LossWeights &w) {
  return {{"rec", w.rec}, {"adv", w.adv}, {"ctc", w.ctc}, {"disc", w.disc}};
}

json AsrTrainJson(const AsrTrainSection &a) {
  const auto &s = a.schedule;
  return {{"max_epochs", s.max_epochs},   {"batch", s.batch},
          {"lr", s.lr},                   {"clip_norm", s.clip_norm},
          {"target_cer", s.target_cer},   {"stretch_min", s.stretch_min},
          {"stretch_max", s.stretch_max}, {"patience", s.patience},
          {"clips_per_class", a.clips_per_class}, {"heldout_per_class", a.heldout_per_class}};
}

json EvalJson(const EvalSection &e) {
  return {{"asr_route", eval::AsrRouteName(e.asr_route)},
          {"vocoder",
           {{"kind", vocoder::VocoderKindName(e.vocoder.kind)},
            {"gl_iters", e.vocoder.gl_iters},
            {"nnls_iters", e.vocoder.nnls_iters},
            {"peak", e.vocoder.peak},
            {"external_command", e.vocoder.external_command}}},
          {"shuffle_permutations", e.shuffle_permutations}};
}

json ToJson(const RunConfig &c) {
  json corpus_j = CorpusJson(c);
  corpus_j["seed"] = c.corpus.seed ? json(*c.corpus.seed) : json(nullptr);
  corpus_j["unseen"] = c.corpus.unseen;
  corpus_j["fold"] = c.corpus.fold;
  json asr_j = AsrTrainJson(c.train.asr);
  return {{"seed", c.seed},
          {"output_dir", c.output_dir.string()},
          {"corpus", corpus_j},
          {"dsp", DspJson(c)},
          {"embedding", EmbeddingJson(c)},
          {"model",
           {{"generator", GeneratorJson(c.model.generator)},
            {"discriminator", DiscriminatorJson(c.model.discriminator)},
            {"asr", RecognizerJson(c.model.asr)}}},
          {"train",
           {{"weights", WeightsJson(c.train.weights)},
            {"spoken", StageJson(c.train.spoken)},
            {"adapt", StageJson(c.train.adapt)},
            {"asr", asr_j},
            {"ablation", c.train.ablation},
            {"loo_subject", c.train.loo_subject}}},
          {"eval", EvalJson(c.eval)}};
}

RunConfig ApplyAblation(const RunConfig &base, const std::set<std::string> &disabled) {
  RunConfig c = base;
  c.train.ablation = disabled;
  for (const auto &d : disabled) {
    if (d == "gru") {
      c.model.generator.recurrent = false;
      c.model.discriminator.recurrent = false;
    } else if (d == "gan_loss") {
      c.train.weights.adv = 0.0;
    } else if (d == "rec_loss") {
      c.train.weights.rec = 0.0;
    } else if (d == "ctc_loss") {
      c.train.weights.ctc = 0.0;
    } else if (d != "da") {
      Fail(ErrorCode::kConfig, "unknown ablation switch '" + d + "'");
    }
  }
  return c;
}

}  // namespace neurotalk::pipeline
