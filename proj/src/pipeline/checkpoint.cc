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

// pipeline/checkpoint.cc

#include "pipeline/checkpoint.h"

#include <fstream>
#include <map>

#include "common/array_io.h"
#include "common/error.h"

namespace neurotalk::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

void SaveCheckpoint(const fs::path &dir, const std::vector<const nn::ParameterSet *> &sets,
                    const std::string &fingerprint, const json &meta) {
  fs::create_directories(dir);
  json tensors = json::array();
  const fs::path bin = dir / "tensors.bin";
  const fs::path tmp = dir / "tensors.bin.tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) Fail(ErrorCode::kIo, "cannot write " + tmp.string());
    std::uint64_t offset = 0;
    for (const nn::ParameterSet *set : sets) {
      for (const auto &p : set->all()) {
        const auto bytes = static_cast<std::uint64_t>(p->value.size()) * sizeof(double);
        out.write(reinterpret_cast<const char *>(p->value.data()), static_cast<std::streamsize>(bytes));
        tensors.push_back({{"name", p->name}, {"rows", p->value.rows()}, {"cols", p->value.cols()}, {"offset", offset}});
        offset += bytes;
      }
    }
    if (!out) Fail(ErrorCode::kIo, "short write to " + tmp.string());
  }
  fs::rename(tmp, bin);
  WriteJson(dir / "manifest.json",
            {{"format", kCheckpointFormat}, {"fingerprint", fingerprint}, {"meta", meta}, {"tensors", tensors}});
}

CheckpointInfo ReadCheckpointInfo(const fs::path &dir) {
  if (!fs::exists(dir / "manifest.json")) Fail(ErrorCode::kMissingArtifact, "no checkpoint at " + dir.string());
  const json m = ReadJson(dir / "manifest.json");
  if (m.value("format", "") != kCheckpointFormat)
    Fail(ErrorCode::kFingerprintMismatch, "unrecognised checkpoint format in " + dir.string());
  return {m.at("fingerprint").get<std::string>(), m.at("meta")};
}

CheckpointInfo LoadCheckpoint(const fs::path &dir, const std::vector<nn::ParameterSet *> &sets) {
  CheckpointInfo info = ReadCheckpointInfo(dir);
  const json m = ReadJson(dir / "manifest.json");
  std::map<std::string, json> index;
  for (const auto &t : m.at("tensors")) index[t.at("name").get<std::string>()] = t;
  std::ifstream in(dir / "tensors.bin", std::ios::binary);
  if (!in) Fail(ErrorCode::kMissingArtifact, "checkpoint tensors missing in " + dir.string());
  for (nn::ParameterSet *set : sets) {
    for (const auto &p : set->all()) {
      const auto it = index.find(p->name);
      if (it == index.end())
        Fail(ErrorCode::kFingerprintMismatch, "checkpoint " + dir.string() + " lacks tensor " + p->name);
      const auto rows = it->second.at("rows").get<Eigen::Index>();
      const auto cols = it->second.at("cols").get<Eigen::Index>();
      if (rows != p->value.rows() || cols != p->value.cols())
        Fail(ErrorCode::kFingerprintMismatch, "checkpoint tensor " + p->name + " has a different shape");
      in.seekg(static_cast<std::streamoff>(it->second.at("offset").get<std::uint64_t>()));
      in.read(reinterpret_cast<char *>(p->value.data()),
              static_cast<std::streamsize>(p->value.size() * static_cast<Eigen::Index>(sizeof(double))));
      if (!in) Fail(ErrorCode::kIo, "truncated checkpoint tensor " + p->name);
    }
  }
  return info;
}

}  // namespace neurotalk::pipeline
