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

// pipeline/checkpoint.h
//
// Checkpoint container: a directory holding manifest.json (tensor index,
// fingerprint and caller metadata) and tensors.bin (little-endian float64,
// column-major, concatenated in manifest order).

#ifndef NEUROTALK_PIPELINE_CHECKPOINT_H_
#define NEUROTALK_PIPELINE_CHECKPOINT_H_

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "nn/parameters.h"

namespace neurotalk::pipeline {

inline constexpr const char *kCheckpointFormat = "neurotalk-checkpoint-1";

void SaveCheckpoint(const std::filesystem::path &dir, const std::vector<const nn::ParameterSet *> &sets,
                    const std::string &fingerprint, const nlohmann::json &meta);

struct CheckpointInfo {
  std::string fingerprint;
  nlohmann::json meta;
};

// Fills every parameter of `sets` by name; missing tensors or shape changes
// throw kFingerprintMismatch, a missing directory throws kMissingArtifact.
CheckpointInfo LoadCheckpoint(const std::filesystem::path &dir, const std::vector<nn::ParameterSet *> &sets);

// Manifest only.
CheckpointInfo ReadCheckpointInfo(const std::filesystem::path &dir);

}  // namespace neurotalk::pipeline

#endif  // NEUROTALK_PIPELINE_CHECKPOINT_H_
