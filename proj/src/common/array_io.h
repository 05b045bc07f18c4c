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

// common/array_io.h

#ifndef NEUROTALK_COMMON_ARRAY_IO_H_
#define NEUROTALK_COMMON_ARRAY_IO_H_

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>

#include "common/types.h"

namespace neurotalk {

enum class DType { kFloat32, kFloat64 };

// A 2-d array on disk is a raw little-endian column-major blob at `path`
// plus a sidecar `path.json` carrying shape, dtype and caller metadata.
void WriteArray(const std::filesystem::path &path, const Mat &m, DType dtype,
                const nlohmann::json &meta = nlohmann::json::object());

struct LoadedArray {
  Mat values;
  nlohmann::json meta;
};
LoadedArray ReadArray(const std::filesystem::path &path);

std::filesystem::path SidecarPath(const std::filesystem::path &path);

void WriteJson(const std::filesystem::path &path, const nlohmann::json &j);
nlohmann::json ReadJson(const std::filesystem::path &path);

}  // namespace neurotalk

#endif  // NEUROTALK_COMMON_ARRAY_IO_H_
