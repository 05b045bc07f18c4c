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

// common/array_io.cc

#include "common/array_io.h"

#include <fstream>
#include <vector>

#include "common/error.h"

namespace neurotalk {

namespace fs = std::filesystem;

fs::path SidecarPath(const fs::path &path) {
  fs::path p = path;
  p += ".json";
  return p;
}

void WriteJson(const fs::path &path, const nlohmann::json &j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp);
    if (!os) Fail(ErrorCode::kIo, "cannot write " + tmp.string());
    os << j.dump(2) << "\n";
  }
  fs::rename(tmp, path);
}

nlohmann::json ReadJson(const fs::path &path) {
  std::ifstream is(path);
  if (!is) Fail(ErrorCode::kMissingArtifact, "cannot read " + path.string());
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception &e) {
    Fail(ErrorCode::kIo, path.string() + ": " + e.what());
  }
}

void WriteArray(const fs::path &path, const Mat &m, DType dtype,
                const nlohmann::json &meta) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) Fail(ErrorCode::kIo, "cannot write " + path.string());
  if (dtype == DType::kFloat64) {
    os.write(reinterpret_cast<const char *>(m.data()),
             static_cast<std::streamsize>(m.size() * sizeof(double)));
  } else {
    MatF f = m.cast<float>();
    os.write(reinterpret_cast<const char *>(f.data()),
             static_cast<std::streamsize>(f.size() * sizeof(float)));
  }
  if (!os) Fail(ErrorCode::kIo, "short write to " + path.string());
  nlohmann::json side = meta;
  side["shape"] = {m.rows(), m.cols()};
  side["dtype"] = dtype == DType::kFloat64 ? "float64" : "float32";
  side["order"] = "column_major";
  side["endian"] = "little";
  WriteJson(SidecarPath(path), side);
}

LoadedArray ReadArray(const fs::path &path) {
  LoadedArray out;
  out.meta = ReadJson(SidecarPath(path));
  const auto rows = out.meta.at("shape").at(0).get<Eigen::Index>();
  const auto cols = out.meta.at("shape").at(1).get<Eigen::Index>();
  const std::string dtype = out.meta.at("dtype").get<std::string>();
  std::ifstream is(path, std::ios::binary);
  if (!is) Fail(ErrorCode::kMissingArtifact, "cannot read " + path.string());
  out.values.resize(rows, cols);
  if (dtype == "float64") {
    is.read(reinterpret_cast<char *>(out.values.data()),
            static_cast<std::streamsize>(rows * cols * sizeof(double)));
  } else if (dtype == "float32") {
    MatF f(rows, cols);
    is.read(reinterpret_cast<char *>(f.data()),
            static_cast<std::streamsize>(rows * cols * sizeof(float)));
    out.values = f.cast<double>();
  } else {
    Fail(ErrorCode::kIo, "unsupported dtype '" + dtype + "' in " + path.string());
  }
  if (!is) Fail(ErrorCode::kIo, "truncated array file " + path.string());
  return out;
}

}  // namespace neurotalk
