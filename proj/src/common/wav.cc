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

// common/wav.cc

#include "common/wav.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "common/error.h"

namespace neurotalk {

namespace {

void PutU32(std::ofstream &os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<char *>(b), 4);
}

void PutU16(std::ofstream &os, std::uint16_t v) {
  unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
  os.write(reinterpret_cast<char *>(b), 2);
}

std::uint32_t GetU32(const unsigned char *p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t GetU16(const unsigned char *p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

}  // namespace

void WriteWav16(const std::filesystem::path &path, const std::vector<double> &samples,
                int sample_rate) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) Fail(ErrorCode::kIo, "cannot write " + path.string());
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  os.write("RIFF", 4);
  PutU32(os, 36 + data_bytes);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  PutU32(os, 16);
  PutU16(os, 1);  // PCM
  PutU16(os, 1);  // mono
  PutU32(os, static_cast<std::uint32_t>(sample_rate));
  PutU32(os, static_cast<std::uint32_t>(sample_rate) * 2);
  PutU16(os, 2);
  PutU16(os, 16);
  os.write("data", 4);
  PutU32(os, data_bytes);
  for (double s : samples) {
    double c = std::clamp(s, -1.0, 1.0);
    auto q = static_cast<std::int16_t>(std::lround(c * 32767.0));
    PutU16(os, static_cast<std::uint16_t>(q));
  }
  if (!os) Fail(ErrorCode::kIo, "short write to " + path.string());
}

WaveData ReadWav16(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) Fail(ErrorCode::kMissingArtifact, "cannot read " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    Fail(ErrorCode::kIo, path.string() + " is not a RIFF/WAVE file");
  WaveData out;
  int bits = 0, channels = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char *chunk = bytes.data() + pos;
    std::uint32_t len = GetU32(chunk + 4);
    if (pos + 8 + len > bytes.size()) Fail(ErrorCode::kIo, "truncated chunk in " + path.string());
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (GetU16(chunk + 8) != 1) Fail(ErrorCode::kIo, "only PCM wave files are supported");
      channels = GetU16(chunk + 10);
      out.sample_rate = static_cast<int>(GetU32(chunk + 12));
      bits = GetU16(chunk + 22);
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (bits != 16 || channels != 1)
        Fail(ErrorCode::kIo, "only mono 16-bit wave files are supported");
      out.samples.resize(len / 2);
      for (std::size_t i = 0; i < out.samples.size(); ++i)
        out.samples[i] = static_cast<std::int16_t>(GetU16(chunk + 8 + 2 * i)) / 32767.0;
    }
    pos += 8 + len + (len & 1);
  }
  if (out.sample_rate == 0) Fail(ErrorCode::kIo, "missing fmt chunk in " + path.string());
  return out;
}

std::vector<double> Quantize16(const std::vector<double> &samples) {
  std::vector<double> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    out[i] = static_cast<double>(std::lround(std::clamp(samples[i], -1.0, 1.0) * 32767.0)) / 32767.0;
  return out;
}

}  // namespace neurotalk
