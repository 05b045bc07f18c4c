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

// asr/alphabet.cc

#include "asr/alphabet.h"

#include <cctype>

#include "common/error.h"

namespace neurotalk::asr {

int Alphabet::Index(char c) {
  if (c == ' ') return 27;
  const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower >= 'a' && lower <= 'z') return 1 + (lower - 'a');
  return -1;
}

char Alphabet::Symbol(int index) {
  if (index == kBlank) return '_';
  if (index == 27) return ' ';
  if (index >= 1 && index <= 26) return static_cast<char>('a' + index - 1);
  Fail(ErrorCode::kInvalidArgument, "alphabet index out of range: " + std::to_string(index));
}

std::vector<int> Alphabet::Encode(std::string_view text) {
  std::vector<int> out;
  out.reserve(text.size());
  for (char c : text) {
    const int i = Index(c);
    if (i < 0) Fail(ErrorCode::kInvalidArgument, std::string("character outside the alphabet: '") + c + "'");
    out.push_back(i);
  }
  return out;
}

std::string Alphabet::Decode(const std::vector<int> &labels) {
  std::string s;
  for (int l : labels)
    if (l != kBlank) s.push_back(Symbol(l));
  return s;
}

}  // namespace neurotalk::asr
