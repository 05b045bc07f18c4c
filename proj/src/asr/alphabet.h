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

// asr/alphabet.h

#ifndef NEUROTALK_ASR_ALPHABET_H_
#define NEUROTALK_ASR_ALPHABET_H_

#include <string>
#include <string_view>
#include <vector>

namespace neurotalk::asr {

// Lowercase letters, space, and the CTC blank. The blank is always index 0.
class Alphabet {
 public:
  static constexpr int kBlank = 0;
  static constexpr int kSize = 28;

  static int Index(char c);  // -1 for characters outside the alphabet
  static char Symbol(int index);  // '_' for the blank
  // Lowercases and maps every character; unknown characters are rejected.
  static std::vector<int> Encode(std::string_view text);
  static std::string Decode(const std::vector<int> &labels);
};

}  // namespace neurotalk::asr

#endif  // NEUROTALK_ASR_ALPHABET_H_
