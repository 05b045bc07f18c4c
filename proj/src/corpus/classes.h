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

// corpus/classes.h

#ifndef NEUROTALK_CORPUS_CLASSES_H_
#define NEUROTALK_CORPUS_CLASSES_H_

#include <string>
#include <string_view>
#include <vector>

namespace neurotalk::corpus {

struct Phoneme {
  std::string symbol;
  double formant1_hz;
  double formant2_hz;
  bool voiced;
};

// A phoneme index of kPause marks the inter-word gap in multi-word phrases.
inline constexpr int kPause = -1;

struct ClassSpec {
  std::string label;
  std::string transcript;  // lowercase letters and spaces; empty for silence
  std::vector<int> phonemes;
};

const std::vector<Phoneme> &PhonemeTable();
const std::vector<ClassSpec> &Classes();
int NumClasses();
int PhonemeIndex(std::string_view symbol);

// Throws kInvalidArgument for labels outside the 13-class set.
int ClassIndex(std::string_view label);
const ClassSpec &ClassAt(int index);
int SilenceClass();

}  // namespace neurotalk::corpus

#endif  // NEUROTALK_CORPUS_CLASSES_H_
