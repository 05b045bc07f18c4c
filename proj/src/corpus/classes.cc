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

// corpus/classes.cc

#include "corpus/classes.h"

#include <sstream>

#include "common/error.h"

namespace neurotalk::corpus {

const std::vector<Phoneme> &PhonemeTable() {
  static const std::vector<Phoneme> table = {
      {"aa", 730, 1090, true},  {"ae", 660, 1720, true},  {"ah", 520, 1190, true},
      {"eh", 530, 1840, true},  {"iy", 270, 2290, true},  {"ow", 570, 840, true},
      {"uw", 300, 870, true},   {"er", 490, 1350, true},  {"ay", 700, 1500, true},
      {"ey", 480, 2100, true},  {"m", 250, 1200, true},   {"n", 250, 1700, true},
      {"l", 360, 1300, true},   {"w", 300, 700, true},    {"y", 280, 2250, true},
      {"s", 4500, 6500, false}, {"t", 3500, 5000, false}, {"k", 1800, 3000, false},
      {"p", 800, 1600, false},  {"hh", 1500, 2500, false},
  };
  return table;
}

int PhonemeIndex(std::string_view symbol) {
  const auto &table = PhonemeTable();
  for (std::size_t i = 0; i < table.size(); ++i)
    if (table[i].symbol == symbol) return static_cast<int>(i);
  Fail(ErrorCode::kInvalidArgument, "unknown phoneme '" + std::string(symbol) + "'");
}

namespace {

ClassSpec Make(const std::string &label, const std::string &transcript,
               const std::string &pron) {
  ClassSpec c{label, transcript, {}};
  std::istringstream is(pron);
  std::string tok;
  while (is >> tok) c.phonemes.push_back(tok == "|" ? kPause : PhonemeIndex(tok));
  return c;
}

}  // namespace

const std::vector<ClassSpec> &Classes() {
  static const std::vector<ClassSpec> classes = {
      Make("ambulance", "ambulance", "ae m p y ah l ah n s"),
      Make("clock", "clock", "k l aa k"),
      Make("hello", "hello", "hh eh l ow"),
      Make("help me", "help me", "hh eh l p | m iy"),
      Make("light", "light", "l ay t"),
      Make("pain", "pain", "p ey n"),
      Make("stop", "stop", "s t aa p"),
      Make("thank you", "thank you", "t ae n k | y uw"),
      Make("toilet", "toilet", "t ow l ah t"),
      Make("tv", "tv", "t iy w iy"),
      Make("water", "water", "w aa t er"),
      Make("yes", "yes", "y eh s"),
      Make("silence", "", ""),
  };
  return classes;
}

int NumClasses() { return static_cast<int>(Classes().size()); }

int ClassIndex(std::string_view label) {
  const auto &classes = Classes();
  for (std::size_t i = 0; i < classes.size(); ++i)
    if (classes[i].label == label) return static_cast<int>(i);
  Fail(ErrorCode::kInvalidArgument, "unknown class label '" + std::string(label) + "'");
}

const ClassSpec &ClassAt(int index) {
  Require(index >= 0 && index < NumClasses(), "class index out of range");
  return Classes()[static_cast<std::size_t>(index)];
}

int SilenceClass() { return NumClasses() - 1; }

}  // namespace neurotalk::corpus
