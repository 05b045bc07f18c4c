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

// asr/cer.h

#ifndef NEUROTALK_ASR_CER_H_
#define NEUROTALK_ASR_CER_H_

#include <string_view>

namespace neurotalk::asr {

// Unit-cost Levenshtein distance between byte strings.
int EditDistance(std::string_view a, std::string_view b);

// Character error rate in percent: EditDistance / max(1, |ref|) * 100.
double Cer(std::string_view ref, std::string_view hyp);

}  // namespace neurotalk::asr

#endif  // NEUROTALK_ASR_CER_H_
