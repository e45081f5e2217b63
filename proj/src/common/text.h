// Copyright 2026 The MEALab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MEALAB_COMMON_TEXT_H_
#define MEALAB_COMMON_TEXT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mealab {

// Lowercases (ASCII) and splits on whitespace. This is the only tokenizer in
// the lab; featurization and n-gram overlap both go through it.
std::vector<std::string> Tokenize(std::string_view text);

std::string Join(const std::vector<std::string>& tokens, size_t begin,
                 size_t end, char sep = ' ');

// Seeded 64-bit string hash (FNV-1a core with a SplitMix finalizer).
uint64_t HashString(std::string_view s, uint64_t seed);

}  // namespace mealab

#endif  // MEALAB_COMMON_TEXT_H_
