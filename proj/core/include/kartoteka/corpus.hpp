// Copyright 2026 The kartoteka authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KARTOTEKA_CORPUS_HPP_
#define KARTOTEKA_CORPUS_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kartoteka/alphabet.hpp"

namespace kartoteka {

// Word frequency list (TSV: word<TAB>count). Words are case-folded on
// load; duplicates after folding accumulate their counts.
struct FrequencyList {
  std::vector<std::pair<Word, std::uint64_t>> entries;

  static FrequencyList load_file(const std::string& path,
                                 const Alphabet& alphabet);
  static FrequencyList parse(std::string_view text, const Alphabet& alphabet,
                             std::string_view origin = "<memory>");

  std::uint64_t total_count() const;
};

// Draws n words i.i.d. proportionally to their counts. Identical seeds
// yield identical draws on every platform.
std::vector<Word> sample_words(const FrequencyList& freq, int n,
                               std::uint64_t seed);

struct LengthRange {
  int min = 2;
  int max = 8;
};

// Random strings over the alphabet's diacritic symbols (or an explicit
// subset): uniform length in [min, max], symbols drawn uniformly.
std::vector<Word> gen_diacritic_strings(const Alphabet& alphabet, int n,
                                        LengthRange length, std::uint64_t seed,
                                        const std::vector<char32_t>& subset = {});

}  // namespace kartoteka

#endif  // KARTOTEKA_CORPUS_HPP_
