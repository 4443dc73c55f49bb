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

#include <map>
#include <set>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "kartoteka/alphabet.hpp"
#include "kartoteka/decode.hpp"
#include "kartoteka/emissions.hpp"
#include "kartoteka/lexicon.hpp"
#include "kartoteka/metrics.hpp"
#include "kartoteka/rng.hpp"
#include "kartoteka/unicode.hpp"

namespace {

using namespace kartoteka;

const Alphabet& polish() {
  static const Alphabet a = Alphabet::polish();
  return a;
}

// Deterministic syllable soup; enough shape to give the trie realistic
// branching without shipping a large fixture.
std::vector<Word> synthetic_words(int n, std::uint64_t seed) {
  static const char* onsets[] = {"b", "c", "cz", "d", "g",  "k",  "l", "ł",
                                 "m", "n", "p",  "r", "s",  "sz", "t", "w",
                                 "z", "ż", "ź",  "ś", "ch", "dz", "pr"};
  static const char* nuclei[] = {"a", "ą", "e", "ę", "i", "o", "ó", "u", "y"};
  static const char* codas[] = {"", "k", "n", "r", "m", "ść"};
  Rng rng(seed);
  std::set<Word> seen;
  std::vector<Word> out;
  out.reserve(size_t(n));
  while (int(out.size()) < n) {
    std::string s;
    for (int i = 0; i < 3; ++i) {
      s += onsets[rng.next_below(std::size(onsets))];
      s += nuclei[rng.next_below(std::size(nuclei))];
    }
    s += codas[rng.next_below(std::size(codas))];
    Word w = utf8_to_word(s);
    if (seen.insert(w).second) out.push_back(std::move(w));
  }
  return out;
}

const Lexicon& lexicon_of(int n) {
  static std::map<int, Lexicon> cache;
  const auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  return cache.emplace(n, Lexicon::build(synthetic_words(n, 31), polish()))
      .first->second;
}

EmissionMatrix noisy_matrix(const char* label, std::uint64_t seed) {
  NoiseParams params;
  params.epsilon = 0.25;
  params.frames_per_char = 3;
  params.confusion_boost = 5.0;
  params.seed = seed;
  return synthesize_emissions(utf8_to_word(label), polish(), params);
}

void BM_Levenshtein(benchmark::State& state) {
  const Word a = utf8_to_word("województwo");
  const Word b = utf8_to_word("wojewodztwa");
  for (auto _ : state) {
    benchmark::DoNotOptimize(levenshtein(a, b));
  }
}
BENCHMARK(BM_Levenshtein);

void BM_BestPath(benchmark::State& state) {
  const EmissionMatrix m = noisy_matrix("przygoda", 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(best_path(m, polish()));
  }
}
BENCHMARK(BM_BestPath);

void BM_BeamSearch(benchmark::State& state) {
  const EmissionMatrix m = noisy_matrix("przygoda", 1);
  const BeamParams params{int(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(beam_search(m, polish(), params));
  }
}
BENCHMARK(BM_BeamSearch)->Arg(5)->Arg(25)->Arg(100)->Unit(benchmark::kMicrosecond);

void BM_WordBeamSearch(benchmark::State& state) {
  const Lexicon& lex = lexicon_of(int(state.range(0)));
  const EmissionMatrix m = noisy_matrix("przygoda", 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(word_beam_search(m, polish(), lex, BeamParams{25}));
  }
}
BENCHMARK(BM_WordBeamSearch)->Arg(1000)->Arg(10000)->Arg(86000)
    ->Unit(benchmark::kMicrosecond);

void BM_ConstrainedWbs(benchmark::State& state) {
  const Lexicon& lex = lexicon_of(10000);
  const EmissionMatrix m = noisy_matrix("przygoda", 1);
  BoxRange range;
  range.box_id = "bench";
  range.lo = lex.words()[4000];
  range.hi = lex.words()[4100];
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        constrained_wbs(m, polish(), lex, range, BeamParams{25}));
  }
}
BENCHMARK(BM_ConstrainedWbs)->Unit(benchmark::kMicrosecond);

void BM_RestrictTo(benchmark::State& state) {
  const Lexicon& lex = lexicon_of(86000);
  BoxRange range;
  range.box_id = "bench";
  range.lo = lex.words()[40000];
  range.hi = lex.words()[40100];
  for (auto _ : state) {
    benchmark::DoNotOptimize(lex.restrict_to(range));
  }
}
BENCHMARK(BM_RestrictTo)->Unit(benchmark::kMicrosecond);

void BM_NearestMatch(benchmark::State& state) {
  const Lexicon& lex = lexicon_of(int(state.range(0)));
  const Word query = utf8_to_word("pęzygada");
  for (auto _ : state) {
    benchmark::DoNotOptimize(lex.nearest_match(query));
  }
}
BENCHMARK(BM_NearestMatch)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
