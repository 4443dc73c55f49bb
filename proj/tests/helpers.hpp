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

#ifndef KARTOTEKA_TESTS_HELPERS_HPP_
#define KARTOTEKA_TESTS_HELPERS_HPP_

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kartoteka/alphabet.hpp"
#include "kartoteka/emissions.hpp"
#include "kartoteka/rng.hpp"
#include "kartoteka/unicode.hpp"

namespace kartoteka::testing {

inline Word W(const char* utf8) { return utf8_to_word(utf8); }

inline std::vector<Word> words(std::initializer_list<const char*> items) {
  std::vector<Word> out;
  for (const char* s : items) out.push_back(W(s));
  return out;
}

// Fresh directory under the system temp root; callers remove it themselves
// when they care, the OS reclaims it otherwise.
inline std::filesystem::path temp_dir(const std::string& tag) {
  static Rng rng(0x7e57d1e5ull);
  const std::filesystem::path base = std::filesystem::temp_directory_path();
  for (;;) {
    char suffix[32];
    std::snprintf(suffix, sizeof suffix, "%016llx",
                  static_cast<unsigned long long>(rng.next_u64()));
    const std::filesystem::path dir = base / ("kartoteka-" + tag + "-" + suffix);
    if (std::filesystem::create_directory(dir)) return dir;
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// Row-stochastic matrix with strictly positive random entries.
inline EmissionMatrix random_matrix(Rng& rng, int frames,
                                    const Alphabet& alphabet) {
  EmissionMatrix m;
  m.frames = frames;
  m.columns = alphabet.size();
  for (int c = 0; c < alphabet.size(); ++c) m.symbols.push_back(alphabet.symbol(c));
  m.p.resize(size_t(frames) * m.columns);
  for (int t = 0; t < frames; ++t) {
    double sum = 0.0;
    for (int c = 0; c < m.columns; ++c) {
      const double v = 0.05 + rng.next_double();
      m.at(t, c) = v;
      sum += v;
    }
    for (int c = 0; c < m.columns; ++c) m.at(t, c) /= sum;
  }
  return m;
}

// Exponential-time reference: minimum edits by trying every operation.
inline int lev_recursive(const Word& a, const Word& b, size_t i = 0,
                         size_t j = 0) {
  if (i == a.size()) return int(b.size() - j);
  if (j == b.size()) return int(a.size() - i);
  if (a[i] == b[j]) return lev_recursive(a, b, i + 1, j + 1);
  const int del = lev_recursive(a, b, i + 1, j);
  const int ins = lev_recursive(a, b, i, j + 1);
  const int sub = lev_recursive(a, b, i + 1, j + 1);
  return 1 + std::min({del, ins, sub});
}

// CTC oracle by brute force: walks every one of the C^T frame paths and
// accumulates each path's probability under its collapsed label.
inline std::map<Word, double> enumerate_label_masses(const EmissionMatrix& m,
                                                     const Alphabet& alphabet) {
  std::map<Word, double> masses;
  std::vector<int> path(size_t(m.frames), 0);
  for (;;) {
    double prob = 1.0;
    for (int t = 0; t < m.frames; ++t) prob *= m.at(t, path[size_t(t)]);
    Word label;
    int prev = -1;
    for (int t = 0; t < m.frames; ++t) {
      const int c = path[size_t(t)];
      if (c != prev && c != Alphabet::kBlankIndex) label.push_back(alphabet.symbol(c));
      prev = c;
    }
    masses[label] += prob;
    int t = m.frames - 1;
    while (t >= 0 && path[size_t(t)] == m.columns - 1) path[size_t(t--)] = 0;
    if (t < 0) break;
    ++path[size_t(t)];
  }
  return masses;
}

// Deterministic pseudo-Polish lexicon builder for large-scale fixtures.
inline std::vector<Word> big_lexicon(int n, std::uint64_t seed) {
  static const char* onsets[] = {"b",  "c",  "ch", "cz", "d",  "dz", "f",
                                 "g",  "h",  "j",  "k",  "l",  "ł",  "m",
                                 "n",  "p",  "pr", "r",  "s",  "st", "sz",
                                 "t",  "tr", "w",  "z",  "ż",  "ź",  "ś"};
  static const char* nuclei[] = {"a", "ą", "e", "ę", "i", "o", "ó", "u", "y"};
  static const char* codas[] = {"", "k", "n", "r", "ść", "m"};
  Rng rng(seed);
  std::set<Word> seen;
  std::vector<Word> out;
  out.reserve(size_t(n));
  while (int(out.size()) < n) {
    std::string s;
    const int syllables = 3;
    for (int i = 0; i < syllables; ++i) {
      s += onsets[rng.next_below(std::size(onsets))];
      s += nuclei[rng.next_below(std::size(nuclei))];
    }
    s += codas[rng.next_below(std::size(codas))];
    Word w = utf8_to_word(s);
    if (seen.insert(w).second) out.push_back(std::move(w));
  }
  return out;
}

}  // namespace kartoteka::testing

#endif  // KARTOTEKA_TESTS_HELPERS_HPP_
