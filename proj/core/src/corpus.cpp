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

#include "kartoteka/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "kartoteka/errors.hpp"
#include "kartoteka/rng.hpp"

namespace kartoteka {

FrequencyList FrequencyList::parse(std::string_view text,
                                   const Alphabet& alphabet,
                                   std::string_view origin) {
  FrequencyList out;
  const std::string where(origin);
  std::map<Word, size_t> position;  // folded word -> entries index
  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t nl = text.find('\n', pos);
    std::string_view line = (nl == std::string_view::npos)
                                ? text.substr(pos)
                                : text.substr(pos, nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      if (nl == std::string_view::npos) break;
      continue;
    }
    const size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw ValidationError(where + ":" + std::to_string(line_no) +
                            ": expected word<TAB>count, got \"" +
                            std::string(line) + "\"");
    }
    const std::string_view word_part = line.substr(0, tab);
    const std::string_view count_part = line.substr(tab + 1);
    if (word_part.empty()) {
      throw ValidationError(where + ":" + std::to_string(line_no) +
                            ": empty word");
    }
    std::uint64_t count = 0;
    {
      std::istringstream ss{std::string(count_part)};
      long long parsed = 0;
      if (!(ss >> parsed) || !(ss >> std::ws).eof() || parsed <= 0) {
        throw ValidationError(where + ":" + std::to_string(line_no) +
                              ": count must be a positive integer, got \"" +
                              std::string(count_part) + "\"");
      }
      count = std::uint64_t(parsed);
    }
    Word folded = alphabet.fold(utf8_to_word(word_part));
    try {
      require_in_alphabet(folded, alphabet, "frequency list");
    } catch (const ValidationError& e) {
      throw ValidationError(where + ":" + std::to_string(line_no) + ": " +
                            e.what());
    }
    const auto it = position.find(folded);
    if (it != position.end()) {
      out.entries[it->second].second += count;
    } else {
      position.emplace(folded, out.entries.size());
      out.entries.emplace_back(std::move(folded), count);
    }
  }
  if (out.entries.empty()) {
    throw ValidationError(where + ": frequency list is empty");
  }
  return out;
}

FrequencyList FrequencyList::load_file(const std::string& path,
                                       const Alphabet& alphabet) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("frequency list: cannot open file " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), alphabet, path);
}

std::uint64_t FrequencyList::total_count() const {
  std::uint64_t total = 0;
  for (const auto& [word, count] : entries) total += count;
  return total;
}

std::vector<Word> sample_words(const FrequencyList& freq, int n,
                               std::uint64_t seed) {
  if (n < 1) {
    throw ValidationError("sample_words: n must be >= 1");
  }
  if (freq.entries.empty()) {
    throw ValidationError("sample_words: empty frequency list");
  }
  std::vector<std::uint64_t> cumulative;
  cumulative.reserve(freq.entries.size());
  std::uint64_t acc = 0;
  for (const auto& [word, count] : freq.entries) {
    acc += count;
    cumulative.push_back(acc);
  }
  Rng rng(seed);
  std::vector<Word> out;
  out.reserve(size_t(n));
  for (int i = 0; i < n; ++i) {
    const std::uint64_t r = rng.next_below(acc);
    const auto it =
        std::upper_bound(cumulative.begin(), cumulative.end(), r);
    out.push_back(freq.entries[size_t(it - cumulative.begin())].first);
  }
  return out;
}

std::vector<Word> gen_diacritic_strings(const Alphabet& alphabet, int n,
                                        LengthRange length,
                                        std::uint64_t seed,
                                        const std::vector<char32_t>& subset) {
  if (n < 1) {
    throw ValidationError("gen_diacritic_strings: n must be >= 1");
  }
  if (length.min < 1 || length.max < length.min) {
    throw ValidationError(
        "gen_diacritic_strings: need 1 <= min length <= max length");
  }
  const std::vector<char32_t>& pool =
      subset.empty() ? alphabet.diacritics() : subset;
  if (pool.empty()) {
    throw ValidationError(
        "gen_diacritic_strings: the alphabet has no diacritic symbols");
  }
  for (char32_t c : pool) {
    require_in_alphabet(Word(1, c), alphabet, "gen_diacritic_strings");
  }
  Rng rng(seed);
  std::vector<Word> out;
  out.reserve(size_t(n));
  const std::uint64_t span = std::uint64_t(length.max - length.min + 1);
  for (int i = 0; i < n; ++i) {
    const int len = length.min + int(rng.next_below(span));
    Word w;
    w.reserve(size_t(len));
    for (int k = 0; k < len; ++k) {
      w.push_back(pool[size_t(rng.next_below(pool.size()))]);
    }
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace kartoteka
