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

#include "kartoteka/lexicon.hpp"

#include <algorithm>
#include <fstream>

#include "kartoteka/errors.hpp"
#include "kartoteka/metrics.hpp"

namespace kartoteka {

namespace {

// Replacement for query characters that do not fold into the alphabet:
// collides with nothing, so it always costs an edit.
constexpr char32_t kUnmatchable = 0xFFFD;

}  // namespace

Lexicon Lexicon::build(const std::vector<Word>& words,
                       const Alphabet& alphabet) {
  Lexicon lex(alphabet);
  lex.words_.reserve(words.size());
  for (size_t i = 0; i < words.size(); ++i) {
    if (words[i].empty()) {
      throw ValidationError("lexicon: empty word at position " +
                            std::to_string(i));
    }
    Word folded = alphabet.fold(words[i]);
    require_in_alphabet(folded, alphabet, "lexicon");
    lex.words_.push_back(std::move(folded));
  }
  std::sort(lex.words_.begin(), lex.words_.end(),
            [&alphabet](const Word& a, const Word& b) {
              return alphabet.compare(a, b) < 0;
            });
  lex.words_.erase(std::unique(lex.words_.begin(), lex.words_.end()),
                   lex.words_.end());

  lex.nodes_.emplace_back();
  for (const Word& w : lex.words_) {
    int node = 0;
    for (char32_t c : w) {
      const int sym = *alphabet.index_of(c);
      int next = lex.child(node, sym);
      if (next < 0) {
        next = int(lex.nodes_.size());
        lex.nodes_.emplace_back();
        auto& children = lex.nodes_[size_t(node)].children;
        children.insert(std::lower_bound(
                            children.begin(), children.end(),
                            std::make_pair(sym, 0),
                            [](const auto& a, const auto& b) {
                              return a.first < b.first;
                            }),
                        {sym, next});
      }
      node = next;
    }
    lex.nodes_[size_t(node)].terminal = true;
  }
  return lex;
}

Lexicon Lexicon::load_file(const std::string& path, const Alphabet& alphabet) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("lexicon: cannot open file " + path);
  }
  std::vector<Word> words;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      Word w = utf8_to_word(line);
      require_in_alphabet(alphabet.fold(w), alphabet, "lexicon");
      words.push_back(std::move(w));
    } catch (const ValidationError& e) {
      throw ValidationError(path + ":" + std::to_string(line_no) + ": " +
                            e.what());
    }
  }
  try {
    return build(words, alphabet);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

bool Lexicon::contains(const Word& w) const {
  const Word folded = alphabet_.fold(w);
  const auto it = std::lower_bound(words_.begin(), words_.end(), folded,
                                   [this](const Word& a, const Word& b) {
                                     return alphabet_.compare(a, b) < 0;
                                   });
  return it != words_.end() && *it == folded;
}

Lexicon Lexicon::restrict_to(const BoxRange& range) const {
  const Word lo = alphabet_.fold(range.lo);
  const Word hi = alphabet_.fold(range.hi);
  require_in_alphabet(lo, alphabet_, "range lo");
  require_in_alphabet(hi, alphabet_, "range hi");
  if (alphabet_.compare(lo, hi) > 0) {
    throw ValidationError("lexicon: inverted range [\"" + word_to_utf8(lo) +
                          "\", \"" + word_to_utf8(hi) + "\"]" +
                          (range.box_id.empty() ? "" : " (" + range.box_id +
                                                           ")"));
  }
  const auto cmp = [this](const Word& a, const Word& b) {
    return alphabet_.compare(a, b) < 0;
  };
  const auto first = std::lower_bound(words_.begin(), words_.end(), lo, cmp);
  const auto last = std::upper_bound(first, words_.end(), hi, cmp);
  return build(std::vector<Word>(first, last), alphabet_);
}

int Lexicon::child(int node_id, int symbol_index) const {
  const auto& children = nodes_[size_t(node_id)].children;
  const auto it = std::lower_bound(children.begin(), children.end(),
                                   std::make_pair(symbol_index, 0),
                                   [](const auto& a, const auto& b) {
                                     return a.first < b.first;
                                   });
  if (it == children.end() || it->first != symbol_index) return -1;
  return it->second;
}

std::optional<std::pair<Word, int>> Lexicon::nearest_match(
    const Word& query, std::optional<int> max_dist) const {
  if (words_.empty()) {
    throw ValidationError("lexicon: nearest_match over an empty lexicon");
  }
  Word folded;
  folded.reserve(query.size());
  for (char32_t c : query) {
    const char32_t f = alphabet_.fold_char(c);
    folded.push_back(alphabet_.contains(f) ? f : kUnmatchable);
  }

  const Word* best_word = nullptr;
  int best = -1;
  for (const Word& w : words_) {
    // Length difference lower-bounds the distance; skip hopeless rows.
    const int length_gap =
        int(w.size() > folded.size() ? w.size() - folded.size()
                                     : folded.size() - w.size());
    if (best >= 0 && length_gap >= best) continue;
    const int d = levenshtein(folded, w);
    if (best < 0 || d < best) {
      best = d;
      best_word = &w;
    }
  }
  if (max_dist.has_value() && best > *max_dist) return std::nullopt;
  return std::make_pair(*best_word, best);
}

}  // namespace kartoteka
