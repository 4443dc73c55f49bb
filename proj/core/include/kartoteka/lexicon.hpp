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

#ifndef KARTOTEKA_LEXICON_HPP_
#define KARTOTEKA_LEXICON_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kartoteka/alphabet.hpp"

namespace kartoteka {

// A dictionary segment: the closed interval [lo, hi] of head words filed
// in one physical box, compared case-insensitively under the alphabet's
// collation.
struct BoxRange {
  std::string box_id;
  Word lo;
  Word hi;
};

// Closed word set stored as a case-folded, collation-sorted, deduplicated
// list plus a prefix trie over alphabet symbol indices. Immutable once
// built; safe to share across threads.
class Lexicon {
 public:
  // Folds, deduplicates and sorts. Every character must fold into the
  // alphabet; empty words are rejected.
  static Lexicon build(const std::vector<Word>& words,
                       const Alphabet& alphabet);
  // One word per line, UTF-8; blank lines are skipped.
  static Lexicon load_file(const std::string& path, const Alphabet& alphabet);

  const Alphabet& alphabet() const { return alphabet_; }
  int word_count() const { return int(words_.size()); }
  bool empty() const { return words_.empty(); }
  const std::vector<Word>& words() const { return words_; }

  // Membership of the folded query.
  bool contains(const Word& w) const;

  // Sub-lexicon of words inside the closed range. An empty result is
  // valid; callers that cannot proceed without words raise their own
  // errors. Throws ValidationError on inverted or out-of-alphabet bounds.
  Lexicon restrict_to(const BoxRange& range) const;

  // Closest word by edit distance to the folded query; ties resolve to
  // the collation-smallest word. Query characters that do not fold into
  // the alphabet still count toward the distance but match nothing. With
  // max_dist set, returns nullopt when the best distance exceeds it.
  // Throws ValidationError when the lexicon is empty.
  std::optional<std::pair<Word, int>> nearest_match(
      const Word& query, std::optional<int> max_dist = std::nullopt) const;

  // Prefix trie over symbol indices, consumed by the word beam search.
  struct TrieNode {
    // (symbol index, child node id), ascending by symbol index.
    std::vector<std::pair<int, int>> children;
    bool terminal = false;
  };
  int trie_root() const { return 0; }
  const TrieNode& node(int id) const { return nodes_[size_t(id)]; }
  // Child node id, or -1 when the symbol does not extend this node.
  int child(int node_id, int symbol_index) const;

 private:
  explicit Lexicon(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

  Alphabet alphabet_;
  std::vector<Word> words_;
  std::vector<TrieNode> nodes_;
};

}  // namespace kartoteka

#endif  // KARTOTEKA_LEXICON_HPP_
