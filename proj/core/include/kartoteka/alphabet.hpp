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

#ifndef KARTOTEKA_ALPHABET_HPP_
#define KARTOTEKA_ALPHABET_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kartoteka/unicode.hpp"

namespace kartoteka {

// Symbol inventory shared by every decoder. Index 0 is the CTC blank; the
// remaining indices are writable symbols. Collation ranks are defined over
// case-folded symbols and drive all range logic, so "Kot" and "kąt" order
// the dictionary way rather than by code point. Immutable once built.
class Alphabet {
 public:
  static constexpr int kBlankIndex = 0;
  // Stand-in code point for the blank column; never a writable symbol.
  static constexpr char32_t kBlankSymbol = U'\0';

  // `symbols` lists the writable inventory (blank excluded; it is added at
  // index 0). `collation` orders the case-folded symbols and must cover the
  // folded form of every inventory symbol exactly once.
  static Alphabet build(const std::vector<char32_t>& symbols,
                        const std::vector<char32_t>& collation);

  // Built-in Polish inventory: a..z interleaved with ą ć ę ł ń ó ś ź ż in
  // dictionary order, in both cases. 71 columns including the blank.
  static Alphabet polish();

  // One symbol per line, UTF-8. Line 1 must be the literal blank marker
  // `-`; subsequent lines list symbols in collation order (an uppercase
  // symbol shares the rank of its folded form and may appear anywhere
  // after it).
  static Alphabet load_file(const std::string& path);
  static Alphabet parse(std::string_view text,
                        std::string_view origin = "<memory>");

  // Serialization in the load_file format.
  std::string to_file_text() const;
  void save_file(const std::string& path) const;

  // Symbol count including the blank column.
  int size() const { return int(symbols_.size()); }
  // Symbol at a column index; index 0 yields kBlankSymbol.
  char32_t symbol(int index) const;
  // Column index of a writable symbol.
  std::optional<int> index_of(char32_t c) const;
  bool contains(char32_t c) const { return index_of(c).has_value(); }

  // Case fold of a single code point. Falls back to the general simple
  // lowercase map, so it is defined for characters outside the inventory.
  char32_t fold_char(char32_t c) const { return simple_lower(c); }
  Word fold(const Word& w) const;

  // Collation rank of a folded symbol. Throws ValidationError for symbols
  // without a rank (i.e. outside the folded inventory).
  int rank(char32_t folded) const;

  // Three-way dictionary comparison of two words: case-insensitive, a
  // strict prefix sorts before its extensions. Returns <0, 0 or >0.
  // Throws ValidationError when a character does not fold into the
  // inventory.
  int compare(const Word& a, const Word& b) const;
  // True when lo <= w <= hi under compare(). Throws on an inverted range.
  bool in_range(const Word& w, const Word& lo, const Word& hi) const;

  // Writable symbols carrying a diacritic, in inventory order.
  const std::vector<char32_t>& diacritics() const { return diacritics_; }
  // Base letter of a diacritic symbol, case preserved: ą -> a, Ó -> O.
  std::optional<char32_t> base_letter(char32_t c) const;

  bool operator==(const Alphabet& other) const {
    return symbols_ == other.symbols_ && collation_ == other.collation_;
  }

 private:
  Alphabet() = default;

  std::vector<char32_t> symbols_;    // [0] is kBlankSymbol
  std::vector<char32_t> collation_;  // folded symbols in rank order
  std::unordered_map<char32_t, int> index_;
  std::unordered_map<char32_t, int> rank_;
  std::unordered_map<char32_t, char32_t> unfold_;  // lower -> inventory upper
  std::vector<char32_t> diacritics_;
};

// Throws ValidationError naming `what`, the word and the offending
// character when any character of `w` is not a writable symbol.
void require_in_alphabet(const Word& w, const Alphabet& alphabet,
                         std::string_view what);

}  // namespace kartoteka

#endif  // KARTOTEKA_ALPHABET_HPP_
