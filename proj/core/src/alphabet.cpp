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

#include "kartoteka/alphabet.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "kartoteka/errors.hpp"

namespace kartoteka {

namespace {

std::string codepoint_name(char32_t c) {
  static const char* hex = "0123456789ABCDEF";
  std::string s = "U+";
  int shift = (c > 0xFFFF) ? 20 : 12;
  for (; shift >= 0; shift -= 4) s.push_back(hex[(c >> shift) & 0xF]);
  return s;
}

std::string describe_char(char32_t c) {
  return "'" + word_to_utf8(Word(1, c)) + "' (" + codepoint_name(c) + ")";
}

// Lowercase diacritic -> lowercase base letter. Polish letters first, then
// common Latin-1 / Latin Extended-A neighbours so file-loaded alphabets for
// other languages get a sensible confusion structure.
const std::unordered_map<char32_t, char32_t>& base_table() {
  static const std::unordered_map<char32_t, char32_t> table = {
      {U'ą', U'a'}, {U'ć', U'c'}, {U'ę', U'e'}, {U'ł', U'l'}, {U'ń', U'n'},
      {U'ó', U'o'}, {U'ś', U's'}, {U'ź', U'z'}, {U'ż', U'z'},
      {U'á', U'a'}, {U'à', U'a'}, {U'â', U'a'}, {U'ä', U'a'}, {U'ã', U'a'},
      {U'å', U'a'}, {U'ā', U'a'}, {U'ă', U'a'},
      {U'ç', U'c'}, {U'č', U'c'}, {U'ĉ', U'c'},
      {U'ď', U'd'}, {U'đ', U'd'},
      {U'é', U'e'}, {U'è', U'e'}, {U'ê', U'e'}, {U'ë', U'e'}, {U'ē', U'e'},
      {U'ė', U'e'}, {U'ě', U'e'},
      {U'í', U'i'}, {U'ì', U'i'}, {U'î', U'i'}, {U'ï', U'i'}, {U'ī', U'i'},
      {U'į', U'i'}, {U'ı', U'i'},
      {U'ĺ', U'l'}, {U'ľ', U'l'},
      {U'ñ', U'n'}, {U'ň', U'n'},
      {U'ò', U'o'}, {U'ô', U'o'}, {U'ö', U'o'}, {U'õ', U'o'}, {U'ō', U'o'},
      {U'ø', U'o'},
      {U'ŕ', U'r'}, {U'ř', U'r'},
      {U'ş', U's'}, {U'š', U's'},
      {U'ť', U't'},
      {U'ú', U'u'}, {U'ù', U'u'}, {U'û', U'u'}, {U'ü', U'u'}, {U'ū', U'u'},
      {U'ů', U'u'}, {U'ų', U'u'},
      {U'ý', U'y'}, {U'ÿ', U'y'},
      {U'ž', U'z'},
  };
  return table;
}

}  // namespace

Alphabet Alphabet::build(const std::vector<char32_t>& symbols,
                         const std::vector<char32_t>& collation) {
  if (symbols.empty()) {
    throw ValidationError("alphabet: the symbol inventory is empty");
  }
  Alphabet a;
  a.symbols_.push_back(kBlankSymbol);
  for (char32_t s : symbols) {
    if (s == U'-') {
      throw ValidationError(
          "alphabet: '-' is reserved for the blank column and cannot be a "
          "writable symbol");
    }
    if (s < 0x21) {
      throw ValidationError("alphabet: control or space code point " +
                            codepoint_name(s) + " is not a valid symbol");
    }
    if (a.index_.count(s)) {
      throw ValidationError("alphabet: duplicate symbol " + describe_char(s));
    }
    a.index_.emplace(s, int(a.symbols_.size()));
    a.symbols_.push_back(s);
  }

  std::unordered_set<char32_t> collation_set;
  for (char32_t c : collation) {
    if (simple_lower(c) != c) {
      throw ValidationError("alphabet: collation entry " + describe_char(c) +
                            " is not case-folded");
    }
    if (!collation_set.insert(c).second) {
      throw ValidationError("alphabet: duplicate collation entry " +
                            describe_char(c));
    }
    a.rank_.emplace(c, int(a.collation_.size()));
    a.collation_.push_back(c);
  }

  // The folded classes must appear in `symbols` in collation order; the
  // file format couples line order to collation order, so inversions would
  // not survive a save/load round trip.
  std::vector<char32_t> first_seen;
  std::unordered_set<char32_t> seen;
  for (char32_t s : symbols) {
    const char32_t f = simple_lower(s);
    if (!a.rank_.count(f)) {
      throw ValidationError("alphabet: symbol " + describe_char(s) +
                            " has no collation rank for its folded form " +
                            describe_char(f));
    }
    if (seen.insert(f).second) first_seen.push_back(f);
    if (f != s) {
      if (!a.index_.count(f)) {
        throw ValidationError("alphabet: uppercase symbol " +
                              describe_char(s) +
                              " lacks a lowercase counterpart");
      }
      a.unfold_.emplace(f, s);
    }
  }
  if (first_seen.size() != a.collation_.size()) {
    throw ValidationError(
        "alphabet: the collation list does not match the symbol inventory");
  }
  for (size_t i = 0; i < first_seen.size(); ++i) {
    if (first_seen[i] != a.collation_[i]) {
      throw ValidationError(
          "alphabet: symbol order disagrees with the collation order at " +
          describe_char(first_seen[i]));
    }
  }

  for (char32_t s : a.symbols_) {
    if (s != kBlankSymbol && a.base_letter(s).has_value()) {
      a.diacritics_.push_back(s);
    }
  }
  return a;
}

Alphabet Alphabet::polish() {
  static const std::u32string lower = U"aąbcćdeęfghijklłmnńoópqrsśtuvwxyzźż";
  static const std::u32string upper = U"AĄBCĆDEĘFGHIJKLŁMNŃOÓPQRSŚTUVWXYZŹŻ";
  std::vector<char32_t> symbols(lower.begin(), lower.end());
  symbols.insert(symbols.end(), upper.begin(), upper.end());
  return build(symbols, std::vector<char32_t>(lower.begin(), lower.end()));
}

Alphabet Alphabet::parse(std::string_view text, std::string_view origin) {
  std::vector<std::string> lines;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      if (pos < text.size()) lines.emplace_back(text.substr(pos));
      break;
    }
    lines.emplace_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  for (auto& line : lines) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
  }
  const std::string where(origin);
  if (lines.empty() || lines[0] != "-") {
    throw ValidationError(where +
                          ":1: alphabet file must start with the blank "
                          "marker '-'");
  }
  std::vector<char32_t> symbols;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) {
      throw ValidationError(where + ":" + std::to_string(i + 1) +
                            ": empty line in alphabet file");
    }
    if (lines[i] == "-") {
      throw ValidationError(where + ":" + std::to_string(i + 1) +
                            ": blank marker '-' reappears after line 1");
    }
    const Word w = utf8_to_word(lines[i]);
    if (w.size() != 1) {
      throw ValidationError(where + ":" + std::to_string(i + 1) +
                            ": expected exactly one symbol, got \"" +
                            lines[i] + "\"");
    }
    symbols.push_back(w[0]);
  }
  std::vector<char32_t> collation;
  std::unordered_set<char32_t> seen;
  for (char32_t s : symbols) {
    const char32_t f = simple_lower(s);
    if (seen.insert(f).second) collation.push_back(f);
  }
  try {
    return build(symbols, collation);
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

Alphabet Alphabet::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("alphabet: cannot open file " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

std::string Alphabet::to_file_text() const {
  std::string out = "-\n";
  for (size_t i = 1; i < symbols_.size(); ++i) {
    out += word_to_utf8(Word(1, symbols_[i]));
    out += '\n';
  }
  return out;
}

void Alphabet::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ValidationError("alphabet: cannot write file " + path);
  }
  out << to_file_text();
  if (!out) {
    throw ValidationError("alphabet: failed while writing " + path);
  }
}

char32_t Alphabet::symbol(int index) const {
  if (index < 0 || index >= size()) {
    throw ValidationError("alphabet: symbol index " + std::to_string(index) +
                          " out of range [0, " + std::to_string(size()) + ")");
  }
  return symbols_[size_t(index)];
}

std::optional<int> Alphabet::index_of(char32_t c) const {
  const auto it = index_.find(c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Word Alphabet::fold(const Word& w) const {
  Word out;
  out.reserve(w.size());
  for (char32_t c : w) out.push_back(fold_char(c));
  return out;
}

int Alphabet::rank(char32_t folded) const {
  const auto it = rank_.find(folded);
  if (it == rank_.end()) {
    throw ValidationError("alphabet: symbol " + describe_char(folded) +
                          " has no collation rank");
  }
  return it->second;
}

int Alphabet::compare(const Word& a, const Word& b) const {
  const auto rank_at = [this](const Word& w, size_t i) {
    const char32_t f = fold_char(w[i]);
    const auto it = rank_.find(f);
    if (it == rank_.end()) {
      throw ValidationError("alphabet: cannot collate \"" + word_to_utf8(w) +
                            "\": character " + describe_char(w[i]) +
                            " is outside the alphabet");
    }
    return it->second;
  };
  // Junk anywhere in either word is rejected, even past the position that
  // already decides the order.
  for (size_t i = 0; i < a.size(); ++i) rank_at(a, i);
  for (size_t i = 0; i < b.size(); ++i) rank_at(b, i);
  const size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    const int ra = rank_at(a, i);
    const int rb = rank_at(b, i);
    if (ra != rb) return ra < rb ? -1 : 1;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

bool Alphabet::in_range(const Word& w, const Word& lo, const Word& hi) const {
  if (compare(lo, hi) > 0) {
    throw ValidationError("alphabet: inverted range [\"" + word_to_utf8(lo) +
                          "\", \"" + word_to_utf8(hi) + "\"]");
  }
  return compare(w, lo) >= 0 && compare(w, hi) <= 0;
}

std::optional<char32_t> Alphabet::base_letter(char32_t c) const {
  const char32_t lower = fold_char(c);
  const auto it = base_table().find(lower);
  if (it == base_table().end()) return std::nullopt;
  const char32_t base_lower = it->second;
  if (!index_.count(base_lower)) return std::nullopt;
  if (lower == c) return base_lower;
  const auto up = unfold_.find(base_lower);
  if (up == unfold_.end()) return std::nullopt;
  return up->second;
}

void require_in_alphabet(const Word& w, const Alphabet& alphabet,
                         std::string_view what) {
  for (char32_t c : w) {
    if (!alphabet.contains(c)) {
      throw ValidationError(std::string(what) + ": character " +
                            describe_char(c) + " in \"" + word_to_utf8(w) +
                            "\" is not in the alphabet");
    }
  }
}

}  // namespace kartoteka
