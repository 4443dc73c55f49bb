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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "kartoteka/errors.hpp"
#include "kartoteka/lexicon.hpp"
#include "kartoteka/metrics.hpp"

using namespace kartoteka;
using kartoteka::testing::W;
using kartoteka::testing::words;

namespace {

// Independent reference: linear scan, smallest distance first, collation
// order among equals.
std::pair<Word, int> brute_nearest(const std::vector<Word>& lex,
                                   const Word& query, const Alphabet& a) {
  std::optional<Word> best;
  int best_dist = 0;
  for (const Word& w : lex) {
    const int d = levenshtein(a.fold(w), a.fold(query));
    if (!best.has_value() || d < best_dist ||
        (d == best_dist && a.compare(w, *best) < 0)) {
      best = a.fold(w);
      best_dist = d;
    }
  }
  return {*best, best_dist};
}

}  // namespace

TEST_CASE("trie construction") {
  const Alphabet a = Alphabet::polish();
  const Lexicon lex = Lexicon::build(words({"kot", "kos", "rok"}), a);
  CHECK(lex.word_count() == 3);
  CHECK(lex.contains(W("kot")));
  CHECK(lex.contains(W("KOS")));
  CHECK_FALSE(lex.contains(W("ko")));
  CHECK_FALSE(lex.contains(W("kotara")));

  const int k = lex.child(lex.trie_root(), *a.index_of(U'k'));
  REQUIRE(k >= 0);
  const int ko = lex.child(k, *a.index_of(U'o'));
  REQUIRE(ko >= 0);
  CHECK(lex.node(ko).children.size() == 2);
  CHECK_FALSE(lex.node(ko).terminal);
  const int kot = lex.child(ko, *a.index_of(U't'));
  REQUIRE(kot >= 0);
  CHECK(lex.node(kot).terminal);
  CHECK(lex.child(ko, *a.index_of(U'x')) == -1);
}

TEST_CASE("case folding deduplicates") {
  const Alphabet a = Alphabet::polish();
  const Lexicon lex = Lexicon::build(words({"Kot", "kot"}), a);
  CHECK(lex.word_count() == 1);
  CHECK(lex.words()[0] == W("kot"));
}

TEST_CASE("empty lexicon is valid but unusable for matching") {
  const Alphabet a = Alphabet::polish();
  const Lexicon lex = Lexicon::build({}, a);
  CHECK(lex.word_count() == 0);
  CHECK(lex.empty());
  CHECK_THROWS_AS(lex.nearest_match(W("kot")), ValidationError);
}

TEST_CASE("build rejects bad words") {
  const Alphabet a = Alphabet::polish();
  CHECK_THROWS_AS(Lexicon::build(words({"k#t"}), a), ValidationError);
  CHECK_THROWS_AS(Lexicon::build(words({"kot", ""}), a), ValidationError);
  try {
    Lexicon::build(words({"kot", "so#l"}), a);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("so#l") != std::string::npos);
  }
}

TEST_CASE("words come out folded in collation order") {
  const Alphabet a = Alphabet::polish();
  const Lexicon lex =
      Lexicon::build(words({"żółw", "Ab", "ab", "ąb", "aa", "kot"}), a);
  CHECK(lex.words() == words({"aa", "ab", "ąb", "kot", "żółw"}));
}

TEST_CASE("range restriction") {
  const Alphabet a = Alphabet::polish();
  const Lexicon lex = Lexicon::build(
      words({"ewolucja", "ewolucjonizm", "rewolucja"}), a);

  const Lexicon e_to_f = lex.restrict_to({"b1", W("e"), W("f")});
  CHECK(e_to_f.words() == words({"ewolucja", "ewolucjonizm"}));

  const Lexicon all = lex.restrict_to({"b2", W("a"), W("ż")});
  CHECK(all.words() == lex.words());

  const Lexicon none = lex.restrict_to({"b3", W("x"), W("y")});
  CHECK(none.word_count() == 0);

  CHECK_THROWS_AS(lex.restrict_to({"b4", W("z"), W("a")}), ValidationError);
  CHECK_THROWS_AS(lex.restrict_to({"b5", W("a#"), W("b")}), ValidationError);
}

TEST_CASE("restriction is inclusive at both ends and composes") {
  const Alphabet a = Alphabet::polish();
  const Lexicon lex =
      Lexicon::build(words({"bak", "bąk", "kat", "kąt", "sad", "sąd"}), a);

  const Lexicon exact = lex.restrict_to({"b", W("bąk"), W("kąt")});
  CHECK(exact.words() == words({"bąk", "kat", "kąt"}));

  const Lexicon outer = lex.restrict_to({"o", W("b"), W("s")});
  const Lexicon nested = outer.restrict_to({"i", W("k"), W("l")});
  const Lexicon direct = lex.restrict_to({"i", W("k"), W("l")});
  CHECK(nested.words() == direct.words());
  CHECK(lex.word_count() == 6);
}

TEST_CASE("nearest match pinned examples") {
  const Alphabet a = Alphabet::polish();
  const Lexicon lex1 = Lexicon::build(words({"evolution", "and", "ant"}), a);
  auto m1 = lex1.nearest_match(W("cvolution"));
  REQUIRE(m1.has_value());
  CHECK(m1->first == W("evolution"));
  CHECK(m1->second == 1);

  const Lexicon lex2 =
      Lexicon::build(words({"and", "ant", "uncle", "anele"}), a);
  auto m2 = lex2.nearest_match(W("ancl"));
  REQUIRE(m2.has_value());
  CHECK(m2->first == W("and"));
  CHECK(m2->second == 2);

  auto m3 = lex2.nearest_match(W("uncle"));
  REQUIRE(m3.has_value());
  CHECK(m3->first == W("uncle"));
  CHECK(m3->second == 0);
}

TEST_CASE("membership is equivalent to distance zero") {
  const Alphabet a = Alphabet::polish();
  const Lexicon lex =
      Lexicon::build(words({"kat", "kąt", "kot", "kura", "łoś"}), a);
  for (const char* q : {"kat", "kąt", "kot", "kura", "łoś", "KOT", "kit",
                        "kuraki", "o"}) {
    const auto m = lex.nearest_match(W(q));
    REQUIRE(m.has_value());
    CHECK((m->second == 0) == lex.contains(W(q)));
  }
}

TEST_CASE("max_dist turns far queries into no-match") {
  const Alphabet a = Alphabet::polish();
  const Lexicon lex = Lexicon::build(words({"and", "ant"}), a);
  CHECK_FALSE(lex.nearest_match(W("ancl"), 1).has_value());
  CHECK(lex.nearest_match(W("ancl"), 2).has_value());
  CHECK(lex.nearest_match(W("and"), 0).has_value());
}

TEST_CASE("out-of-alphabet query symbols each cost an edit") {
  const Alphabet a = Alphabet::polish();
  const Lexicon lex = Lexicon::build(words({"kot"}), a);
  const auto m = lex.nearest_match(W("k#t"));
  REQUIRE(m.has_value());
  CHECK(m->first == W("kot"));
  CHECK(m->second == 1);
}

TEST_CASE("nearest match agrees with the brute-force scan") {
  const Alphabet a = Alphabet::polish();
  Rng rng(21);
  const char32_t pool[] = {U'k', U'o', U't', U'a', U'ą', U's'};
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Word> lex_words;
    const int n = 1 + int(rng.next_below(12));
    for (int i = 0; i < n; ++i) {
      Word w;
      const int len = 1 + int(rng.next_below(5));
      for (int k = 0; k < len; ++k) w.push_back(pool[rng.next_below(6)]);
      lex_words.push_back(w);
    }
    const Lexicon lex = Lexicon::build(lex_words, a);
    for (int q = 0; q < 12; ++q) {
      Word query;
      const int len = int(rng.next_below(6));
      for (int k = 0; k < len; ++k) query.push_back(pool[rng.next_below(6)]);
      const auto got = lex.nearest_match(query);
      const auto want = brute_nearest(lex_words, query, a);
      REQUIRE(got.has_value());
      CHECK(got->first == want.first);
      CHECK(got->second == want.second);
    }
  }
}

TEST_CASE("lexicon file loading") {
  const Alphabet a = Alphabet::polish();
  const auto dir = kartoteka::testing::temp_dir("lexicon");
  const std::string path = (dir / "words.txt").string();
  kartoteka::testing::write_file(path, "kot\n\nKOS\nrok\n");
  const Lexicon lex = Lexicon::load_file(path, a);
  CHECK(lex.word_count() == 3);
  CHECK(lex.contains(W("kos")));

  kartoteka::testing::write_file(path, "kot\nso#l\n");
  try {
    Lexicon::load_file(path, a);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
  CHECK_THROWS_AS(Lexicon::load_file((dir / "absent.txt").string(), a),
                  ValidationError);
  std::filesystem::remove_all(dir);
}
