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

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "kartoteka/dataset.hpp"
#include "kartoteka/decode.hpp"
#include "kartoteka/emissions.hpp"
#include "kartoteka/errors.hpp"

using namespace kartoteka;
using kartoteka::testing::W;
using kartoteka::testing::read_file;
using kartoteka::testing::temp_dir;
using kartoteka::testing::words;

namespace {

const std::vector<Word>& ten_words() {
  static const std::vector<Word> w =
      words({"bak", "bąk", "dom", "kat", "kąt", "kos", "kot", "rok", "sad",
             "sąd"});
  return w;
}

}  // namespace

TEST_CASE("make_boxes partitions the collation order") {
  const Alphabet a = Alphabet::polish();
  const Lexicon lex = Lexicon::build(ten_words(), a);

  const auto one = make_boxes(lex, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].lo == W("bak"));
  CHECK(one[0].hi == W("sąd"));

  const auto singletons = make_boxes(lex, lex.word_count());
  REQUIRE(singletons.size() == 10);
  for (size_t i = 0; i < singletons.size(); ++i) {
    CHECK(singletons[i].lo == singletons[i].hi);
    CHECK(singletons[i].lo == lex.words()[i]);
  }

  const auto three = make_boxes(lex, 3);
  REQUIRE(three.size() == 3);
  std::vector<int> sizes;
  std::set<std::string> ids;
  std::vector<Word> covered;
  for (const auto& box : three) {
    const Lexicon span = lex.restrict_to(box);
    sizes.push_back(span.word_count());
    ids.insert(box.box_id);
    for (const Word& w : span.words()) covered.push_back(w);
  }
  CHECK(sizes == std::vector<int>{4, 3, 3});
  CHECK(ids.size() == 3);
  CHECK(covered == lex.words());

  CHECK_THROWS_AS(make_boxes(lex, 0), ValidationError);
  CHECK_THROWS_AS(make_boxes(lex, 11), ValidationError);
  CHECK_THROWS_AS(make_boxes(Lexicon::build({}, a), 1), ValidationError);
}

TEST_CASE("box files round trip") {
  const Alphabet a = Alphabet::polish();
  const Lexicon lex = Lexicon::build(ten_words(), a);
  const auto boxes = make_boxes(lex, 4);
  const auto dir = temp_dir("boxes");
  const std::string path = (dir / "boxes.jsonl").string();
  save_boxes(boxes, path);
  const auto back = load_boxes(path);
  REQUIRE(back.size() == boxes.size());
  for (size_t i = 0; i < boxes.size(); ++i) {
    CHECK(back[i].box_id == boxes[i].box_id);
    CHECK(back[i].lo == boxes[i].lo);
    CHECK(back[i].hi == boxes[i].hi);
  }
  kartoteka::testing::write_file(path, "{\"box_id\":\"b\",\"lo\":\"a\"}\n");
  CHECK_THROWS_AS(load_boxes(path), ValidationError);
  kartoteka::testing::write_file(path, "");
  CHECK_THROWS_AS(load_boxes(path), ValidationError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("build_dataset writes decodable cards and a manifest") {
  const Alphabet a = Alphabet::polish();
  const Lexicon lex = Lexicon::build(ten_words(), a);
  const auto boxes = make_boxes(lex, 3);
  const auto dir = temp_dir("dataset");

  DatasetOptions options;
  const Manifest manifest =
      build_dataset(ten_words(), boxes, a, options, (dir / "ds").string());
  REQUIRE(manifest.cards.size() == 10);
  for (size_t i = 0; i < manifest.cards.size(); ++i) {
    const CardRecord& card = manifest.cards[i];
    CHECK(card.gold_label == ten_words()[i]);
    const EmissionMatrix m =
        load_emat_file((dir / "ds" / card.emat_path).string());
    CHECK(best_path(m, a).label == card.gold_label);
    bool found = false;
    for (const auto& box : boxes) {
      if (box.box_id == card.box_id) {
        found = true;
        CHECK(a.in_range(card.gold_label, box.lo, box.hi));
      }
    }
    CHECK(found);
  }

  const Manifest loaded = load_manifest((dir / "ds" / "manifest.jsonl").string());
  REQUIRE(loaded.cards.size() == manifest.cards.size());
  CHECK(loaded.cards[4].card_id == manifest.cards[4].card_id);
  CHECK(loaded.cards[4].gold_label == manifest.cards[4].gold_label);
  std::filesystem::remove_all(dir);
}

TEST_CASE("build_dataset is byte deterministic") {
  const Alphabet a = Alphabet::polish();
  const Lexicon lex = Lexicon::build(ten_words(), a);
  const auto boxes = make_boxes(lex, 3);
  const auto dir = temp_dir("determinism");

  DatasetOptions options;
  options.noise.epsilon = 0.3;
  options.seed = 11;
  build_dataset(ten_words(), boxes, a, options, (dir / "a").string());
  build_dataset(ten_words(), boxes, a, options, (dir / "b").string());
  CHECK(read_file(dir / "a" / "manifest.jsonl") ==
        read_file(dir / "b" / "manifest.jsonl"));
  CHECK(read_file(dir / "a" / "cards" / "card-000003.emat") ==
        read_file(dir / "b" / "cards" / "card-000003.emat"));

  options.seed = 12;
  build_dataset(ten_words(), boxes, a, options, (dir / "c").string());
  CHECK(read_file(dir / "a" / "cards" / "card-000003.emat") !=
        read_file(dir / "c" / "cards" / "card-000003.emat"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("build_dataset rejects uncovered words") {
  const Alphabet a = Alphabet::polish();
  const std::vector<BoxRange> boxes = {{"b1", W("a"), W("m")}};
  const auto dir = temp_dir("uncovered");
  try {
    build_dataset(words({"kot", "zebra"}), boxes, a, {},
                  (dir / "ds").string());
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("zebra") != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("out-of-range injection mismatches every card at frac one") {
  const Alphabet a = Alphabet::polish();
  const Lexicon lex = Lexicon::build(ten_words(), a);
  const auto boxes = make_boxes(lex, 3);
  const auto dir = temp_dir("inject");

  DatasetOptions options;
  options.out_of_range_frac = 1.0;
  options.seed = 4;
  const Manifest m =
      build_dataset(ten_words(), boxes, a, options, (dir / "ds").string());
  for (const CardRecord& card : m.cards) {
    for (const auto& box : boxes) {
      if (box.box_id == card.box_id) {
        CHECK_FALSE(a.in_range(card.gold_label, box.lo, box.hi));
      }
    }
  }

  options.out_of_range_frac = 0.0;
  const Manifest clean =
      build_dataset(ten_words(), boxes, a, options, (dir / "ds0").string());
  for (const CardRecord& card : clean.cards) {
    for (const auto& box : boxes) {
      if (box.box_id == card.box_id) {
        CHECK(a.in_range(card.gold_label, box.lo, box.hi));
      }
    }
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("zero-noise decode runs reproduce gold under every decoder") {
  const Alphabet a = Alphabet::polish();
  const Lexicon lex = Lexicon::build(ten_words(), a);
  const auto boxes = make_boxes(lex, 3);
  const auto dir = temp_dir("run");
  const Manifest manifest =
      build_dataset(ten_words(), boxes, a, {}, (dir / "ds").string());
  const auto manifest_dir = dir / "ds";

  for (const DecoderKind kind :
       {DecoderKind::kBestPath, DecoderKind::kBeamSearch,
        DecoderKind::kWordBeamSearch, DecoderKind::kConstrainedWbs}) {
    RunConfig config;
    config.decoder = kind;
    const auto preds =
        run_decode(manifest, manifest_dir, config, a, &lex, &boxes);
    REQUIRE(preds.size() == manifest.cards.size());
    for (size_t i = 0; i < preds.size(); ++i) {
      CHECK(preds[i].card_id == manifest.cards[i].card_id);
      CHECK(preds[i].pred == manifest.cards[i].gold_label);
      CHECK(preds[i].decoder == decoder_tag(kind));
      CHECK(preds[i].flags.empty());
    }
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("best path and width-one beam agree on one-hot cards") {
  const Alphabet a = Alphabet::polish();
  const Lexicon lex = Lexicon::build(ten_words(), a);
  const auto boxes = make_boxes(lex, 2);
  const auto dir = temp_dir("bs1");
  const Manifest manifest =
      build_dataset(ten_words(), boxes, a, {}, (dir / "ds").string());

  RunConfig bp;
  bp.decoder = DecoderKind::kBestPath;
  RunConfig bs1;
  bs1.decoder = DecoderKind::kBeamSearch;
  bs1.beam.width = 1;
  const auto lhs = run_decode(manifest, dir / "ds", bp, a, nullptr, nullptr);
  const auto rhs = run_decode(manifest, dir / "ds", bs1, a, nullptr, nullptr);
  for (size_t i = 0; i < lhs.size(); ++i) CHECK(lhs[i].pred == rhs[i].pred);
  std::filesystem::remove_all(dir);
}

TEST_CASE("worker count never changes the predictions") {
  const Alphabet a = Alphabet::polish();
  const Lexicon lex = Lexicon::build(ten_words(), a);
  const auto boxes = make_boxes(lex, 3);
  const auto dir = temp_dir("workers");
  DatasetOptions options;
  options.noise.epsilon = 0.35;
  options.seed = 21;
  const Manifest manifest =
      build_dataset(ten_words(), boxes, a, options, (dir / "ds").string());

  RunConfig config;
  config.decoder = DecoderKind::kConstrainedWbs;
  const auto serial =
      run_decode(manifest, dir / "ds", config, a, &lex, &boxes);
  config.workers = 4;
  const auto parallel =
      run_decode(manifest, dir / "ds", config, a, &lex, &boxes);

  const std::string p1 = (dir / "serial.jsonl").string();
  const std::string p2 = (dir / "parallel.jsonl").string();
  save_predictions(serial, p1);
  save_predictions(parallel, p2);
  CHECK(read_file(p1) == read_file(p2));

  const auto loaded = load_predictions(p1);
  REQUIRE(loaded.size() == serial.size());
  CHECK(loaded[3].card_id == serial[3].card_id);
  CHECK(loaded[3].pred == serial[3].pred);
  CHECK(loaded[3].score == serial[3].score);
  CHECK(loaded[3].decoder == serial[3].decoder);
  std::filesystem::remove_all(dir);
}

TEST_CASE("missing constraints are validation errors") {
  const Alphabet a = Alphabet::polish();
  const Lexicon lex = Lexicon::build(ten_words(), a);
  const auto boxes = make_boxes(lex, 2);
  const auto dir = temp_dir("missing");
  const Manifest manifest =
      build_dataset(ten_words(), boxes, a, {}, (dir / "ds").string());

  RunConfig wbs;
  wbs.decoder = DecoderKind::kWordBeamSearch;
  CHECK_THROWS_AS(run_decode(manifest, dir / "ds", wbs, a, nullptr, nullptr),
                  ValidationError);
  RunConfig wbsc;
  wbsc.decoder = DecoderKind::kConstrainedWbs;
  CHECK_THROWS_AS(run_decode(manifest, dir / "ds", wbsc, a, &lex, nullptr),
                  ValidationError);
  CHECK_THROWS_AS(run_decode({}, dir / "ds", wbs, a, &lex, &boxes),
                  ValidationError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("empty box ranges fail or fall back per configuration") {
  const Alphabet a = Alphabet::polish();
  const std::vector<BoxRange> boxes = {{"low", W("a"), W("m")},
                                       {"high", W("n"), W("ż")}};
  const auto dir = temp_dir("fallback");
  const Manifest manifest =
      build_dataset(words({"kot", "pies"}), boxes, a, {},
                    (dir / "ds").string());

  // Every decoder word lives in the low box, so the card filed under
  // "high" restricts to nothing.
  const Lexicon low_only = Lexicon::build(words({"kot", "kos"}), a);
  RunConfig config;
  config.decoder = DecoderKind::kConstrainedWbs;
  try {
    run_decode(manifest, dir / "ds", config, a, &low_only, &boxes);
    FAIL("expected DecodeError");
  } catch (const DecodeError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("card-000002") != std::string::npos);
  }

  config.fallback_on_empty_range = true;
  const auto preds =
      run_decode(manifest, dir / "ds", config, a, &low_only, &boxes);
  REQUIRE(preds.size() == 2);
  CHECK(preds[0].flags.empty());
  REQUIRE(preds[1].flags.size() == 1);
  CHECK(preds[1].flags[0] == "empty-range-fallback");
  CHECK(preds[1].decoder == "WBS-C");
  CHECK(low_only.contains(preds[1].pred));
  std::filesystem::remove_all(dir);
}

TEST_CASE("unknown box ids fail the run") {
  const Alphabet a = Alphabet::polish();
  const Lexicon lex = Lexicon::build(ten_words(), a);
  const auto boxes = make_boxes(lex, 2);
  const auto dir = temp_dir("unknownbox");
  Manifest manifest =
      build_dataset(ten_words(), boxes, a, {}, (dir / "ds").string());
  manifest.cards[5].box_id = "box-99999";
  RunConfig config;
  config.decoder = DecoderKind::kConstrainedWbs;
  CHECK_THROWS_AS(run_decode(manifest, dir / "ds", config, a, &lex, &boxes),
                  ValidationError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("broken emission files surface as decode errors") {
  const Alphabet a = Alphabet::polish();
  const Lexicon lex = Lexicon::build(ten_words(), a);
  const auto boxes = make_boxes(lex, 2);
  const auto dir = temp_dir("brokenemat");
  const Manifest manifest =
      build_dataset(ten_words(), boxes, a, {}, (dir / "ds").string());
  kartoteka::testing::write_file(dir / "ds" / manifest.cards[2].emat_path,
                                 "EMAT 1\nT 1 C 2\n- a\n0.9 0.9\n");
  RunConfig config;
  try {
    run_decode(manifest, dir / "ds", config, a, nullptr, nullptr);
    FAIL("expected DecodeError");
  } catch (const DecodeError& e) {
    CHECK(std::string(e.what()).find(manifest.cards[2].card_id) !=
          std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("folded runs emit folded predictions") {
  const Alphabet a = Alphabet::polish();
  const std::vector<Word> caps = words({"Kot", "Pies"});
  const std::vector<BoxRange> boxes = {{"all", W("a"), W("ż")}};
  const auto dir = temp_dir("fold");
  const Manifest manifest =
      build_dataset(caps, boxes, a, {}, (dir / "ds").string());

  RunConfig config;
  const auto raw = run_decode(manifest, dir / "ds", config, a, nullptr, nullptr);
  CHECK(raw[0].pred == W("Kot"));
  config.fold = true;
  const auto folded =
      run_decode(manifest, dir / "ds", config, a, nullptr, nullptr);
  CHECK(folded[0].pred == W("kot"));
  CHECK(folded[1].pred == W("pies"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("prediction evaluation joins on card ids") {
  const Alphabet a = Alphabet::polish();
  Manifest manifest;
  manifest.cards = {{"c1", W("kot"), "b", "x.emat"},
                    {"c2", W("Sąd"), "b", "y.emat"},
                    {"c3", W("dom"), "b", "z.emat"}};
  std::vector<Prediction> preds = {{"c3", W("dom"), -0.5, "BP", {}},
                                   {"c1", W("kot"), -0.1, "BP", {}},
                                   {"c2", W("sąd"), -0.2, "BP", {}}};

  const EvalReport strict = evaluate_predictions(preds, manifest, false, a);
  CHECK(strict.model == "BP");
  CHECK(strict.n == 3);
  CHECK(strict.word_accuracy == doctest::Approx(2.0 / 3.0));

  const EvalReport folded = evaluate_predictions(preds, manifest, true, a);
  CHECK(folded.word_accuracy == 1.0);

  preds[0].decoder = "WBS";
  CHECK(evaluate_predictions(preds, manifest, false, a).model == "mixed");

  std::vector<Prediction> dup = preds;
  dup[0].card_id = "c1";
  CHECK_THROWS_AS(evaluate_predictions(dup, manifest, false, a),
                  ValidationError);
  std::vector<Prediction> extra = preds;
  extra.push_back({"c9", W("kot"), -0.3, "BP", {}});
  CHECK_THROWS_AS(evaluate_predictions(extra, manifest, false, a),
                  ValidationError);
  preds.pop_back();
  CHECK_THROWS_AS(evaluate_predictions(preds, manifest, false, a),
                  ValidationError);
}

TEST_CASE("report table lines up one row per report") {
  const Alphabet a = Alphabet::polish();
  Manifest manifest;
  manifest.cards = {{"c1", W("kot"), "b", "x.emat"},
                    {"c2", W("sąd"), "b", "y.emat"}};
  const std::vector<Prediction> good = {{"c1", W("kot"), -0.1, "WBS-C", {}},
                                        {"c2", W("sąd"), -0.2, "WBS-C", {}}};
  const std::vector<Prediction> bad = {{"c1", W("kos"), -0.4, "BP", {}},
                                       {"c2", W("sad"), -0.6, "BP", {}}};
  const EvalReport r1 = evaluate_predictions(good, manifest, false, a);
  const EvalReport r2 = evaluate_predictions(bad, manifest, false, a);
  const std::string table = render_report_table({r1, r2});
  CHECK(table.find("Model") != std::string::npos);
  CHECK(table.find("WBS-C") != std::string::npos);
  CHECK(table.find("BP") != std::string::npos);
  CHECK(table.find("1.0000") != std::string::npos);
  CHECK(table.find("0.0000") != std::string::npos);
  CHECK(table.find("-") != std::string::npos);
}
