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

#ifndef KARTOTEKA_DATASET_HPP_
#define KARTOTEKA_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "kartoteka/corpus.hpp"
#include "kartoteka/decode.hpp"
#include "kartoteka/emissions.hpp"
#include "kartoteka/lexicon.hpp"
#include "kartoteka/metrics.hpp"

namespace kartoteka {

// One synthetic index card: a gold head word, the box it was filed in and
// the recognizer output for its word image.
struct CardRecord {
  std::string card_id;
  Word gold_label;
  std::string box_id;
  std::string emat_path;  // relative to the manifest's directory
};

struct Manifest {
  std::vector<CardRecord> cards;
};

// Splits the lexicon into k contiguous collation spans of near-equal size
// (the first word_count % k spans get one extra word). Span bounds are
// the first and last member words. Requires 1 <= k <= word_count.
std::vector<BoxRange> make_boxes(const Lexicon& lexicon, int k);

// JSONL: {"box_id": ..., "lo": ..., "hi": ...} per line.
void save_boxes(const std::vector<BoxRange>& boxes, const std::string& path);
std::vector<BoxRange> load_boxes(const std::string& path);

struct DatasetOptions {
  NoiseParams noise;
  // Fraction of cards filed into a box whose range excludes the gold word
  // (per-card Bernoulli draw), simulating misfiled cards.
  double out_of_range_frac = 0.0;
  std::uint64_t seed = 0;
};

// Writes one emission matrix per word under out_dir/cards/ plus
// out_dir/manifest.jsonl, and returns the manifest. Every word must fall
// in some box's range. Per-card noise seeds derive from options.seed, so
// identical inputs produce identical datasets.
Manifest build_dataset(const std::vector<Word>& words,
                       const std::vector<BoxRange>& boxes,
                       const Alphabet& alphabet, const DatasetOptions& options,
                       const std::filesystem::path& out_dir);

// JSONL: {"card_id", "gold_label", "box_id", "emat_path"} per line.
void save_manifest(const Manifest& manifest, const std::string& path);
Manifest load_manifest(const std::string& path);

struct Prediction {
  std::string card_id;
  Word pred;
  double score = 0.0;
  std::string decoder;
  std::vector<std::string> flags;
};

struct RunConfig {
  DecoderKind decoder = DecoderKind::kBestPath;
  BeamParams beam;
  // Case-fold predictions before writing them.
  bool fold = false;
  // With the constrained decoder: when a card's box range captures no
  // lexicon word, fall back to unconstrained word beam search and flag
  // the prediction "empty-range-fallback" instead of failing the run.
  bool fallback_on_empty_range = false;
  int workers = 1;
};

// Decodes every card, preserving manifest order in the result regardless
// of worker count. `lexicon` is required for the word beam searches,
// `boxes` for the constrained one. Without the fallback, a card whose box
// range captures no lexicon word fails the run with a DecodeError naming
// the first such card in manifest order.
std::vector<Prediction> run_decode(const Manifest& manifest,
                                   const std::filesystem::path& manifest_dir,
                                   const RunConfig& config,
                                   const Alphabet& alphabet,
                                   const Lexicon* lexicon,
                                   const std::vector<BoxRange>* boxes);

// JSONL: {"card_id", "pred", "score", "decoder", "flags"} per line.
void save_predictions(const std::vector<Prediction>& predictions,
                      const std::string& path);
std::vector<Prediction> load_predictions(const std::string& path);

// Joins predictions to manifest gold labels by card_id (1:1 required) and
// evaluates. With fold set, gold and prediction are case-folded before
// comparison. The report's model is the predictions' decoder tag, or
// "mixed" when they disagree.
EvalReport evaluate_predictions(const std::vector<Prediction>& predictions,
                                const Manifest& manifest, bool fold,
                                const Alphabet& alphabet);

// Fixed-width comparison table, one row per report.
std::string render_report_table(const std::vector<EvalReport>& reports);

}  // namespace kartoteka

#endif  // KARTOTEKA_DATASET_HPP_
