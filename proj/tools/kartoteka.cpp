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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kartoteka/corpus.hpp"
#include "kartoteka/dataset.hpp"
#include "kartoteka/decode.hpp"
#include "kartoteka/errors.hpp"
#include "kartoteka/layout.hpp"
#include "kartoteka/metrics.hpp"

namespace {

using namespace kartoteka;
using ordered_json = nlohmann::ordered_json;

Alphabet load_alphabet(const std::string& path) {
  if (path.empty()) return Alphabet::polish();
  return Alphabet::load_file(path);
}

std::vector<Word> read_word_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("words: cannot open file " + path);
  }
  std::vector<Word> words;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      words.push_back(utf8_to_word(line));
    } catch (const ValidationError& e) {
      throw ValidationError(path + ":" + std::to_string(line_no) + ": " +
                            e.what());
    }
  }
  return words;
}

void write_word_lines(const std::vector<Word>& words,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ValidationError("words: cannot write file " + path);
  }
  for (const Word& w : words) out << word_to_utf8(w) << '\n';
  out.flush();
  if (!out) {
    throw ValidationError("words: failed while writing " + path);
  }
}

void write_or_print(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ValidationError("output: cannot write file " + path);
  }
  out << text;
  out.flush();
  if (!out) {
    throw ValidationError("output: failed while writing " + path);
  }
}

struct GenCorpusArgs {
  std::string mode = "natural";
  int n = 0;  // 0: per-mode default
  std::string freq_list;
  int len_min = 2;
  int len_max = 8;
  std::uint64_t seed = 0;
  std::string alphabet;
  std::string out;
};

int run_gen_corpus(const GenCorpusArgs& args) {
  const Alphabet alphabet = load_alphabet(args.alphabet);
  std::vector<Word> words;
  if (args.mode == "natural") {
    if (args.freq_list.empty()) {
      throw ValidationError(
          "gen-corpus: --mode natural requires --freq-list");
    }
    const FrequencyList freq =
        FrequencyList::load_file(args.freq_list, alphabet);
    words = sample_words(freq, args.n > 0 ? args.n : 5000, args.seed);
  } else {
    words = gen_diacritic_strings(alphabet, args.n > 0 ? args.n : 300,
                                  {args.len_min, args.len_max}, args.seed);
  }
  write_word_lines(words, args.out);
  return 0;
}

struct MakeBoxesArgs {
  std::string lexicon;
  int k = 0;
  std::string alphabet;
  std::string out;
};

int run_make_boxes(const MakeBoxesArgs& args) {
  const Alphabet alphabet = load_alphabet(args.alphabet);
  const Lexicon lexicon = Lexicon::load_file(args.lexicon, alphabet);
  save_boxes(make_boxes(lexicon, args.k), args.out);
  return 0;
}

struct BuildDatasetArgs {
  std::string words;
  std::string boxes;
  double noise = 0.25;
  int frames_per_char = 3;
  double confusion_boost = 5.0;
  double out_of_range_frac = 0.0;
  std::uint64_t seed = 0;
  std::string alphabet;
  std::string out;
};

int run_build_dataset(const BuildDatasetArgs& args) {
  const Alphabet alphabet = load_alphabet(args.alphabet);
  const std::vector<Word> words = read_word_lines(args.words);
  const std::vector<BoxRange> boxes = load_boxes(args.boxes);
  DatasetOptions options;
  options.noise.epsilon = args.noise;
  options.noise.frames_per_char = args.frames_per_char;
  options.noise.confusion_boost = args.confusion_boost;
  options.out_of_range_frac = args.out_of_range_frac;
  options.seed = args.seed;
  build_dataset(words, boxes, alphabet, options, args.out);
  return 0;
}

struct DecodeArgs {
  std::string manifest;
  std::string decoder;
  int beam_width = 25;
  std::string lexicon;
  std::string boxes;
  bool fold = false;
  bool fallback_on_empty_range = false;
  int workers = 1;
  std::string alphabet;
  std::string out;
};

int run_decode_cmd(const DecodeArgs& args) {
  const Alphabet alphabet = load_alphabet(args.alphabet);
  const Manifest manifest = load_manifest(args.manifest);

  RunConfig config;
  if (args.decoder == "bp") {
    config.decoder = DecoderKind::kBestPath;
  } else if (args.decoder == "bs") {
    config.decoder = DecoderKind::kBeamSearch;
  } else if (args.decoder == "wbs") {
    config.decoder = DecoderKind::kWordBeamSearch;
  } else {
    config.decoder = DecoderKind::kConstrainedWbs;
  }
  config.beam.width = args.beam_width;
  config.fold = args.fold;
  config.fallback_on_empty_range = args.fallback_on_empty_range;
  config.workers = args.workers;

  std::optional<Lexicon> lexicon;
  if (!args.lexicon.empty()) {
    lexicon = Lexicon::load_file(args.lexicon, alphabet);
  }
  std::optional<std::vector<BoxRange>> boxes;
  if (!args.boxes.empty()) {
    boxes = load_boxes(args.boxes);
  }

  const std::filesystem::path manifest_dir =
      std::filesystem::path(args.manifest).parent_path();
  const std::vector<Prediction> predictions = run_decode(
      manifest, manifest_dir, config, alphabet,
      lexicon.has_value() ? &*lexicon : nullptr,
      boxes.has_value() ? &*boxes : nullptr);
  save_predictions(predictions, args.out);
  return 0;
}

struct EvaluateArgs {
  std::string pred;
  std::string manifest;
  bool fold = false;
  std::string alphabet;
  std::string out;
};

int run_evaluate(const EvaluateArgs& args) {
  const Alphabet alphabet = load_alphabet(args.alphabet);
  const std::vector<Prediction> predictions = load_predictions(args.pred);
  const Manifest manifest = load_manifest(args.manifest);
  const EvalReport report =
      evaluate_predictions(predictions, manifest, args.fold, alphabet);
  write_or_print(report_to_json(report), args.out);
  return 0;
}

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string format = "table";
};

int run_report(const ReportArgs& args) {
  std::vector<EvalReport> reports;
  for (const auto& path : args.inputs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw ValidationError("report: cannot open file " + path);
    }
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    try {
      reports.push_back(report_from_json(text));
    } catch (const ValidationError& e) {
      throw ValidationError(path + ": " + e.what());
    }
  }
  if (args.format == "json") {
    ordered_json arr = ordered_json::array();
    for (const auto& r : reports) {
      arr.push_back(ordered_json::parse(report_to_json(r)));
    }
    std::cout << arr.dump(2) << '\n';
  } else {
    std::cout << render_report_table(reports);
  }
  return 0;
}

struct SelectBoxArgs {
  std::string boxes_jsonl;
  double strip_height = 300.0;
  double row_tolerance = 20.0;
  std::string out;
};

int run_select_box(const SelectBoxArgs& args) {
  std::ifstream in(args.boxes_jsonl, std::ios::binary);
  if (!in) {
    throw ValidationError("select-box: cannot open file " + args.boxes_jsonl);
  }
  std::string text;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError(args.boxes_jsonl + ":" +
                            std::to_string(line_no) +
                            ": invalid JSON: " + e.what());
    }
    if (!j.contains("card_id") || !j.at("card_id").is_string() ||
        !j.contains("boxes") || !j.at("boxes").is_array()) {
      throw ValidationError(args.boxes_jsonl + ":" +
                            std::to_string(line_no) +
                            ": expected {\"card_id\": str, \"boxes\": [...]}");
    }
    std::vector<BBox> boxes;
    for (const auto& bj : j.at("boxes")) {
      const auto num = [&](const char* key) {
        if (!bj.contains(key) || !bj.at(key).is_number()) {
          throw ValidationError(args.boxes_jsonl + ":" +
                                std::to_string(line_no) +
                                ": box missing numeric field \"" +
                                std::string(key) + "\"");
        }
        return bj.at(key).get<double>();
      };
      boxes.push_back({num("x"), num("y"), num("w"), num("h")});
    }
    const std::optional<BBox> picked =
        select_index_box(boxes, args.strip_height, args.row_tolerance);
    ordered_json out_line;
    out_line["card_id"] = j.at("card_id").get<std::string>();
    if (picked.has_value()) {
      ordered_json bj;
      bj["x"] = picked->x;
      bj["y"] = picked->y;
      bj["w"] = picked->w;
      bj["h"] = picked->h;
      out_line["box"] = bj;
    } else {
      out_line["box"] = nullptr;
    }
    text += out_line.dump();
    text += '\n';
  }
  write_or_print(text, args.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Synthetic card-index recognition toolkit: corpus generation, CTC "
      "decoding with lexicon and box-range constraints, and evaluation."};
  app.require_subcommand(1);

  GenCorpusArgs gen_args;
  auto* gen = app.add_subcommand(
      "gen-corpus", "Generate a word list (natural or diacritic corpus)");
  gen->add_option("--mode", gen_args.mode, "Corpus flavor")
      ->check(CLI::IsMember({"natural", "diacritics"}))
      ->capture_default_str();
  gen->add_option("--n", gen_args.n,
                  "Word count (default 5000 natural / 300 diacritics)");
  gen->add_option("--freq-list", gen_args.freq_list,
                  "TSV word<TAB>count frequency list (natural mode)");
  gen->add_option("--len-min", gen_args.len_min, "Minimum string length")
      ->capture_default_str();
  gen->add_option("--len-max", gen_args.len_max, "Maximum string length")
      ->capture_default_str();
  gen->add_option("--seed", gen_args.seed, "RNG seed")->capture_default_str();
  gen->add_option("--alphabet", gen_args.alphabet,
                  "Alphabet file (default: built-in Polish)");
  gen->add_option("--out", gen_args.out, "Output word list path")->required();

  MakeBoxesArgs mb_args;
  auto* mb = app.add_subcommand(
      "make-boxes", "Partition a lexicon into contiguous collation spans");
  mb->add_option("--lexicon", mb_args.lexicon, "Lexicon file, one word per line")
      ->required();
  mb->add_option("--k", mb_args.k, "Number of boxes")->required();
  mb->add_option("--alphabet", mb_args.alphabet,
                 "Alphabet file (default: built-in Polish)");
  mb->add_option("--out", mb_args.out, "Output boxes JSONL path")->required();

  BuildDatasetArgs bd_args;
  auto* bd = app.add_subcommand(
      "build-dataset", "Synthesize emission matrices and a card manifest");
  bd->add_option("--words", bd_args.words, "Word list, one per line")
      ->required();
  bd->add_option("--boxes", bd_args.boxes, "Boxes JSONL")->required();
  bd->add_option("--noise", bd_args.noise, "Noise level epsilon in [0, 1)")
      ->capture_default_str();
  bd->add_option("--frames-per-char", bd_args.frames_per_char,
                 "Frames per character")
      ->capture_default_str();
  bd->add_option("--confusion-boost", bd_args.confusion_boost,
                 "Weight multiplier for confusable symbols")
      ->capture_default_str();
  bd->add_option("--out-of-range-frac", bd_args.out_of_range_frac,
                 "Fraction of cards misfiled into a non-covering box")
      ->capture_default_str();
  bd->add_option("--seed", bd_args.seed, "RNG seed")->capture_default_str();
  bd->add_option("--alphabet", bd_args.alphabet,
                 "Alphabet file (default: built-in Polish)");
  bd->add_option("--out", bd_args.out, "Output dataset directory")
      ->required();

  DecodeArgs dc_args;
  auto* dc = app.add_subcommand("decode", "Decode every card in a manifest");
  dc->add_option("--manifest", dc_args.manifest, "Manifest JSONL")->required();
  dc->add_option("--decoder", dc_args.decoder, "Decoding strategy")
      ->check(CLI::IsMember({"bp", "bs", "wbs", "wbs-c"}))
      ->required();
  dc->add_option("--beam-width", dc_args.beam_width, "Beam width")
      ->capture_default_str();
  dc->add_option("--lexicon", dc_args.lexicon,
                 "Lexicon file (required for wbs and wbs-c)");
  dc->add_option("--boxes", dc_args.boxes,
                 "Boxes JSONL (required for wbs-c)");
  dc->add_flag("--fold", dc_args.fold, "Case-fold predictions");
  dc->add_flag("--fallback-on-empty-range", dc_args.fallback_on_empty_range,
               "Decode cards whose box range captures no lexicon word with "
               "unconstrained WBS instead of failing");
  dc->add_option("--workers", dc_args.workers, "Worker thread count")
      ->capture_default_str();
  dc->add_option("--alphabet", dc_args.alphabet,
                 "Alphabet file (default: built-in Polish)");
  dc->add_option("--out", dc_args.out, "Output predictions JSONL path")
      ->required();

  EvaluateArgs ev_args;
  auto* ev = app.add_subcommand(
      "evaluate", "Score a predictions file against its manifest");
  ev->add_option("--pred", ev_args.pred, "Predictions JSONL")->required();
  ev->add_option("--manifest", ev_args.manifest, "Manifest JSONL")->required();
  ev->add_flag("--fold", ev_args.fold,
               "Case-fold gold and predictions before comparing");
  ev->add_option("--alphabet", ev_args.alphabet,
                 "Alphabet file (default: built-in Polish)");
  ev->add_option("--out", ev_args.out,
                 "Output report JSON path (default: stdout)");

  ReportArgs rp_args;
  auto* rp = app.add_subcommand(
      "report", "Render evaluation reports as a comparison table");
  rp->add_option("--inputs", rp_args.inputs, "Report JSON files")
      ->required()
      ->expected(-1);
  rp->add_option("--format", rp_args.format, "Output format")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();

  SelectBoxArgs sb_args;
  auto* sb = app.add_subcommand(
      "select-box", "Pick the header-word box for each card's detections");
  sb->add_option("--boxes-jsonl", sb_args.boxes_jsonl,
                 "JSONL of {\"card_id\", \"boxes\": [{x,y,w,h}...]}")
      ->required();
  sb->add_option("--strip-height", sb_args.strip_height,
                 "Top strip height in pixels")
      ->capture_default_str();
  sb->add_option("--row-tolerance", sb_args.row_tolerance,
                 "Row grouping tolerance in pixels")
      ->capture_default_str();
  sb->add_option("--out", sb_args.out,
                 "Output JSONL path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return run_gen_corpus(gen_args);
    if (mb->parsed()) return run_make_boxes(mb_args);
    if (bd->parsed()) return run_build_dataset(bd_args);
    if (dc->parsed()) return run_decode_cmd(dc_args);
    if (ev->parsed()) return run_evaluate(ev_args);
    if (rp->parsed()) return run_report(rp_args);
    if (sb->parsed()) return run_select_box(sb_args);
  } catch (const DecodeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
