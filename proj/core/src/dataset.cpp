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

#include "kartoteka/dataset.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <memory>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "kartoteka/errors.hpp"
#include "kartoteka/rng.hpp"

namespace kartoteka {

namespace {

using ordered_json = nlohmann::ordered_json;

// Substream tag separating box-assignment draws from per-card noise seeds.
constexpr std::uint64_t kBoxAssignStream = 0xb0a5516700000000ull;

std::string zero_padded(const char* prefix, int value, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, digits, value);
  return buf;
}

std::vector<std::string> read_lines(const std::string& path,
                                    const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError(std::string(what) + ": cannot open file " + path);
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

ordered_json parse_jsonl_line(const std::string& line, const std::string& path,
                              size_t line_no, const char* what) {
  try {
    return ordered_json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path + ":" + std::to_string(line_no) + ": " +
                          what + ": invalid JSON: " + e.what());
  }
}

std::string get_string(const ordered_json& j, const char* key,
                       const std::string& path, size_t line_no) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw ValidationError(path + ":" + std::to_string(line_no) +
                          ": missing or non-string field \"" + key + "\"");
  }
  return j.at(key).get<std::string>();
}

void write_text_file(const std::string& path, const std::string& text,
                     const char* what) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ValidationError(std::string(what) + ": cannot write file " + path);
  }
  out << text;
  out.flush();
  if (!out) {
    throw ValidationError(std::string(what) + ": failed while writing " +
                          path);
  }
}

}  // namespace

std::vector<BoxRange> make_boxes(const Lexicon& lexicon, int k) {
  const int n = lexicon.word_count();
  if (n == 0) {
    throw ValidationError("make_boxes: empty lexicon");
  }
  if (k < 1 || k > n) {
    throw ValidationError("make_boxes: k must lie in [1, " +
                          std::to_string(n) + "], got " + std::to_string(k));
  }
  const auto& words = lexicon.words();
  std::vector<BoxRange> boxes;
  boxes.reserve(size_t(k));
  const int base = n / k;
  const int extra = n % k;  // the first `extra` boxes hold one more word
  int start = 0;
  for (int i = 0; i < k; ++i) {
    const int span = base + (i < extra ? 1 : 0);
    BoxRange box;
    box.box_id = zero_padded("box-", i + 1, 5);
    box.lo = words[size_t(start)];
    box.hi = words[size_t(start + span - 1)];
    boxes.push_back(std::move(box));
    start += span;
  }
  return boxes;
}

void save_boxes(const std::vector<BoxRange>& boxes, const std::string& path) {
  std::string text;
  for (const auto& box : boxes) {
    ordered_json j;
    j["box_id"] = box.box_id;
    j["lo"] = word_to_utf8(box.lo);
    j["hi"] = word_to_utf8(box.hi);
    text += j.dump();
    text += '\n';
  }
  write_text_file(path, text, "boxes");
}

std::vector<BoxRange> load_boxes(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path, "boxes");
  std::vector<BoxRange> boxes;
  std::set<std::string> ids;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const ordered_json j = parse_jsonl_line(lines[i], path, i + 1, "boxes");
    BoxRange box;
    box.box_id = get_string(j, "box_id", path, i + 1);
    box.lo = utf8_to_word(get_string(j, "lo", path, i + 1));
    box.hi = utf8_to_word(get_string(j, "hi", path, i + 1));
    if (box.box_id.empty()) {
      throw ValidationError(path + ":" + std::to_string(i + 1) +
                            ": empty box_id");
    }
    if (!ids.insert(box.box_id).second) {
      throw ValidationError(path + ":" + std::to_string(i + 1) +
                            ": duplicate box_id \"" + box.box_id + "\"");
    }
    boxes.push_back(std::move(box));
  }
  if (boxes.empty()) {
    throw ValidationError("boxes: " + path + " holds no boxes");
  }
  return boxes;
}

Manifest build_dataset(const std::vector<Word>& words,
                       const std::vector<BoxRange>& boxes,
                       const Alphabet& alphabet, const DatasetOptions& options,
                       const std::filesystem::path& out_dir) {
  if (words.empty()) {
    throw ValidationError("build_dataset: no words");
  }
  if (boxes.empty()) {
    throw ValidationError("build_dataset: no boxes");
  }
  if (!(options.out_of_range_frac >= 0.0 && options.out_of_range_frac <= 1.0)) {
    throw ValidationError(
        "build_dataset: out_of_range_frac must lie in [0, 1]");
  }
  {
    std::set<std::string> ids;
    for (const auto& box : boxes) {
      if (!ids.insert(box.box_id).second) {
        throw ValidationError("build_dataset: duplicate box_id \"" +
                              box.box_id + "\"");
      }
    }
  }

  std::filesystem::create_directories(out_dir / "cards");

  Manifest manifest;
  manifest.cards.reserve(words.size());
  Rng assign_rng(Rng::mix(options.seed, kBoxAssignStream));
  std::vector<size_t> wrong_boxes;
  for (size_t i = 0; i < words.size(); ++i) {
    const Word& word = words[i];
    // The box the word genuinely belongs to: first range that holds it.
    int home = -1;
    for (size_t b = 0; b < boxes.size(); ++b) {
      if (alphabet.in_range(alphabet.fold(word), alphabet.fold(boxes[b].lo),
                            alphabet.fold(boxes[b].hi))) {
        home = int(b);
        break;
      }
    }
    if (home < 0) {
      throw ValidationError("build_dataset: word \"" + word_to_utf8(word) +
                            "\" (card " + std::to_string(i + 1) +
                            ") is not covered by any box range");
    }
    size_t assigned = size_t(home);
    if (options.out_of_range_frac > 0.0 &&
        assign_rng.next_double() < options.out_of_range_frac) {
      wrong_boxes.clear();
      for (size_t b = 0; b < boxes.size(); ++b) {
        if (!alphabet.in_range(alphabet.fold(word), alphabet.fold(boxes[b].lo),
                               alphabet.fold(boxes[b].hi))) {
          wrong_boxes.push_back(b);
        }
      }
      if (!wrong_boxes.empty()) {
        assigned = wrong_boxes[size_t(
            assign_rng.next_below(std::uint64_t(wrong_boxes.size())))];
      }
    }

    CardRecord card;
    card.card_id = zero_padded("card-", int(i + 1), 6);
    card.gold_label = word;
    card.box_id = boxes[assigned].box_id;
    card.emat_path = "cards/" + card.card_id + ".emat";

    NoiseParams noise = options.noise;
    noise.seed = Rng::mix(options.seed, std::uint64_t(i));
    const EmissionMatrix m = synthesize_emissions(word, alphabet, noise);
    save_emat_file(m, (out_dir / card.emat_path).string());
    manifest.cards.push_back(std::move(card));
  }

  save_manifest(manifest, (out_dir / "manifest.jsonl").string());
  return manifest;
}

void save_manifest(const Manifest& manifest, const std::string& path) {
  std::string text;
  for (const auto& card : manifest.cards) {
    ordered_json j;
    j["card_id"] = card.card_id;
    j["gold_label"] = word_to_utf8(card.gold_label);
    j["box_id"] = card.box_id;
    j["emat_path"] = card.emat_path;
    text += j.dump();
    text += '\n';
  }
  write_text_file(path, text, "manifest");
}

Manifest load_manifest(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path, "manifest");
  Manifest manifest;
  std::set<std::string> ids;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const ordered_json j = parse_jsonl_line(lines[i], path, i + 1, "manifest");
    CardRecord card;
    card.card_id = get_string(j, "card_id", path, i + 1);
    card.gold_label = utf8_to_word(get_string(j, "gold_label", path, i + 1));
    card.box_id = get_string(j, "box_id", path, i + 1);
    card.emat_path = get_string(j, "emat_path", path, i + 1);
    if (card.card_id.empty()) {
      throw ValidationError(path + ":" + std::to_string(i + 1) +
                            ": empty card_id");
    }
    if (!ids.insert(card.card_id).second) {
      throw ValidationError(path + ":" + std::to_string(i + 1) +
                            ": duplicate card_id \"" + card.card_id + "\"");
    }
    manifest.cards.push_back(std::move(card));
  }
  if (manifest.cards.empty()) {
    throw ValidationError("manifest: " + path + " holds no cards");
  }
  return manifest;
}

std::vector<Prediction> run_decode(const Manifest& manifest,
                                   const std::filesystem::path& manifest_dir,
                                   const RunConfig& config,
                                   const Alphabet& alphabet,
                                   const Lexicon* lexicon,
                                   const std::vector<BoxRange>* boxes) {
  if (manifest.cards.empty()) {
    throw ValidationError("run_decode: manifest has no cards");
  }
  const bool needs_lexicon = config.decoder == DecoderKind::kWordBeamSearch ||
                             config.decoder == DecoderKind::kConstrainedWbs;
  if (needs_lexicon && lexicon == nullptr) {
    throw ValidationError("run_decode: this decoder requires a lexicon");
  }
  if (config.decoder == DecoderKind::kConstrainedWbs && boxes == nullptr) {
    throw ValidationError(
        "run_decode: the constrained decoder requires box ranges");
  }

  // Restrict the lexicon once per distinct box, before any threads start;
  // empty ranges are diagnosed here so the failure is deterministic.
  std::unordered_map<std::string, const BoxRange*> box_by_id;
  std::unordered_map<std::string, std::shared_ptr<const Lexicon>> restricted;
  if (config.decoder == DecoderKind::kConstrainedWbs) {
    for (const auto& box : *boxes) box_by_id.emplace(box.box_id, &box);
    for (const auto& card : manifest.cards) {
      const auto it = box_by_id.find(card.box_id);
      if (it == box_by_id.end()) {
        throw ValidationError("run_decode: card " + card.card_id +
                              " references unknown box_id \"" + card.box_id +
                              "\"");
      }
      if (!restricted.count(card.box_id)) {
        restricted.emplace(card.box_id, std::make_shared<Lexicon>(
                                            lexicon->restrict_to(*it->second)));
      }
      if (restricted.at(card.box_id)->empty() &&
          !config.fallback_on_empty_range) {
        throw DecodeError("run_decode: card " + card.card_id + ": box " +
                          card.box_id + " range [\"" +
                          word_to_utf8(it->second->lo) + "\", \"" +
                          word_to_utf8(it->second->hi) +
                          "\"] captures no lexicon word");
      }
    }
  }

  const size_t n = manifest.cards.size();
  std::vector<Prediction> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<size_t> cursor{0};

  const auto decode_card = [&](size_t i) {
    const CardRecord& card = manifest.cards[i];
    Decoded decoded;
    std::vector<std::string> flags;
    try {
      const EmissionMatrix m =
          load_emat_file((manifest_dir / card.emat_path).string());
      switch (config.decoder) {
        case DecoderKind::kBestPath:
          decoded = best_path(m, alphabet);
          break;
        case DecoderKind::kBeamSearch:
          decoded = beam_search(m, alphabet, config.beam);
          break;
        case DecoderKind::kWordBeamSearch:
          decoded = word_beam_search(m, alphabet, *lexicon, config.beam);
          break;
        case DecoderKind::kConstrainedWbs: {
          const Lexicon& box_lexicon = *restricted.at(card.box_id);
          if (box_lexicon.empty()) {
            decoded = word_beam_search(m, alphabet, *lexicon, config.beam);
            flags.push_back("empty-range-fallback");
          } else {
            decoded = word_beam_search(m, alphabet, box_lexicon, config.beam);
          }
          break;
        }
      }
    } catch (const ValidationError& e) {
      throw DecodeError("run_decode: card " + card.card_id + ": " + e.what());
    }
    Prediction p;
    p.card_id = card.card_id;
    p.pred = config.fold ? alphabet.fold(decoded.label)
                         : std::move(decoded.label);
    p.score = decoded.score;
    p.decoder = std::string(decoder_tag(config.decoder));
    p.flags = std::move(flags);
    results[i] = std::move(p);
  };

  const int workers =
      std::max(1, std::min(config.workers, int(manifest.cards.size())));
  if (workers == 1) {
    for (size_t i = 0; i < n; ++i) decode_card(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(size_t(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (size_t i = cursor.fetch_add(1); i < n; i = cursor.fetch_add(1)) {
          try {
            decode_card(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    for (size_t i = 0; i < n; ++i) {
      if (errors[i]) std::rethrow_exception(errors[i]);
    }
  }
  return results;
}

void save_predictions(const std::vector<Prediction>& predictions,
                      const std::string& path) {
  std::string text;
  for (const auto& p : predictions) {
    ordered_json j;
    j["card_id"] = p.card_id;
    j["pred"] = word_to_utf8(p.pred);
    j["score"] = p.score;
    j["decoder"] = p.decoder;
    j["flags"] = p.flags;
    text += j.dump();
    text += '\n';
  }
  write_text_file(path, text, "predictions");
}

std::vector<Prediction> load_predictions(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path, "predictions");
  std::vector<Prediction> out;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const ordered_json j =
        parse_jsonl_line(lines[i], path, i + 1, "predictions");
    Prediction p;
    p.card_id = get_string(j, "card_id", path, i + 1);
    p.pred = utf8_to_word(get_string(j, "pred", path, i + 1));
    if (!j.contains("score") || !j.at("score").is_number()) {
      throw ValidationError(path + ":" + std::to_string(i + 1) +
                            ": missing or non-numeric field \"score\"");
    }
    p.score = j.at("score").get<double>();
    p.decoder = get_string(j, "decoder", path, i + 1);
    if (j.contains("flags")) {
      if (!j.at("flags").is_array()) {
        throw ValidationError(path + ":" + std::to_string(i + 1) +
                              ": field \"flags\" must be an array");
      }
      for (const auto& f : j.at("flags")) {
        if (!f.is_string()) {
          throw ValidationError(path + ":" + std::to_string(i + 1) +
                                ": flags must be strings");
        }
        p.flags.push_back(f.get<std::string>());
      }
    }
    out.push_back(std::move(p));
  }
  if (out.empty()) {
    throw ValidationError("predictions: " + path + " holds no predictions");
  }
  return out;
}

EvalReport evaluate_predictions(const std::vector<Prediction>& predictions,
                                const Manifest& manifest, bool fold,
                                const Alphabet& alphabet) {
  if (predictions.empty()) {
    throw ValidationError("evaluate: no predictions");
  }
  std::unordered_map<std::string, const CardRecord*> by_id;
  for (const auto& card : manifest.cards) {
    if (!by_id.emplace(card.card_id, &card).second) {
      throw ValidationError("evaluate: duplicate card_id \"" + card.card_id +
                            "\" in the manifest");
    }
  }
  if (predictions.size() != manifest.cards.size()) {
    throw ValidationError(
        "evaluate: prediction count " + std::to_string(predictions.size()) +
        " does not match manifest card count " +
        std::to_string(manifest.cards.size()));
  }
  std::set<std::string> seen;
  std::vector<EvalPair> pairs;
  pairs.reserve(predictions.size());
  std::string model;
  for (const auto& p : predictions) {
    const auto it = by_id.find(p.card_id);
    if (it == by_id.end()) {
      throw ValidationError("evaluate: prediction for unknown card_id \"" +
                            p.card_id + "\"");
    }
    if (!seen.insert(p.card_id).second) {
      throw ValidationError("evaluate: duplicate prediction for card_id \"" +
                            p.card_id + "\"");
    }
    EvalPair pair;
    pair.gold = fold ? alphabet.fold(it->second->gold_label)
                     : it->second->gold_label;
    pair.pred = fold ? alphabet.fold(p.pred) : p.pred;
    pairs.push_back(std::move(pair));
    if (model.empty()) {
      model = p.decoder;
    } else if (model != p.decoder) {
      model = "mixed";
    }
  }
  return evaluate(pairs, model);
}

std::string render_report_table(const std::vector<EvalReport>& reports) {
  if (reports.empty()) {
    throw ValidationError("report: nothing to render");
  }
  std::ostringstream out;
  out << std::left << std::setw(10) << "Model" << std::right << std::setw(8)
      << "Cards" << std::setw(16) << "Word accuracy" << std::setw(12)
      << "Norm edit" << std::setw(12) << "Edit dist" << std::setw(18)
      << "Edit (missed)" << '\n';
  out << std::string(76, '-') << '\n';
  out << std::fixed << std::setprecision(4);
  for (const auto& r : reports) {
    out << std::left << std::setw(10) << r.model << std::right << std::setw(8)
        << r.n << std::setw(16) << r.word_accuracy << std::setw(12)
        << r.avg_norm_edit << std::setw(12) << r.avg_edit;
    if (r.avg_edit_misclassified.has_value()) {
      out << std::setw(18) << *r.avg_edit_misclassified;
    } else {
      out << std::setw(18) << "-";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace kartoteka
