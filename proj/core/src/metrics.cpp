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

#include "kartoteka/metrics.hpp"

#include <algorithm>

#include <json.hpp>

#include "kartoteka/errors.hpp"

namespace kartoteka {

namespace {

void require_nonempty(const std::vector<EvalPair>& pairs) {
  if (pairs.empty()) {
    throw ValidationError("metrics: empty evaluation set");
  }
}

}  // namespace

int levenshtein(const Word& a, const Word& b) {
  if (a.size() < b.size()) return levenshtein(b, a);
  // Two-row DP; b indexes the columns.
  std::vector<int> prev(b.size() + 1);
  std::vector<int> cur(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) prev[j] = int(j);
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = int(i);
    for (size_t j = 1; j <= b.size(); ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double normalized_edit(const Word& a, const Word& b) {
  const size_t denom = std::max(a.size(), b.size());
  if (denom == 0) return 0.0;
  return double(levenshtein(a, b)) / double(denom);
}

double word_accuracy(const std::vector<EvalPair>& pairs) {
  require_nonempty(pairs);
  size_t hits = 0;
  for (const auto& p : pairs) {
    if (p.gold == p.pred) ++hits;
  }
  return double(hits) / double(pairs.size());
}

double avg_edit(const std::vector<EvalPair>& pairs) {
  require_nonempty(pairs);
  double total = 0.0;
  for (const auto& p : pairs) total += levenshtein(p.gold, p.pred);
  return total / double(pairs.size());
}

double avg_norm_edit(const std::vector<EvalPair>& pairs) {
  require_nonempty(pairs);
  double total = 0.0;
  for (const auto& p : pairs) total += normalized_edit(p.gold, p.pred);
  return total / double(pairs.size());
}

std::optional<double> avg_edit_misclassified(
    const std::vector<EvalPair>& pairs) {
  require_nonempty(pairs);
  double total = 0.0;
  size_t misses = 0;
  for (const auto& p : pairs) {
    if (p.gold != p.pred) {
      total += levenshtein(p.gold, p.pred);
      ++misses;
    }
  }
  if (misses == 0) return std::nullopt;
  return total / double(misses);
}

EvalReport evaluate(const std::vector<EvalPair>& pairs,
                    const std::string& model) {
  require_nonempty(pairs);
  EvalReport r;
  r.model = model;
  r.n = int(pairs.size());
  r.word_accuracy = word_accuracy(pairs);
  r.avg_norm_edit = avg_norm_edit(pairs);
  r.avg_edit = avg_edit(pairs);
  r.avg_edit_misclassified = avg_edit_misclassified(pairs);
  double length_total = 0.0;
  for (const auto& p : pairs) length_total += double(p.gold.size());
  r.avg_gold_length = length_total / double(pairs.size());
  return r;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["model"] = report.model;
  j["n"] = report.n;
  j["word_accuracy"] = report.word_accuracy;
  j["avg_norm_edit"] = report.avg_norm_edit;
  j["avg_edit"] = report.avg_edit;
  if (report.avg_edit_misclassified.has_value()) {
    j["avg_edit_misclassified"] = *report.avg_edit_misclassified;
  }
  j["avg_gold_length"] = report.avg_gold_length;
  return j.dump(2) + "\n";
}

EvalReport report_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("report: invalid JSON: ") + e.what());
  }
  EvalReport r;
  try {
    r.model = j.at("model").get<std::string>();
    r.n = j.at("n").get<int>();
    r.word_accuracy = j.at("word_accuracy").get<double>();
    r.avg_norm_edit = j.at("avg_norm_edit").get<double>();
    r.avg_edit = j.at("avg_edit").get<double>();
    if (j.contains("avg_edit_misclassified")) {
      r.avg_edit_misclassified = j.at("avg_edit_misclassified").get<double>();
    }
    r.avg_gold_length = j.at("avg_gold_length").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("report: bad field: ") + e.what());
  }
  return r;
}

}  // namespace kartoteka
