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

#ifndef KARTOTEKA_METRICS_HPP_
#define KARTOTEKA_METRICS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "kartoteka/unicode.hpp"

namespace kartoteka {

struct EvalPair {
  Word gold;
  Word pred;
};

// One evaluation run, shaped like a row of a recognizer comparison table.
struct EvalReport {
  std::string model;
  int n = 0;
  double word_accuracy = 0.0;
  double avg_norm_edit = 0.0;
  double avg_edit = 0.0;
  // Mean edit distance over misclassified pairs only; absent when every
  // pair is an exact match.
  std::optional<double> avg_edit_misclassified;
  double avg_gold_length = 0.0;
};

// Unit-cost edit distance (insert, delete, substitute) over Unicode scalar
// values.
int levenshtein(const Word& a, const Word& b);

// levenshtein(a, b) / max(|a|, |b|); 0 when both words are empty.
double normalized_edit(const Word& a, const Word& b);

// Fraction of pairs with pred == gold (exact match). Errors on empty input.
double word_accuracy(const std::vector<EvalPair>& pairs);

double avg_edit(const std::vector<EvalPair>& pairs);
double avg_norm_edit(const std::vector<EvalPair>& pairs);
std::optional<double> avg_edit_misclassified(const std::vector<EvalPair>& pairs);

EvalReport evaluate(const std::vector<EvalPair>& pairs,
                    const std::string& model);

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(const std::string& text);

}  // namespace kartoteka

#endif  // KARTOTEKA_METRICS_HPP_
