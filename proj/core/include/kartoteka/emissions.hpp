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

#ifndef KARTOTEKA_EMISSIONS_HPP_
#define KARTOTEKA_EMISSIONS_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "kartoteka/alphabet.hpp"

namespace kartoteka {

// Row-stochastic T x C matrix of per-frame symbol probabilities, the shape
// a CTC-trained recognizer head emits. Column 0 is the blank; the symbol
// row records the column order so files stand alone.
struct EmissionMatrix {
  int frames = 0;   // T
  int columns = 0;  // C, blank included
  std::vector<char32_t> symbols;  // size C; [0] is Alphabet::kBlankSymbol
  std::vector<double> p;          // row-major, frames * columns

  double at(int t, int c) const { return p[size_t(t) * columns + c]; }
  double& at(int t, int c) { return p[size_t(t) * columns + c]; }

  // True when the column order matches the alphabet exactly.
  bool matches(const Alphabet& alphabet) const;
};

struct NoiseParams {
  // Probability mass diverted away from each frame's peak symbol, and the
  // per-run probability that the peak itself flips to another symbol.
  double epsilon = 0.0;
  int frames_per_char = 3;
  // Weight multiplier for confusable symbols (a diacritic letter and its
  // base) in both the flip draw and the spread of the diverted mass.
  double confusion_boost = 5.0;
  std::uint64_t seed = 0;
};

struct ValidationReport {
  bool ok = true;
  int row = -1;  // first offending row, -1 for shape-level problems
  std::string message;
};

// Renders a label as an emission matrix: frames_per_char frames per
// character, plus a one-frame blank separator between equal adjacent
// characters. Per character run, a peak symbol is drawn (the character
// itself with probability 1 - epsilon, otherwise a confusion-kernel draw);
// the peak receives 1 - epsilon of each frame's mass and the rest is
// spread over the other symbols, confusables boosted. epsilon = 0 yields
// exact one-hot rows. Identical inputs yield bit-identical matrices.
EmissionMatrix synthesize_emissions(const Word& label,
                                    const Alphabet& alphabet,
                                    const NoiseParams& params);

// Checks shape consistency, cell range [0, 1] and row sums within 1e-6 of
// one. Reports the first offending row rather than throwing.
ValidationReport validate(const EmissionMatrix& m);

// Text format, one matrix per file:
//   EMAT 1
//   T <frames> C <columns>
//   - a b ...
//   <row of C decimals>...
// Space-separated, LF line endings, no trailing whitespace. Values are
// written with enough digits to round-trip within 1e-9.
void save_emat(const EmissionMatrix& m, std::ostream& out);
void save_emat_file(const EmissionMatrix& m, const std::string& path);
EmissionMatrix load_emat(std::istream& in, std::string_view origin = "<stream>");
EmissionMatrix load_emat_file(const std::string& path);

}  // namespace kartoteka

#endif  // KARTOTEKA_EMISSIONS_HPP_
