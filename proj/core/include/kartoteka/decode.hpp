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

#ifndef KARTOTEKA_DECODE_HPP_
#define KARTOTEKA_DECODE_HPP_

#include <string_view>
#include <vector>

#include "kartoteka/alphabet.hpp"
#include "kartoteka/emissions.hpp"
#include "kartoteka/lexicon.hpp"

namespace kartoteka {

enum class DecoderKind { kBestPath, kBeamSearch, kWordBeamSearch, kConstrainedWbs };

// Wire/report tag: "BP", "BS", "WBS" or "WBS-C".
std::string_view decoder_tag(DecoderKind kind);

struct Decoded {
  Word label;
  // Log-probability mass the decoder attributes to the label; always <= 0.
  double score = 0.0;
  DecoderKind decoder = DecoderKind::kBestPath;
};

struct BeamParams {
  int width = 25;
};

// Applies the CTC collapse: merge adjacent equal symbols, then drop
// blanks. `path` holds column indices, blank included.
Word collapse(const std::vector<int>& path, const Alphabet& alphabet);

// Frame-wise argmax (ties resolve to the lower column index) followed by
// collapse. The score is the log-probability of that single path.
Decoded best_path(const EmissionMatrix& m, const Alphabet& alphabet);

// Exact marginal probability of `label` under the matrix: the summed
// probability of every frame path that collapses to it (forward
// algorithm, log-space internally). Labels no path can produce get 0.
double ctc_label_probability(const EmissionMatrix& m, const Word& label,
                             const Alphabet& alphabet);

// Prefix beam search over label prefixes, merging all paths that collapse
// to the same prefix. Exact once the width covers every reachable prefix.
Decoded beam_search(const EmissionMatrix& m, const Alphabet& alphabet,
                    const BeamParams& params = {});

// Prefix beam search constrained to the lexicon trie: beams only extend
// along trie edges, and the result is always a complete lexicon word. If
// no beam ends on a word, beams are completed by greedy trie descent
// (highest average frame probability per symbol, each added symbol
// penalized by the matrix's mean per-frame maximum log-probability) and
// re-ranked.
Decoded word_beam_search(const EmissionMatrix& m, const Alphabet& alphabet,
                         const Lexicon& lexicon,
                         const BeamParams& params = {});

// Word beam search over the lexicon restricted to the box range; the
// prediction is forced into the range even when the written word lies
// outside it. Throws DecodeError when the restriction is empty.
Decoded constrained_wbs(const EmissionMatrix& m, const Alphabet& alphabet,
                        const Lexicon& lexicon, const BoxRange& range,
                        const BeamParams& params = {});

}  // namespace kartoteka

#endif  // KARTOTEKA_DECODE_HPP_
