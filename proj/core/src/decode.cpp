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

#include "kartoteka/decode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include "kartoteka/errors.hpp"

namespace kartoteka {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

void require_usable(const EmissionMatrix& m, const Alphabet& alphabet) {
  const ValidationReport v = validate(m);
  if (!v.ok) {
    throw ValidationError("decode: invalid emission matrix: " + v.message);
  }
  if (!m.matches(alphabet)) {
    throw DecodeError(
        "decode: the matrix symbol row does not match the alphabet");
  }
}

struct PrefixHash {
  size_t operator()(const std::vector<int>& v) const {
    size_t h = 14695981039346656037ull;
    for (int x : v) {
      h ^= size_t(std::uint32_t(x));
      h *= 1099511628211ull;
    }
    return h;
  }
};

struct Beam {
  std::vector<int> prefix;  // column indices, no blanks
  double p_blank = kNegInf;     // mass of paths ending in blank
  double p_symbol = kNegInf;    // mass of paths ending in prefix.back()
  int node = 0;                 // trie node; unused without a lexicon
  double total() const { return log_add(p_blank, p_symbol); }
};

// Deterministic beam order: probability mass first, then dictionary order
// of the prefix, then raw column indices. A strict total order over
// distinct prefixes, so ranking never depends on hash iteration order.
struct BeamOrder {
  const std::vector<int>* rank_by_index;

  bool operator()(const Beam& a, const Beam& b) const {
    const double ta = a.total();
    const double tb = b.total();
    if (ta != tb) return ta > tb;
    const size_t n = std::min(a.prefix.size(), b.prefix.size());
    for (size_t i = 0; i < n; ++i) {
      const int ra = (*rank_by_index)[size_t(a.prefix[i])];
      const int rb = (*rank_by_index)[size_t(b.prefix[i])];
      if (ra != rb) return ra < rb;
    }
    if (a.prefix.size() != b.prefix.size()) {
      return a.prefix.size() < b.prefix.size();
    }
    return a.prefix < b.prefix;
  }
};

std::vector<int> collation_ranks(const Alphabet& alphabet) {
  std::vector<int> ranks(size_t(alphabet.size()), -1);
  for (int c = 1; c < alphabet.size(); ++c) {
    ranks[size_t(c)] = alphabet.rank(alphabet.fold_char(alphabet.symbol(c)));
  }
  return ranks;
}

// Core prefix beam search. With a lexicon, prefixes only extend along
// trie edges. Returns the final beams, best first.
std::vector<Beam> run_beam_search(const EmissionMatrix& m,
                                  const Alphabet& alphabet,
                                  const Lexicon* lexicon, int width) {
  const std::vector<int> ranks = collation_ranks(alphabet);
  const BeamOrder order{&ranks};

  std::vector<Beam> beams;
  {
    Beam root;
    root.p_blank = 0.0;  // log 1: the empty path
    root.node = lexicon ? lexicon->trie_root() : 0;
    beams.push_back(std::move(root));
  }

  std::vector<double> lp(size_t(m.columns));
  std::unordered_map<std::vector<int>, Beam, PrefixHash> next;
  std::vector<int> extended;  // scratch for prefix + symbol

  for (int t = 0; t < m.frames; ++t) {
    for (int c = 0; c < m.columns; ++c) lp[size_t(c)] = safe_log(m.at(t, c));
    next.clear();
    next.reserve(beams.size() * 8);

    const auto upsert = [&next](const std::vector<int>& prefix,
                                int node) -> Beam& {
      auto it = next.find(prefix);
      if (it == next.end()) {
        Beam fresh;
        fresh.prefix = prefix;
        fresh.node = node;
        it = next.emplace(prefix, std::move(fresh)).first;
      }
      return it->second;
    };

    for (const Beam& beam : beams) {
      const double total = beam.total();

      // Stay on the same prefix: a blank frame, or a repeat of the last
      // symbol (which collapses into it). Materialized even at -inf so
      // the candidate set is never empty.
      Beam& same = upsert(beam.prefix, beam.node);
      if (lp[0] != kNegInf && total != kNegInf) {
        same.p_blank = log_add(same.p_blank, total + lp[0]);
      }
      if (!beam.prefix.empty()) {
        const int last = beam.prefix.back();
        if (lp[size_t(last)] != kNegInf && beam.p_symbol != kNegInf) {
          same.p_symbol =
              log_add(same.p_symbol, beam.p_symbol + lp[size_t(last)]);
        }
      }

      // Extend the prefix by one writable symbol.
      const auto extend = [&](int sym, int child_node) {
        const int last = beam.prefix.empty() ? -1 : beam.prefix.back();
        // Extending with the repeated symbol needs a blank in between,
        // so only blank-ending mass flows; otherwise all mass flows.
        const double source = (sym == last) ? beam.p_blank : total;
        if (source == kNegInf || lp[size_t(sym)] == kNegInf) return;
        extended = beam.prefix;
        extended.push_back(sym);
        Beam& grown = upsert(extended, child_node);
        grown.p_symbol = log_add(grown.p_symbol, source + lp[size_t(sym)]);
      };

      if (lexicon) {
        for (const auto& [sym, child_node] :
             lexicon->node(beam.node).children) {
          extend(sym, child_node);
        }
      } else {
        for (int sym = 1; sym < m.columns; ++sym) extend(sym, 0);
      }
    }

    beams.clear();
    beams.reserve(next.size());
    for (auto& [prefix, beam] : next) beams.push_back(std::move(beam));
    std::sort(beams.begin(), beams.end(), order);
    if (int(beams.size()) > width) beams.resize(size_t(width));
  }
  return beams;
}

Word prefix_to_word(const std::vector<int>& prefix, const Alphabet& alphabet) {
  Word w;
  w.reserve(prefix.size());
  for (int sym : prefix) w.push_back(alphabet.symbol(sym));
  return w;
}

}  // namespace

std::string_view decoder_tag(DecoderKind kind) {
  switch (kind) {
    case DecoderKind::kBestPath: return "BP";
    case DecoderKind::kBeamSearch: return "BS";
    case DecoderKind::kWordBeamSearch: return "WBS";
    case DecoderKind::kConstrainedWbs: return "WBS-C";
  }
  return "?";
}

Word collapse(const std::vector<int>& path, const Alphabet& alphabet) {
  Word out;
  int prev = -1;
  for (int sym : path) {
    if (sym < 0 || sym >= alphabet.size()) {
      throw ValidationError("collapse: column index " + std::to_string(sym) +
                            " out of range");
    }
    if (sym != prev && sym != Alphabet::kBlankIndex) {
      out.push_back(alphabet.symbol(sym));
    }
    prev = sym;
  }
  return out;
}

Decoded best_path(const EmissionMatrix& m, const Alphabet& alphabet) {
  require_usable(m, alphabet);
  std::vector<int> path(size_t(m.frames));
  double score = 0.0;
  for (int t = 0; t < m.frames; ++t) {
    int arg = 0;
    double best = m.at(t, 0);
    for (int c = 1; c < m.columns; ++c) {
      if (m.at(t, c) > best) {
        best = m.at(t, c);
        arg = c;
      }
    }
    path[size_t(t)] = arg;
    score += safe_log(best);
  }
  return {collapse(path, alphabet), score, DecoderKind::kBestPath};
}

double ctc_label_probability(const EmissionMatrix& m, const Word& label,
                             const Alphabet& alphabet) {
  require_usable(m, alphabet);
  require_in_alphabet(label, alphabet, "decode");

  // Extended label: blanks interleaved around every symbol.
  const size_t states = 2 * label.size() + 1;
  std::vector<int> sym(states, Alphabet::kBlankIndex);
  for (size_t i = 0; i < label.size(); ++i) {
    sym[2 * i + 1] = *alphabet.index_of(label[i]);
  }

  std::vector<double> alpha(states, kNegInf);
  std::vector<double> prev(states, kNegInf);
  const auto lp = [&m](int t, int c) { return safe_log(m.at(t, c)); };

  prev[0] = lp(0, Alphabet::kBlankIndex);
  if (states > 1) prev[1] = lp(0, sym[1]);
  for (int t = 1; t < m.frames; ++t) {
    for (size_t s = 0; s < states; ++s) {
      double mass = prev[s];
      if (s >= 1) mass = log_add(mass, prev[s - 1]);
      // Skipping the in-between blank is legal only between distinct
      // symbols.
      if (s >= 2 && sym[s] != Alphabet::kBlankIndex && sym[s] != sym[s - 2]) {
        mass = log_add(mass, prev[s - 2]);
      }
      alpha[s] = (mass == kNegInf) ? kNegInf : mass + lp(t, sym[s]);
    }
    std::swap(alpha, prev);
  }

  double final_mass = prev[states - 1];
  if (states > 1) final_mass = log_add(final_mass, prev[states - 2]);
  return final_mass == kNegInf ? 0.0 : std::exp(final_mass);
}

Decoded beam_search(const EmissionMatrix& m, const Alphabet& alphabet,
                    const BeamParams& params) {
  require_usable(m, alphabet);
  if (params.width < 1) {
    throw ValidationError("decode: beam width must be >= 1");
  }
  const std::vector<Beam> beams =
      run_beam_search(m, alphabet, nullptr, params.width);
  const Beam& best = beams.front();
  return {prefix_to_word(best.prefix, alphabet), best.total(),
          DecoderKind::kBeamSearch};
}

namespace {

Decoded wbs_impl(const EmissionMatrix& m, const Alphabet& alphabet,
                 const Lexicon& lexicon, const BeamParams& params,
                 DecoderKind kind) {
  require_usable(m, alphabet);
  if (params.width < 1) {
    throw ValidationError("decode: beam width must be >= 1");
  }
  if (lexicon.empty()) {
    throw DecodeError("decode: the lexicon is empty");
  }

  const std::vector<Beam> beams =
      run_beam_search(m, alphabet, &lexicon, params.width);

  const std::vector<int> ranks = collation_ranks(alphabet);
  const BeamOrder order{&ranks};

  // Beams already sitting on a complete word win outright.
  for (const Beam& beam : beams) {
    if (lexicon.node(beam.node).terminal) {
      return {prefix_to_word(beam.prefix, alphabet), beam.total(), kind};
    }
  }

  // No beam reached a word: complete each beam by greedy trie descent and
  // re-rank. Each added symbol costs the mean per-frame maximum
  // log-probability, the best any symbol could have scored.
  std::vector<double> avg(size_t(m.columns), 0.0);
  double mean_max_lp = 0.0;
  for (int t = 0; t < m.frames; ++t) {
    double row_max = 0.0;
    for (int c = 0; c < m.columns; ++c) {
      avg[size_t(c)] += m.at(t, c);
      row_max = std::max(row_max, m.at(t, c));
    }
    mean_max_lp += safe_log(row_max);
  }
  for (double& a : avg) a /= double(m.frames);
  mean_max_lp /= double(m.frames);

  std::vector<Beam> completed;
  completed.reserve(beams.size());
  for (const Beam& beam : beams) {
    Beam done = beam;
    int node = beam.node;
    int added = 0;
    while (!lexicon.node(node).terminal) {
      const auto& children = lexicon.node(node).children;
      int pick_sym = -1;
      int pick_node = -1;
      for (const auto& [sym, child_node] : children) {
        if (pick_sym < 0 || avg[size_t(sym)] > avg[size_t(pick_sym)] ||
            (avg[size_t(sym)] == avg[size_t(pick_sym)] &&
             ranks[size_t(sym)] < ranks[size_t(pick_sym)])) {
          pick_sym = sym;
          pick_node = child_node;
        }
      }
      done.prefix.push_back(pick_sym);
      node = pick_node;
      ++added;
    }
    done.node = node;
    if (done.p_blank != kNegInf) done.p_blank += added * mean_max_lp;
    if (done.p_symbol != kNegInf) done.p_symbol += added * mean_max_lp;
    completed.push_back(std::move(done));
  }
  std::sort(completed.begin(), completed.end(), order);
  const Beam& best = completed.front();
  return {prefix_to_word(best.prefix, alphabet), best.total(), kind};
}

}  // namespace

Decoded word_beam_search(const EmissionMatrix& m, const Alphabet& alphabet,
                         const Lexicon& lexicon, const BeamParams& params) {
  return wbs_impl(m, alphabet, lexicon, params, DecoderKind::kWordBeamSearch);
}

Decoded constrained_wbs(const EmissionMatrix& m, const Alphabet& alphabet,
                        const Lexicon& lexicon, const BoxRange& range,
                        const BeamParams& params) {
  const Lexicon restricted = lexicon.restrict_to(range);
  if (restricted.empty()) {
    throw DecodeError("decode: no lexicon word falls in range [\"" +
                      word_to_utf8(range.lo) + "\", \"" +
                      word_to_utf8(range.hi) + "\"]" +
                      (range.box_id.empty() ? ""
                                            : " (" + range.box_id + ")"));
  }
  Decoded out = wbs_impl(m, alphabet, restricted, params,
                         DecoderKind::kConstrainedWbs);
  return out;
}

}  // namespace kartoteka
