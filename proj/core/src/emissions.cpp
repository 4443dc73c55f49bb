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

#include "kartoteka/emissions.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "kartoteka/errors.hpp"
#include "kartoteka/rng.hpp"

namespace kartoteka {

namespace {

constexpr double kRowSumTolerance = 1e-6;

bool confusable(const Alphabet& a, char32_t x, char32_t y) {
  if (x == Alphabet::kBlankSymbol || y == Alphabet::kBlankSymbol) return false;
  const auto bx = a.base_letter(x);
  const auto by = a.base_letter(y);
  return (bx.has_value() && *bx == y) || (by.has_value() && *by == x);
}

std::string cell_to_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

[[noreturn]] void parse_fail(std::string_view origin, size_t line,
                             const std::string& message) {
  throw ValidationError(std::string(origin) + ":" + std::to_string(line) +
                        ": " + message);
}

}  // namespace

bool EmissionMatrix::matches(const Alphabet& alphabet) const {
  if (columns != alphabet.size()) return false;
  for (int c = 0; c < columns; ++c) {
    if (symbols[size_t(c)] != alphabet.symbol(c)) return false;
  }
  return true;
}

EmissionMatrix synthesize_emissions(const Word& label,
                                    const Alphabet& alphabet,
                                    const NoiseParams& params) {
  if (label.empty()) {
    throw ValidationError("emissions: cannot synthesize an empty label");
  }
  require_in_alphabet(label, alphabet, "emissions");
  if (!(params.epsilon >= 0.0 && params.epsilon < 1.0)) {
    throw ValidationError("emissions: epsilon must lie in [0, 1), got " +
                          cell_to_text(params.epsilon));
  }
  if (params.frames_per_char < 1) {
    throw ValidationError("emissions: frames_per_char must be >= 1");
  }
  if (!(params.confusion_boost >= 1.0)) {
    throw ValidationError("emissions: confusion_boost must be >= 1");
  }

  const int columns = alphabet.size();
  // A run is a stretch of frames sharing one target symbol: the character
  // runs, plus one-frame blank separators between equal adjacent chars.
  struct Run {
    int target;  // column index
    int frames;
  };
  std::vector<Run> runs;
  for (size_t i = 0; i < label.size(); ++i) {
    if (i > 0 && label[i] == label[i - 1]) {
      runs.push_back({Alphabet::kBlankIndex, 1});
    }
    runs.push_back({*alphabet.index_of(label[i]), params.frames_per_char});
  }

  EmissionMatrix m;
  m.columns = columns;
  m.symbols.resize(size_t(columns));
  for (int c = 0; c < columns; ++c) m.symbols[size_t(c)] = alphabet.symbol(c);
  for (const Run& run : runs) m.frames += run.frames;
  m.p.assign(size_t(m.frames) * size_t(columns), 0.0);

  Rng rng(params.seed);
  std::vector<double> weights(size_t(columns), 0.0);
  int t = 0;
  for (const Run& run : runs) {
    const char32_t target_sym = alphabet.symbol(run.target);
    int peak = run.target;
    if (params.epsilon > 0.0 && rng.next_double() < params.epsilon) {
      // The run misfires: its peak moves to another symbol, confusable
      // symbols drawing boosted weight.
      for (int c = 0; c < columns; ++c) {
        if (c == run.target) {
          weights[size_t(c)] = 0.0;
        } else {
          weights[size_t(c)] =
              confusable(alphabet, alphabet.symbol(c), target_sym)
                  ? params.confusion_boost
                  : 1.0;
        }
      }
      peak = int(rng.next_categorical(weights));
    }

    double z = 0.0;
    for (int c = 0; c < columns; ++c) {
      if (c == peak) {
        weights[size_t(c)] = 0.0;
        continue;
      }
      const char32_t sym = alphabet.symbol(c);
      weights[size_t(c)] =
          (c == run.target || confusable(alphabet, sym, target_sym))
              ? params.confusion_boost
              : 1.0;
      z += weights[size_t(c)];
    }
    for (int f = 0; f < run.frames; ++f, ++t) {
      m.at(t, peak) = 1.0 - params.epsilon;
      if (params.epsilon > 0.0) {
        for (int c = 0; c < columns; ++c) {
          if (c != peak) m.at(t, c) = params.epsilon * weights[size_t(c)] / z;
        }
      }
    }
  }
  return m;
}

ValidationReport validate(const EmissionMatrix& m) {
  ValidationReport r;
  if (m.frames < 1) {
    return {false, -1, "matrix has no frames"};
  }
  if (m.columns < 2) {
    return {false, -1, "matrix needs the blank column plus at least one "
                       "writable symbol"};
  }
  if (m.symbols.size() != size_t(m.columns)) {
    return {false, -1, "symbol row length disagrees with the column count"};
  }
  if (m.symbols[0] != Alphabet::kBlankSymbol) {
    return {false, -1, "column 0 is not the blank"};
  }
  if (m.p.size() != size_t(m.frames) * size_t(m.columns)) {
    return {false, -1, "cell buffer size disagrees with the declared shape"};
  }
  for (int t = 0; t < m.frames; ++t) {
    double sum = 0.0;
    for (int c = 0; c < m.columns; ++c) {
      const double v = m.at(t, c);
      if (!(v >= 0.0 && v <= 1.0)) {
        return {false, t, "cell (" + std::to_string(t) + ", " +
                              std::to_string(c) + ") = " + cell_to_text(v) +
                              " outside [0, 1]"};
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      return {false, t, "row " + std::to_string(t) + " sums to " +
                            cell_to_text(sum)};
    }
  }
  return r;
}

void save_emat(const EmissionMatrix& m, std::ostream& out) {
  const ValidationReport v = validate(m);
  if (!v.ok) {
    throw ValidationError("emat: refusing to save an invalid matrix: " +
                          v.message);
  }
  out << "EMAT 1\n";
  out << "T " << m.frames << " C " << m.columns << "\n";
  for (int c = 0; c < m.columns; ++c) {
    if (c > 0) out << ' ';
    out << (c == 0 ? std::string("-")
                   : word_to_utf8(Word(1, m.symbols[size_t(c)])));
  }
  out << '\n';
  for (int t = 0; t < m.frames; ++t) {
    for (int c = 0; c < m.columns; ++c) {
      if (c > 0) out << ' ';
      out << cell_to_text(m.at(t, c));
    }
    out << '\n';
  }
}

void save_emat_file(const EmissionMatrix& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ValidationError("emat: cannot write file " + path);
  }
  save_emat(m, out);
  out.flush();
  if (!out) {
    throw ValidationError("emat: failed while writing " + path);
  }
}

EmissionMatrix load_emat(std::istream& in, std::string_view origin) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  // Drop trailing empty lines so a final newline is not a phantom row.
  while (!lines.empty() && lines.back().empty()) lines.pop_back();

  if (lines.empty() || lines[0] != "EMAT 1") {
    parse_fail(origin, 1, "expected header \"EMAT 1\"");
  }
  if (lines.size() < 2) parse_fail(origin, 2, "missing shape line");
  int frames = 0;
  int columns = 0;
  {
    std::istringstream ss(lines[1]);
    std::string t_tag, c_tag;
    if (!(ss >> t_tag >> frames >> c_tag >> columns) || t_tag != "T" ||
        c_tag != "C" || (ss >> t_tag)) {
      parse_fail(origin, 2, "expected \"T <frames> C <columns>\", got \"" +
                                lines[1] + "\"");
    }
  }
  if (frames < 1) parse_fail(origin, 2, "frame count must be >= 1");
  if (columns < 2) parse_fail(origin, 2, "column count must be >= 2");

  if (lines.size() < 3) parse_fail(origin, 3, "missing symbol line");
  EmissionMatrix m;
  m.frames = frames;
  m.columns = columns;
  {
    std::istringstream ss(lines[2]);
    std::string tok;
    while (ss >> tok) {
      if (m.symbols.empty()) {
        if (tok != "-") {
          parse_fail(origin, 3, "column 0 must be the blank marker '-'");
        }
        m.symbols.push_back(Alphabet::kBlankSymbol);
        continue;
      }
      if (tok == "-") {
        parse_fail(origin, 3, "blank marker '-' outside column 0");
      }
      const Word w = utf8_to_word(tok);
      if (w.size() != 1) {
        parse_fail(origin, 3, "symbol token \"" + tok +
                                  "\" is not a single character");
      }
      m.symbols.push_back(w[0]);
    }
    if (m.symbols.size() != size_t(columns)) {
      parse_fail(origin, 3, "expected " + std::to_string(columns) +
                                " symbols, got " +
                                std::to_string(m.symbols.size()));
    }
    for (size_t i = 1; i < m.symbols.size(); ++i) {
      for (size_t j = i + 1; j < m.symbols.size(); ++j) {
        if (m.symbols[i] == m.symbols[j]) {
          parse_fail(origin, 3, "duplicate symbol \"" +
                                    word_to_utf8(Word(1, m.symbols[i])) +
                                    "\"");
        }
      }
    }
  }

  if (lines.size() != size_t(3 + frames)) {
    parse_fail(origin, lines.size() >= size_t(3 + frames)
                           ? size_t(4 + frames)
                           : lines.size() + 1,
               "expected " + std::to_string(frames) + " data rows, got " +
                   std::to_string(lines.size() - 3));
  }
  m.p.resize(size_t(frames) * size_t(columns));
  for (int t = 0; t < frames; ++t) {
    const std::string& row = lines[size_t(3 + t)];
    const char* ptr = row.c_str();
    for (int c = 0; c < columns; ++c) {
      char* end = nullptr;
      const double v = std::strtod(ptr, &end);
      if (end == ptr) {
        parse_fail(origin, size_t(4 + t), "row " + std::to_string(t) +
                                              ": expected " +
                                              std::to_string(columns) +
                                              " numeric cells");
      }
      m.at(t, c) = v;
      ptr = end;
    }
    while (*ptr == ' ') ++ptr;
    if (*ptr != '\0') {
      parse_fail(origin, size_t(4 + t),
                 "row " + std::to_string(t) + ": trailing content \"" +
                     std::string(ptr) + "\"");
    }
  }

  const ValidationReport v = validate(m);
  if (!v.ok) {
    const size_t line_no = v.row >= 0 ? size_t(4 + v.row) : 2;
    parse_fail(origin, line_no, v.message);
  }
  return m;
}

EmissionMatrix load_emat_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("emat: cannot open file " + path);
  }
  return load_emat(in, path);
}

}  // namespace kartoteka
