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

#ifndef KARTOTEKA_UNICODE_HPP_
#define KARTOTEKA_UNICODE_HPP_

#include <string>
#include <string_view>

namespace kartoteka {

// All labels, words and ranges are sequences of Unicode scalar values.
// UTF-8 appears only at file and CLI boundaries. Input is assumed to be
// NFC-normalized; no normalization is performed here.
using Word = std::u32string;

// Decodes UTF-8. Throws ValidationError on malformed input (truncated or
// overlong sequences, surrogates, out-of-range scalars).
Word utf8_to_word(std::string_view utf8);

std::string word_to_utf8(std::u32string_view word);

// Simple one-to-one lowercasing for Basic Latin, Latin-1 Supplement and
// Latin Extended-A. Code points outside those blocks pass through.
char32_t simple_lower(char32_t c);

}  // namespace kartoteka

#endif  // KARTOTEKA_UNICODE_HPP_
