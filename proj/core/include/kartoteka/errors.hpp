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

#ifndef KARTOTEKA_ERRORS_HPP_
#define KARTOTEKA_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace kartoteka {

// Bad or inconsistent input: malformed files, words outside the alphabet,
// inverted ranges, violated preconditions. The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what_arg)
      : std::runtime_error(what_arg) {}
};

// Failures while decoding: empty constrained lexicon, matrix/alphabet
// mismatch, unreadable emission matrix. The CLI maps this to exit code 3.
class DecodeError : public std::runtime_error {
 public:
  explicit DecodeError(const std::string& what_arg)
      : std::runtime_error(what_arg) {}
};

}  // namespace kartoteka

#endif  // KARTOTEKA_ERRORS_HPP_
