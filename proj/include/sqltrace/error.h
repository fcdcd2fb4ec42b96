//
// Copyright 2026 The sqltrace Authors
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
//

#ifndef SQLTRACE_ERROR_H_
#define SQLTRACE_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sqltrace {

// Base class of every error thrown by the library. The C API maps each
// subclass onto a status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed SQL text or a catalog that violates its invariants.
class ParseError : public Error {
 public:
  enum class Kind { kLex, kGrammar, kResolution };

  ParseError(Kind kind, std::size_t position, const std::string& message);

  Kind kind() const { return kind_; }
  std::size_t position() const { return position_; }
  const std::string& detail() const { return detail_; }

 private:
  Kind kind_;
  std::size_t position_;
  std::string detail_;
};

const char* ParseErrorKindName(ParseError::Kind kind);

// Out-of-range configuration values (lambda, WL iterations, max lengths).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed corpus, template, seed or weight records.
class DataError : public Error {
 public:
  using Error::Error;
};

// Missing or unreadable files.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sqltrace

#endif  // SQLTRACE_ERROR_H_
