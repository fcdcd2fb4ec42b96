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

#include "sqltrace/error.h"

namespace sqltrace {

const char* ParseErrorKindName(ParseError::Kind kind) {
  switch (kind) {
    case ParseError::Kind::kLex:
      return "lex";
    case ParseError::Kind::kGrammar:
      return "grammar";
    case ParseError::Kind::kResolution:
      return "resolution";
  }
  return "unknown";
}

ParseError::ParseError(Kind kind, std::size_t position, const std::string& message)
    : Error(std::string(ParseErrorKindName(kind)) + " error at offset " +
            std::to_string(position) + ": " + message),
      kind_(kind),
      position_(position),
      detail_(message) {}

}  // namespace sqltrace
