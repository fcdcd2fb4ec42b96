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

#ifndef SQLTRACE_SQL_PARSER_H_
#define SQLTRACE_SQL_PARSER_H_

#include <string_view>

#include "sqltrace/catalog.h"
#include "sqltrace/query.h"

namespace sqltrace {

// Upper bound on subquery nesting accepted by the parser.
inline constexpr int kMaxNestingDepth = 8;

// Parses one query of the Spider subset and resolves it against `catalog`.
//
// Keywords and identifiers are case-insensitive. Table aliases
// (`FROM cars AS T1`) are resolved and dropped; a table may appear at most
// once per FROM clause. An optional trailing ';' is accepted.
//
// Throws ParseError with kind kLex (illegal character, unterminated string),
// kGrammar (clause structure) or kResolution (unknown or ambiguous names);
// the position is a byte offset into `text`.
Query ParseSql(std::string_view text, const Catalog& catalog);

}  // namespace sqltrace

#endif  // SQLTRACE_SQL_PARSER_H_
