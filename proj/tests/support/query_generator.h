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

#ifndef SQLTRACE_TESTS_SUPPORT_QUERY_GENERATOR_H_
#define SQLTRACE_TESTS_SUPPORT_QUERY_GENERATOR_H_

#include "sqltrace/catalog.h"
#include "sqltrace/query.h"
#include "sqltrace/random.h"

namespace sqltrace::testing {

struct GeneratorOptions {
  int max_depth = 3;  // nesting of subqueries and set-operation branches
  int max_tables = 3;
  int max_select = 3;
  int max_predicates = 4;
  int clause_permille = 400;  // chance of each optional clause
  bool allow_set_op = true;
};

// Random resolved query within the supported subset, covering every
// clause, operator, operand kind and literal spelling.
Query RandomQuery(const Catalog& catalog, Rng& rng, const GeneratorOptions& options = {});

}  // namespace sqltrace::testing

#endif  // SQLTRACE_TESTS_SUPPORT_QUERY_GENERATOR_H_
