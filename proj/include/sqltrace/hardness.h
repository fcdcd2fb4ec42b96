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

#ifndef SQLTRACE_HARDNESS_H_
#define SQLTRACE_HARDNESS_H_

#include <optional>
#include <string_view>

#include "sqltrace/query.h"

namespace sqltrace {

enum class Hardness { kEasy, kMedium, kHard, kExtra };
inline constexpr int kHardnessCount = 4;

const char* HardnessName(Hardness h);  // "easy", "medium", "hard", "extra"

// Component counts of the Spider difficulty heuristic, taken over the
// top-level query only.
struct HardnessComponents {
  int component1 = 0;  // WHERE, GROUP BY, ORDER BY, LIMIT, joins, ORs, LIKEs
  int component2 = 0;  // nested queries: subqueries and set operations
  int others = 0;      // >1 aggregate, >1 select item, >1 WHERE condition, >1 group key
};

HardnessComponents CountHardnessComponents(const Query& query);
Hardness ClassifyHardness(const HardnessComponents& c);
Hardness EvaluateHardness(const Query& query);

}  // namespace sqltrace

#endif  // SQLTRACE_HARDNESS_H_
