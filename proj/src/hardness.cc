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

#include "sqltrace/hardness.h"

#include <variant>

namespace sqltrace {
namespace {

// Visits the predicates of a condition tree and counts OR connectives.
template <typename Fn>
void Walk(const Condition& c, int& ors, Fn&& visit) {
  if (c.kind == Condition::Kind::kPredicate) {
    visit(c.predicate);
    return;
  }
  if (c.kind == Condition::Kind::kOr) ors += static_cast<int>(c.children.size()) - 1;
  for (const Condition& child : c.children) Walk(child, ors, visit);
}

bool IsAggregated(const ValueUnit& v) { return v.aggregate != Aggregate::kNone; }

}  // namespace

const char* HardnessName(Hardness h) {
  switch (h) {
    case Hardness::kEasy: return "easy";
    case Hardness::kMedium: return "medium";
    case Hardness::kHard: return "hard";
    case Hardness::kExtra: return "extra";
  }
  return "";
}

HardnessComponents CountHardnessComponents(const Query& q) {
  HardnessComponents c;
  int ors = 0;
  int likes = 0;
  int where_conditions = 0;
  int aggregates = 0;
  int nested = 0;

  auto count_nested = [&](const Predicate& p) {
    if (std::holds_alternative<Subquery>(p.rhs)) ++nested;
    if (p.upper && std::holds_alternative<Subquery>(*p.upper)) ++nested;
  };
  if (q.where) {
    Walk(*q.where, ors, [&](const Predicate& p) {
      ++where_conditions;
      if (p.op == CompareOp::kLike || p.op == CompareOp::kNotLike) ++likes;
      if (IsAggregated(p.lhs)) ++aggregates;
      count_nested(p);
    });
  }
  if (q.having) {
    Walk(*q.having, ors, [&](const Predicate& p) {
      if (IsAggregated(p.lhs)) ++aggregates;
      count_nested(p);
    });
  }
  if (q.set_op) ++nested;

  c.component1 = (q.where ? 1 : 0) + (q.group_by.empty() ? 0 : 1) +
                 (q.order_by.empty() ? 0 : 1) + (q.limit ? 1 : 0) +
                 static_cast<int>(q.from.size()) - 1 + ors + likes;
  c.component2 = nested;

  for (const ValueUnit& v : q.select) aggregates += IsAggregated(v) ? 1 : 0;
  for (const OrderItem& item : q.order_by) aggregates += IsAggregated(item.value) ? 1 : 0;
  c.others = (aggregates > 1 ? 1 : 0) + (q.select.size() > 1 ? 1 : 0) +
             (where_conditions > 1 ? 1 : 0) + (q.group_by.size() > 1 ? 1 : 0);
  return c;
}

Hardness ClassifyHardness(const HardnessComponents& c) {
  const int c1 = c.component1, c2 = c.component2, o = c.others;
  if (c1 <= 1 && o == 0 && c2 == 0) return Hardness::kEasy;
  if ((o <= 2 && c1 <= 1 && c2 == 0) || (c1 <= 2 && o < 2 && c2 == 0)) return Hardness::kMedium;
  if ((o > 2 && c1 <= 2 && c2 == 0) || (c1 > 2 && c1 <= 3 && o <= 2 && c2 == 0) ||
      (c1 <= 1 && o == 0 && c2 <= 1)) {
    return Hardness::kHard;
  }
  return Hardness::kExtra;
}

Hardness EvaluateHardness(const Query& query) {
  return ClassifyHardness(CountHardnessComponents(query));
}

}  // namespace sqltrace
