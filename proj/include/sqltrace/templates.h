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

#ifndef SQLTRACE_TEMPLATES_H_
#define SQLTRACE_TEMPLATES_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sqltrace/catalog.h"
#include "sqltrace/query.h"
#include "sqltrace/schema_state.h"

namespace sqltrace {

// SQL edits a follow-up template may apply to the previous query.
enum class Operation {
  kReplaceSelectColumn,
  kAddSelectColumn,
  kAddWherePredicate,
  kReplaceWhereValue,
  kAddOrderBy,
  kAddGroupBy,
  kAddHaving,
  kAddLimit,
  kDropWherePredicate,
  kSwitchTable,
  kNestSubquery,
};
inline constexpr int kOperationCount = 11;

const char* OperationName(Operation op);  // "replace_select_column", ...
std::optional<Operation> OperationFromName(std::string_view name);

// Predicates over the previous query's structured form.
enum class Constraint {
  kHasWhere, kNoWhere,
  kHasGroupBy, kNoGroupBy,
  kHasHaving, kNoHaving,
  kHasOrderBy, kNoOrderBy,
  kHasLimit, kNoLimit,
  kSingleSelect, kMultiSelect,
  kSingleTable, kMultiTable,
  kHasAggregate, kNoAggregate,
  kHasWhereValue,
  kNoSubquery,
  kNoSetOp,
  kNoDistinct,
};

const char* ConstraintName(Constraint c);  // "has_where", ...
std::optional<Constraint> ConstraintFromName(std::string_view name);

struct TypedSlot {
  enum class Type { kColumn, kTable, kValue, kAgg };

  Type type;
  int index;

  bool operator==(const TypedSlot&) const = default;
};

// "[COLUMN0]", "[TABLE1]", ...
std::string TypedSlotText(TypedSlot slot);

struct FollowUpTemplate {
  std::string template_id;
  std::string question_template;
  Operation operation = Operation::kReplaceSelectColumn;
  std::vector<Constraint> constraints;
  // Optional refinements: the comparison of add_where_predicate/add_having
  // and the direction of add_order_by.
  std::optional<CompareOp> comparison;
  std::optional<Direction> direction;
  // Typed slots in order of first appearance in question_template.
  std::vector<TypedSlot> slots;

  bool Mentions(TypedSlot::Type type) const;
};

// Typed slots each operation can fill.
std::vector<TypedSlot> OperationParameters(Operation op);
// Constraints an operation needs to be applicable at all; templates must
// list them.
std::vector<Constraint> RequiredConstraints(Operation op);
// Clauses whose ClauseMap entries the operation may change.
KeywordSet OperationEditSignature(Operation op);

// Parses a template file: a JSON array of
//   {template_id, question_template, operation, constraints: [..],
//    comparison?, direction?}
// Throws DataError naming the offending template_id. An empty file or
// empty array yields no templates and a warning.
std::vector<FollowUpTemplate> ParseTemplates(std::string_view raw,
                                             std::vector<std::string>* warnings = nullptr);
std::vector<FollowUpTemplate> LoadTemplates(const std::string& path,
                                            std::vector<std::string>* warnings = nullptr);

// Summary of the previous query that constraints are evaluated on: the
// clause map plus clause presence and counts of the top-level query.
struct QueryProfile {
  ClauseMap clauses;
  bool has_where = false;
  bool has_group_by = false;
  bool has_having = false;
  bool has_order_by = false;
  bool has_limit = false;
  bool has_set_op = false;
  bool has_subquery = false;
  bool has_aggregate = false;
  bool has_where_value = false;
  bool distinct = false;
  std::size_t select_count = 0;
  std::size_t table_count = 0;
};

QueryProfile ProfileQuery(const Query& query, const Catalog& catalog);
bool EvaluateConstraint(Constraint c, const QueryProfile& profile);
bool CheckConstraints(const FollowUpTemplate& tmpl, const Query& prev, const Catalog& catalog);

}  // namespace sqltrace

#endif  // SQLTRACE_TEMPLATES_H_
