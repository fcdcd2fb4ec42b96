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

#include "sqltrace/templates.h"

#include <algorithm>
#include <array>
#include <regex>
#include <set>
#include <utility>

#include "json.hpp"
#include "sqltrace/error.h"

namespace sqltrace {
namespace {

using nlohmann::json;

constexpr std::array<std::pair<Operation, const char*>, kOperationCount> kOperationNames = {{
    {Operation::kReplaceSelectColumn, "replace_select_column"},
    {Operation::kAddSelectColumn, "add_select_column"},
    {Operation::kAddWherePredicate, "add_where_predicate"},
    {Operation::kReplaceWhereValue, "replace_where_value"},
    {Operation::kAddOrderBy, "add_order_by"},
    {Operation::kAddGroupBy, "add_group_by"},
    {Operation::kAddHaving, "add_having"},
    {Operation::kAddLimit, "add_limit"},
    {Operation::kDropWherePredicate, "drop_where_predicate"},
    {Operation::kSwitchTable, "switch_table"},
    {Operation::kNestSubquery, "nest_subquery"},
}};

constexpr std::array<std::pair<Constraint, const char*>, 20> kConstraintNames = {{
    {Constraint::kHasWhere, "has_where"},
    {Constraint::kNoWhere, "no_where"},
    {Constraint::kHasGroupBy, "has_group_by"},
    {Constraint::kNoGroupBy, "no_group_by"},
    {Constraint::kHasHaving, "has_having"},
    {Constraint::kNoHaving, "no_having"},
    {Constraint::kHasOrderBy, "has_order_by"},
    {Constraint::kNoOrderBy, "no_order_by"},
    {Constraint::kHasLimit, "has_limit"},
    {Constraint::kNoLimit, "no_limit"},
    {Constraint::kSingleSelect, "single_select"},
    {Constraint::kMultiSelect, "multi_select"},
    {Constraint::kSingleTable, "single_table"},
    {Constraint::kMultiTable, "multi_table"},
    {Constraint::kHasAggregate, "has_aggregate"},
    {Constraint::kNoAggregate, "no_aggregate"},
    {Constraint::kHasWhereValue, "has_where_value"},
    {Constraint::kNoSubquery, "no_subquery"},
    {Constraint::kNoSetOp, "no_set_op"},
    {Constraint::kNoDistinct, "no_distinct"},
}};

// Pairs of constraints that can never hold together.
constexpr std::array<std::pair<Constraint, Constraint>, 9> kContradictions = {{
    {Constraint::kHasWhere, Constraint::kNoWhere},
    {Constraint::kHasGroupBy, Constraint::kNoGroupBy},
    {Constraint::kHasHaving, Constraint::kNoHaving},
    {Constraint::kHasOrderBy, Constraint::kNoOrderBy},
    {Constraint::kHasLimit, Constraint::kNoLimit},
    {Constraint::kSingleSelect, Constraint::kMultiSelect},
    {Constraint::kSingleTable, Constraint::kMultiTable},
    {Constraint::kHasAggregate, Constraint::kNoAggregate},
    {Constraint::kHasWhereValue, Constraint::kNoWhere},
}};

TypedSlot Slot(TypedSlot::Type type) { return TypedSlot{type, 0}; }

[[noreturn]] void TemplateError(const std::string& id, const std::string& message) {
  throw DataError("template '" + id + "': " + message);
}

bool ConditionHasSubquery(const Condition& c) {
  if (c.kind != Condition::Kind::kPredicate) {
    return std::any_of(c.children.begin(), c.children.end(), ConditionHasSubquery);
  }
  auto is_sub = [](const Operand& o) { return std::holds_alternative<Subquery>(o); };
  return is_sub(c.predicate.rhs) || (c.predicate.upper && is_sub(*c.predicate.upper));
}

bool ConditionHasValue(const Condition& c) {
  if (c.kind != Condition::Kind::kPredicate) {
    return std::any_of(c.children.begin(), c.children.end(), ConditionHasValue);
  }
  return c.predicate.lhs.column.has_value() &&
         std::holds_alternative<Literal>(c.predicate.rhs);
}

FollowUpTemplate ParseOne(const json& entry, std::size_t index) {
  std::string id = "#" + std::to_string(index);
  if (!entry.is_object()) TemplateError(id, "entry must be an object");
  if (auto it = entry.find("template_id"); it != entry.end() && it->is_string()) {
    id = it->get<std::string>();
  } else {
    TemplateError(id, "missing string field 'template_id'");
  }
  FollowUpTemplate t;
  t.template_id = id;

  auto q = entry.find("question_template");
  if (q == entry.end() || !q->is_string()) TemplateError(id, "missing 'question_template'");
  t.question_template = q->get<std::string>();

  auto op = entry.find("operation");
  if (op == entry.end() || !op->is_string()) TemplateError(id, "missing 'operation'");
  auto operation = OperationFromName(op->get<std::string>());
  if (!operation) TemplateError(id, "unknown operation '" + op->get<std::string>() + "'");
  t.operation = *operation;

  auto cs = entry.find("constraints");
  if (cs == entry.end() || !cs->is_array()) TemplateError(id, "missing 'constraints' array");
  for (const json& c : *cs) {
    auto constraint = c.is_string() ? ConstraintFromName(c.get<std::string>()) : std::nullopt;
    if (!constraint) TemplateError(id, "unknown constraint " + c.dump());
    if (std::find(t.constraints.begin(), t.constraints.end(), *constraint) ==
        t.constraints.end()) {
      t.constraints.push_back(*constraint);
    }
  }

  if (auto it = entry.find("comparison"); it != entry.end()) {
    if (t.operation != Operation::kAddWherePredicate && t.operation != Operation::kAddHaving) {
      TemplateError(id, "'comparison' only applies to add_where_predicate and add_having");
    }
    const std::string text = it->is_string() ? it->get<std::string>() : "";
    static constexpr std::array<std::pair<const char*, CompareOp>, 8> kOps = {{
        {"=", CompareOp::kEq}, {"!=", CompareOp::kNe}, {"<", CompareOp::kLt},
        {">", CompareOp::kGt}, {"<=", CompareOp::kLe}, {">=", CompareOp::kGe},
        {"LIKE", CompareOp::kLike}, {"NOT LIKE", CompareOp::kNotLike}}};
    for (const auto& [name, value] : kOps) {
      if (text == name) t.comparison = value;
    }
    if (!t.comparison) TemplateError(id, "unsupported comparison '" + text + "'");
  }
  if (auto it = entry.find("direction"); it != entry.end()) {
    if (t.operation != Operation::kAddOrderBy) {
      TemplateError(id, "'direction' only applies to add_order_by");
    }
    const std::string text = it->is_string() ? it->get<std::string>() : "";
    if (text == "ASC") t.direction = Direction::kAsc;
    else if (text == "DESC") t.direction = Direction::kDesc;
    else TemplateError(id, "direction must be ASC or DESC");
  }

  static const std::regex kSlotPattern(R"(\[(COLUMN|TABLE|VALUE|AGG)(\d+)\])");
  for (auto it = std::sregex_iterator(t.question_template.begin(), t.question_template.end(),
                                      kSlotPattern);
       it != std::sregex_iterator(); ++it) {
    const std::string kind = (*it)[1];
    TypedSlot slot{TypedSlot::Type::kColumn, std::stoi((*it)[2])};
    if (kind == "TABLE") slot.type = TypedSlot::Type::kTable;
    if (kind == "VALUE") slot.type = TypedSlot::Type::kValue;
    if (kind == "AGG") slot.type = TypedSlot::Type::kAgg;
    if (std::find(t.slots.begin(), t.slots.end(), slot) == t.slots.end()) t.slots.push_back(slot);
  }

  const auto params = OperationParameters(t.operation);
  for (const TypedSlot& slot : t.slots) {
    if (std::find(params.begin(), params.end(), slot) == params.end()) {
      TemplateError(id, "typed slot " + TypedSlotText(slot) + " is not used by operation " +
                            OperationName(t.operation));
    }
  }
  if (t.Mentions(TypedSlot::Type::kAgg) && !t.Mentions(TypedSlot::Type::kColumn)) {
    TemplateError(id, "[AGG0] needs a [COLUMN0] to aggregate");
  }
  for (Constraint required : RequiredConstraints(t.operation)) {
    if (std::find(t.constraints.begin(), t.constraints.end(), required) == t.constraints.end()) {
      TemplateError(id, std::string("operation ") + OperationName(t.operation) +
                            " requires constraint " + ConstraintName(required));
    }
  }
  auto has = [&](Constraint c) {
    return std::find(t.constraints.begin(), t.constraints.end(), c) != t.constraints.end();
  };
  for (const auto& [a, b] : kContradictions) {
    if (has(a) && has(b)) {
      TemplateError(id, std::string("contradictory constraints ") + ConstraintName(a) + " and " +
                            ConstraintName(b));
    }
  }
  return t;
}

}  // namespace

const char* OperationName(Operation op) {
  for (const auto& [value, name] : kOperationNames) {
    if (value == op) return name;
  }
  return "";
}

std::optional<Operation> OperationFromName(std::string_view name) {
  for (const auto& [value, text] : kOperationNames) {
    if (name == text) return value;
  }
  return std::nullopt;
}

const char* ConstraintName(Constraint c) {
  for (const auto& [value, name] : kConstraintNames) {
    if (value == c) return name;
  }
  return "";
}

std::optional<Constraint> ConstraintFromName(std::string_view name) {
  for (const auto& [value, text] : kConstraintNames) {
    if (name == text) return value;
  }
  return std::nullopt;
}

std::string TypedSlotText(TypedSlot slot) {
  const char* kind = "COLUMN";
  switch (slot.type) {
    case TypedSlot::Type::kColumn: kind = "COLUMN"; break;
    case TypedSlot::Type::kTable: kind = "TABLE"; break;
    case TypedSlot::Type::kValue: kind = "VALUE"; break;
    case TypedSlot::Type::kAgg: kind = "AGG"; break;
  }
  return "[" + std::string(kind) + std::to_string(slot.index) + "]";
}

bool FollowUpTemplate::Mentions(TypedSlot::Type type) const {
  return std::any_of(slots.begin(), slots.end(),
                     [&](const TypedSlot& s) { return s.type == type; });
}

std::vector<TypedSlot> OperationParameters(Operation op) {
  using T = TypedSlot::Type;
  switch (op) {
    case Operation::kReplaceSelectColumn: return {Slot(T::kColumn)};
    case Operation::kAddSelectColumn: return {Slot(T::kColumn), Slot(T::kAgg)};
    case Operation::kAddWherePredicate: return {Slot(T::kColumn), Slot(T::kValue)};
    case Operation::kReplaceWhereValue: return {Slot(T::kColumn), Slot(T::kValue)};
    case Operation::kAddOrderBy: return {Slot(T::kColumn), Slot(T::kAgg)};
    case Operation::kAddGroupBy: return {Slot(T::kColumn)};
    case Operation::kAddHaving: return {Slot(T::kAgg), Slot(T::kColumn), Slot(T::kValue)};
    case Operation::kAddLimit: return {Slot(T::kValue)};
    case Operation::kDropWherePredicate: return {Slot(T::kColumn)};
    case Operation::kSwitchTable: return {Slot(T::kTable), Slot(T::kColumn)};
    case Operation::kNestSubquery: return {Slot(T::kColumn), Slot(T::kTable)};
  }
  return {};
}

std::vector<Constraint> RequiredConstraints(Operation op) {
  switch (op) {
    case Operation::kReplaceSelectColumn: return {Constraint::kSingleSelect};
    case Operation::kReplaceWhereValue: return {Constraint::kHasWhereValue};
    case Operation::kAddOrderBy: return {Constraint::kNoOrderBy};
    case Operation::kAddGroupBy: return {Constraint::kNoGroupBy};
    case Operation::kAddHaving: return {Constraint::kHasGroupBy, Constraint::kNoHaving};
    case Operation::kAddLimit: return {Constraint::kNoLimit};
    case Operation::kDropWherePredicate: return {Constraint::kHasWhere};
    case Operation::kSwitchTable: return {Constraint::kSingleTable};
    case Operation::kAddSelectColumn:
    case Operation::kAddWherePredicate:
    case Operation::kNestSubquery:
      return {};
  }
  return {};
}

KeywordSet OperationEditSignature(Operation op) {
  using K = Keyword;
  switch (op) {
    case Operation::kReplaceSelectColumn:
    case Operation::kAddSelectColumn: return {K::kSelect};
    case Operation::kAddWherePredicate:
    case Operation::kDropWherePredicate: return {K::kWhere};
    case Operation::kReplaceWhereValue:
    case Operation::kAddLimit: return {};
    case Operation::kAddOrderBy: return {K::kOrderBy};
    case Operation::kAddGroupBy: return {K::kSelect, K::kGroupBy};
    case Operation::kAddHaving: return {K::kHaving};
    case Operation::kSwitchTable:
      return {K::kSelect, K::kFrom, K::kJoin, K::kWhere, K::kGroupBy, K::kHaving, K::kOrderBy};
    case Operation::kNestSubquery: return {K::kWhere, K::kSelect, K::kFrom};
  }
  return {};
}

std::vector<FollowUpTemplate> ParseTemplates(std::string_view raw,
                                             std::vector<std::string>* warnings) {
  const bool blank = std::all_of(raw.begin(), raw.end(), [](char c) {
    return c == ' ' || c == '\n' || c == '\r' || c == '\t';
  });
  std::vector<FollowUpTemplate> out;
  if (blank) {
    if (warnings) warnings->push_back("template file is empty");
    return out;
  }
  json doc;
  try {
    doc = json::parse(raw);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("template file is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw DataError("template file must contain a JSON array");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    FollowUpTemplate t = ParseOne(doc[i], i);
    if (!ids.insert(t.template_id).second) TemplateError(t.template_id, "duplicate template_id");
    out.push_back(std::move(t));
  }
  if (out.empty() && warnings) warnings->push_back("template file contains no templates");
  return out;
}

std::vector<FollowUpTemplate> LoadTemplates(const std::string& path,
                                            std::vector<std::string>* warnings) {
  return ParseTemplates(ReadFileOrThrow(path), warnings);
}

QueryProfile ProfileQuery(const Query& query, const Catalog& catalog) {
  QueryProfile p;
  p.clauses = ExtractClauseMap(query, catalog);
  p.has_where = query.where.has_value();
  p.has_group_by = !query.group_by.empty();
  p.has_having = query.having.has_value();
  p.has_order_by = !query.order_by.empty();
  p.has_limit = query.limit.has_value();
  p.has_set_op = query.set_op.has_value();
  p.has_subquery = (query.where && ConditionHasSubquery(*query.where)) ||
                   (query.having && ConditionHasSubquery(*query.having));
  p.has_aggregate = std::any_of(query.select.begin(), query.select.end(), [](const ValueUnit& v) {
    return v.aggregate != Aggregate::kNone;
  });
  p.has_where_value = query.where && ConditionHasValue(*query.where);
  p.distinct = query.distinct;
  p.select_count = query.select.size();
  p.table_count = query.from.size();
  return p;
}

bool EvaluateConstraint(Constraint c, const QueryProfile& p) {
  switch (c) {
    case Constraint::kHasWhere: return p.has_where;
    case Constraint::kNoWhere: return !p.has_where;
    case Constraint::kHasGroupBy: return p.has_group_by;
    case Constraint::kNoGroupBy: return !p.has_group_by;
    case Constraint::kHasHaving: return p.has_having;
    case Constraint::kNoHaving: return !p.has_having;
    case Constraint::kHasOrderBy: return p.has_order_by;
    case Constraint::kNoOrderBy: return !p.has_order_by;
    case Constraint::kHasLimit: return p.has_limit;
    case Constraint::kNoLimit: return !p.has_limit;
    case Constraint::kSingleSelect: return p.select_count == 1;
    case Constraint::kMultiSelect: return p.select_count > 1;
    case Constraint::kSingleTable: return p.table_count == 1;
    case Constraint::kMultiTable: return p.table_count > 1;
    case Constraint::kHasAggregate: return p.has_aggregate;
    case Constraint::kNoAggregate: return !p.has_aggregate;
    case Constraint::kHasWhereValue: return p.has_where_value;
    case Constraint::kNoSubquery: return !p.has_subquery;
    case Constraint::kNoSetOp: return !p.has_set_op;
    case Constraint::kNoDistinct: return !p.distinct;
  }
  return false;
}

bool CheckConstraints(const FollowUpTemplate& tmpl, const Query& prev, const Catalog& catalog) {
  const QueryProfile profile = ProfileQuery(prev, catalog);
  return std::all_of(tmpl.constraints.begin(), tmpl.constraints.end(),
                     [&](Constraint c) { return EvaluateConstraint(c, profile); });
}

}  // namespace sqltrace
