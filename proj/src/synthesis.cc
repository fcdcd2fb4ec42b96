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

#include "sqltrace/synthesis.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "sqltrace/error.h"
#include "sqltrace/sql_parser.h"

namespace sqltrace {
namespace {

constexpr std::array<Aggregate, 5> kAggregates = {Aggregate::kCount, Aggregate::kSum,
                                                  Aggregate::kAvg, Aggregate::kMin,
                                                  Aggregate::kMax};

constexpr std::array<const char*, 12> kTextValues = {
    "Paris", "Smith", "red", "Alpha", "USA", "John",
    "London", "blue", "Beta", "Tokyo", "Green", "Maria"};

template <typename T>
std::optional<T> Pick(const std::vector<T>& candidates, const std::optional<T>& fixed, Rng& rng) {
  if (candidates.empty()) return std::nullopt;
  if (fixed) {
    if (std::find(candidates.begin(), candidates.end(), *fixed) == candidates.end()) {
      return std::nullopt;
    }
    return fixed;
  }
  return candidates[rng.Uniform(candidates.size())];
}

std::vector<ColumnId> ColumnsOf(const Catalog& catalog, int table) {
  std::vector<ColumnId> out;
  const int n = static_cast<int>(catalog.table(table).columns.size());
  for (int c = 0; c < n; ++c) out.push_back({table, c});
  return out;
}

std::vector<ColumnId> ColumnsInFrom(const Query& q, const Catalog& catalog) {
  std::vector<ColumnId> out;
  for (const FromTable& from : q.from) {
    for (ColumnId id : ColumnsOf(catalog, from.table)) out.push_back(id);
  }
  return out;
}

bool NeedsNumeric(Aggregate a) { return a == Aggregate::kSum || a == Aggregate::kAvg; }
bool IsOrdering(CompareOp op) {
  return op == CompareOp::kLt || op == CompareOp::kGt || op == CompareOp::kLe ||
         op == CompareOp::kGe;
}
bool IsLike(CompareOp op) { return op == CompareOp::kLike || op == CompareOp::kNotLike; }

Literal SampleValue(const Catalog& catalog, ColumnId column, CompareOp op, Rng& rng) {
  if (!IsLike(op) && catalog.IsNumeric(column)) {
    return Literal{std::to_string(rng.UniformInt(1, 100))};
  }
  const std::string word = kTextValues[rng.Uniform(kTextValues.size())];
  if (IsLike(op)) return Literal{"'%" + word + "%'"};
  return Literal{"'" + word + "'"};
}

std::string LiteralNatural(const Literal& literal) {
  std::string out;
  for (char c : literal.text) {
    if (c != '\'' && c != '"' && c != '%') out += c;
  }
  return out;
}

const char* AggregateNatural(Aggregate a) {
  switch (a) {
    case Aggregate::kCount: return "number of";
    case Aggregate::kSum: return "total";
    case Aggregate::kAvg: return "average";
    case Aggregate::kMin: return "minimum";
    case Aggregate::kMax: return "maximum";
    case Aggregate::kNone: return "";
  }
  return "";
}

void ReplaceAll(std::string& text, const std::string& from, const std::string& to) {
  for (std::size_t at = text.find(from); at != std::string::npos;
       at = text.find(from, at + to.size())) {
    text.replace(at, from.size(), to);
  }
}

void AndInto(Query& q, Predicate p) {
  Condition leaf = Condition::Leaf(std::move(p));
  q.where = q.where ? Condition::Combine(Condition::Kind::kAnd, std::move(*q.where), std::move(leaf))
                    : std::move(leaf);
}

bool HasSubquery(const Condition& c) {
  if (c.kind != Condition::Kind::kPredicate) {
    return std::any_of(c.children.begin(), c.children.end(), HasSubquery);
  }
  auto sub = [](const Operand& o) { return std::holds_alternative<Subquery>(o); };
  return sub(c.predicate.rhs) || (c.predicate.upper && sub(*c.predicate.upper));
}

void CollectPredicates(Condition& c, std::vector<Predicate*>& out) {
  if (c.kind == Condition::Kind::kPredicate) {
    out.push_back(&c.predicate);
    return;
  }
  for (Condition& child : c.children) CollectPredicates(child, out);
}

std::optional<ColumnId> FirstLhsColumn(const Condition& c) {
  if (c.kind == Condition::Kind::kPredicate) return c.predicate.lhs.column;
  for (const Condition& child : c.children) {
    if (auto column = FirstLhsColumn(child)) return column;
  }
  return std::nullopt;
}

bool WhereMentionsLhs(const Query& q, ColumnId column) {
  if (!q.where) return false;
  std::vector<Predicate*> predicates;
  Condition copy = *q.where;
  CollectPredicates(copy, predicates);
  return std::any_of(predicates.begin(), predicates.end(),
                     [&](const Predicate* p) { return p->lhs.column == column; });
}

// Picks an aggregate (when the template mentions one) and a column that is
// compatible with it.
struct AggregateChoice {
  Aggregate aggregate = Aggregate::kNone;
  ColumnId column;
};

std::optional<AggregateChoice> PickAggregated(const FollowUpTemplate& tmpl,
                                              const std::vector<ColumnId>& columns,
                                              const Catalog& catalog, const SlotBindings& fixed,
                                              Rng& rng,
                                              const std::function<bool(const ValueUnit&)>& used) {
  AggregateChoice choice;
  if (tmpl.Mentions(TypedSlot::Type::kAgg)) {
    std::vector<Aggregate> aggs(kAggregates.begin(), kAggregates.end());
    auto agg = Pick(aggs, fixed.aggregate, rng);
    if (!agg) return std::nullopt;
    choice.aggregate = *agg;
  }
  std::vector<ColumnId> candidates;
  for (ColumnId id : columns) {
    if (NeedsNumeric(choice.aggregate) && !catalog.IsNumeric(id)) continue;
    ValueUnit v;
    v.aggregate = choice.aggregate;
    v.column = id;
    if (!used(v)) candidates.push_back(id);
  }
  auto column = Pick(candidates, fixed.column, rng);
  if (!column) return std::nullopt;
  choice.column = *column;
  return choice;
}

std::optional<Instantiation> Apply(const FollowUpTemplate& tmpl, const Query& prev,
                                   const Catalog& catalog, const SlotBindings& fixed, Rng& rng) {
  Instantiation out;
  out.next = prev;
  Query& next = out.next;
  SlotBindings& b = out.bindings;
  const std::vector<ColumnId> columns = ColumnsInFrom(prev, catalog);

  switch (tmpl.operation) {
    case Operation::kReplaceSelectColumn: {
      if (prev.select.size() != 1) return std::nullopt;
      std::vector<ColumnId> candidates;
      for (ColumnId id : columns) {
        if (prev.select[0].column != id) candidates.push_back(id);
      }
      b.column = Pick(candidates, fixed.column, rng);
      if (!b.column) return std::nullopt;
      next.select[0] = ValueUnit{Aggregate::kNone, false, b.column};
      break;
    }
    case Operation::kAddSelectColumn: {
      auto used = [&](const ValueUnit& v) {
        return std::find(prev.select.begin(), prev.select.end(), v) != prev.select.end();
      };
      auto choice = PickAggregated(tmpl, columns, catalog, fixed, rng, used);
      if (!choice) return std::nullopt;
      b.column = choice->column;
      if (choice->aggregate != Aggregate::kNone) b.aggregate = choice->aggregate;
      next.select.push_back(ValueUnit{choice->aggregate, false, choice->column});
      break;
    }
    case Operation::kAddWherePredicate: {
      const CompareOp op = tmpl.comparison.value_or(CompareOp::kEq);
      std::vector<ColumnId> candidates;
      for (ColumnId id : columns) {
        if (IsOrdering(op) && !catalog.IsNumeric(id)) continue;
        if (IsLike(op) && catalog.IsNumeric(id)) continue;
        if (WhereMentionsLhs(prev, id)) continue;
        candidates.push_back(id);
      }
      b.column = Pick(candidates, fixed.column, rng);
      if (!b.column) return std::nullopt;
      b.value = fixed.value ? *fixed.value : SampleValue(catalog, *b.column, op, rng);
      Predicate p;
      p.lhs.column = b.column;
      p.op = op;
      p.rhs = *b.value;
      AndInto(next, std::move(p));
      break;
    }
    case Operation::kReplaceWhereValue: {
      if (!next.where) return std::nullopt;
      std::vector<Predicate*> predicates;
      CollectPredicates(*next.where, predicates);
      std::vector<Predicate*> eligible;
      for (Predicate* p : predicates) {
        if (!p->lhs.column || !std::holds_alternative<Literal>(p->rhs)) continue;
        if (p->op == CompareOp::kBetween) continue;
        if (fixed.column && p->lhs.column != fixed.column) continue;
        eligible.push_back(p);
      }
      if (eligible.empty()) return std::nullopt;
      Predicate* target = eligible[rng.Uniform(eligible.size())];
      b.column = target->lhs.column;
      const Literal old = std::get<Literal>(target->rhs);
      std::optional<Literal> fresh = fixed.value;
      for (int attempt = 0; !fresh && attempt < 8; ++attempt) {
        Literal sampled = SampleValue(catalog, *b.column, target->op, rng);
        if (sampled != old) fresh = sampled;
      }
      if (!fresh || *fresh == old) return std::nullopt;
      b.value = fresh;
      target->rhs = *fresh;
      break;
    }
    case Operation::kAddOrderBy: {
      if (!prev.order_by.empty()) return std::nullopt;
      auto choice = PickAggregated(tmpl, columns, catalog, fixed, rng,
                                   [](const ValueUnit&) { return false; });
      if (!choice) return std::nullopt;
      b.column = choice->column;
      if (choice->aggregate != Aggregate::kNone) b.aggregate = choice->aggregate;
      OrderItem item;
      item.value = ValueUnit{choice->aggregate, false, choice->column};
      item.direction = tmpl.direction.value_or(Direction::kAsc);
      next.order_by = {item};
      break;
    }
    case Operation::kAddGroupBy: {
      if (!prev.group_by.empty()) return std::nullopt;
      b.column = Pick(columns, fixed.column, rng);
      if (!b.column) return std::nullopt;
      next.distinct = false;
      next.select = {ValueUnit{Aggregate::kNone, false, b.column},
                     ValueUnit{Aggregate::kCount, false, std::nullopt}};
      next.group_by = {*b.column};
      break;
    }
    case Operation::kAddHaving: {
      if (prev.group_by.empty() || prev.having) return std::nullopt;
      Predicate p;
      p.op = tmpl.comparison.value_or(CompareOp::kGt);
      if (tmpl.Mentions(TypedSlot::Type::kAgg)) {
        auto choice = PickAggregated(tmpl, columns, catalog, fixed, rng,
                                     [](const ValueUnit&) { return false; });
        if (!choice) return std::nullopt;
        b.aggregate = choice->aggregate;
        b.column = choice->column;
        p.lhs = ValueUnit{choice->aggregate, false, choice->column};
      } else {
        p.lhs.aggregate = Aggregate::kCount;
        if (tmpl.Mentions(TypedSlot::Type::kColumn)) {
          b.column = Pick(columns, fixed.column, rng);
          if (!b.column) return std::nullopt;
          p.lhs.column = b.column;
        }
        b.aggregate = Aggregate::kCount;
      }
      if (fixed.value) {
        b.value = fixed.value;
      } else if (p.lhs.aggregate == Aggregate::kCount) {
        b.value = Literal{std::to_string(rng.UniformInt(1, 10))};
      } else {
        b.value = Literal{std::to_string(rng.UniformInt(1, 100))};
      }
      p.rhs = *b.value;
      next.having = Condition::Leaf(std::move(p));
      break;
    }
    case Operation::kAddLimit: {
      if (prev.limit) return std::nullopt;
      b.value = fixed.value ? *fixed.value : Literal{std::to_string(rng.UniformInt(1, 10))};
      std::int64_t limit = 0;
      const std::string& text = b.value->text;
      const auto* end = text.data() + text.size();
      if (std::from_chars(text.data(), end, limit).ptr != end || limit < 0) return std::nullopt;
      next.limit = limit;
      break;
    }
    case Operation::kDropWherePredicate: {
      if (!prev.where) return std::nullopt;
      const Condition& where = *prev.where;
      std::vector<std::size_t> eligible;
      const auto matches = [&](const Condition& c) {
        if (HasSubquery(c)) return false;
        const auto column = FirstLhsColumn(c);
        if (tmpl.Mentions(TypedSlot::Type::kColumn) && !column) return false;
        return !fixed.column || column == fixed.column;
      };
      if (where.kind == Condition::Kind::kPredicate) {
        if (!matches(where)) return std::nullopt;
        b.column = FirstLhsColumn(where);
        next.where.reset();
      } else {
        for (std::size_t i = 0; i < where.children.size(); ++i) {
          if (matches(where.children[i])) eligible.push_back(i);
        }
        if (eligible.empty()) return std::nullopt;
        const std::size_t drop = eligible[rng.Uniform(eligible.size())];
        b.column = FirstLhsColumn(where.children[drop]);
        Condition rest = where;
        rest.children.erase(rest.children.begin() + static_cast<std::ptrdiff_t>(drop));
        if (rest.children.size() == 1) {
          Condition only = std::move(rest.children.front());
          next.where = std::move(only);
        } else {
          next.where = std::move(rest);
        }
      }
      break;
    }
    case Operation::kSwitchTable: {
      if (prev.from.size() != 1) return std::nullopt;
      std::vector<std::size_t> column_items;
      for (std::size_t i = 0; i < prev.select.size(); ++i) {
        if (prev.select[i].column) column_items.push_back(i);
      }
      if (tmpl.Mentions(TypedSlot::Type::kColumn) && column_items.empty()) return std::nullopt;
      std::vector<int> tables;
      for (int t = 0; t < catalog.table_count(); ++t) {
        if (t != prev.from[0].table && catalog.table(t).columns.size() >= column_items.size()) {
          tables.push_back(t);
        }
      }
      b.table = Pick(tables, fixed.table, rng);
      if (!b.table) return std::nullopt;
      std::vector<ColumnId> pool = ColumnsOf(catalog, *b.table);
      if (fixed.column) {
        auto it = std::find(pool.begin(), pool.end(), *fixed.column);
        if (it == pool.end() || column_items.empty()) return std::nullopt;
        std::iter_swap(pool.begin(), it);
      }
      // Distinct replacement columns, drawn without replacement.
      for (std::size_t k = 0; k < column_items.size(); ++k) {
        if (!(k == 0 && fixed.column)) {
          std::iter_swap(pool.begin() + static_cast<std::ptrdiff_t>(k),
                         pool.begin() + static_cast<std::ptrdiff_t>(k + rng.Uniform(pool.size() - k)));
        }
        next.select[column_items[k]].column = pool[k];
      }
      if (!column_items.empty()) b.column = pool[0];
      next.from = {FromTable{*b.table, {}}};
      next.where.reset();
      next.group_by.clear();
      next.having.reset();
      next.order_by.clear();
      next.set_op.reset();
      break;
    }
    case Operation::kNestSubquery: {
      struct Link {
        ColumnId outer;
        ColumnId inner;
        bool operator==(const Link&) const = default;
      };
      auto in_from = [&](int table) {
        return std::any_of(prev.from.begin(), prev.from.end(),
                           [&](const FromTable& f) { return f.table == table; });
      };
      std::vector<Link> links;
      for (const ForeignKey& fk : catalog.foreign_keys()) {
        for (const auto& [outer, inner] : {std::pair{fk.from, fk.to}, std::pair{fk.to, fk.from}}) {
          if (!in_from(outer.table) || in_from(inner.table)) continue;
          if (fixed.column && outer != *fixed.column) continue;
          if (fixed.table && inner.table != *fixed.table) continue;
          Link link{outer, inner};
          if (std::find(links.begin(), links.end(), link) == links.end()) links.push_back(link);
        }
      }
      std::vector<Link> fresh;
      for (const Link& link : links) {
        Predicate p;
        p.lhs.column = link.outer;
        p.op = CompareOp::kIn;
        Query sub;
        sub.select = {ValueUnit{Aggregate::kNone, false, link.inner}};
        sub.from = {FromTable{link.inner.table, {}}};
        p.rhs = Subquery(std::move(sub));
        bool duplicate = false;
        if (next.where) {
          std::vector<Predicate*> existing;
          Condition copy = *next.where;
          CollectPredicates(copy, existing);
          duplicate = std::any_of(existing.begin(), existing.end(),
                                  [&](const Predicate* e) { return *e == p; });
        }
        if (!duplicate) fresh.push_back(link);
      }
      if (fresh.empty()) return std::nullopt;
      const Link link = fresh[rng.Uniform(fresh.size())];
      b.column = link.outer;
      b.table = link.inner.table;
      Predicate p;
      p.lhs.column = link.outer;
      p.op = CompareOp::kIn;
      Query sub;
      sub.select = {ValueUnit{Aggregate::kNone, false, link.inner}};
      sub.from = {FromTable{link.inner.table, {}}};
      p.rhs = Subquery(std::move(sub));
      AndInto(next, std::move(p));
      break;
    }
  }

  if (next == prev) return std::nullopt;
  // Canonical text must reproduce the edited AST exactly.
  try {
    if (ParseSql(RenderSql(next, catalog), catalog) != next) return std::nullopt;
  } catch (const ParseError&) {
    return std::nullopt;
  }

  std::string text = tmpl.question_template;
  if (b.column) ReplaceAll(text, "[COLUMN0]", catalog.column(*b.column).natural_name);
  if (b.table) ReplaceAll(text, "[TABLE0]", catalog.table(*b.table).natural_name);
  if (b.value) ReplaceAll(text, "[VALUE0]", LiteralNatural(*b.value));
  if (b.aggregate) ReplaceAll(text, "[AGG0]", AggregateNatural(*b.aggregate));
  for (const TypedSlot& slot : tmpl.slots) {
    if (text.find(TypedSlotText(slot)) != std::string::npos) return std::nullopt;
  }
  out.utterance = std::move(text);
  return out;
}

std::string ValueNatural(const ValueUnit& v, const Catalog& catalog) {
  std::string item = v.column ? catalog.column(*v.column).natural_name : "entries";
  if (v.aggregate == Aggregate::kNone) return item;
  return std::string(AggregateNatural(v.aggregate)) + " " + item;
}

const char* CompareNatural(CompareOp op) {
  switch (op) {
    case CompareOp::kEq: return "equal to";
    case CompareOp::kNe: return "not equal to";
    case CompareOp::kLt: return "less than";
    case CompareOp::kGt: return "greater than";
    case CompareOp::kLe: return "at most";
    case CompareOp::kGe: return "at least";
    case CompareOp::kIn: return "in";
    case CompareOp::kNotIn: return "not in";
    case CompareOp::kLike: return "like";
    case CompareOp::kNotLike: return "not like";
    case CompareOp::kBetween: return "between";
  }
  return "";
}

nlohmann::json ParseSeedDocument(std::string_view raw, std::vector<nlohmann::json>& lines) {
  const auto first = raw.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && raw[first] == '[') {
    try {
      return nlohmann::json::parse(raw);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(std::string("seed file is not valid JSON: ") + e.what());
    }
  }
  std::istringstream in{std::string(raw)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      lines.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::parse_error&) {
      throw DataError("seed file line " + std::to_string(number) + " is not valid JSON");
    }
  }
  return nullptr;
}

}  // namespace

void SynthesisConfig::Validate() const {
  if (max_turns < 2) throw ConfigError("max_turns must be at least 2");
  if (rollout_attempts < 1) throw ConfigError("rollout_attempts must be at least 1");
}

std::optional<Instantiation> InstantiateTemplate(const FollowUpTemplate& tmpl, const Query& prev,
                                                 const Catalog& catalog, Rng& rng) {
  return Apply(tmpl, prev, catalog, SlotBindings{}, rng);
}

std::optional<Instantiation> ApplyTemplate(const FollowUpTemplate& tmpl, const Query& prev,
                                           const Catalog& catalog, const SlotBindings& fixed,
                                           Rng& rng) {
  return Apply(tmpl, prev, catalog, fixed, rng);
}

std::string DescribeQuery(const Query& query, const Catalog& catalog) {
  std::string text = "Show the ";
  for (std::size_t i = 0; i < query.select.size(); ++i) {
    if (i > 0) text += i + 1 == query.select.size() ? " and " : ", ";
    text += ValueNatural(query.select[i], catalog);
  }
  text += " of ";
  for (std::size_t i = 0; i < query.from.size(); ++i) {
    if (i > 0) text += " and ";
    text += catalog.table(query.from[i].table).natural_name;
  }
  if (query.where && query.where->kind == Condition::Kind::kPredicate) {
    const Predicate& p = query.where->predicate;
    text += " whose " + ValueNatural(p.lhs, catalog) + " is " + CompareNatural(p.op);
    if (const auto* literal = std::get_if<Literal>(&p.rhs)) {
      text += " " + LiteralNatural(*literal);
    } else {
      text += " the results of another query";
    }
  } else if (query.where) {
    text += " matching several conditions";
  }
  if (!query.group_by.empty()) {
    text += " for each " + catalog.column(query.group_by.front()).natural_name;
  }
  if (!query.order_by.empty()) {
    text += " sorted by " + ValueNatural(query.order_by.front().value, catalog);
    if (query.order_by.front().direction == Direction::kDesc) text += " in descending order";
  }
  if (query.limit) text += ", only the first " + std::to_string(*query.limit);
  return text;
}

Conversation RolloutConversation(const SeedPair& seed, std::span<const FollowUpTemplate> templates,
                                 const Catalog& catalog, const SynthesisConfig& cfg, Rng& rng) {
  cfg.Validate();
  Conversation conv;
  conv.db_id = seed.db_id;
  conv.turns.push_back(
      Turn{seed.utterance, seed.sql, ExtractSchemaState(seed.sql, catalog), std::nullopt});
  std::vector<std::size_t> order(templates.size());
  while (static_cast<int>(conv.turns.size()) < cfg.max_turns) {
    const Query& prev = conv.turns.back().sql;
    std::iota(order.begin(), order.end(), 0);
    const std::size_t budget =
        std::min(order.size(), static_cast<std::size_t>(cfg.rollout_attempts));
    bool extended = false;
    for (std::size_t a = 0; a < budget && !extended; ++a) {
      std::swap(order[a], order[a + rng.Uniform(order.size() - a)]);
      const FollowUpTemplate& tmpl = templates[order[a]];
      if (!CheckConstraints(tmpl, prev, catalog)) continue;
      auto made = InstantiateTemplate(tmpl, prev, catalog, rng);
      if (!made) continue;
      SchemaState state = ExtractSchemaState(made->next, catalog);
      conv.turns.push_back(
          Turn{std::move(made->utterance), std::move(made->next), std::move(state), tmpl.template_id});
      extended = true;
    }
    if (!extended) break;
  }
  return conv;
}

std::vector<std::string> AuditConversation(const Conversation& conversation,
                                           std::span<const FollowUpTemplate> templates,
                                           const Catalog& catalog) {
  std::vector<std::string> problems;
  const std::string where = "conversation '" + conversation.conversation_id + "' turn ";
  for (std::size_t t = 0; t < conversation.turns.size(); ++t) {
    const Turn& turn = conversation.turns[t];
    const std::string at = where + std::to_string(t + 1);
    try {
      if (ParseSql(RenderSql(turn.sql, catalog), catalog) != turn.sql) {
        problems.push_back(at + ": SQL does not re-parse to the stored query");
      }
    } catch (const ParseError& e) {
      problems.push_back(at + ": SQL fails to re-parse: " + e.what());
    }
    if (ExtractSchemaState(turn.sql, catalog) != turn.state) {
      problems.push_back(at + ": stored schema state disagrees with the SQL");
    }
    if (t == 0) {
      if (turn.template_id) problems.push_back(at + ": first turn must not carry a template");
      continue;
    }
    if (!turn.template_id) {
      problems.push_back(at + ": missing template_id");
      continue;
    }
    auto it = std::find_if(templates.begin(), templates.end(), [&](const FollowUpTemplate& tmpl) {
      return tmpl.template_id == *turn.template_id;
    });
    if (it == templates.end()) {
      problems.push_back(at + ": unknown template '" + *turn.template_id + "'");
    } else if (!CheckConstraints(*it, conversation.turns[t - 1].sql, catalog)) {
      problems.push_back(at + ": constraints of '" + *turn.template_id +
                         "' do not hold on the previous turn");
    }
  }
  return problems;
}

std::vector<Conversation> SynthesizeCorpus(std::span<const SeedPair> seeds,
                                           std::span<const FollowUpTemplate> templates,
                                           const CatalogSet& catalogs, const SynthesisConfig& cfg) {
  cfg.Validate();
  if (seeds.empty()) throw ConfigError("synthesis needs at least one seed");
  if (templates.empty()) throw ConfigError("synthesis needs at least one template");
  std::vector<Conversation> corpus;
  corpus.reserve(cfg.target_conversation_count);
  const std::size_t max_attempts = 2 * cfg.target_conversation_count;
  std::size_t attempt = 0;
  while (corpus.size() < cfg.target_conversation_count) {
    if (attempt == max_attempts) {
      throw YieldError("only " + std::to_string(corpus.size()) + " of " +
                       std::to_string(attempt) +
                       " rollouts produced two or more turns (below 50%)");
    }
    const SeedPair& seed = seeds[attempt % seeds.size()];
    const Catalog& catalog = catalogs.Get(seed.db_id);
    Rng rng(Rng::Derive(cfg.rng_seed, attempt));
    ++attempt;
    Conversation conv = RolloutConversation(seed, templates, catalog, cfg, rng);
    if (conv.turn_count() < 2) continue;
    char id[32];
    std::snprintf(id, sizeof(id), "conv-%06zu", corpus.size());
    conv.conversation_id = id;
    if (auto problems = AuditConversation(conv, templates, catalog); !problems.empty()) {
      throw DataError("synthesized conversation failed validation: " + problems.front());
    }
    corpus.push_back(std::move(conv));
  }
  return corpus;
}

std::vector<SeedPair> ParseSeeds(std::string_view raw, const CatalogSet& catalogs,
                                 std::vector<std::string>* warnings) {
  std::vector<nlohmann::json> lines;
  nlohmann::json array = ParseSeedDocument(raw, lines);
  if (array.is_array()) lines.assign(array.begin(), array.end());

  std::vector<SeedPair> seeds;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const nlohmann::json& entry = lines[i];
    const std::string where = "seed " + std::to_string(i + 1);
    auto text = [&](std::initializer_list<const char*> keys) -> std::optional<std::string> {
      for (const char* key : keys) {
        auto it = entry.find(key);
        if (it != entry.end() && it->is_string()) return it->get<std::string>();
      }
      return std::nullopt;
    };
    if (!entry.is_object()) throw DataError(where + " must be an object");
    const auto db_id = text({"db_id"});
    const auto sql = text({"sql", "query"});
    if (!db_id || !sql) throw DataError(where + " needs db_id and sql");
    const auto catalog = catalogs.Find(*db_id);
    if (!catalog) throw DataError(where + " references unknown db_id '" + *db_id + "'");
    SeedPair seed;
    seed.db_id = *db_id;
    try {
      seed.sql = ParseSql(*sql, *catalog);
    } catch (const ParseError& e) {
      if (warnings) warnings->push_back(where + " skipped: " + e.what());
      continue;
    }
    seed.utterance = text({"utterance", "question"}).value_or(DescribeQuery(seed.sql, *catalog));
    seeds.push_back(std::move(seed));
  }
  return seeds;
}

std::vector<SeedPair> LoadSeeds(const std::string& path, const CatalogSet& catalogs,
                                std::vector<std::string>* warnings) {
  return ParseSeeds(ReadFileOrThrow(path), catalogs, warnings);
}

}  // namespace sqltrace
