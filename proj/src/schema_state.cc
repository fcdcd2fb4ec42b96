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

#include "sqltrace/schema_state.h"

#include <bit>

#include "sqltrace/error.h"

namespace sqltrace {
namespace {

class OccurrenceWalker {
 public:
  OccurrenceWalker(const Catalog& catalog,
                   const std::function<void(std::size_t, Keyword)>& visit)
      : catalog_(catalog), visit_(visit) {}

  void Walk(const Query& q) {
    for (const ValueUnit& v : q.select) Value(v, Keyword::kSelect);
    for (const FromTable& from : q.from) {
      visit_(catalog_.table_slot(from.table), Keyword::kFrom);
      for (const JoinCondition& on : from.on) {
        Column(on.left, Keyword::kJoin);
        Column(on.right, Keyword::kJoin);
      }
    }
    if (q.where) Cond(*q.where, Keyword::kWhere);
    for (ColumnId id : q.group_by) Column(id, Keyword::kGroupBy);
    if (q.having) Cond(*q.having, Keyword::kHaving);
    for (const OrderItem& item : q.order_by) Value(item.value, Keyword::kOrderBy);
    if (q.set_op) Walk(*q.set_op->rhs);
  }

 private:
  void Column(ColumnId id, Keyword k) { visit_(catalog_.column_slot(id), k); }

  void Value(const ValueUnit& v, Keyword k) {
    if (v.column) Column(*v.column, k);
  }

  void Operand(const sqltrace::Operand& operand, Keyword k) {
    if (const auto* column = std::get_if<ColumnId>(&operand)) {
      Column(*column, k);
    } else if (const auto* sub = std::get_if<Subquery>(&operand)) {
      Walk(**sub);
    }
  }

  void Cond(const Condition& c, Keyword k) {
    if (c.kind != Condition::Kind::kPredicate) {
      for (const Condition& child : c.children) Cond(child, k);
      return;
    }
    Value(c.predicate.lhs, k);
    Operand(c.predicate.rhs, k);
    if (c.predicate.upper) Operand(*c.predicate.upper, k);
  }

  const Catalog& catalog_;
  const std::function<void(std::size_t, Keyword)>& visit_;
};

}  // namespace

const char* KeywordName(Keyword keyword) {
  switch (keyword) {
    case Keyword::kSelect: return "SELECT";
    case Keyword::kFrom: return "FROM";
    case Keyword::kJoin: return "JOIN";
    case Keyword::kWhere: return "WHERE";
    case Keyword::kGroupBy: return "GROUP_BY";
    case Keyword::kHaving: return "HAVING";
    case Keyword::kOrderBy: return "ORDER_BY";
  }
  return "";
}

std::optional<Keyword> KeywordFromName(std::string_view name) {
  for (Keyword k : kAllKeywords) {
    if (name == KeywordName(k)) return k;
  }
  return std::nullopt;
}

std::size_t KeywordSet::size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

std::vector<Keyword> KeywordSet::members() const {
  std::vector<Keyword> out;
  for (Keyword k : kAllKeywords) {
    if (contains(k)) out.push_back(k);
  }
  return out;
}

SchemaState SchemaState::AllNone(const Catalog& catalog) {
  return SchemaState(catalog.db_id(), std::vector<KeywordSet>(catalog.slot_count()));
}

void ForEachOccurrence(const Query& query, const Catalog& catalog,
                       const std::function<void(std::size_t, Keyword)>& visit) {
  OccurrenceWalker(catalog, visit).Walk(query);
}

SchemaState ExtractSchemaState(const Query& query, const Catalog& catalog) {
  std::vector<KeywordSet> slots(catalog.slot_count());
  ForEachOccurrence(query, catalog,
                    [&](std::size_t slot, Keyword k) { slots[slot].insert(k); });
  return SchemaState(catalog.db_id(), std::move(slots));
}

ClauseMap ClauseMapFromState(const SchemaState& state) {
  ClauseMap map;
  for (std::size_t slot = 0; slot < state.size(); ++slot) {
    for (Keyword k : state[slot].members()) {
      map.items[static_cast<std::size_t>(k)].push_back(slot);
    }
  }
  return map;
}

ClauseMap ExtractClauseMap(const Query& query, const Catalog& catalog) {
  return ClauseMapFromState(ExtractSchemaState(query, catalog));
}

nlohmann::json SchemaStateToJson(const SchemaState& state, const Catalog& catalog) {
  nlohmann::json slots = nlohmann::json::array();
  for (std::size_t slot = 0; slot < state.size(); ++slot) {
    nlohmann::json value = nlohmann::json::array();
    for (Keyword k : state[slot].members()) value.push_back(KeywordName(k));
    slots.push_back({{"name", catalog.slot_name(slot)}, {"value", std::move(value)}});
  }
  return {{"slots", std::move(slots)}};
}

SchemaState SchemaStateFromJson(const nlohmann::json& doc, const Catalog& catalog) {
  if (!doc.is_object() || !doc.contains("slots") || !doc["slots"].is_array()) {
    throw DataError("schema state must be an object with a 'slots' array");
  }
  const auto& slots = doc["slots"];
  if (slots.size() != catalog.slot_count()) {
    throw DataError("schema state has " + std::to_string(slots.size()) +
                    " slots; catalog '" + catalog.db_id() + "' has " +
                    std::to_string(catalog.slot_count()));
  }
  std::vector<KeywordSet> values(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const auto& entry = slots[i];
    if (!entry.is_object() || !entry.contains("name") || !entry["name"].is_string() ||
        !entry.contains("value") || !entry["value"].is_array()) {
      throw DataError("malformed schema state slot " + std::to_string(i));
    }
    if (entry["name"].get<std::string>() != catalog.slot_name(i)) {
      throw DataError("schema state slot " + std::to_string(i) + " is '" +
                      entry["name"].get<std::string>() + "', expected '" +
                      catalog.slot_name(i) + "'");
    }
    for (const auto& keyword : entry["value"]) {
      auto k = keyword.is_string() ? KeywordFromName(keyword.get<std::string>())
                                   : std::nullopt;
      if (!k) throw DataError("unknown keyword in schema state slot " + std::to_string(i));
      values[i].insert(*k);
    }
  }
  return SchemaState(catalog.db_id(), std::move(values));
}

}  // namespace sqltrace
