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

#ifndef SQLTRACE_SCHEMA_STATE_H_
#define SQLTRACE_SCHEMA_STATE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sqltrace/catalog.h"
#include "sqltrace/query.h"

namespace sqltrace {

// Clauses under which a schema item can occur. Declaration order is the
// fixed vocabulary order used for rendering.
enum class Keyword : std::uint8_t {
  kSelect, kFrom, kJoin, kWhere, kGroupBy, kHaving, kOrderBy
};
inline constexpr std::size_t kKeywordCount = 7;
inline constexpr std::array<Keyword, kKeywordCount> kAllKeywords = {
    Keyword::kSelect, Keyword::kFrom,   Keyword::kJoin,   Keyword::kWhere,
    Keyword::kGroupBy, Keyword::kHaving, Keyword::kOrderBy};

const char* KeywordName(Keyword keyword);  // "SELECT", ..., "GROUP_BY"
std::optional<Keyword> KeywordFromName(std::string_view name);

class KeywordSet {
 public:
  constexpr KeywordSet() = default;
  KeywordSet(std::initializer_list<Keyword> keywords) {
    for (Keyword k : keywords) insert(k);
  }

  void insert(Keyword k) { bits_ |= Bit(k); }
  bool contains(Keyword k) const { return (bits_ & Bit(k)) != 0; }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const;
  std::uint8_t bits() const { return bits_; }
  // Members in vocabulary order.
  std::vector<Keyword> members() const;

  KeywordSet operator&(KeywordSet other) const { return FromBits(bits_ & other.bits_); }
  KeywordSet operator|(KeywordSet other) const { return FromBits(bits_ | other.bits_); }
  bool operator==(const KeywordSet&) const = default;

  static KeywordSet FromBits(std::uint8_t bits) {
    KeywordSet s;
    s.bits_ = bits;
    return s;
  }

 private:
  static constexpr std::uint8_t Bit(Keyword k) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(k));
  }
  std::uint8_t bits_ = 0;
};

// One keyword set per catalog slot; an empty set is [NONE].
class SchemaState {
 public:
  SchemaState() = default;
  SchemaState(std::string db_id, std::vector<KeywordSet> slots)
      : db_id_(std::move(db_id)), slots_(std::move(slots)) {}

  static SchemaState AllNone(const Catalog& catalog);

  const std::string& db_id() const { return db_id_; }
  std::size_t size() const { return slots_.size(); }
  std::span<const KeywordSet> slots() const { return slots_; }
  KeywordSet operator[](std::size_t slot) const { return slots_.at(slot); }

  bool operator==(const SchemaState&) const = default;

 private:
  std::string db_id_;
  std::vector<KeywordSet> slots_;
};

// Keyword -> schema slots listed under that clause, in catalog slot order.
struct ClauseMap {
  std::array<std::vector<std::size_t>, kKeywordCount> items;

  const std::vector<std::size_t>& operator[](Keyword k) const {
    return items[static_cast<std::size_t>(k)];
  }
  bool operator==(const ClauseMap&) const = default;
};

// Calls `visit(slot, keyword)` for every syntactic occurrence of a schema
// item in `query`, including subqueries and set-operation branches. Items
// inside a subquery are attributed to the subquery's own clauses. Tables
// of a FROM clause occur under FROM; columns of JOIN ... ON conditions
// occur under JOIN.
void ForEachOccurrence(const Query& query, const Catalog& catalog,
                       const std::function<void(std::size_t, Keyword)>& visit);

SchemaState ExtractSchemaState(const Query& query, const Catalog& catalog);
ClauseMap ExtractClauseMap(const Query& query, const Catalog& catalog);
ClauseMap ClauseMapFromState(const SchemaState& state);

// {"slots": [{"name": "cars.name", "value": ["SELECT"]}, ...]}
nlohmann::json SchemaStateToJson(const SchemaState& state, const Catalog& catalog);
// Throws DataError when slot names or order disagree with the catalog.
SchemaState SchemaStateFromJson(const nlohmann::json& doc, const Catalog& catalog);

}  // namespace sqltrace

#endif  // SQLTRACE_SCHEMA_STATE_H_
