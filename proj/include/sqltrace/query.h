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

#ifndef SQLTRACE_QUERY_H_
#define SQLTRACE_QUERY_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sqltrace/catalog.h"

namespace sqltrace {

// Heap-allocated value with deep copy and deep comparison. Used for the
// recursive edges of the query tree (subqueries, set-operation branches).
template <typename T>
class Indirect {
 public:
  Indirect() : value_(std::make_unique<T>()) {}
  explicit Indirect(T value) : value_(std::make_unique<T>(std::move(value))) {}
  Indirect(const Indirect& other) : value_(std::make_unique<T>(*other.value_)) {}
  Indirect(Indirect&&) noexcept = default;
  Indirect& operator=(const Indirect& other) {
    if (this != &other) value_ = std::make_unique<T>(*other.value_);
    return *this;
  }
  Indirect& operator=(Indirect&&) noexcept = default;

  T& operator*() { return *value_; }
  const T& operator*() const { return *value_; }
  T* operator->() { return value_.get(); }
  const T* operator->() const { return value_.get(); }

  friend bool operator==(const Indirect& a, const Indirect& b) {
    return *a.value_ == *b.value_;
  }

 private:
  std::unique_ptr<T> value_;
};

enum class Aggregate { kNone, kCount, kSum, kAvg, kMin, kMax };

// An optionally aggregated column, or '*' when column is empty.
struct ValueUnit {
  Aggregate aggregate = Aggregate::kNone;
  bool distinct = false;  // COUNT(DISTINCT x); only with an aggregate
  std::optional<ColumnId> column;

  bool operator==(const ValueUnit&) const = default;
};

struct JoinCondition {
  ColumnId left;
  ColumnId right;

  bool operator==(const JoinCondition&) const = default;
};

struct FromTable {
  int table = 0;
  std::vector<JoinCondition> on;  // empty for the first table

  bool operator==(const FromTable&) const = default;
};

// Literal text exactly as written ('abc', "abc", 42, -1.5).
struct Literal {
  std::string text;

  bool operator==(const Literal&) const = default;
};

struct Query;
using Subquery = Indirect<Query>;
using Operand = std::variant<Literal, ColumnId, Subquery>;

enum class CompareOp {
  kEq, kNe, kLt, kGt, kLe, kGe, kIn, kNotIn, kLike, kNotLike, kBetween
};

struct Predicate {
  ValueUnit lhs;
  CompareOp op = CompareOp::kEq;
  Operand rhs;
  std::optional<Operand> upper;  // BETWEEN upper bound

  bool operator==(const Predicate&) const = default;
};

// Boolean condition tree. Compound nodes are n-ary and flattened: a child
// never has the same connective as its parent.
struct Condition {
  enum class Kind { kPredicate, kAnd, kOr };

  Kind kind = Kind::kPredicate;
  Predicate predicate;               // kPredicate only
  std::vector<Condition> children;   // kAnd / kOr only, size >= 2

  static Condition Leaf(Predicate p) {
    Condition c;
    c.predicate = std::move(p);
    return c;
  }
  // Combines two conditions, flattening same-kind operands.
  static Condition Combine(Kind kind, Condition left, Condition right);

  bool operator==(const Condition&) const = default;
};

enum class Direction { kAsc, kDesc };

struct OrderItem {
  ValueUnit value;
  Direction direction = Direction::kAsc;

  bool operator==(const OrderItem&) const = default;
};

enum class SetOpKind { kIntersect, kUnion, kExcept };

struct SetOperation {
  SetOpKind kind = SetOpKind::kUnion;
  Subquery rhs;

  bool operator==(const SetOperation&) const = default;
};

// A parsed, catalog-resolved query in canonical form. Aliases are gone and
// every column is addressed by catalog position.
struct Query {
  bool distinct = false;  // SELECT DISTINCT
  std::vector<ValueUnit> select;
  std::vector<FromTable> from;
  std::optional<Condition> where;
  std::vector<ColumnId> group_by;
  std::optional<Condition> having;
  std::vector<OrderItem> order_by;
  std::optional<std::int64_t> limit;
  std::optional<SetOperation> set_op;

  bool operator==(const Query&) const = default;
};

// Depth of subquery nesting; a query without subqueries or set-operation
// branches has depth 1.
int NestingDepth(const Query& query);

const char* AggregateName(Aggregate aggregate);
const char* CompareOpName(CompareOp op);
const char* SetOpName(SetOpKind kind);

// Canonical SQL text: upper-case keywords, table.column qualification, no
// aliases. ParseSql(RenderSql(q), catalog) == q.
std::string RenderSql(const Query& query, const Catalog& catalog);

}  // namespace sqltrace

#endif  // SQLTRACE_QUERY_H_
