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

#include "sqltrace/query.h"

#include <algorithm>

namespace sqltrace {
namespace {

int ConditionDepth(const Condition& condition);

int OperandDepth(const Operand& operand) {
  if (const auto* sub = std::get_if<Subquery>(&operand)) return NestingDepth(**sub);
  return 0;
}

int ConditionDepth(const Condition& condition) {
  if (condition.kind == Condition::Kind::kPredicate) {
    int depth = OperandDepth(condition.predicate.rhs);
    if (condition.predicate.upper) {
      depth = std::max(depth, OperandDepth(*condition.predicate.upper));
    }
    return depth;
  }
  int depth = 0;
  for (const Condition& child : condition.children) {
    depth = std::max(depth, ConditionDepth(child));
  }
  return depth;
}

class Renderer {
 public:
  explicit Renderer(const Catalog& catalog) : catalog_(catalog) {}

  void RenderQuery(const Query& q) {
    out_ += "SELECT ";
    if (q.distinct) out_ += "DISTINCT ";
    for (std::size_t i = 0; i < q.select.size(); ++i) {
      if (i > 0) out_ += ", ";
      RenderValue(q.select[i]);
    }
    out_ += " FROM ";
    for (std::size_t i = 0; i < q.from.size(); ++i) {
      if (i > 0) out_ += " JOIN ";
      out_ += catalog_.table(q.from[i].table).name;
      for (std::size_t j = 0; j < q.from[i].on.size(); ++j) {
        out_ += j == 0 ? " ON " : " AND ";
        out_ += catalog_.QualifiedName(q.from[i].on[j].left);
        out_ += " = ";
        out_ += catalog_.QualifiedName(q.from[i].on[j].right);
      }
    }
    if (q.where) {
      out_ += " WHERE ";
      RenderCondition(*q.where);
    }
    if (!q.group_by.empty()) {
      out_ += " GROUP BY ";
      for (std::size_t i = 0; i < q.group_by.size(); ++i) {
        if (i > 0) out_ += ", ";
        out_ += catalog_.QualifiedName(q.group_by[i]);
      }
    }
    if (q.having) {
      out_ += " HAVING ";
      RenderCondition(*q.having);
    }
    if (!q.order_by.empty()) {
      out_ += " ORDER BY ";
      for (std::size_t i = 0; i < q.order_by.size(); ++i) {
        if (i > 0) out_ += ", ";
        RenderValue(q.order_by[i].value);
        if (q.order_by[i].direction == Direction::kDesc) out_ += " DESC";
      }
    }
    if (q.limit) {
      out_ += " LIMIT ";
      out_ += std::to_string(*q.limit);
    }
    if (q.set_op) {
      out_ += ' ';
      out_ += SetOpName(q.set_op->kind);
      out_ += ' ';
      RenderQuery(*q.set_op->rhs);
    }
  }

  std::string Take() { return std::move(out_); }

 private:
  void RenderValue(const ValueUnit& v) {
    if (v.aggregate != Aggregate::kNone) {
      out_ += AggregateName(v.aggregate);
      out_ += '(';
      if (v.distinct) out_ += "DISTINCT ";
    }
    out_ += v.column ? catalog_.QualifiedName(*v.column) : std::string("*");
    if (v.aggregate != Aggregate::kNone) out_ += ')';
  }

  void RenderOperand(const Operand& operand) {
    if (const auto* literal = std::get_if<Literal>(&operand)) {
      out_ += literal->text;
    } else if (const auto* column = std::get_if<ColumnId>(&operand)) {
      out_ += catalog_.QualifiedName(*column);
    } else {
      out_ += '(';
      RenderQuery(*std::get<Subquery>(operand));
      out_ += ')';
    }
  }

  void RenderCondition(const Condition& c) {
    switch (c.kind) {
      case Condition::Kind::kPredicate: {
        const Predicate& p = c.predicate;
        RenderValue(p.lhs);
        out_ += ' ';
        out_ += CompareOpName(p.op);
        out_ += ' ';
        RenderOperand(p.rhs);
        if (p.op == CompareOp::kBetween && p.upper) {
          out_ += " AND ";
          RenderOperand(*p.upper);
        }
        return;
      }
      case Condition::Kind::kAnd:
        for (std::size_t i = 0; i < c.children.size(); ++i) {
          if (i > 0) out_ += " AND ";
          const bool wrap = c.children[i].kind == Condition::Kind::kOr;
          if (wrap) out_ += '(';
          RenderCondition(c.children[i]);
          if (wrap) out_ += ')';
        }
        return;
      case Condition::Kind::kOr:
        for (std::size_t i = 0; i < c.children.size(); ++i) {
          if (i > 0) out_ += " OR ";
          RenderCondition(c.children[i]);
        }
        return;
    }
  }

  const Catalog& catalog_;
  std::string out_;
};

}  // namespace

Condition Condition::Combine(Kind kind, Condition left, Condition right) {
  Condition out;
  out.kind = kind;
  for (Condition* part : {&left, &right}) {
    if (part->kind == kind) {
      for (Condition& child : part->children) out.children.push_back(std::move(child));
    } else {
      out.children.push_back(std::move(*part));
    }
  }
  return out;
}

int NestingDepth(const Query& query) {
  int inner = 0;
  if (query.where) inner = std::max(inner, ConditionDepth(*query.where));
  if (query.having) inner = std::max(inner, ConditionDepth(*query.having));
  int depth = 1 + inner;
  if (query.set_op) depth = std::max(depth, NestingDepth(*query.set_op->rhs));
  return depth;
}

const char* AggregateName(Aggregate aggregate) {
  switch (aggregate) {
    case Aggregate::kNone: return "";
    case Aggregate::kCount: return "COUNT";
    case Aggregate::kSum: return "SUM";
    case Aggregate::kAvg: return "AVG";
    case Aggregate::kMin: return "MIN";
    case Aggregate::kMax: return "MAX";
  }
  return "";
}

const char* CompareOpName(CompareOp op) {
  switch (op) {
    case CompareOp::kEq: return "=";
    case CompareOp::kNe: return "!=";
    case CompareOp::kLt: return "<";
    case CompareOp::kGt: return ">";
    case CompareOp::kLe: return "<=";
    case CompareOp::kGe: return ">=";
    case CompareOp::kIn: return "IN";
    case CompareOp::kNotIn: return "NOT IN";
    case CompareOp::kLike: return "LIKE";
    case CompareOp::kNotLike: return "NOT LIKE";
    case CompareOp::kBetween: return "BETWEEN";
  }
  return "";
}

const char* SetOpName(SetOpKind kind) {
  switch (kind) {
    case SetOpKind::kIntersect: return "INTERSECT";
    case SetOpKind::kUnion: return "UNION";
    case SetOpKind::kExcept: return "EXCEPT";
  }
  return "";
}

std::string RenderSql(const Query& query, const Catalog& catalog) {
  Renderer renderer(catalog);
  renderer.RenderQuery(query);
  return renderer.Take();
}

}  // namespace sqltrace
