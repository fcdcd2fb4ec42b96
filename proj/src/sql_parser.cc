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

#include "sqltrace/sql_parser.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sqltrace/error.h"

namespace sqltrace {
namespace {

enum class TokenKind { kIdentifier, kNumber, kString, kSymbol, kEnd };

struct Token {
  TokenKind kind;
  std::string text;    // identifiers keep their spelling; symbols as written
  std::size_t offset;
};

constexpr std::array<std::string_view, 28> kReserved = {
    "SELECT", "FROM",  "WHERE",     "GROUP", "BY",      "HAVING", "ORDER",
    "LIMIT",  "JOIN",  "INNER",     "ON",    "AS",      "AND",    "OR",
    "NOT",    "IN",    "LIKE",      "BETWEEN", "INTERSECT", "UNION", "EXCEPT",
    "DISTINCT", "ASC", "DESC",      "ALL",   "LEFT",    "RIGHT",  "OUTER"};

bool IsReserved(std::string_view word) {
  return std::any_of(kReserved.begin(), kReserved.end(),
                     [&](std::string_view k) { return EqualsIgnoreCase(k, word); });
}

[[noreturn]] void Fail(ParseError::Kind kind, std::size_t at, const std::string& msg) {
  throw ParseError(kind, at, msg);
}

std::vector<Token> Lex(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  auto is_ident_start = [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  };
  auto is_ident_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (is_ident_start(c)) {
      while (i < text.size() && is_ident_char(text[i])) ++i;
      tokens.push_back({TokenKind::kIdentifier, std::string(text.substr(start, i - start)), start});
    } else if (c == '`') {
      const auto close = text.find('`', i + 1);
      if (close == std::string_view::npos) Fail(ParseError::Kind::kLex, start, "unterminated quoted identifier");
      tokens.push_back({TokenKind::kIdentifier, std::string(text.substr(i + 1, close - i - 1)), start});
      i = close + 1;
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && i + 1 < text.size() &&
                std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i < text.size() && text[i] == '.') {
        ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      }
      if (i < text.size() && is_ident_start(text[i])) {
        Fail(ParseError::Kind::kLex, i, "malformed number");
      }
      tokens.push_back({TokenKind::kNumber, std::string(text.substr(start, i - start)), start});
    } else if (c == '\'' || c == '"') {
      // Quotes are escaped by doubling.
      ++i;
      while (true) {
        if (i >= text.size()) Fail(ParseError::Kind::kLex, start, "unterminated string literal");
        if (text[i] == c) {
          if (i + 1 < text.size() && text[i + 1] == c) {
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        ++i;
      }
      tokens.push_back({TokenKind::kString, std::string(text.substr(start, i - start)), start});
    } else {
      std::string_view two = text.substr(i, 2);
      if (two == "!=" || two == "<>" || two == "<=" || two == ">=") {
        tokens.push_back({TokenKind::kSymbol, std::string(two), start});
        i += 2;
      } else if (std::string_view("=<>(),.*;-").find(c) != std::string_view::npos) {
        tokens.push_back({TokenKind::kSymbol, std::string(1, c), start});
        ++i;
      } else {
        Fail(ParseError::Kind::kLex, start, std::string("illegal character '") + c + "'");
      }
    }
  }
  tokens.push_back({TokenKind::kEnd, "", text.size()});
  return tokens;
}

// Tables visible to one query level, chained to the enclosing query.
struct Scope {
  const Scope* outer = nullptr;
  std::vector<std::pair<std::string, int>> qualifiers;  // lower-cased
  std::vector<int> tables;
};

struct RawColumn {
  std::optional<std::string> qualifier;
  std::string name;
  std::size_t offset;
};

struct RawJoin {
  std::size_t table_index;  // index into Query::from
  RawColumn left;
  RawColumn right;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, const Catalog& catalog)
      : tokens_(std::move(tokens)), catalog_(catalog) {}

  Query ParseStatement() {
    Query q = ParseQuery(nullptr, 1, /*allow_set_op=*/true);
    if (IsSymbol(";")) ++pos_;
    if (Peek().kind != TokenKind::kEnd) {
      Fail(ParseError::Kind::kGrammar, Peek().offset, "unexpected '" + Peek().text + "'");
    }
    return q;
  }

 private:
  const Token& Peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  bool IsKeyword(std::string_view word, std::size_t ahead = 0) const {
    const Token& t = Peek(ahead);
    return t.kind == TokenKind::kIdentifier && EqualsIgnoreCase(t.text, word);
  }
  bool IsSymbol(std::string_view symbol, std::size_t ahead = 0) const {
    const Token& t = Peek(ahead);
    return t.kind == TokenKind::kSymbol && t.text == symbol;
  }
  bool AcceptKeyword(std::string_view word) {
    if (!IsKeyword(word)) return false;
    ++pos_;
    return true;
  }
  void ExpectKeyword(std::string_view word) {
    if (!AcceptKeyword(word)) {
      Fail(ParseError::Kind::kGrammar, Peek().offset,
           "expected " + std::string(word) + Describe(Peek()));
    }
  }
  void ExpectSymbol(std::string_view symbol) {
    if (!IsSymbol(symbol)) {
      Fail(ParseError::Kind::kGrammar, Peek().offset,
           "expected '" + std::string(symbol) + "'" + Describe(Peek()));
    }
    ++pos_;
  }
  static std::string Describe(const Token& t) {
    return t.kind == TokenKind::kEnd ? " at end of input" : " before '" + t.text + "'";
  }

  bool AtSetOp() const {
    return IsKeyword("INTERSECT") || IsKeyword("UNION") || IsKeyword("EXCEPT");
  }

  Query ParseQuery(const Scope* outer, int depth, bool allow_set_op) {
    if (depth > kMaxNestingDepth) {
      Fail(ParseError::Kind::kGrammar, Peek().offset, "subqueries nested too deeply");
    }
    Query q;
    ExpectKeyword("SELECT");
    if (AcceptKeyword("DISTINCT")) q.distinct = true;
    // The select list is resolved against FROM, which follows it in the
    // text: parse FROM first, then come back.
    const std::size_t select_start = pos_;
    const std::size_t from_index = FindFrom(select_start);
    pos_ = from_index + 1;
    Scope scope;
    scope.outer = outer;
    ParseFrom(q, scope);
    const std::size_t after_from = pos_;

    pos_ = select_start;
    q.select.push_back(ParseValueUnit(scope, "select item"));
    while (IsSymbol(",")) {
      ++pos_;
      q.select.push_back(ParseValueUnit(scope, "select item"));
    }
    if (pos_ != from_index) {
      Fail(ParseError::Kind::kGrammar, Peek().offset, "expected FROM" + Describe(Peek()));
    }
    pos_ = after_from;

    if (AcceptKeyword("WHERE")) q.where = ParseOr(scope, depth);
    if (AcceptKeyword("GROUP")) {
      ExpectKeyword("BY");
      q.group_by.push_back(ResolveColumn(ParseRawColumn("GROUP BY column"), scope));
      while (IsSymbol(",")) {
        ++pos_;
        q.group_by.push_back(ResolveColumn(ParseRawColumn("GROUP BY column"), scope));
      }
    }
    if (AcceptKeyword("HAVING")) q.having = ParseOr(scope, depth);
    if (AcceptKeyword("ORDER")) {
      ExpectKeyword("BY");
      while (true) {
        OrderItem item;
        item.value = ParseValueUnit(scope, "ORDER BY item");
        if (AcceptKeyword("DESC")) {
          item.direction = Direction::kDesc;
        } else {
          AcceptKeyword("ASC");
        }
        q.order_by.push_back(item);
        if (!IsSymbol(",")) break;
        ++pos_;
      }
    }
    if (AcceptKeyword("LIMIT")) {
      const Token& t = Peek();
      std::int64_t value = 0;
      const auto* end = t.text.data() + t.text.size();
      if (t.kind != TokenKind::kNumber ||
          std::from_chars(t.text.data(), end, value).ptr != end) {
        Fail(ParseError::Kind::kGrammar, t.offset, "LIMIT requires a non-negative integer");
      }
      q.limit = value;
      ++pos_;
    }
    if (AtSetOp()) {
      if (!allow_set_op) {
        Fail(ParseError::Kind::kGrammar, Peek().offset, "at most one set operation per query");
      }
      SetOperation op;
      if (IsKeyword("INTERSECT")) op.kind = SetOpKind::kIntersect;
      if (IsKeyword("UNION")) op.kind = SetOpKind::kUnion;
      if (IsKeyword("EXCEPT")) op.kind = SetOpKind::kExcept;
      ++pos_;
      op.rhs = Subquery(ParseQuery(outer, depth, /*allow_set_op=*/false));
      q.set_op = std::move(op);
    }
    return q;
  }

  // Locates the FROM that closes the select list starting at `start`.
  std::size_t FindFrom(std::size_t start) const {
    int parens = 0;
    for (std::size_t i = start; i < tokens_.size(); ++i) {
      const Token& t = tokens_[i];
      if (t.kind == TokenKind::kEnd) break;
      if (t.kind == TokenKind::kSymbol && t.text == "(") ++parens;
      if (t.kind == TokenKind::kSymbol && t.text == ")") {
        if (parens == 0) {
          Fail(ParseError::Kind::kGrammar, t.offset, "expected FROM before ')'");
        }
        --parens;
      }
      if (parens == 0 && t.kind == TokenKind::kIdentifier) {
        if (EqualsIgnoreCase(t.text, "FROM")) return i;
        for (std::string_view stop : {"WHERE", "GROUP", "HAVING", "ORDER", "LIMIT",
                                      "INTERSECT", "UNION", "EXCEPT", "SELECT"}) {
          if (EqualsIgnoreCase(t.text, stop)) {
            Fail(ParseError::Kind::kGrammar, t.offset, "expected FROM before '" + t.text + "'");
          }
        }
      }
    }
    Fail(ParseError::Kind::kGrammar, tokens_.back().offset, "expected FROM at end of input");
  }

  std::string ExpectIdentifier(const char* what) {
    const Token& t = Peek();
    if (t.kind != TokenKind::kIdentifier || IsReserved(t.text)) {
      Fail(ParseError::Kind::kGrammar, t.offset,
           std::string("expected ") + what + Describe(t));
    }
    ++pos_;
    return t.text;
  }

  void ParseFrom(Query& q, Scope& scope) {
    std::vector<RawJoin> joins;
    auto parse_table = [&] {
      const std::size_t at = Peek().offset;
      if (IsSymbol("(")) {
        Fail(ParseError::Kind::kGrammar, at, "subqueries in FROM are not supported");
      }
      const std::string name = ExpectIdentifier("table name");
      const auto table = catalog_.FindTable(name);
      if (!table) Fail(ParseError::Kind::kResolution, at, "unknown table '" + name + "'");
      if (std::find(scope.tables.begin(), scope.tables.end(), *table) != scope.tables.end()) {
        Fail(ParseError::Kind::kResolution, at,
             "table '" + name + "' appears more than once in FROM");
      }
      scope.tables.push_back(*table);
      scope.qualifiers.emplace_back(ToLowerAscii(catalog_.table(*table).name), *table);
      AcceptKeyword("AS");
      if (Peek().kind == TokenKind::kIdentifier && !IsReserved(Peek().text)) {
        const std::string alias = ToLowerAscii(Peek().text);
        for (const auto& [existing, _] : scope.qualifiers) {
          if (existing == alias && existing != ToLowerAscii(catalog_.table(*table).name)) {
            Fail(ParseError::Kind::kResolution, Peek().offset,
                 "duplicate alias '" + Peek().text + "'");
          }
        }
        scope.qualifiers.emplace_back(alias, *table);
        ++pos_;
      }
      FromTable from;
      from.table = *table;
      q.from.push_back(from);
    };

    parse_table();
    while (true) {
      if (IsSymbol(",")) {
        ++pos_;
      } else if (IsKeyword("INNER") && IsKeyword("JOIN", 1)) {
        pos_ += 2;
      } else if (IsKeyword("JOIN")) {
        ++pos_;
      } else {
        break;
      }
      parse_table();
      if (AcceptKeyword("ON")) {
        do {
          RawJoin join;
          join.table_index = q.from.size() - 1;
          join.left = ParseRawColumn("join column");
          ExpectSymbol("=");
          join.right = ParseRawColumn("join column");
          joins.push_back(std::move(join));
        } while (AcceptKeyword("AND"));
      }
    }
    // ON clauses may reference any table of this FROM clause.
    for (const RawJoin& join : joins) {
      q.from[join.table_index].on.push_back(
          {ResolveColumn(join.left, scope), ResolveColumn(join.right, scope)});
    }
  }

  RawColumn ParseRawColumn(const char* what) {
    RawColumn raw;
    raw.offset = Peek().offset;
    std::string first = ExpectIdentifier(what);
    if (IsSymbol(".")) {
      ++pos_;
      raw.qualifier = std::move(first);
      raw.name = ExpectIdentifier("column name");
    } else {
      raw.name = std::move(first);
    }
    return raw;
  }

  ColumnId ResolveColumn(const RawColumn& raw, const Scope& scope) const {
    for (const Scope* s = &scope; s != nullptr; s = s->outer) {
      if (raw.qualifier) {
        const std::string wanted = ToLowerAscii(*raw.qualifier);
        for (const auto& [qualifier, table] : s->qualifiers) {
          if (qualifier != wanted) continue;
          if (auto column = catalog_.FindColumn(table, raw.name)) return *column;
          Fail(ParseError::Kind::kResolution, raw.offset,
               "unknown column '" + *raw.qualifier + "." + raw.name + "'");
        }
        continue;
      }
      std::optional<ColumnId> found;
      for (int table : s->tables) {
        if (auto column = catalog_.FindColumn(table, raw.name)) {
          if (found) {
            Fail(ParseError::Kind::kResolution, raw.offset,
                 "ambiguous column '" + raw.name + "'");
          }
          found = column;
        }
      }
      if (found) return *found;
    }
    if (raw.qualifier) {
      Fail(ParseError::Kind::kResolution, raw.offset,
           "unknown table or alias '" + *raw.qualifier + "'");
    }
    Fail(ParseError::Kind::kResolution, raw.offset, "unknown column '" + raw.name + "'");
  }

  std::optional<Aggregate> PeekAggregate() const {
    if (!IsSymbol("(", 1) || Peek().kind != TokenKind::kIdentifier) return std::nullopt;
    const std::string upper = ToUpperAscii(Peek().text);
    if (upper == "COUNT") return Aggregate::kCount;
    if (upper == "SUM") return Aggregate::kSum;
    if (upper == "AVG") return Aggregate::kAvg;
    if (upper == "MIN") return Aggregate::kMin;
    if (upper == "MAX") return Aggregate::kMax;
    return std::nullopt;
  }

  ValueUnit ParseValueUnit(const Scope& scope, const char* what) {
    ValueUnit v;
    if (auto aggregate = PeekAggregate()) {
      v.aggregate = *aggregate;
      pos_ += 2;
      if (AcceptKeyword("DISTINCT")) v.distinct = true;
      if (IsSymbol("*")) {
        ++pos_;
      } else {
        v.column = ResolveColumn(ParseRawColumn("column"), scope);
      }
      ExpectSymbol(")");
      return v;
    }
    if (IsSymbol("*")) {
      ++pos_;
      return v;
    }
    const Token& t = Peek();
    if (t.kind != TokenKind::kIdentifier || IsReserved(t.text)) {
      Fail(ParseError::Kind::kGrammar, t.offset, std::string("expected ") + what + Describe(t));
    }
    v.column = ResolveColumn(ParseRawColumn(what), scope);
    return v;
  }

  Condition ParseOr(const Scope& scope, int depth) {
    Condition left = ParseAnd(scope, depth);
    while (AcceptKeyword("OR")) {
      left = Condition::Combine(Condition::Kind::kOr, std::move(left), ParseAnd(scope, depth));
    }
    return left;
  }

  Condition ParseAnd(const Scope& scope, int depth) {
    Condition left = ParseUnary(scope, depth);
    while (AcceptKeyword("AND")) {
      left = Condition::Combine(Condition::Kind::kAnd, std::move(left), ParseUnary(scope, depth));
    }
    return left;
  }

  Condition ParseUnary(const Scope& scope, int depth) {
    if (IsSymbol("(") && !IsKeyword("SELECT", 1)) {
      ++pos_;
      Condition inner = ParseOr(scope, depth);
      ExpectSymbol(")");
      return inner;
    }
    return Condition::Leaf(ParsePredicate(scope, depth));
  }

  Predicate ParsePredicate(const Scope& scope, int depth) {
    Predicate p;
    p.lhs = ParseValueUnit(scope, "condition");
    const Token& t = Peek();
    if (t.kind == TokenKind::kSymbol) {
      if (t.text == "=") p.op = CompareOp::kEq;
      else if (t.text == "!=" || t.text == "<>") p.op = CompareOp::kNe;
      else if (t.text == "<") p.op = CompareOp::kLt;
      else if (t.text == ">") p.op = CompareOp::kGt;
      else if (t.text == "<=") p.op = CompareOp::kLe;
      else if (t.text == ">=") p.op = CompareOp::kGe;
      else Fail(ParseError::Kind::kGrammar, t.offset, "expected comparison operator" + Describe(t));
      ++pos_;
    } else if (AcceptKeyword("NOT")) {
      if (AcceptKeyword("IN")) {
        p.op = CompareOp::kNotIn;
      } else if (AcceptKeyword("LIKE")) {
        p.op = CompareOp::kNotLike;
      } else {
        Fail(ParseError::Kind::kGrammar, Peek().offset, "expected IN or LIKE after NOT");
      }
    } else if (AcceptKeyword("IN")) {
      p.op = CompareOp::kIn;
    } else if (AcceptKeyword("LIKE")) {
      p.op = CompareOp::kLike;
    } else if (AcceptKeyword("BETWEEN")) {
      p.op = CompareOp::kBetween;
    } else {
      Fail(ParseError::Kind::kGrammar, t.offset, "expected comparison operator" + Describe(t));
    }

    if (p.op == CompareOp::kIn || p.op == CompareOp::kNotIn) {
      if (!(IsSymbol("(") && IsKeyword("SELECT", 1))) {
        Fail(ParseError::Kind::kGrammar, Peek().offset, "IN requires a subquery");
      }
    }
    p.rhs = ParseOperand(scope, depth);
    if (p.op == CompareOp::kBetween) {
      ExpectKeyword("AND");
      p.upper = ParseOperand(scope, depth);
    }
    return p;
  }

  Operand ParseOperand(const Scope& scope, int depth) {
    const Token& t = Peek();
    if (IsSymbol("(") && IsKeyword("SELECT", 1)) {
      ++pos_;
      Query sub = ParseQuery(&scope, depth + 1, /*allow_set_op=*/true);
      ExpectSymbol(")");
      return Subquery(std::move(sub));
    }
    if (t.kind == TokenKind::kString || t.kind == TokenKind::kNumber) {
      ++pos_;
      return Literal{t.text};
    }
    if (IsSymbol("-") && Peek(1).kind == TokenKind::kNumber) {
      pos_ += 2;
      return Literal{"-" + tokens_[pos_ - 1].text};
    }
    if (t.kind == TokenKind::kIdentifier && !IsReserved(t.text)) {
      return ResolveColumn(ParseRawColumn("operand"), scope);
    }
    Fail(ParseError::Kind::kGrammar, t.offset, "expected value" + Describe(t));
  }

  std::vector<Token> tokens_;
  const Catalog& catalog_;
  std::size_t pos_ = 0;
};

}  // namespace

Query ParseSql(std::string_view text, const Catalog& catalog) {
  Parser parser(Lex(text), catalog);
  return parser.ParseStatement();
}

}  // namespace sqltrace
