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

#include "sqltrace/similarity.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "sqltrace/error.h"

namespace sqltrace {
namespace {

class TreeBuilder {
 public:
  explicit TreeBuilder(const Catalog& catalog) : catalog_(catalog) {}

  SqlTree Build(const Query& q) {
    EmitQuery(tree_.AddNode("SQL"), q);
    return std::move(tree_);
  }

 private:
  void EmitQuery(std::size_t root, const Query& q) {
    const std::size_t select = tree_.AddChild(root, "SELECT");
    if (q.distinct) tree_.AddChild(select, "DISTINCT");
    for (const ValueUnit& v : q.select) Value(select, v);

    const std::size_t from = tree_.AddChild(root, "FROM");
    for (const FromTable& t : q.from) tree_.AddChild(from, catalog_.table(t.table).name);
    for (const FromTable& t : q.from) {
      for (const JoinCondition& on : t.on) {
        const std::size_t eq = tree_.AddChild(from, "=");
        tree_.AddChild(eq, catalog_.QualifiedName(on.left));
        tree_.AddChild(eq, catalog_.QualifiedName(on.right));
      }
    }
    if (q.where) Cond(tree_.AddChild(root, "WHERE"), *q.where);
    if (!q.group_by.empty()) {
      const std::size_t group = tree_.AddChild(root, "GROUP_BY");
      for (ColumnId id : q.group_by) tree_.AddChild(group, catalog_.QualifiedName(id));
    }
    if (q.having) Cond(tree_.AddChild(root, "HAVING"), *q.having);
    if (!q.order_by.empty()) {
      const std::size_t order = tree_.AddChild(root, "ORDER_BY");
      for (const OrderItem& item : q.order_by) {
        Value(tree_.AddChild(order, item.direction == Direction::kDesc ? "DESC" : "ASC"),
              item.value);
      }
    }
    if (q.limit) tree_.AddChild(tree_.AddChild(root, "LIMIT"), "VAL");
    if (q.set_op) {
      const std::size_t op = tree_.AddChild(root, SetOpName(q.set_op->kind));
      EmitQuery(tree_.AddChild(op, "SQL"), *q.set_op->rhs);
    }
  }

  void Value(std::size_t parent, const ValueUnit& v) {
    std::string item = v.column ? catalog_.QualifiedName(*v.column) : "*";
    if (v.aggregate == Aggregate::kNone) {
      tree_.AddChild(parent, std::move(item));
      return;
    }
    const std::size_t agg = tree_.AddChild(parent, AggregateName(v.aggregate));
    if (v.distinct) tree_.AddChild(agg, "DISTINCT");
    tree_.AddChild(agg, std::move(item));
  }

  void Operand(std::size_t parent, const sqltrace::Operand& operand) {
    if (std::holds_alternative<Literal>(operand)) {
      tree_.AddChild(parent, "VAL");
    } else if (const auto* column = std::get_if<ColumnId>(&operand)) {
      tree_.AddChild(parent, catalog_.QualifiedName(*column));
    } else {
      EmitQuery(tree_.AddChild(parent, "SQL"), *std::get<Subquery>(operand));
    }
  }

  void Cond(std::size_t parent, const Condition& c) {
    switch (c.kind) {
      case Condition::Kind::kAnd:
      case Condition::Kind::kOr: {
        const std::size_t node =
            tree_.AddChild(parent, c.kind == Condition::Kind::kAnd ? "AND" : "OR");
        for (const Condition& child : c.children) Cond(node, child);
        return;
      }
      case Condition::Kind::kPredicate: {
        const Predicate& p = c.predicate;
        const std::size_t op = tree_.AddChild(parent, CompareOpName(p.op));
        Value(op, p.lhs);
        Operand(op, p.rhs);
        if (p.upper) Operand(op, *p.upper);
        return;
      }
    }
  }

  const Catalog& catalog_;
  SqlTree tree_;
};

// Per-iteration label multisets; compression ids are dictionary-assigned,
// so equal labels across the two trees always get equal ids.
std::uint64_t Dot(const std::vector<int>& x, const std::vector<int>& y) {
  std::map<int, std::uint64_t> counts;
  for (int label : x) ++counts[label];
  std::uint64_t total = 0;
  for (int label : y) {
    auto it = counts.find(label);
    if (it != counts.end()) total += it->second;
  }
  return total;
}

std::vector<int> Relabel(const SqlTree& tree, const std::vector<int>& labels,
                         std::map<std::pair<int, std::vector<int>>, int>& dictionary) {
  std::vector<int> next(tree.size());
  for (std::size_t v = 0; v < tree.size(); ++v) {
    std::vector<int> child_labels;
    child_labels.reserve(tree.children[v].size());
    for (std::size_t c : tree.children[v]) child_labels.push_back(labels[c]);
    std::sort(child_labels.begin(), child_labels.end());
    auto key = std::make_pair(labels[v], std::move(child_labels));
    const int fresh = static_cast<int>(dictionary.size());
    next[v] = dictionary.try_emplace(std::move(key), fresh).first->second;
  }
  return next;
}

}  // namespace

std::size_t SqlTree::AddNode(std::string label) {
  labels.push_back(std::move(label));
  children.emplace_back();
  return labels.size() - 1;
}

std::size_t SqlTree::AddChild(std::size_t parent, std::string label) {
  const std::size_t node = AddNode(std::move(label));
  children[parent].push_back(node);
  return node;
}

SqlTree BuildSqlTree(const Query& query, const Catalog& catalog) {
  return TreeBuilder(catalog).Build(query);
}

void KernelConfig::Validate() const {
  if (iterations < 0 || iterations > kMaxWlIterations) {
    throw ConfigError("WL iterations must be in [0, " + std::to_string(kMaxWlIterations) +
                      "], got " + std::to_string(iterations));
  }
}

void SimilarityConfig::Validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ConfigError("lambda must be in [0, 1], got " + std::to_string(lambda));
  }
  kernel.Validate();
}

double SemanticSimilarity(const SchemaState& x, const SchemaState& y) {
  if (x.db_id() != y.db_id() || x.size() != y.size()) {
    throw DataError("schema states come from different catalogs ('" + x.db_id() +
                    "' vs '" + y.db_id() + "')");
  }
  double sum = 0;
  std::size_t counted = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const KeywordSet either = x[i] | y[i];
    if (either.empty()) continue;
    ++counted;
    sum += static_cast<double>((x[i] & y[i]).size()) / static_cast<double>(either.size());
  }
  return counted == 0 ? 0.0 : sum / static_cast<double>(counted);
}

std::uint64_t WlKernel(const SqlTree& x, const SqlTree& y, const KernelConfig& cfg) {
  cfg.Validate();
  std::map<std::string, int> base;
  auto initial = [&](const SqlTree& tree) {
    std::vector<int> labels(tree.size());
    for (std::size_t v = 0; v < tree.size(); ++v) {
      const int fresh = static_cast<int>(base.size());
      labels[v] = base.try_emplace(tree.labels[v], fresh).first->second;
    }
    return labels;
  };
  std::vector<int> lx = initial(x);
  std::vector<int> ly = initial(y);
  std::uint64_t total = Dot(lx, ly);
  for (int i = 1; i <= cfg.iterations; ++i) {
    std::map<std::pair<int, std::vector<int>>, int> dictionary;
    lx = Relabel(x, lx, dictionary);
    ly = Relabel(y, ly, dictionary);
    total += Dot(lx, ly);
  }
  return total;
}

double StructuralSimilarity(const SqlTree& x, const SqlTree& y, const KernelConfig& cfg) {
  const double kxy = static_cast<double>(WlKernel(x, y, cfg));
  const double kxx = static_cast<double>(WlKernel(x, x, cfg));
  const double kyy = static_cast<double>(WlKernel(y, y, cfg));
  if (kxx == 0 || kyy == 0) return 0.0;
  return std::min(1.0, kxy / std::sqrt(kxx * kyy));
}

double BlendSimilarity(double semantic, double structural, double lambda) {
  return lambda * semantic + (1.0 - lambda) * structural;
}

SimilarityReport CompareQueries(const Query& x, const Query& y, const Catalog& catalog,
                                const SimilarityConfig& cfg) {
  cfg.Validate();
  SimilarityReport report;
  report.semantic =
      SemanticSimilarity(ExtractSchemaState(x, catalog), ExtractSchemaState(y, catalog));
  report.structural =
      StructuralSimilarity(BuildSqlTree(x, catalog), BuildSqlTree(y, catalog), cfg.kernel);
  report.combined = BlendSimilarity(report.semantic, report.structural, cfg.lambda);
  return report;
}

double CombinedSimilarity(const Query& x, const Query& y, const Catalog& catalog,
                          const SimilarityConfig& cfg) {
  return CompareQueries(x, y, catalog, cfg).combined;
}

WeightMatrix NormalizeWeights(std::string conversation_id, std::size_t turns,
                              std::span<const double> similarity) {
  if (turns < 2) throw DataError("contrastive weights need at least two turns");
  if (similarity.size() != turns * turns) throw DataError("similarity matrix is not n x n");
  WeightMatrix w;
  w.conversation_id = std::move(conversation_id);
  w.turns = turns;
  w.values.assign(turns * turns, 0.0);
  for (std::size_t x = 0; x < turns; ++x) {
    double total = 0;
    for (std::size_t p = 0; p < turns; ++p) {
      if (p != x) total += similarity[x * turns + p];
    }
    for (std::size_t p = 0; p < turns; ++p) {
      if (p == x) continue;
      w.values[x * turns + p] = total > 0 ? similarity[x * turns + p] / total
                                          : 1.0 / static_cast<double>(turns - 1);
    }
  }
  return w;
}

WeightMatrix ContrastiveWeights(std::string conversation_id, std::span<const Query> turns,
                                const Catalog& catalog, const SimilarityConfig& cfg) {
  cfg.Validate();
  const std::size_t n = turns.size();
  if (n < 2) throw DataError("contrastive weights need at least two turns");
  std::vector<SchemaState> states;
  std::vector<SqlTree> trees;
  std::vector<double> self(n);
  for (const Query& q : turns) {
    states.push_back(ExtractSchemaState(q, catalog));
    trees.push_back(BuildSqlTree(q, catalog));
  }
  for (std::size_t i = 0; i < n; ++i) {
    self[i] = static_cast<double>(WlKernel(trees[i], trees[i], cfg.kernel));
  }
  std::vector<double> sim(n * n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t p = x + 1; p < n; ++p) {
      const double structural =
          std::min(1.0, static_cast<double>(WlKernel(trees[x], trees[p], cfg.kernel)) /
                            std::sqrt(self[x] * self[p]));
      const double value =
          BlendSimilarity(SemanticSimilarity(states[x], states[p]), structural, cfg.lambda);
      sim[x * n + p] = value;
      sim[p * n + x] = value;
    }
  }
  return NormalizeWeights(std::move(conversation_id), n, sim);
}

}  // namespace sqltrace
