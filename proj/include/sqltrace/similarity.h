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

#ifndef SQLTRACE_SIMILARITY_H_
#define SQLTRACE_SIMILARITY_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sqltrace/catalog.h"
#include "sqltrace/query.h"
#include "sqltrace/schema_state.h"

namespace sqltrace {

// Rooted ordered tree over a query. Node 0 is the "SQL" root; its children
// are clause nodes in fixed order (SELECT, FROM, WHERE, GROUP_BY, HAVING,
// ORDER_BY, LIMIT, then a set-operation node). Aggregates, comparison and
// boolean operators are interior nodes; schema items keep their canonical
// names; literals collapse to "VAL"; a subquery is a fresh "SQL" subtree.
struct SqlTree {
  std::vector<std::string> labels;
  std::vector<std::vector<std::size_t>> children;

  std::size_t size() const { return labels.size(); }
  std::size_t AddNode(std::string label);
  std::size_t AddChild(std::size_t parent, std::string label);

  bool operator==(const SqlTree&) const = default;
};

SqlTree BuildSqlTree(const Query& query, const Catalog& catalog);

inline constexpr int kMaxWlIterations = 8;

struct KernelConfig {
  int iterations = 3;  // WL height h

  // Throws ConfigError unless 0 <= iterations <= kMaxWlIterations.
  void Validate() const;
};

struct SimilarityConfig {
  double lambda = 0.5;
  KernelConfig kernel;

  // Throws ConfigError unless 0 <= lambda <= 1 and the kernel is valid.
  void Validate() const;
};

// Averaged per-slot Jaccard overlap over slots non-empty in at least one of
// the states; 0 when no such slot exists. Throws DataError when the states
// come from different catalogs.
double SemanticSimilarity(const SchemaState& x, const SchemaState& y);

// Weisfeiler-Lehman subtree kernel: sum over iterations 0..h of the dot
// product of label-count vectors. Iteration i relabels every node with an
// injective compression of (label, sorted child labels) from iteration i-1;
// the compression dictionary is shared by both trees.
std::uint64_t WlKernel(const SqlTree& x, const SqlTree& y, const KernelConfig& cfg);

// Cosine-normalized WL kernel, in [0, 1].
double StructuralSimilarity(const SqlTree& x, const SqlTree& y, const KernelConfig& cfg);

struct SimilarityReport {
  double semantic = 0;
  double structural = 0;
  double combined = 0;
};

// lambda * semantic + (1 - lambda) * structural.
double BlendSimilarity(double semantic, double structural, double lambda);
SimilarityReport CompareQueries(const Query& x, const Query& y, const Catalog& catalog,
                                const SimilarityConfig& cfg);
double CombinedSimilarity(const Query& x, const Query& y, const Catalog& catalog,
                          const SimilarityConfig& cfg);

// Square matrix over the turns of one conversation, zero diagonal; every
// row is a probability distribution over the other turns.
struct WeightMatrix {
  std::string conversation_id;
  std::size_t turns = 0;
  std::vector<double> values;  // row-major

  double at(std::size_t x, std::size_t p) const { return values[x * turns + p]; }
};

// Normalizes a similarity matrix (diagonal ignored) row by row. Rows whose
// off-diagonal similarities are all zero fall back to uniform weights.
WeightMatrix NormalizeWeights(std::string conversation_id, std::size_t turns,
                              std::span<const double> similarity);

// Weights w[x][p] = f_SQL(o_x, o_p) / sum_k f_SQL(o_x, o_k) over the other
// turns of the conversation. Throws DataError for fewer than two turns.
WeightMatrix ContrastiveWeights(std::string conversation_id, std::span<const Query> turns,
                                const Catalog& catalog, const SimilarityConfig& cfg);

}  // namespace sqltrace

#endif  // SQLTRACE_SIMILARITY_H_
