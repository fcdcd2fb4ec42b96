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

#ifndef SQLTRACE_CORPUS_H_
#define SQLTRACE_CORPUS_H_

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sqltrace/catalog.h"
#include "sqltrace/hardness.h"
#include "sqltrace/model_input.h"
#include "sqltrace/schema_state.h"
#include "sqltrace/similarity.h"
#include "sqltrace/synthesis.h"

namespace sqltrace {

// Corpus files are JSONL, one conversation per line:
//   {"conversation_id", "db_id",
//    "turns": [{"sql", "state", "template_id", "utterance"}, ...]}
// with sorted keys and canonical SQL text.
nlohmann::json ConversationToJson(const Conversation& conversation, const Catalog& catalog);
std::string ConversationToLine(const Conversation& conversation, const Catalog& catalog);
void WriteCorpus(std::span<const Conversation> corpus, const CatalogSet& catalogs,
                 std::ostream& out);

// Re-parses every SQL string against its catalog and checks the stored
// state. Throws DataError("line N: ...") on the first invalid record.
std::vector<Conversation> ParseCorpus(std::string_view raw, const CatalogSet& catalogs);
std::vector<Conversation> LoadCorpus(const std::string& path, const CatalogSet& catalogs);

// Single training label per slot: the highest-precedence keyword under
// SELECT > WHERE > GROUP_BY > HAVING > ORDER_BY > JOIN > FROM, or nullopt
// for NONE.
std::optional<Keyword> SstLabel(KeywordSet value);
inline constexpr std::string_view kNoneLabel = "NONE";

struct TrainingExample {
  std::string conversation_id;
  std::string db_id;
  std::size_t turn = 0;  // 1-based
  ModelInput input;
  std::vector<std::optional<Keyword>> sst_targets;  // one per slot
  std::vector<std::size_t> mlm_candidates;
  std::optional<std::size_t> udt_row;  // row of the conversation's weight matrix
};

struct EmitConfig {
  SimilarityConfig similarity;
  std::size_t max_input_length = kDefaultMaxInputLength;
};

// One example per turn. Turn t sees utterances 1..t and the state of turn
// t-1 (all NONE for t = 1); its targets come from turn t's SQL.
std::vector<TrainingExample> BuildExamples(const Conversation& conversation,
                                           const Catalog& catalog, std::size_t max_input_length);

nlohmann::json ExampleToJson(const TrainingExample& example);

// {"conversation_id", "turns", "weights": [[...], ...]} with six decimals.
// Each row is rounded so that the printed values still sum to exactly one.
std::string WeightsToLine(const WeightMatrix& weights);
std::vector<double> RoundWeightRow(std::span<const double> row, int decimals = 6);

struct EmitSummary {
  std::size_t examples = 0;
  std::size_t weight_records = 0;
};

// Writes the examples and weights files. Conversations with a single turn
// get no weight record and a null udt_row.
EmitSummary EmitTrainingExamples(std::span<const Conversation> corpus, const CatalogSet& catalogs,
                                 const EmitConfig& cfg, std::ostream& examples,
                                 std::ostream& weights);

struct CorpusStats {
  std::size_t conversation_count = 0;
  std::map<std::size_t, std::size_t> turn_histogram;
  std::map<std::string, std::size_t> template_usage;
  double mean_input_length = 0;
  std::size_t max_input_length = 0;
  std::array<std::size_t, kHardnessCount> hardness{};
};

// Computes statistics from a corpus file alone: each conversation's schema
// is recovered from the slot names of its stored states. Throws
// DataError("line N: ...") for malformed records.
CorpusStats ComputeCorpusStats(std::string_view raw,
                               std::size_t max_input_length = kDefaultMaxInputLength);
// Same, from in-memory conversations.
CorpusStats ComputeCorpusStats(std::span<const Conversation> corpus, const CatalogSet& catalogs,
                               std::size_t max_input_length = kDefaultMaxInputLength);
nlohmann::json CorpusStatsToJson(const CorpusStats& stats);

}  // namespace sqltrace

#endif  // SQLTRACE_CORPUS_H_
