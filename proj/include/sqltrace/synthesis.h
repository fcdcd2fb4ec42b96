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

#ifndef SQLTRACE_SYNTHESIS_H_
#define SQLTRACE_SYNTHESIS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sqltrace/catalog.h"
#include "sqltrace/error.h"
#include "sqltrace/query.h"
#include "sqltrace/random.h"
#include "sqltrace/schema_state.h"
#include "sqltrace/templates.h"

namespace sqltrace {

struct SeedPair {
  std::string utterance;
  Query sql;
  std::string db_id;
};

struct Turn {
  std::string utterance;
  Query sql;
  SchemaState state;
  std::optional<std::string> template_id;  // empty for the first turn
};

struct Conversation {
  std::string conversation_id;
  std::string db_id;
  std::vector<Turn> turns;

  std::size_t turn_count() const { return turns.size(); }
};

struct SynthesisConfig {
  int max_turns = 4;
  int rollout_attempts = 20;
  std::uint64_t rng_seed = 0;
  std::size_t target_conversation_count = 100;

  // Throws ConfigError unless max_turns >= 2 and rollout_attempts >= 1.
  void Validate() const;
};

// Values chosen for a template's typed slots.
struct SlotBindings {
  std::optional<ColumnId> column;
  std::optional<int> table;
  std::optional<Literal> value;
  std::optional<Aggregate> aggregate;
};

struct Instantiation {
  std::string utterance;
  Query next;
  SlotBindings bindings;
};

// Samples slot values from the catalog and applies the template's operation
// to `prev`. Columns come from tables present in `prev` except for
// switch_table. Returns nullopt when no valid assignment exists or the edit
// would not change the query.
std::optional<Instantiation> InstantiateTemplate(const FollowUpTemplate& tmpl, const Query& prev,
                                                 const Catalog& catalog, Rng& rng);

// Applies the operation with caller-chosen bindings; unset bindings are
// sampled as in InstantiateTemplate. Returns nullopt when the bindings are
// not applicable to `prev`.
std::optional<Instantiation> ApplyTemplate(const FollowUpTemplate& tmpl, const Query& prev,
                                           const Catalog& catalog, const SlotBindings& fixed,
                                           Rng& rng);

// Template filling for seeds without an utterance.
std::string DescribeQuery(const Query& query, const Catalog& catalog);

// Turn 1 is the seed; each later turn tries up to cfg.rollout_attempts
// distinct templates in random order and keeps the first that passes
// CheckConstraints and instantiates. Stops early when none succeeds.
Conversation RolloutConversation(const SeedPair& seed, std::span<const FollowUpTemplate> templates,
                                 const Catalog& catalog, const SynthesisConfig& cfg, Rng& rng);

// Problems found when re-validating a conversation: every SQL re-parses to
// the stored AST, states match, templates exist and their constraints held
// on the previous turn. Empty when valid.
std::vector<std::string> AuditConversation(const Conversation& conversation,
                                           std::span<const FollowUpTemplate> templates,
                                           const Catalog& catalog);

class YieldError : public Error {
 public:
  using Error::Error;
};

// Produces exactly cfg.target_conversation_count conversations with at
// least two turns. Attempt k rolls out seed k mod |seeds| with an rng
// derived from (cfg.rng_seed, k). Throws YieldError when more than half of
// the attempts would have to be discarded.
std::vector<Conversation> SynthesizeCorpus(std::span<const SeedPair> seeds,
                                           std::span<const FollowUpTemplate> templates,
                                           const CatalogSet& catalogs, const SynthesisConfig& cfg);

// Reads seeds from a JSON array or JSONL file of {db_id, utterance|question,
// sql|query}. Queries outside the supported subset are skipped with a
// warning.
std::vector<SeedPair> LoadSeeds(const std::string& path, const CatalogSet& catalogs,
                                std::vector<std::string>* warnings = nullptr);
std::vector<SeedPair> ParseSeeds(std::string_view raw, const CatalogSet& catalogs,
                                 std::vector<std::string>* warnings = nullptr);

}  // namespace sqltrace

#endif  // SQLTRACE_SYNTHESIS_H_
