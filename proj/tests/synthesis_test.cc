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

#include <gtest/gtest.h>

#include <set>
#include <string>
#include <vector>

#include "sqltrace/corpus.h"
#include "sqltrace/error.h"
#include "sqltrace/sql_parser.h"
#include "sqltrace/templates.h"
#include "support/test_catalogs.h"

namespace sqltrace {
namespace {

using testing::CarDbCatalog;

FollowUpTemplate Make(const std::string& id, const std::string& question, const std::string& op,
                      const std::string& constraints) {
  return ParseTemplates(R"([{"template_id": ")" + id + R"(", "question_template": ")" + question +
                        R"(", "operation": ")" + op + R"(", "constraints": )" + constraints +
                        "}]")
      .at(0);
}

FollowUpTemplate ReplaceSelect() {
  return Make("rs", "Could you please tell me the [COLUMN0] of those?", "replace_select_column",
              R"(["single_select"])");
}

Catalog OneColumnCatalog() {
  return ValidateCatalog(R"({
    "db_id": "solo",
    "table_names_original": ["tags"],
    "column_names_original": [[-1, "*"], [0, "label"]],
    "column_types": ["text", "text"],
    "primary_keys": [],
    "foreign_keys": []
  })");
}

std::vector<FollowUpTemplate> Pack() { return LoadTemplates(testing::TemplatePath()); }

std::vector<SeedPair> DataSeeds(const CatalogSet& catalogs) {
  return LoadSeeds(testing::DataPath("seeds.jsonl"), catalogs);
}

TEST(InstantiateTest, ReplaceSelectWithChosenColumn) {
  const Catalog catalog = CarDbCatalog();
  const Query prev = ParseSql("SELECT name FROM cars WHERE year > 2000", catalog);
  SlotBindings fixed;
  fixed.column = catalog.FindColumn(*catalog.FindTable("cars"), "horsepower");
  ASSERT_TRUE(fixed.column);
  Rng rng(1);
  const auto out = ApplyTemplate(ReplaceSelect(), prev, catalog, fixed, rng);
  ASSERT_TRUE(out);
  EXPECT_EQ(out->utterance, "Could you please tell me the horsepower of those?");
  EXPECT_EQ(out->next, ParseSql("SELECT horsepower FROM cars WHERE year > 2000", catalog));
  EXPECT_EQ(RenderSql(out->next, catalog), "SELECT cars.horsepower FROM cars WHERE cars.year > 2000");
}

TEST(InstantiateTest, AddLimitLeavesOtherClauses) {
  const Catalog catalog = CarDbCatalog();
  const Query prev = ParseSql(
      "SELECT name, count(*) FROM cars WHERE year > 3 GROUP BY name ORDER BY name DESC", catalog);
  SlotBindings fixed;
  fixed.value = Literal{"3"};
  Rng rng(2);
  const auto out =
      ApplyTemplate(Make("al", "Just the top [VALUE0].", "add_limit", R"(["no_limit"])"), prev,
                    catalog, fixed, rng);
  ASSERT_TRUE(out);
  EXPECT_EQ(out->next.limit, 3);
  EXPECT_EQ(out->utterance, "Just the top 3.");
  Query expected = prev;
  expected.limit = 3;
  EXPECT_EQ(out->next, expected);
}

TEST(InstantiateTest, NoDistinctReplacementColumn) {
  const Catalog catalog = OneColumnCatalog();
  const Query prev = ParseSql("SELECT label FROM tags", catalog);
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    EXPECT_FALSE(InstantiateTemplate(ReplaceSelect(), prev, catalog, rng));
  }
}

TEST(InstantiateTest, InapplicableBindingsFail) {
  const Catalog catalog = CarDbCatalog();
  const Query prev = ParseSql("SELECT name FROM cars", catalog);
  SlotBindings fixed;
  fixed.column = catalog.FindColumn(*catalog.FindTable("cars"), "name");
  Rng rng(4);
  // Same column: the edit would not change the query.
  EXPECT_FALSE(ApplyTemplate(ReplaceSelect(), prev, catalog, fixed, rng));
  fixed.column = catalog.FindColumn(*catalog.FindTable("makers"), "country");
  // Column of a table the previous query does not read.
  EXPECT_FALSE(ApplyTemplate(ReplaceSelect(), prev, catalog, fixed, rng));
}

TEST(InstantiateTest, EditsStayWithinSignatureAndReparse) {
  const CatalogSet catalogs = testing::DataCatalogs();
  const auto seeds = DataSeeds(catalogs);
  const auto pack = Pack();
  Rng rng(17);
  std::set<Operation> exercised;
  for (const SeedPair& seed : seeds) {
    const Catalog& catalog = catalogs.Get(seed.db_id);
    const ClauseMap before = ExtractClauseMap(seed.sql, catalog);
    for (const FollowUpTemplate& tmpl : pack) {
      if (!CheckConstraints(tmpl, seed.sql, catalog)) continue;
      const auto out = InstantiateTemplate(tmpl, seed.sql, catalog, rng);
      if (!out) continue;
      exercised.insert(tmpl.operation);
      ASSERT_NE(out->next, seed.sql) << tmpl.template_id;
      ASSERT_EQ(ParseSql(RenderSql(out->next, catalog), catalog), out->next) << tmpl.template_id;
      ASSERT_EQ(out->utterance.find('['), std::string::npos) << out->utterance;
      const ClauseMap after = ExtractClauseMap(out->next, catalog);
      const KeywordSet allowed = OperationEditSignature(tmpl.operation);
      for (Keyword k : kAllKeywords) {
        if (allowed.contains(k)) continue;
        ASSERT_EQ(before[k], after[k]) << tmpl.template_id << " changed " << KeywordName(k) << ": "
                                       << RenderSql(seed.sql, catalog) << " -> "
                                       << RenderSql(out->next, catalog);
      }
    }
  }
  EXPECT_EQ(exercised.size(), static_cast<std::size_t>(kOperationCount));
}

TEST(RolloutTest, ReplaceSelectOnlyChangesSelect) {
  const Catalog catalog = CarDbCatalog();
  const SeedPair seed{"Show car names.", ParseSql("SELECT name FROM cars", catalog), "car_db"};
  const std::vector<FollowUpTemplate> templates = {ReplaceSelect()};
  SynthesisConfig cfg;
  cfg.max_turns = 3;
  Rng rng(5);
  const Conversation c = RolloutConversation(seed, templates, catalog, cfg, rng);
  ASSERT_EQ(c.turn_count(), 3u);
  EXPECT_EQ(c.turns[0].utterance, seed.utterance);
  EXPECT_FALSE(c.turns[0].template_id);
  for (std::size_t t = 1; t < c.turns.size(); ++t) {
    EXPECT_EQ(c.turns[t].template_id, "rs");
    EXPECT_NE(c.turns[t].sql.select, c.turns[t - 1].sql.select);
    Query a = c.turns[t].sql;
    Query b = c.turns[t - 1].sql;
    a.select.clear();
    b.select.clear();
    EXPECT_EQ(a, b);
    EXPECT_EQ(c.turns[t].state, ExtractSchemaState(c.turns[t].sql, catalog));
  }
  EXPECT_TRUE(AuditConversation(c, templates, catalog).empty());
}

TEST(RolloutTest, StopsWhenNoTemplateApplies) {
  const Catalog catalog = OneColumnCatalog();
  const SeedPair seed{"Labels.", ParseSql("SELECT label FROM tags", catalog), "solo"};
  const std::vector<FollowUpTemplate> templates = {ReplaceSelect()};
  Rng rng(6);
  const Conversation c = RolloutConversation(seed, templates, catalog, SynthesisConfig{}, rng);
  EXPECT_EQ(c.turn_count(), 1u);
}

TEST(RolloutTest, NeverExceedsMaxTurns) {
  const CatalogSet catalogs = testing::DataCatalogs();
  const auto seeds = DataSeeds(catalogs);
  const auto pack = Pack();
  SynthesisConfig cfg;
  for (int max_turns = 2; max_turns <= 6; ++max_turns) {
    cfg.max_turns = max_turns;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      Rng rng(Rng::Derive(9, i));
      const Catalog& catalog = catalogs.Get(seeds[i].db_id);
      const Conversation c = RolloutConversation(seeds[i], pack, catalog, cfg, rng);
      ASSERT_GE(c.turn_count(), 1u);
      ASSERT_LE(c.turn_count(), static_cast<std::size_t>(max_turns));
      ASSERT_TRUE(AuditConversation(c, pack, catalog).empty());
    }
  }
}

TEST(AuditTest, DetectsTampering) {
  const Catalog catalog = CarDbCatalog();
  const SeedPair seed{"Show car names.", ParseSql("SELECT name FROM cars", catalog), "car_db"};
  const std::vector<FollowUpTemplate> templates = {ReplaceSelect()};
  SynthesisConfig cfg;
  cfg.max_turns = 2;
  Rng rng(7);
  Conversation c = RolloutConversation(seed, templates, catalog, cfg, rng);
  ASSERT_EQ(c.turn_count(), 2u);
  Conversation wrong_state = c;
  wrong_state.turns[1].state = SchemaState::AllNone(catalog);
  EXPECT_FALSE(AuditConversation(wrong_state, templates, catalog).empty());
  Conversation unknown = c;
  unknown.turns[1].template_id = "nope";
  EXPECT_FALSE(AuditConversation(unknown, templates, catalog).empty());
}

TEST(SynthesizeCorpusTest, TenSeedsHundredConversations) {
  const CatalogSet catalogs = testing::DataCatalogs();
  auto seeds = DataSeeds(catalogs);
  seeds.resize(10);
  const auto pack = Pack();
  SynthesisConfig cfg;
  cfg.rng_seed = 42;
  const auto corpus = SynthesizeCorpus(seeds, pack, catalogs, cfg);
  ASSERT_EQ(corpus.size(), 100u);
  std::set<std::string> ids;
  for (const Conversation& c : corpus) {
    EXPECT_TRUE(ids.insert(c.conversation_id).second);
    EXPECT_GE(c.turn_count(), 2u);
    EXPECT_LE(c.turn_count(), 4u);
    EXPECT_TRUE(AuditConversation(c, pack, catalogs.Get(c.db_id)).empty());
  }
  EXPECT_EQ(corpus.front().conversation_id, "conv-000000");
}

TEST(SynthesizeCorpusTest, DeterministicAndSeedSensitive) {
  const CatalogSet catalogs = testing::DataCatalogs();
  const auto seeds = DataSeeds(catalogs);
  const auto pack = Pack();
  SynthesisConfig cfg;
  cfg.rng_seed = 7;
  cfg.target_conversation_count = 50;
  auto lines = [&](const SynthesisConfig& c) {
    std::vector<std::string> out;
    for (const auto& conv : SynthesizeCorpus(seeds, pack, catalogs, c)) {
      out.push_back(ConversationToLine(conv, catalogs.Get(conv.db_id)));
    }
    return out;
  };
  const auto first = lines(cfg);
  EXPECT_EQ(first, lines(cfg));
  cfg.rng_seed = 8;
  EXPECT_NE(first, lines(cfg));
}

TEST(SynthesizeCorpusTest, UnsatisfiableTemplatesRaiseYieldError) {
  const CatalogSet catalogs = testing::DataCatalogs();
  const Catalog& catalog = catalogs.Get("car_1");
  const std::vector<SeedPair> seeds = {
      {"Makers.", ParseSql("SELECT country FROM makers", catalog), "car_1"}};
  const std::vector<FollowUpTemplate> templates = {
      Make("dw", "Drop that filter.", "drop_where_predicate", R"(["has_where"])")};
  EXPECT_THROW(SynthesizeCorpus(seeds, templates, catalogs, SynthesisConfig{}), YieldError);
}

TEST(SynthesizeCorpusTest, ConfigValidation) {
  SynthesisConfig cfg;
  cfg.max_turns = 1;
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg.max_turns = 4;
  cfg.rollout_attempts = 0;
  EXPECT_THROW(cfg.Validate(), ConfigError);
}

TEST(SeedsTest, ParsesArraysAndJsonl) {
  const CatalogSet catalogs(std::vector<Catalog>{CarDbCatalog()});
  std::vector<std::string> warnings;
  const auto jsonl = ParseSeeds(
      R"({"db_id": "car_db", "question": "Car names?", "query": "SELECT name FROM cars"}
{"db_id": "car_db", "sql": "SELECT country FROM makers"}
{"db_id": "car_db", "query": "SELECT name FROM cars WITH ROLLUP"}
)",
      catalogs, &warnings);
  ASSERT_EQ(jsonl.size(), 2u);
  EXPECT_EQ(jsonl[0].utterance, "Car names?");
  EXPECT_EQ(jsonl[1].utterance, DescribeQuery(jsonl[1].sql, CarDbCatalog()));
  EXPECT_FALSE(jsonl[1].utterance.empty());
  EXPECT_EQ(warnings.size(), 1u);
  const auto array = ParseSeeds(
      R"([{"db_id": "car_db", "utterance": "Car names?", "sql": "SELECT name FROM cars"}])",
      catalogs);
  ASSERT_EQ(array.size(), 1u);
  EXPECT_EQ(array[0].sql, jsonl[0].sql);
}

TEST(SeedsTest, UnknownDatabaseIsDataError) {
  const CatalogSet catalogs(std::vector<Catalog>{CarDbCatalog()});
  EXPECT_THROW(ParseSeeds(R"({"db_id": "nope", "query": "SELECT a FROM b"})", catalogs), DataError);
}

TEST(SeedsTest, ShippedSeedsAllLoad) {
  const CatalogSet catalogs = testing::DataCatalogs();
  std::vector<std::string> warnings;
  const auto seeds = LoadSeeds(testing::DataPath("seeds.jsonl"), catalogs, &warnings);
  EXPECT_EQ(seeds.size(), 40u);
  EXPECT_TRUE(warnings.empty());
}

}  // namespace
}  // namespace sqltrace
