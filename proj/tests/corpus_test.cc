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

#include "sqltrace/corpus.h"

#include <gtest/gtest.h>

#include <cstdio>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sqltrace/error.h"
#include "sqltrace/hardness.h"
#include "sqltrace/sql_parser.h"
#include "sqltrace/synthesis.h"
#include "support/test_catalogs.h"

namespace sqltrace {
namespace {

using nlohmann::json;
using testing::CarDbCatalog;
using testing::CarsCatalog;

Turn MakeTurn(const std::string& utterance, const std::string& sql, const Catalog& catalog,
              std::optional<std::string> template_id = std::nullopt) {
  Query q = ParseSql(sql, catalog);
  SchemaState state = ExtractSchemaState(q, catalog);
  return Turn{utterance, std::move(q), std::move(state), std::move(template_id)};
}

Conversation TwoTurns(const Catalog& catalog) {
  return Conversation{"c1", catalog.db_id(),
                      {MakeTurn("Show names.", "SELECT name FROM cars", catalog),
                       MakeTurn("Sorted by year.", "SELECT year FROM cars ORDER BY year", catalog,
                                "t2")}};
}

CatalogSet SetOf(const Catalog& catalog) { return CatalogSet(std::vector<Catalog>{catalog}); }

std::vector<Conversation> Synthesized(std::size_t count) {
  static const CatalogSet catalogs = testing::DataCatalogs();
  const auto seeds = LoadSeeds(testing::DataPath("seeds.jsonl"), catalogs);
  const auto templates = LoadTemplates(testing::TemplatePath());
  SynthesisConfig cfg;
  cfg.rng_seed = 3;
  cfg.target_conversation_count = count;
  return SynthesizeCorpus(seeds, templates, catalogs, cfg);
}

// Label chosen by scanning the fixed precedence list by hand.
std::string OracleLabel(KeywordSet value) {
  static const char* const kOrder[] = {"SELECT", "WHERE", "GROUP_BY", "HAVING",
                                       "ORDER_BY", "JOIN", "FROM"};
  for (const char* name : kOrder) {
    if (value.contains(*KeywordFromName(name))) return name;
  }
  return "NONE";
}

TEST(CorpusFormatTest, LineHasSortedKeysAndCanonicalSql) {
  const Catalog catalog = CarsCatalog();
  const std::string line = ConversationToLine(TwoTurns(catalog), catalog);
  EXPECT_EQ(line.rfind(R"({"conversation_id":"c1","db_id":"cars_min","turns":[{"sql":"SELECT cars.name FROM cars","state":)", 0), 0u)
      << line;
  const json doc = json::parse(line);
  EXPECT_TRUE(doc["turns"][0]["template_id"].is_null());
  EXPECT_EQ(doc["turns"][1]["template_id"], "t2");
  EXPECT_EQ(doc["turns"][1]["utterance"], "Sorted by year.");
}

TEST(CorpusFormatTest, RoundTrip) {
  const CatalogSet catalogs = testing::DataCatalogs();
  const auto corpus = Synthesized(30);
  std::ostringstream out;
  WriteCorpus(corpus, catalogs, out);
  const auto parsed = ParseCorpus(out.str(), catalogs);
  ASSERT_EQ(parsed.size(), corpus.size());
  std::ostringstream again;
  WriteCorpus(parsed, catalogs, again);
  EXPECT_EQ(out.str(), again.str());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    ASSERT_EQ(parsed[i].turns.size(), corpus[i].turns.size());
    for (std::size_t t = 0; t < corpus[i].turns.size(); ++t) {
      EXPECT_EQ(parsed[i].turns[t].sql, corpus[i].turns[t].sql);
      EXPECT_EQ(parsed[i].turns[t].state, corpus[i].turns[t].state);
      EXPECT_EQ(parsed[i].turns[t].template_id, corpus[i].turns[t].template_id);
    }
  }
}

TEST(CorpusFormatTest, ErrorsNameTheLine) {
  const Catalog catalog = CarsCatalog();
  const CatalogSet catalogs = SetOf(catalog);
  const std::string good = ConversationToLine(TwoTurns(catalog), catalog);
  auto message = [&](const std::string& raw) {
    try {
      ParseCorpus(raw, catalogs);
    } catch (const DataError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_EQ(message(good + "\n" + good.substr(0, 30) + "\n").rfind("line 2:", 0), 0u);
  EXPECT_EQ(message(good + "\n\n" + good + "\n[]\n").rfind("line 4:", 0), 0u);

  json bad = json::parse(good);
  bad["turns"][1]["sql"] = "SELECT name FROM cars";
  EXPECT_NE(message(bad.dump()).find("turn 2"), std::string::npos);
  bad = json::parse(good);
  bad["turns"][0]["sql"] = "SELECT FROM cars";
  EXPECT_NE(message(bad.dump()).find("line 1"), std::string::npos);
  bad = json::parse(good);
  bad["db_id"] = "elsewhere";
  EXPECT_NE(message(bad.dump()), "no error");
  bad = json::parse(good);
  bad["turns"] = json::array();
  EXPECT_NE(message(bad.dump()), "no error");
}

TEST(SstLabelTest, PrecedenceMatchesHandScan) {
  for (unsigned bits = 0; bits < (1u << kKeywordCount); ++bits) {
    const KeywordSet value = KeywordSet::FromBits(static_cast<std::uint8_t>(bits));
    const auto label = SstLabel(value);
    EXPECT_EQ(label ? std::string(KeywordName(*label)) : std::string(kNoneLabel),
              OracleLabel(value));
  }
}

TEST(ExamplesTest, OnePerTurnWithPreviousState) {
  const Catalog catalog = CarsCatalog();
  const auto examples = BuildExamples(TwoTurns(catalog), catalog, kDefaultMaxInputLength);
  ASSERT_EQ(examples.size(), 2u);
  const std::vector<std::string> first_history = {"Show names."};
  EXPECT_EQ(examples[0].input,
            SerializeInput(first_history, SchemaState::AllNone(catalog), catalog));
  const std::vector<std::string> second_history = {"Show names.", "Sorted by year."};
  EXPECT_EQ(examples[1].input,
            SerializeInput(second_history, TwoTurns(catalog).turns[0].state, catalog));
  EXPECT_EQ(examples[0].turn, 1u);
  EXPECT_EQ(examples[1].turn, 2u);
  EXPECT_EQ(examples[0].udt_row, 0u);
  EXPECT_EQ(examples[1].udt_row, 1u);
}

TEST(ExamplesTest, TargetsForOrderedSelect) {
  const Catalog catalog = CarsCatalog();
  const auto examples = BuildExamples(TwoTurns(catalog), catalog, kDefaultMaxInputLength);
  const auto& targets = examples[1].sst_targets;
  ASSERT_EQ(targets.size(), catalog.slot_count());
  EXPECT_EQ(targets[*catalog.FindSlot("cars.year")], Keyword::kSelect);
  EXPECT_EQ(targets[*catalog.FindSlot("cars")], Keyword::kFrom);
  EXPECT_EQ(targets[*catalog.FindSlot("cars.name")], std::nullopt);
}

TEST(ExamplesTest, JsonLayout) {
  const Catalog catalog = CarsCatalog();
  const auto examples = BuildExamples(TwoTurns(catalog), catalog, kDefaultMaxInputLength);
  const json doc = ExampleToJson(examples[1]);
  EXPECT_EQ(doc["sst_targets"], json({"FROM", "NONE", "SELECT"}));
  EXPECT_EQ(doc["tokens"].front(), "[CLS]");
  EXPECT_EQ(doc["spans"].front()["kind"], "cls");
  EXPECT_EQ(doc["udt_row"], 1);
  EXPECT_EQ(doc["turn"], 2);
  std::vector<std::string> keys;
  for (auto it = doc.begin(); it != doc.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"conversation_id", "db_id", "mlm_candidates", "spans",
                                            "sst_targets", "tokens", "turn", "udt_row"}));
}

TEST(ExamplesTest, SingleTurnHasNoWeightRow) {
  const Catalog catalog = CarsCatalog();
  Conversation single{"s", "cars_min", {MakeTurn("Names.", "SELECT name FROM cars", catalog)}};
  const auto examples = BuildExamples(single, catalog, kDefaultMaxInputLength);
  ASSERT_EQ(examples.size(), 1u);
  EXPECT_FALSE(examples[0].udt_row);
  EXPECT_TRUE(ExampleToJson(examples[0])["udt_row"].is_null());

  std::ostringstream ex;
  std::ostringstream w;
  const std::vector<Conversation> corpus = {single};
  const auto summary = EmitTrainingExamples(corpus, SetOf(catalog), EmitConfig{}, ex, w);
  EXPECT_EQ(summary.examples, 1u);
  EXPECT_EQ(summary.weight_records, 0u);
  EXPECT_TRUE(w.str().empty());
}

TEST(ExamplesTest, TargetsRederiveFromStoredSql) {
  const CatalogSet catalogs = testing::DataCatalogs();
  for (const Conversation& conv : Synthesized(50)) {
    const Catalog& catalog = catalogs.Get(conv.db_id);
    const auto examples = BuildExamples(conv, catalog, kDefaultMaxInputLength);
    for (std::size_t t = 0; t < examples.size(); ++t) {
      const SchemaState truth = ExtractSchemaState(ParseSql(RenderSql(conv.turns[t].sql, catalog),
                                                            catalog),
                                                   catalog);
      ASSERT_EQ(examples[t].sst_targets.size(), truth.size());
      for (std::size_t s = 0; s < truth.size(); ++s) {
        const auto label = examples[t].sst_targets[s];
        ASSERT_EQ(label ? std::string(KeywordName(*label)) : "NONE", OracleLabel(truth[s]));
      }
    }
  }
}

TEST(WeightsTest, RoundedRowsSumToOne) {
  const std::vector<double> thirds = {0, 1.0 / 3, 1.0 / 3, 1.0 / 3};
  const auto rounded = RoundWeightRow(thirds);
  EXPECT_EQ(rounded[0], 0.0);
  long units = 0;
  for (double v : rounded) units += std::lround(v * 1e6);
  EXPECT_EQ(units, 1000000);
  // Exactly representable rows are untouched.
  const std::vector<double> exact = {0.25, 0.0, 0.75};
  EXPECT_EQ(RoundWeightRow(exact), exact);
}

TEST(WeightsTest, LineFormat) {
  WeightMatrix m{"c", 2, {0, 1, 1, 0}};
  EXPECT_EQ(WeightsToLine(m),
            R"({"conversation_id":"c","turns":2,"weights":[[0.000000,1.000000],[1.000000,0.000000]]})");
}

TEST(WeightsTest, HundredConversationsPrintedRowsSumToOne) {
  const CatalogSet catalogs = testing::DataCatalogs();
  const auto corpus = Synthesized(100);
  std::ostringstream ex;
  std::ostringstream w;
  const auto summary = EmitTrainingExamples(corpus, catalogs, EmitConfig{}, ex, w);
  EXPECT_EQ(summary.weight_records, 100u);
  std::size_t expected_examples = 0;
  for (const auto& c : corpus) expected_examples += c.turn_count();
  EXPECT_EQ(summary.examples, expected_examples);

  std::istringstream lines(w.str());
  std::string line;
  std::size_t records = 0;
  while (std::getline(lines, line)) {
    const json doc = json::parse(line);
    const std::size_t n = doc["turns"];
    ASSERT_EQ(doc["weights"].size(), n);
    for (std::size_t x = 0; x < n; ++x) {
      double sum = 0;
      for (std::size_t p = 0; p < n; ++p) {
        const double v = doc["weights"][x][p];
        ASSERT_GE(v, 0.0);
        if (p == x) {
          ASSERT_EQ(v, 0.0);
        }
        sum += v;
      }
      ASSERT_NEAR(sum, 1.0, 1e-9);
    }
    ++records;
  }
  EXPECT_EQ(records, 100u);
}

TEST(StatsTest, HistogramAndHardness) {
  const Catalog catalog = CarsCatalog();
  Conversation three{"c3", "cars_min",
                     {MakeTurn("a", "SELECT name FROM cars", catalog),
                      MakeTurn("b", "SELECT year FROM cars", catalog, "t"),
                      MakeTurn("c", "SELECT year FROM cars WHERE name = 'x' ORDER BY year", catalog,
                               "u")}};
  std::ostringstream out;
  const std::vector<Conversation> corpus = {three};
  WriteCorpus(corpus, SetOf(catalog), out);
  const CorpusStats stats = ComputeCorpusStats(out.str());
  EXPECT_EQ(stats.conversation_count, 1u);
  EXPECT_EQ(stats.turn_histogram, (std::map<std::size_t, std::size_t>{{3, 1}}));
  EXPECT_EQ(stats.template_usage, (std::map<std::string, std::size_t>{{"t", 1}, {"u", 1}}));
  EXPECT_EQ(stats.hardness[static_cast<int>(Hardness::kEasy)], 2u);
  EXPECT_EQ(stats.hardness[static_cast<int>(Hardness::kMedium)], 1u);

  const json doc = CorpusStatsToJson(stats);
  EXPECT_EQ(doc["turn_histogram"], json({{"3", 1}}));
  EXPECT_EQ(doc["hardness"]["easy"], 2);
  EXPECT_EQ(doc["conversation_count"], 1);
}

TEST(StatsTest, FileStatsMatchCatalogStats) {
  const CatalogSet catalogs = testing::DataCatalogs();
  const auto corpus = Synthesized(100);
  std::ostringstream out;
  WriteCorpus(corpus, catalogs, out);
  const CorpusStats from_file = ComputeCorpusStats(out.str());
  const CorpusStats in_memory = ComputeCorpusStats(corpus, catalogs);
  EXPECT_EQ(CorpusStatsToJson(from_file), CorpusStatsToJson(in_memory));
  std::size_t total = 0;
  for (const auto& [turns, count] : from_file.turn_histogram) total += count;
  EXPECT_EQ(total, 100u);
  EXPECT_EQ(from_file.turn_histogram.count(1), 0u);
}

TEST(StatsTest, TruncatedLineReportsLineNumber) {
  const CatalogSet catalogs = testing::DataCatalogs();
  std::ostringstream out;
  WriteCorpus(Synthesized(3), catalogs, out);
  std::string raw = out.str();
  raw.resize(raw.size() - 20);
  try {
    ComputeCorpusStats(raw);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("line 3:", 0), 0u) << e.what();
  }
}

struct HardnessCase {
  const char* sql;
  Hardness expected;
};

TEST(HardnessTest, Classification) {
  const Catalog catalog = CarDbCatalog();
  const HardnessCase cases[] = {
      {"SELECT name FROM cars", Hardness::kEasy},
      {"SELECT count(*) FROM cars WHERE year > 3", Hardness::kEasy},
      {"SELECT name, year FROM cars", Hardness::kMedium},
      {"SELECT name FROM cars WHERE year > 3 ORDER BY year", Hardness::kMedium},
      {"SELECT T1.name FROM cars AS T1 JOIN makers AS T2 ON T1.maker_id = T2.id", Hardness::kEasy},
      {"SELECT name FROM cars WHERE year > 3 GROUP BY name ORDER BY name", Hardness::kHard},
      {"SELECT name FROM cars WHERE id IN (SELECT car_id FROM owners)", Hardness::kHard},
      {"SELECT name FROM cars UNION SELECT name FROM makers", Hardness::kHard},
      {"SELECT name FROM cars WHERE year > 3 GROUP BY name ORDER BY name LIMIT 1",
       Hardness::kExtra},
      {"SELECT name, year FROM cars WHERE id IN (SELECT car_id FROM owners)", Hardness::kExtra},
      {"SELECT name FROM cars WHERE name LIKE '%a%' OR year > 3", Hardness::kHard},
  };
  for (const auto& c : cases) {
    EXPECT_EQ(EvaluateHardness(ParseSql(c.sql, catalog)), c.expected) << c.sql;
  }
}

TEST(HardnessTest, Components) {
  const Catalog catalog = CarDbCatalog();
  const auto c = CountHardnessComponents(ParseSql(
      "SELECT max(year), count(*) FROM cars WHERE name LIKE 'a' OR year > 3 AND id = 2 "
      "GROUP BY name, year",
      catalog));
  // WHERE, GROUP BY, one OR, one LIKE.
  EXPECT_EQ(c.component1, 4);
  EXPECT_EQ(c.component2, 0);
  // Two aggregates, two select items, three conditions, two group keys.
  EXPECT_EQ(c.others, 4);
  EXPECT_EQ(ClassifyHardness({0, 0, 0}), Hardness::kEasy);
  EXPECT_EQ(ClassifyHardness({1, 0, 2}), Hardness::kMedium);
  EXPECT_EQ(ClassifyHardness({2, 0, 3}), Hardness::kHard);
  EXPECT_EQ(ClassifyHardness({1, 1, 0}), Hardness::kHard);
  EXPECT_EQ(ClassifyHardness({3, 0, 3}), Hardness::kExtra);
  EXPECT_EQ(HardnessName(Hardness::kExtra), std::string("extra"));
}

}  // namespace
}  // namespace sqltrace
