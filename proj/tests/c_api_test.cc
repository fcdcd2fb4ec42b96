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

#include "sqltrace/sqltrace.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string kTables = std::string(SQLTRACE_DATA_DIR) + "/tables.json";
const std::string kSeeds = std::string(SQLTRACE_DATA_DIR) + "/seeds.jsonl";
const std::string kTemplates = std::string(SQLTRACE_TEMPLATE_DIR) + "/followup_templates.json";

std::string Slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

class CApiTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ASSERT_EQ(sqltrace_catalogs_load(kTables.c_str(), &catalogs_), SQLTRACE_OK)
        << sqltrace_last_error();
    dir_ = std::filesystem::temp_directory_path() /
           ("sqltrace_c_api_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override {
    sqltrace_catalogs_free(catalogs_);
    std::filesystem::remove_all(dir_);
  }
  std::string Path(const char* name) const { return (dir_ / name).string(); }

  sqltrace_catalogs* catalogs_ = nullptr;
  std::filesystem::path dir_;
};

TEST_F(CApiTest, Handles) {
  EXPECT_EQ(sqltrace_catalogs_count(catalogs_), 4u);
  EXPECT_EQ(sqltrace_catalogs_count(nullptr), 0u);
  sqltrace_templates* templates = nullptr;
  char* warnings = nullptr;
  ASSERT_EQ(sqltrace_templates_load(kTemplates.c_str(), &templates, &warnings), SQLTRACE_OK);
  EXPECT_EQ(sqltrace_templates_count(templates), 100u);
  EXPECT_STREQ(warnings, "[]");
  sqltrace_string_free(warnings);
  sqltrace_templates_free(templates);
  sqltrace_templates_free(nullptr);
  sqltrace_catalogs_free(nullptr);
  EXPECT_STREQ(sqltrace_version(), "0.1.0");
}

TEST_F(CApiTest, SchemaStateJson) {
  char* json = nullptr;
  ASSERT_EQ(sqltrace_schema_state_json(catalogs_, "car_1", "SELECT name FROM cars", &json),
            SQLTRACE_OK);
  const std::string text = json;
  sqltrace_string_free(json);
  EXPECT_EQ(text.rfind(R"({"slots":[{"name":"cars","value":["FROM"]})", 0), 0u) << text;
  EXPECT_NE(text.find(R"({"name":"cars.name","value":["SELECT"]})"), std::string::npos);
}

TEST_F(CApiTest, Canonicalize) {
  char* sql = nullptr;
  ASSERT_EQ(sqltrace_canonicalize(catalogs_, "car_1", "select T1.NAME from CARS as T1", &sql),
            SQLTRACE_OK);
  EXPECT_STREQ(sql, "SELECT cars.name FROM cars");
  sqltrace_string_free(sql);
}

TEST_F(CApiTest, Similarity) {
  sqltrace_similarity_config cfg;
  sqltrace_similarity_config_default(&cfg);
  EXPECT_EQ(cfg.lambda, 0.5);
  EXPECT_EQ(cfg.wl_iterations, 3);
  sqltrace_similarity_report r{};
  ASSERT_EQ(sqltrace_similarity(catalogs_, "car_1", "SELECT name FROM cars",
                                "SELECT name FROM cars WHERE year > 2000", &cfg, &r),
            SQLTRACE_OK);
  EXPECT_NEAR(r.semantic, 2.0 / 3.0, 1e-9);
  EXPECT_NEAR(r.combined, 0.5 * r.semantic + 0.5 * r.structural, 1e-12);
  cfg.lambda = 1.5;
  EXPECT_EQ(sqltrace_similarity(catalogs_, "car_1", "SELECT name FROM cars",
                                "SELECT name FROM cars", &cfg, &r),
            SQLTRACE_ERR_CONFIG);
}

TEST_F(CApiTest, ErrorCodesAndOffset) {
  char* out = nullptr;
  EXPECT_EQ(sqltrace_schema_state_json(catalogs_, "car_1", "SELECT FROM cars", &out),
            SQLTRACE_ERR_PARSE);
  EXPECT_EQ(out, nullptr);
  EXPECT_EQ(sqltrace_last_error_offset(), 7);
  EXPECT_STRNE(sqltrace_last_error(), "");
  EXPECT_EQ(sqltrace_schema_state_json(catalogs_, "nope", "SELECT name FROM cars", &out),
            SQLTRACE_ERR_DATA);
  EXPECT_EQ(sqltrace_last_error_offset(), -1);
  EXPECT_EQ(sqltrace_schema_state_json(nullptr, nullptr, "SELECT 1", &out),
            SQLTRACE_ERR_INVALID_ARGUMENT);
  ASSERT_EQ(sqltrace_schema_state_json(catalogs_, nullptr, "SELECT name FROM cars", &out),
            SQLTRACE_OK);
  EXPECT_STREQ(sqltrace_last_error(), "");
  sqltrace_string_free(out);

  sqltrace_catalogs* missing = nullptr;
  EXPECT_EQ(sqltrace_catalogs_load(Path("absent.json").c_str(), &missing), SQLTRACE_ERR_IO);
  EXPECT_EQ(missing, nullptr);
  std::ofstream(Path("broken.json")) << "[{\"db_id\": 3}]";
  EXPECT_EQ(sqltrace_catalogs_load(Path("broken.json").c_str(), &missing), SQLTRACE_ERR_PARSE);
  EXPECT_STREQ(sqltrace_status_name(SQLTRACE_ERR_YIELD), "yield error");
}

TEST_F(CApiTest, SynthesizeEmitAndStats) {
  sqltrace_templates* templates = nullptr;
  ASSERT_EQ(sqltrace_templates_load(kTemplates.c_str(), &templates, nullptr), SQLTRACE_OK);
  sqltrace_synthesis_config cfg;
  sqltrace_synthesis_config_default(&cfg);
  EXPECT_EQ(cfg.max_turns, 4);
  EXPECT_EQ(cfg.rollout_attempts, 20);
  cfg.conversation_count = 20;
  cfg.rng_seed = 5;
  char* warnings = nullptr;
  ASSERT_EQ(sqltrace_synthesize(catalogs_, templates, kSeeds.c_str(), &cfg,
                                Path("a.jsonl").c_str(), Path("a.stats.json").c_str(), &warnings),
            SQLTRACE_OK)
      << sqltrace_last_error();
  sqltrace_string_free(warnings);
  ASSERT_EQ(sqltrace_synthesize(catalogs_, templates, kSeeds.c_str(), &cfg,
                                Path("b.jsonl").c_str(), nullptr, nullptr),
            SQLTRACE_OK);
  EXPECT_EQ(Slurp(Path("a.jsonl")), Slurp(Path("b.jsonl")));

  char* stats = nullptr;
  ASSERT_EQ(sqltrace_corpus_stats(Path("a.jsonl").c_str(), &stats), SQLTRACE_OK);
  EXPECT_EQ(std::string(stats) + "\n", Slurp(Path("a.stats.json")));
  sqltrace_string_free(stats);

  ASSERT_EQ(sqltrace_emit_examples(catalogs_, Path("a.jsonl").c_str(), nullptr, 0,
                                   Path("ex.jsonl").c_str(), Path("w.jsonl").c_str()),
            SQLTRACE_OK);
  const std::string weights = Slurp(Path("w.jsonl"));
  EXPECT_EQ(std::count(weights.begin(), weights.end(), '\n'), 20);
  EXPECT_EQ(sqltrace_emit_examples(catalogs_, Path("a.jsonl").c_str(), nullptr, 2,
                                   Path("ex.jsonl").c_str(), Path("w.jsonl").c_str()),
            SQLTRACE_ERR_CONFIG);

  cfg.max_turns = 1;
  EXPECT_EQ(sqltrace_synthesize(catalogs_, templates, kSeeds.c_str(), &cfg,
                                Path("c.jsonl").c_str(), nullptr, nullptr),
            SQLTRACE_ERR_CONFIG);
  sqltrace_templates_free(templates);
}

TEST_F(CApiTest, YieldFailure) {
  std::ofstream(Path("t.json")) << R"([{"template_id": "dw", "question_template": "Drop it.",
      "operation": "drop_where_predicate", "constraints": ["has_where"]}])";
  std::ofstream(Path("s.jsonl")) << R"({"db_id": "car_1", "query": "SELECT name FROM cars"})"
                                 << "\n";
  sqltrace_templates* templates = nullptr;
  ASSERT_EQ(sqltrace_templates_load(Path("t.json").c_str(), &templates, nullptr), SQLTRACE_OK);
  sqltrace_synthesis_config cfg;
  sqltrace_synthesis_config_default(&cfg);
  EXPECT_EQ(sqltrace_synthesize(catalogs_, templates, Path("s.jsonl").c_str(), &cfg,
                                Path("o.jsonl").c_str(), nullptr, nullptr),
            SQLTRACE_ERR_YIELD);
  sqltrace_templates_free(templates);
}

}  // namespace
