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

// sqltrace: schema-state extraction, query similarity, conversation
// synthesis and training-example emission.
//
// Exit codes: 0 success, 1 config/environment, 2 data, 64 usage.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sqltrace/sqltrace.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitUsage = 64;

constexpr const char* kTemplateFile = "followup_templates.json";

int ExitCode(sqltrace_status status) {
  switch (status) {
    case SQLTRACE_OK: return kExitOk;
    case SQLTRACE_ERR_PARSE:
    case SQLTRACE_ERR_DATA: return kExitData;
    case SQLTRACE_ERR_INVALID_ARGUMENT: return kExitUsage;
    case SQLTRACE_ERR_CONFIG:
    case SQLTRACE_ERR_IO:
    case SQLTRACE_ERR_YIELD:
    case SQLTRACE_ERR_INTERNAL: return kExitConfig;
  }
  return kExitConfig;
}

int Report(sqltrace_status status) {
  if (status != SQLTRACE_OK) {
    std::fprintf(stderr, "sqltrace: %s: %s\n", sqltrace_status_name(status), sqltrace_last_error());
  }
  return ExitCode(status);
}

struct Catalogs {
  sqltrace_catalogs* handle = nullptr;
  ~Catalogs() { sqltrace_catalogs_free(handle); }
};

struct Templates {
  sqltrace_templates* handle = nullptr;
  ~Templates() { sqltrace_templates_free(handle); }
};

struct OwnedString {
  char* text = nullptr;
  ~OwnedString() { sqltrace_string_free(text); }
};

void PrintWarnings(const OwnedString& warnings) {
  if (warnings.text != nullptr && std::string(warnings.text) != "[]") {
    std::fprintf(stderr, "sqltrace: warnings: %s\n", warnings.text);
  }
}

const char* DbIdOrNull(const std::string& db_id) { return db_id.empty() ? nullptr : db_id.c_str(); }

// --templates, else $SQLTRACE_TEMPLATE_DIR (a directory holding the
// default pack, or the pack itself).
std::optional<std::string> ResolveTemplates(const std::string& flag) {
  if (!flag.empty()) return flag;
  const char* env = std::getenv("SQLTRACE_TEMPLATE_DIR");
  if (env == nullptr || *env == '\0') return std::nullopt;
  std::filesystem::path path(env);
  if (std::filesystem::is_directory(path)) path /= kTemplateFile;
  return path.string();
}

struct Options {
  std::string catalog;
  std::string db_id;
  std::string sql1;
  std::string sql2;
  double lambda = 0.5;
  int wl_iterations = 3;
  std::string seeds;
  std::string templates;
  std::size_t count = 100;
  int max_turns = 4;
  int rollout_attempts = 20;
  std::uint64_t rng_seed = 0;
  std::string out;
  std::string stats_out;
  std::string corpus;
  std::string examples;
  std::string weights;
  std::size_t max_input_length = 0;
};

int RunSchemaState(const Options& o) {
  Catalogs catalogs;
  if (auto s = sqltrace_catalogs_load(o.catalog.c_str(), &catalogs.handle)) return Report(s);
  OwnedString json;
  if (auto s = sqltrace_schema_state_json(catalogs.handle, DbIdOrNull(o.db_id), o.sql1.c_str(),
                                          &json.text)) {
    return Report(s);
  }
  std::printf("%s\n", json.text);
  return kExitOk;
}

int RunSimilarity(const Options& o) {
  sqltrace_similarity_config cfg{o.lambda, o.wl_iterations};
  Catalogs catalogs;
  if (auto s = sqltrace_catalogs_load(o.catalog.c_str(), &catalogs.handle)) return Report(s);
  sqltrace_similarity_report report{};
  if (auto s = sqltrace_similarity(catalogs.handle, DbIdOrNull(o.db_id), o.sql1.c_str(),
                                   o.sql2.c_str(), &cfg, &report)) {
    return Report(s);
  }
  std::printf("semantic %.4f\nstructural %.4f\ncombined %.4f\n", report.semantic,
              report.structural, report.combined);
  return kExitOk;
}

int RunSynthesize(const Options& o) {
  const auto templates_path = ResolveTemplates(o.templates);
  if (!templates_path) {
    std::fprintf(stderr,
                 "sqltrace: synthesize needs --templates or SQLTRACE_TEMPLATE_DIR\n");
    return kExitUsage;
  }
  Catalogs catalogs;
  if (auto s = sqltrace_catalogs_load(o.catalog.c_str(), &catalogs.handle)) return Report(s);
  Templates templates;
  OwnedString template_warnings;
  if (auto s = sqltrace_templates_load(templates_path->c_str(), &templates.handle,
                                       &template_warnings.text)) {
    return Report(s);
  }
  PrintWarnings(template_warnings);

  sqltrace_synthesis_config cfg;
  sqltrace_synthesis_config_default(&cfg);
  cfg.max_turns = o.max_turns;
  cfg.rollout_attempts = o.rollout_attempts;
  cfg.rng_seed = o.rng_seed;
  cfg.conversation_count = o.count;
  const std::string stats = o.stats_out.empty() ? o.out + ".stats.json" : o.stats_out;
  OwnedString seed_warnings;
  const auto status = sqltrace_synthesize(catalogs.handle, templates.handle, o.seeds.c_str(), &cfg,
                                          o.out.c_str(), stats.c_str(), &seed_warnings.text);
  PrintWarnings(seed_warnings);
  return Report(status);
}

int RunEmitExamples(const Options& o) {
  sqltrace_similarity_config cfg{o.lambda, o.wl_iterations};
  Catalogs catalogs;
  if (auto s = sqltrace_catalogs_load(o.catalog.c_str(), &catalogs.handle)) return Report(s);
  return Report(sqltrace_emit_examples(catalogs.handle, o.corpus.c_str(), &cfg,
                                       o.max_input_length, o.examples.c_str(),
                                       o.weights.c_str()));
}

int RunStats(const Options& o) {
  OwnedString json;
  if (auto s = sqltrace_corpus_stats(o.corpus.c_str(), &json.text)) return Report(s);
  std::printf("%s\n", json.text);
  return kExitOk;
}

void AddSimilarityFlags(CLI::App* cmd, Options& o) {
  cmd->add_option("--lambda", o.lambda, "Weight of the semantic component")
      ->capture_default_str();
  cmd->add_option("--wl-iterations", o.wl_iterations, "Weisfeiler-Lehman iterations")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sqltrace: conversational text-to-SQL corpus tooling"};
  app.require_subcommand(1);
  Options o;

  auto* state = app.add_subcommand("schema-state", "Print the schema state of a query");
  state->add_option("sql", o.sql1, "SQL query")->required();
  state->add_option("--catalog", o.catalog, "Spider tables.json")->required();
  state->add_option("--db-id", o.db_id, "Catalog to use (default: first)");

  auto* similarity = app.add_subcommand("similarity", "Compare two queries");
  similarity->add_option("sql1", o.sql1, "First query")->required();
  similarity->add_option("sql2", o.sql2, "Second query")->required();
  similarity->add_option("--catalog", o.catalog, "Spider tables.json")->required();
  similarity->add_option("--db-id", o.db_id, "Catalog to use (default: first)");
  AddSimilarityFlags(similarity, o);

  auto* synthesize = app.add_subcommand("synthesize", "Synthesize a conversation corpus");
  synthesize->add_option("--seeds", o.seeds, "Seed pairs (JSON array or JSONL)")->required();
  synthesize->add_option("--templates", o.templates,
                         "Template pack (default: $SQLTRACE_TEMPLATE_DIR)");
  synthesize->add_option("--catalogs", o.catalog, "Spider tables.json")->required();
  synthesize->add_option("--count", o.count, "Conversations to produce")->capture_default_str();
  synthesize->add_option("--max-turns", o.max_turns, "Turns per conversation")
      ->capture_default_str();
  synthesize->add_option("--rollout-attempts", o.rollout_attempts, "Templates tried per turn")
      ->capture_default_str();
  synthesize->add_option("--rng-seed", o.rng_seed, "Random seed")->capture_default_str();
  synthesize->add_option("--out", o.out, "Corpus JSONL output")->required();
  synthesize->add_option("--stats-out", o.stats_out, "Statistics output (default: OUT.stats.json)");

  auto* emit = app.add_subcommand("emit-examples", "Write training examples and weights");
  emit->add_option("--corpus", o.corpus, "Corpus JSONL")->required();
  emit->add_option("--catalogs", o.catalog, "Spider tables.json")->required();
  emit->add_option("--examples", o.examples, "Examples JSONL output")->required();
  emit->add_option("--weights", o.weights, "Weights JSONL output")->required();
  emit->add_option("--max-input-length", o.max_input_length, "Token budget (0: default)");
  AddSimilarityFlags(emit, o);

  auto* stats = app.add_subcommand("stats", "Summarize a corpus file");
  stats->add_option("corpus", o.corpus, "Corpus JSONL")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*state) return RunSchemaState(o);
  if (*similarity) return RunSimilarity(o);
  if (*synthesize) return RunSynthesize(o);
  if (*emit) return RunEmitExamples(o);
  return RunStats(o);
}
