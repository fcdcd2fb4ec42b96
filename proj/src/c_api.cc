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

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sqltrace/catalog.h"
#include "sqltrace/corpus.h"
#include "sqltrace/error.h"
#include "sqltrace/similarity.h"
#include "sqltrace/sql_parser.h"
#include "sqltrace/synthesis.h"
#include "sqltrace/templates.h"

struct sqltrace_catalogs {
  sqltrace::CatalogSet set;
};

struct sqltrace_templates {
  std::vector<sqltrace::FollowUpTemplate> items;
};

namespace {

thread_local std::string last_error;
thread_local long last_offset = -1;

sqltrace_status Fail(sqltrace_status status, const std::string& message, long offset = -1) {
  last_error = message;
  last_offset = offset;
  return status;
}

sqltrace_status Ok() {
  last_error.clear();
  last_offset = -1;
  return SQLTRACE_OK;
}

// Runs `body`, translating library exceptions into status codes.
template <typename Fn>
sqltrace_status Guard(Fn&& body) {
  try {
    body();
    return Ok();
  } catch (const sqltrace::YieldError& e) {
    return Fail(SQLTRACE_ERR_YIELD, e.what());
  } catch (const sqltrace::ParseError& e) {
    return Fail(SQLTRACE_ERR_PARSE, e.what(), static_cast<long>(e.position()));
  } catch (const sqltrace::ConfigError& e) {
    return Fail(SQLTRACE_ERR_CONFIG, e.what());
  } catch (const sqltrace::DataError& e) {
    return Fail(SQLTRACE_ERR_DATA, e.what());
  } catch (const sqltrace::IoError& e) {
    return Fail(SQLTRACE_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(SQLTRACE_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(SQLTRACE_ERR_INTERNAL, e.what());
  }
}

char* CopyString(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

const sqltrace::Catalog& Select(const sqltrace_catalogs* catalogs, const char* db_id) {
  if (db_id != nullptr) return catalogs->set.Get(db_id);
  auto first = catalogs->set.first();
  if (!first) throw sqltrace::DataError("catalog set is empty");
  return *first;
}

sqltrace::SimilarityConfig ToConfig(const sqltrace_similarity_config* cfg) {
  sqltrace::SimilarityConfig out;
  if (cfg != nullptr) {
    out.lambda = cfg->lambda;
    out.kernel.iterations = cfg->wl_iterations;
  }
  out.Validate();
  return out;
}

std::ofstream OpenOutput(const char* path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw sqltrace::IoError(std::string("cannot write '") + path + "'");
  return out;
}

void Close(std::ofstream& out, const char* path) {
  out.close();
  if (!out) throw sqltrace::IoError(std::string("failed writing '") + path + "'");
}

char* WarningsJson(const std::vector<std::string>& warnings) {
  return CopyString(nlohmann::json(warnings).dump());
}

}  // namespace

extern "C" {

const char* sqltrace_last_error(void) { return last_error.c_str(); }

long sqltrace_last_error_offset(void) { return last_offset; }

const char* sqltrace_status_name(sqltrace_status status) {
  switch (status) {
    case SQLTRACE_OK: return "ok";
    case SQLTRACE_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SQLTRACE_ERR_CONFIG: return "config error";
    case SQLTRACE_ERR_IO: return "io error";
    case SQLTRACE_ERR_PARSE: return "parse error";
    case SQLTRACE_ERR_DATA: return "data error";
    case SQLTRACE_ERR_YIELD: return "yield error";
    case SQLTRACE_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* sqltrace_version(void) { return "0.1.0"; }

void sqltrace_string_free(char* text) { std::free(text); }

sqltrace_status sqltrace_catalogs_load(const char* path, sqltrace_catalogs** out) {
  if (path == nullptr || out == nullptr) return Fail(SQLTRACE_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return Guard([&] {
    auto handle = std::make_unique<sqltrace_catalogs>();
    handle->set = sqltrace::CatalogSet::Load(path);
    if (handle->set.empty()) throw sqltrace::DataError(std::string("no catalogs in '") + path + "'");
    *out = handle.release();
  });
}

void sqltrace_catalogs_free(sqltrace_catalogs* catalogs) { delete catalogs; }

size_t sqltrace_catalogs_count(const sqltrace_catalogs* catalogs) {
  return catalogs == nullptr ? 0 : catalogs->set.size();
}

sqltrace_status sqltrace_templates_load(const char* path, sqltrace_templates** out,
                                        char** warnings_json) {
  if (path == nullptr || out == nullptr) return Fail(SQLTRACE_ERR_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  if (warnings_json != nullptr) *warnings_json = nullptr;
  return Guard([&] {
    std::vector<std::string> warnings;
    auto handle = std::make_unique<sqltrace_templates>();
    handle->items = sqltrace::LoadTemplates(path, &warnings);
    if (warnings_json != nullptr) *warnings_json = WarningsJson(warnings);
    *out = handle.release();
  });
}

void sqltrace_templates_free(sqltrace_templates* templates) { delete templates; }

size_t sqltrace_templates_count(const sqltrace_templates* templates) {
  return templates == nullptr ? 0 : templates->items.size();
}

sqltrace_status sqltrace_schema_state_json(const sqltrace_catalogs* catalogs, const char* db_id,
                                           const char* sql, char** out_json) {
  if (catalogs == nullptr || sql == nullptr || out_json == nullptr) {
    return Fail(SQLTRACE_ERR_INVALID_ARGUMENT, "null argument");
  }
  *out_json = nullptr;
  return Guard([&] {
    const sqltrace::Catalog& catalog = Select(catalogs, db_id);
    const sqltrace::Query query = sqltrace::ParseSql(sql, catalog);
    *out_json = CopyString(
        sqltrace::SchemaStateToJson(sqltrace::ExtractSchemaState(query, catalog), catalog).dump());
  });
}

sqltrace_status sqltrace_canonicalize(const sqltrace_catalogs* catalogs, const char* db_id,
                                      const char* sql, char** out_sql) {
  if (catalogs == nullptr || sql == nullptr || out_sql == nullptr) {
    return Fail(SQLTRACE_ERR_INVALID_ARGUMENT, "null argument");
  }
  *out_sql = nullptr;
  return Guard([&] {
    const sqltrace::Catalog& catalog = Select(catalogs, db_id);
    *out_sql = CopyString(sqltrace::RenderSql(sqltrace::ParseSql(sql, catalog), catalog));
  });
}

void sqltrace_similarity_config_default(sqltrace_similarity_config* cfg) {
  if (cfg == nullptr) return;
  const sqltrace::SimilarityConfig defaults;
  cfg->lambda = defaults.lambda;
  cfg->wl_iterations = defaults.kernel.iterations;
}

sqltrace_status sqltrace_similarity(const sqltrace_catalogs* catalogs, const char* db_id,
                                    const char* sql1, const char* sql2,
                                    const sqltrace_similarity_config* cfg,
                                    sqltrace_similarity_report* out) {
  if (catalogs == nullptr || sql1 == nullptr || sql2 == nullptr || out == nullptr) {
    return Fail(SQLTRACE_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] {
    const sqltrace::SimilarityConfig config = ToConfig(cfg);
    const sqltrace::Catalog& catalog = Select(catalogs, db_id);
    const sqltrace::Query x = sqltrace::ParseSql(sql1, catalog);
    const sqltrace::Query y = sqltrace::ParseSql(sql2, catalog);
    const sqltrace::SimilarityReport report = sqltrace::CompareQueries(x, y, catalog, config);
    out->semantic = report.semantic;
    out->structural = report.structural;
    out->combined = report.combined;
  });
}

void sqltrace_synthesis_config_default(sqltrace_synthesis_config* cfg) {
  if (cfg == nullptr) return;
  const sqltrace::SynthesisConfig defaults;
  cfg->max_turns = defaults.max_turns;
  cfg->rollout_attempts = defaults.rollout_attempts;
  cfg->rng_seed = defaults.rng_seed;
  cfg->conversation_count = defaults.target_conversation_count;
}

sqltrace_status sqltrace_synthesize(const sqltrace_catalogs* catalogs,
                                    const sqltrace_templates* templates, const char* seeds_path,
                                    const sqltrace_synthesis_config* cfg, const char* out_path,
                                    const char* stats_path, char** warnings_json) {
  if (catalogs == nullptr || templates == nullptr || seeds_path == nullptr || cfg == nullptr ||
      out_path == nullptr) {
    return Fail(SQLTRACE_ERR_INVALID_ARGUMENT, "null argument");
  }
  if (warnings_json != nullptr) *warnings_json = nullptr;
  return Guard([&] {
    sqltrace::SynthesisConfig config;
    config.max_turns = cfg->max_turns;
    config.rollout_attempts = cfg->rollout_attempts;
    config.rng_seed = cfg->rng_seed;
    config.target_conversation_count = cfg->conversation_count;
    config.Validate();

    std::vector<std::string> warnings;
    const auto seeds = sqltrace::LoadSeeds(seeds_path, catalogs->set, &warnings);
    if (warnings_json != nullptr) *warnings_json = WarningsJson(warnings);
    const auto corpus =
        sqltrace::SynthesizeCorpus(seeds, templates->items, catalogs->set, config);

    std::ofstream out = OpenOutput(out_path);
    sqltrace::WriteCorpus(corpus, catalogs->set, out);
    Close(out, out_path);
    if (stats_path != nullptr) {
      const auto stats = sqltrace::ComputeCorpusStats(corpus, catalogs->set);
      std::ofstream side = OpenOutput(stats_path);
      side << sqltrace::CorpusStatsToJson(stats).dump(2) << '\n';
      Close(side, stats_path);
    }
  });
}

sqltrace_status sqltrace_emit_examples(const sqltrace_catalogs* catalogs, const char* corpus_path,
                                       const sqltrace_similarity_config* cfg,
                                       size_t max_input_length, const char* examples_path,
                                       const char* weights_path) {
  if (catalogs == nullptr || corpus_path == nullptr || examples_path == nullptr ||
      weights_path == nullptr) {
    return Fail(SQLTRACE_ERR_INVALID_ARGUMENT, "null argument");
  }
  return Guard([&] {
    sqltrace::EmitConfig config;
    config.similarity = ToConfig(cfg);
    if (max_input_length != 0) config.max_input_length = max_input_length;
    const auto corpus = sqltrace::LoadCorpus(corpus_path, catalogs->set);
    std::ofstream examples = OpenOutput(examples_path);
    std::ofstream weights = OpenOutput(weights_path);
    sqltrace::EmitTrainingExamples(corpus, catalogs->set, config, examples, weights);
    Close(examples, examples_path);
    Close(weights, weights_path);
  });
}

sqltrace_status sqltrace_corpus_stats(const char* corpus_path, char** out_json) {
  if (corpus_path == nullptr || out_json == nullptr) {
    return Fail(SQLTRACE_ERR_INVALID_ARGUMENT, "null argument");
  }
  *out_json = nullptr;
  return Guard([&] {
    const auto stats = sqltrace::ComputeCorpusStats(sqltrace::ReadFileOrThrow(corpus_path));
    *out_json = CopyString(sqltrace::CorpusStatsToJson(stats).dump(2));
  });
}

}  // extern "C"
