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

#ifndef SQLTRACE_SQLTRACE_H_
#define SQLTRACE_SQLTRACE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(SQLTRACE_BUILDING_LIBRARY)
#define SQLTRACE_API __attribute__((visibility("default")))
#else
#define SQLTRACE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sqltrace_status {
  SQLTRACE_OK = 0,
  SQLTRACE_ERR_INVALID_ARGUMENT = 1,  // null pointer or out-of-range option
  SQLTRACE_ERR_CONFIG = 2,            // invalid configuration value
  SQLTRACE_ERR_IO = 3,                // unreadable input or unwritable output
  SQLTRACE_ERR_PARSE = 4,             // SQL or catalog failed to parse
  SQLTRACE_ERR_DATA = 5,              // malformed records, unknown db_id, ...
  SQLTRACE_ERR_YIELD = 6,             // synthesis discarded too many rollouts
  SQLTRACE_ERR_INTERNAL = 7,
} sqltrace_status;

// Opaque handles.
typedef struct sqltrace_catalogs sqltrace_catalogs;
typedef struct sqltrace_templates sqltrace_templates;

// Message and SQL offset (-1 when not applicable) of the last failure on
// the calling thread. The message stays valid until the next call.
SQLTRACE_API const char* sqltrace_last_error(void);
SQLTRACE_API long sqltrace_last_error_offset(void);
SQLTRACE_API const char* sqltrace_status_name(sqltrace_status status);
SQLTRACE_API const char* sqltrace_version(void);

// Releases strings returned through char** out-parameters.
SQLTRACE_API void sqltrace_string_free(char* text);

// Spider tables.json file: one catalog object or an array of them.
SQLTRACE_API sqltrace_status sqltrace_catalogs_load(const char* path, sqltrace_catalogs** out);
SQLTRACE_API void sqltrace_catalogs_free(sqltrace_catalogs* catalogs);
SQLTRACE_API size_t sqltrace_catalogs_count(const sqltrace_catalogs* catalogs);

// Follow-up template pack. `warnings_json`, when non-null, receives a JSON
// array of warning strings.
SQLTRACE_API sqltrace_status sqltrace_templates_load(const char* path, sqltrace_templates** out,
                                                     char** warnings_json);
SQLTRACE_API void sqltrace_templates_free(sqltrace_templates* templates);
SQLTRACE_API size_t sqltrace_templates_count(const sqltrace_templates* templates);

// In the calls below a null db_id selects the first catalog of the set.

// {"slots": [{"name": "cars", "value": ["FROM"]}, ...]}
SQLTRACE_API sqltrace_status sqltrace_schema_state_json(const sqltrace_catalogs* catalogs,
                                                        const char* db_id, const char* sql,
                                                        char** out_json);

// Canonical rendering of a query.
SQLTRACE_API sqltrace_status sqltrace_canonicalize(const sqltrace_catalogs* catalogs,
                                                   const char* db_id, const char* sql,
                                                   char** out_sql);

typedef struct sqltrace_similarity_config {
  double lambda;      // weight of the semantic component, in [0, 1]
  int wl_iterations;  // in [0, 8]
} sqltrace_similarity_config;

typedef struct sqltrace_similarity_report {
  double semantic;
  double structural;
  double combined;
} sqltrace_similarity_report;

SQLTRACE_API void sqltrace_similarity_config_default(sqltrace_similarity_config* cfg);
SQLTRACE_API sqltrace_status sqltrace_similarity(const sqltrace_catalogs* catalogs,
                                                 const char* db_id, const char* sql1,
                                                 const char* sql2,
                                                 const sqltrace_similarity_config* cfg,
                                                 sqltrace_similarity_report* out);

typedef struct sqltrace_synthesis_config {
  int max_turns;
  int rollout_attempts;
  uint64_t rng_seed;
  size_t conversation_count;
} sqltrace_synthesis_config;

SQLTRACE_API void sqltrace_synthesis_config_default(sqltrace_synthesis_config* cfg);

// Writes the corpus JSONL to out_path and, when stats_path is non-null, the
// corpus statistics JSON. Skipped seeds are reported in warnings_json.
SQLTRACE_API sqltrace_status sqltrace_synthesize(const sqltrace_catalogs* catalogs,
                                                 const sqltrace_templates* templates,
                                                 const char* seeds_path,
                                                 const sqltrace_synthesis_config* cfg,
                                                 const char* out_path, const char* stats_path,
                                                 char** warnings_json);

// Writes one training example per turn and one weight matrix per
// conversation. max_input_length 0 selects the default.
SQLTRACE_API sqltrace_status sqltrace_emit_examples(const sqltrace_catalogs* catalogs,
                                                    const char* corpus_path,
                                                    const sqltrace_similarity_config* cfg,
                                                    size_t max_input_length,
                                                    const char* examples_path,
                                                    const char* weights_path);

// Statistics of a corpus file; needs no catalogs.
SQLTRACE_API sqltrace_status sqltrace_corpus_stats(const char* corpus_path, char** out_json);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // SQLTRACE_SQLTRACE_H_
