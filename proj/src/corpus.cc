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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <numeric>
#include <sstream>

#include "sqltrace/error.h"
#include "sqltrace/sql_parser.h"

namespace sqltrace {
namespace {

using nlohmann::json;

constexpr std::array<Keyword, kKeywordCount> kPrecedence = {
    Keyword::kSelect, Keyword::kWhere,   Keyword::kGroupBy, Keyword::kHaving,
    Keyword::kOrderBy, Keyword::kJoin,   Keyword::kFrom};

const char* SpanKindName(InputSpan::Kind kind) {
  switch (kind) {
    case InputSpan::Kind::kCls: return "cls";
    case InputSpan::Kind::kUtterance: return "utterance";
    case InputSpan::Kind::kSlot: return "slot";
  }
  return "";
}

// Iterates the non-blank lines of a JSONL document with 1-based numbers.
template <typename Fn>
void ForEachRecord(std::string_view raw, Fn&& fn) {
  std::size_t number = 0;
  std::size_t begin = 0;
  while (begin < raw.size()) {
    std::size_t end = raw.find('\n', begin);
    if (end == std::string_view::npos) end = raw.size();
    std::string_view line = raw.substr(begin, end - begin);
    ++number;
    begin = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError("line " + std::to_string(number) + ": malformed JSON: " + e.what());
    }
    try {
      fn(record, number);
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(number) + ": " + e.what());
    } catch (const ParseError& e) {
      throw DataError("line " + std::to_string(number) + ": " + e.what());
    } catch (const json::exception& e) {
      throw DataError("line " + std::to_string(number) + ": " + e.what());
    }
  }
}

struct RawTurn {
  std::string utterance;
  std::string sql;
  json state;
  std::optional<std::string> template_id;
};

struct RawConversation {
  std::string conversation_id;
  std::string db_id;
  std::vector<RawTurn> turns;
};

const json& Field(const json& record, const char* key, json::value_t type) {
  auto it = record.find(key);
  if (it == record.end() || it->type() != type) {
    throw DataError(std::string("missing or mistyped field '") + key + "'");
  }
  return *it;
}

RawConversation ReadRaw(const json& record) {
  if (!record.is_object()) throw DataError("record must be an object");
  RawConversation conv;
  conv.conversation_id = Field(record, "conversation_id", json::value_t::string).get<std::string>();
  conv.db_id = Field(record, "db_id", json::value_t::string).get<std::string>();
  const json& turns = Field(record, "turns", json::value_t::array);
  if (turns.empty()) throw DataError("conversation has no turns");
  for (std::size_t t = 0; t < turns.size(); ++t) {
    const json& turn = turns[t];
    if (!turn.is_object()) throw DataError("turn " + std::to_string(t + 1) + " must be an object");
    RawTurn raw;
    raw.utterance = Field(turn, "utterance", json::value_t::string).get<std::string>();
    raw.sql = Field(turn, "sql", json::value_t::string).get<std::string>();
    raw.state = Field(turn, "state", json::value_t::object);
    auto id = turn.find("template_id");
    if (id != turn.end() && id->is_string()) {
      raw.template_id = id->get<std::string>();
    } else if (id != turn.end() && !id->is_null()) {
      throw DataError("turn " + std::to_string(t + 1) + ": template_id must be a string or null");
    }
    conv.turns.push_back(std::move(raw));
  }
  return conv;
}

Conversation Resolve(const RawConversation& raw, const Catalog& catalog) {
  Conversation conv;
  conv.conversation_id = raw.conversation_id;
  conv.db_id = raw.db_id;
  for (std::size_t t = 0; t < raw.turns.size(); ++t) {
    const RawTurn& r = raw.turns[t];
    const std::string at = "turn " + std::to_string(t + 1) + ": ";
    Turn turn;
    turn.utterance = r.utterance;
    try {
      turn.sql = ParseSql(r.sql, catalog);
    } catch (const ParseError& e) {
      throw DataError(at + e.what());
    }
    turn.state = ExtractSchemaState(turn.sql, catalog);
    SchemaState stored;
    try {
      stored = SchemaStateFromJson(r.state, catalog);
    } catch (const DataError& e) {
      throw DataError(at + e.what());
    }
    if (stored != turn.state) throw DataError(at + "stored state disagrees with the SQL");
    turn.template_id = r.template_id;
    conv.turns.push_back(std::move(turn));
  }
  return conv;
}

// A catalog holding only the names listed in a stored state: table slots
// "t" followed by column slots "t.c".
Catalog CatalogFromSlotNames(const std::string& db_id, const json& state) {
  const json& slots = Field(state, "slots", json::value_t::array);
  std::vector<TableDef> tables;
  for (const json& slot : slots) {
    const std::string name = Field(slot, "name", json::value_t::string).get<std::string>();
    const auto dot = name.find('.');
    if (dot == std::string::npos) {
      tables.push_back(TableDef{name, name, {}});
      continue;
    }
    const std::string table = name.substr(0, dot);
    auto it = std::find_if(tables.begin(), tables.end(),
                           [&](const TableDef& t) { return t.name == table; });
    if (it == tables.end()) throw DataError("state slot '" + name + "' names an unknown table");
    const std::string column = name.substr(dot + 1);
    it->columns.push_back(ColumnDef{column, column, "text"});
  }
  try {
    Catalog catalog(db_id, std::move(tables), {}, {});
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (slots[i]["name"].get<std::string>() != catalog.slot_name(i)) {
        throw DataError("state slots are not in schema order");
      }
    }
    return catalog;
  } catch (const ParseError& e) {
    throw DataError(std::string("state slots do not form a schema: ") + e.what());
  }
}

void Accumulate(CorpusStats& stats, const Conversation& conv, const Catalog& catalog,
                std::size_t max_input_length, std::size_t& total_length, std::size_t& inputs) {
  ++stats.conversation_count;
  ++stats.turn_histogram[conv.turn_count()];
  for (const TrainingExample& example : BuildExamples(conv, catalog, max_input_length)) {
    total_length += example.input.size();
    stats.max_input_length = std::max(stats.max_input_length, example.input.size());
    ++inputs;
  }
  for (const Turn& turn : conv.turns) {
    if (turn.template_id) ++stats.template_usage[*turn.template_id];
    ++stats.hardness[static_cast<std::size_t>(EvaluateHardness(turn.sql))];
  }
}

}  // namespace

json ConversationToJson(const Conversation& conversation, const Catalog& catalog) {
  json turns = json::array();
  for (const Turn& turn : conversation.turns) {
    turns.push_back({{"sql", RenderSql(turn.sql, catalog)},
                     {"state", SchemaStateToJson(turn.state, catalog)},
                     {"template_id", turn.template_id ? json(*turn.template_id) : json(nullptr)},
                     {"utterance", turn.utterance}});
  }
  return {{"conversation_id", conversation.conversation_id},
          {"db_id", conversation.db_id},
          {"turns", std::move(turns)}};
}

std::string ConversationToLine(const Conversation& conversation, const Catalog& catalog) {
  return ConversationToJson(conversation, catalog).dump();
}

void WriteCorpus(std::span<const Conversation> corpus, const CatalogSet& catalogs,
                 std::ostream& out) {
  for (const Conversation& conv : corpus) {
    out << ConversationToLine(conv, catalogs.Get(conv.db_id)) << '\n';
  }
}

std::vector<Conversation> ParseCorpus(std::string_view raw, const CatalogSet& catalogs) {
  std::vector<Conversation> corpus;
  ForEachRecord(raw, [&](const json& record, std::size_t) {
    RawConversation conv = ReadRaw(record);
    corpus.push_back(Resolve(conv, catalogs.Get(conv.db_id)));
  });
  return corpus;
}

std::vector<Conversation> LoadCorpus(const std::string& path, const CatalogSet& catalogs) {
  return ParseCorpus(ReadFileOrThrow(path), catalogs);
}

std::optional<Keyword> SstLabel(KeywordSet value) {
  for (Keyword k : kPrecedence) {
    if (value.contains(k)) return k;
  }
  return std::nullopt;
}

std::vector<TrainingExample> BuildExamples(const Conversation& conversation,
                                           const Catalog& catalog, std::size_t max_input_length) {
  std::vector<TrainingExample> out;
  std::vector<std::string> history;
  const bool has_weights = conversation.turn_count() >= 2;
  for (std::size_t t = 0; t < conversation.turns.size(); ++t) {
    const Turn& turn = conversation.turns[t];
    history.push_back(turn.utterance);
    const SchemaState prev =
        t == 0 ? SchemaState::AllNone(catalog) : conversation.turns[t - 1].state;
    TrainingExample example;
    example.conversation_id = conversation.conversation_id;
    example.db_id = conversation.db_id;
    example.turn = t + 1;
    example.input = SerializeInput(history, prev, catalog, max_input_length);
    for (KeywordSet value : turn.state.slots()) example.sst_targets.push_back(SstLabel(value));
    example.mlm_candidates = MaskCandidates(example.input);
    if (has_weights) example.udt_row = t;
    out.push_back(std::move(example));
  }
  return out;
}

json ExampleToJson(const TrainingExample& example) {
  json spans = json::array();
  for (const InputSpan& span : example.input.spans) {
    spans.push_back({{"begin", span.begin},
                     {"end", span.end},
                     {"index", span.index},
                     {"kind", SpanKindName(span.kind)}});
  }
  json targets = json::array();
  for (const auto& label : example.sst_targets) {
    targets.push_back(label ? KeywordName(*label) : std::string(kNoneLabel));
  }
  return {{"conversation_id", example.conversation_id},
          {"db_id", example.db_id},
          {"mlm_candidates", example.mlm_candidates},
          {"spans", std::move(spans)},
          {"sst_targets", std::move(targets)},
          {"tokens", example.input.tokens},
          {"turn", example.turn},
          {"udt_row", example.udt_row ? json(*example.udt_row) : json(nullptr)}};
}

std::vector<double> RoundWeightRow(std::span<const double> row, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double total = std::accumulate(row.begin(), row.end(), 0.0);
  if (total <= 0) return std::vector<double>(row.begin(), row.end());
  const auto units = static_cast<std::int64_t>(std::llround(scale));

  // Largest-remainder apportionment of `units` integer steps.
  std::vector<std::int64_t> steps(row.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < row.size(); ++i) {
    const double exact = row[i] / total * scale;
    steps[i] = static_cast<std::int64_t>(std::floor(exact));
    assigned += steps[i];
    remainders.emplace_back(exact - static_cast<double>(steps[i]), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < units; ++k, ++assigned) {
    ++steps[remainders[k % remainders.size()].second];
  }
  std::vector<double> out(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) out[i] = static_cast<double>(steps[i]) / scale;
  return out;
}

std::string WeightsToLine(const WeightMatrix& weights) {
  std::string line = "{\"conversation_id\":" + json(weights.conversation_id).dump() +
                     ",\"turns\":" + std::to_string(weights.turns) + ",\"weights\":[";
  char cell[32];
  for (std::size_t x = 0; x < weights.turns; ++x) {
    if (x > 0) line += ',';
    line += '[';
    const auto row = RoundWeightRow(
        std::span<const double>(weights.values).subspan(x * weights.turns, weights.turns));
    for (std::size_t p = 0; p < row.size(); ++p) {
      if (p > 0) line += ',';
      std::snprintf(cell, sizeof(cell), "%.6f", row[p]);
      line += cell;
    }
    line += ']';
  }
  line += "]}";
  return line;
}

EmitSummary EmitTrainingExamples(std::span<const Conversation> corpus, const CatalogSet& catalogs,
                                 const EmitConfig& cfg, std::ostream& examples,
                                 std::ostream& weights) {
  cfg.similarity.Validate();
  EmitSummary summary;
  std::vector<Query> queries;
  for (const Conversation& conv : corpus) {
    const Catalog& catalog = catalogs.Get(conv.db_id);
    for (const TrainingExample& example : BuildExamples(conv, catalog, cfg.max_input_length)) {
      examples << ExampleToJson(example).dump() << '\n';
      ++summary.examples;
    }
    if (conv.turn_count() < 2) continue;
    queries.clear();
    for (const Turn& turn : conv.turns) queries.push_back(turn.sql);
    weights << WeightsToLine(
                   ContrastiveWeights(conv.conversation_id, queries, catalog, cfg.similarity))
            << '\n';
    ++summary.weight_records;
  }
  return summary;
}

CorpusStats ComputeCorpusStats(std::string_view raw, std::size_t max_input_length) {
  CorpusStats stats;
  std::size_t total = 0;
  std::size_t inputs = 0;
  ForEachRecord(raw, [&](const json& record, std::size_t) {
    RawConversation conv = ReadRaw(record);
    const Catalog catalog = CatalogFromSlotNames(conv.db_id, conv.turns.front().state);
    Accumulate(stats, Resolve(conv, catalog), catalog, max_input_length, total, inputs);
  });
  stats.mean_input_length = inputs == 0 ? 0.0 : static_cast<double>(total) / inputs;
  return stats;
}

CorpusStats ComputeCorpusStats(std::span<const Conversation> corpus, const CatalogSet& catalogs,
                               std::size_t max_input_length) {
  CorpusStats stats;
  std::size_t total = 0;
  std::size_t inputs = 0;
  for (const Conversation& conv : corpus) {
    Accumulate(stats, conv, catalogs.Get(conv.db_id), max_input_length, total, inputs);
  }
  stats.mean_input_length = inputs == 0 ? 0.0 : static_cast<double>(total) / inputs;
  return stats;
}

json CorpusStatsToJson(const CorpusStats& stats) {
  json histogram = json::object();
  for (const auto& [turns, count] : stats.turn_histogram) histogram[std::to_string(turns)] = count;
  json usage = json::object();
  for (const auto& [id, count] : stats.template_usage) usage[id] = count;
  json hardness = json::object();
  for (int h = 0; h < kHardnessCount; ++h) {
    hardness[HardnessName(static_cast<Hardness>(h))] = stats.hardness[h];
  }
  return {{"conversation_count", stats.conversation_count},
          {"hardness", std::move(hardness)},
          {"max_input_length", stats.max_input_length},
          {"mean_input_length", std::round(stats.mean_input_length * 1e4) / 1e4},
          {"template_usage", std::move(usage)},
          {"turn_histogram", std::move(histogram)}};
}

}  // namespace sqltrace
