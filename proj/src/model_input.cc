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

#include "sqltrace/model_input.h"

#include <cctype>

#include "sqltrace/error.h"

namespace sqltrace {

std::vector<std::string> TokenizeUtterance(std::string_view text) {
  std::vector<std::string> tokens;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) tokens.push_back(std::move(word));
    word.clear();
  };
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isspace(c)) {
      flush();
    } else if (std::isalnum(c) || c == '_' || c >= 0x80) {
      word += static_cast<char>(std::tolower(c));
    } else {
      flush();
      tokens.emplace_back(1, raw);
    }
  }
  flush();
  return tokens;
}

ModelInput SerializeInput(std::span<const std::string> history,
                          const SchemaState& prev_state, const Catalog& catalog,
                          std::size_t max_len) {
  if (prev_state.size() != catalog.slot_count()) {
    throw DataError("schema state does not match catalog '" + catalog.db_id() + "'");
  }
  std::vector<std::string> names;
  names.reserve(catalog.slot_count());
  for (std::size_t slot = 0; slot < catalog.slot_count(); ++slot) {
    names.push_back(catalog.slot_name(slot));
  }
  return SerializeInput(history, prev_state, names, max_len);
}

ModelInput SerializeInput(std::span<const std::string> history,
                          const SchemaState& prev_state,
                          std::span<const std::string> slot_names,
                          std::size_t max_len) {
  if (history.empty()) throw DataError("serialization needs at least one utterance");
  if (slot_names.size() != prev_state.size()) {
    throw DataError("slot name count does not match schema state");
  }

  // "name = v1 v2 [SEP]" per slot.
  std::size_t state_len = 0;
  for (std::size_t slot = 0; slot < prev_state.size(); ++slot) {
    const std::size_t values = prev_state[slot].empty() ? 1 : prev_state[slot].size();
    state_len += 3 + values;
  }
  // [CLS] plus at least the [SEP] of the current utterance.
  if (2 + state_len > max_len) {
    throw ConfigError("schema state needs " + std::to_string(2 + state_len) +
                      " tokens; max length is " + std::to_string(max_len));
  }

  std::vector<std::vector<std::string>> words;
  words.reserve(history.size());
  for (const std::string& utterance : history) words.push_back(TokenizeUtterance(utterance));

  std::size_t budget = max_len - 1 - state_len;
  std::size_t first = history.size();
  std::size_t used = 0;
  // Keep the newest utterances that fit whole.
  while (first > 0 && used + words[first - 1].size() + 1 <= budget) {
    used += words[first - 1].size() + 1;
    --first;
  }
  std::size_t newest_cut = words.back().size();
  if (first == history.size()) {
    // Even the current utterance alone is too long.
    newest_cut = budget - 1;
    first = history.size() - 1;
  }

  ModelInput input;
  input.dropped_utterances = first;
  auto push = [&](std::string token, TokenRole role) {
    input.tokens.push_back(std::move(token));
    input.roles.push_back(role);
  };
  push(std::string(kClsToken), TokenRole::kCls);
  input.spans.push_back({InputSpan::Kind::kCls, 0, 1, 0});
  for (std::size_t u = first; u < history.size(); ++u) {
    const std::size_t begin = input.size();
    const std::size_t limit = u + 1 == history.size() ? newest_cut : words[u].size();
    for (std::size_t w = 0; w < limit && w < words[u].size(); ++w) {
      push(words[u][w], TokenRole::kUtterance);
    }
    push(std::string(kSepToken), TokenRole::kSep);
    input.spans.push_back({InputSpan::Kind::kUtterance, begin, input.size(), u});
  }
  for (std::size_t slot = 0; slot < prev_state.size(); ++slot) {
    const std::size_t begin = input.size();
    push(slot_names[slot], TokenRole::kSchemaName);
    push(std::string(kEqualsToken), TokenRole::kEquals);
    if (prev_state[slot].empty()) {
      push(std::string(kNoneToken), TokenRole::kNone);
    } else {
      for (Keyword k : prev_state[slot].members()) push(KeywordName(k), TokenRole::kKeyword);
    }
    push(std::string(kSepToken), TokenRole::kSep);
    input.spans.push_back({InputSpan::Kind::kSlot, begin, input.size(), slot});
  }
  return input;
}

std::vector<std::size_t> MaskCandidates(const ModelInput& input) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < input.roles.size(); ++i) {
    if (input.roles[i] == TokenRole::kUtterance || input.roles[i] == TokenRole::kSchemaName) {
      out.push_back(i);
    }
  }
  return out;
}

}  // namespace sqltrace
