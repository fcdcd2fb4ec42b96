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

#ifndef SQLTRACE_MODEL_INPUT_H_
#define SQLTRACE_MODEL_INPUT_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sqltrace/catalog.h"
#include "sqltrace/schema_state.h"

namespace sqltrace {

inline constexpr std::size_t kDefaultMaxInputLength = 256;

inline constexpr std::string_view kClsToken = "[CLS]";
inline constexpr std::string_view kSepToken = "[SEP]";
inline constexpr std::string_view kMaskToken = "[MASK]";
inline constexpr std::string_view kNoneToken = "[NONE]";
inline constexpr std::string_view kEqualsToken = "=";

enum class TokenRole { kCls, kSep, kUtterance, kSchemaName, kEquals, kKeyword, kNone };

struct InputSpan {
  enum class Kind { kCls, kUtterance, kSlot };

  Kind kind;
  std::size_t begin;  // token range [begin, end); utterance and slot spans
  std::size_t end;    // end with their [SEP]
  std::size_t index;  // history index for utterances, slot id for slots

  bool operator==(const InputSpan&) const = default;
};

// The serialized SST input:
//   [CLS] u_1 [SEP] ... u_t [SEP] s^1 = v^1 [SEP] ... s^m = v^m [SEP]
// Spans partition the token sequence exactly.
struct ModelInput {
  std::vector<std::string> tokens;
  std::vector<TokenRole> roles;
  std::vector<InputSpan> spans;
  std::size_t dropped_utterances = 0;  // oldest turns removed to fit

  std::size_t size() const { return tokens.size(); }
  bool operator==(const ModelInput&) const = default;
};

// Lower-cases and splits on whitespace; punctuation becomes its own token.
std::vector<std::string> TokenizeUtterance(std::string_view text);

// Builds the input for turn t = history.size(). Oldest utterances are
// dropped first when the result would exceed max_len; if only the newest
// remains and still does not fit, its trailing words are cut. Throws
// ConfigError when the schema-state entries alone exceed max_len.
ModelInput SerializeInput(std::span<const std::string> history,
                          const SchemaState& prev_state, const Catalog& catalog,
                          std::size_t max_len = kDefaultMaxInputLength);

// Same layout, taking slot names from the state rather than a catalog.
ModelInput SerializeInput(std::span<const std::string> history,
                          const SchemaState& prev_state,
                          std::span<const std::string> slot_names,
                          std::size_t max_len = kDefaultMaxInputLength);

// Positions eligible for masking: utterance words and schema names.
std::vector<std::size_t> MaskCandidates(const ModelInput& input);

}  // namespace sqltrace

#endif  // SQLTRACE_MODEL_INPUT_H_
