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

#ifndef SQLTRACE_TESTS_SUPPORT_WL_ORACLE_H_
#define SQLTRACE_TESTS_SUPPORT_WL_ORACLE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "sqltrace/similarity.h"

namespace sqltrace::testing {

// Subtree-pattern strings after `iteration` rounds of relabeling, one per
// node. Round 0 is the node label; round i wraps the node's round i-1
// string and the sorted round i-1 strings of its children.
std::vector<std::string> WlPatterns(const SqlTree& tree, int iteration);

// Naive kernel: for every round, enumerates all node pairs across the two
// trees and counts the pairs whose pattern strings are equal.
std::uint64_t NaiveWlKernel(const SqlTree& x, const SqlTree& y, int iterations);

}  // namespace sqltrace::testing

#endif  // SQLTRACE_TESTS_SUPPORT_WL_ORACLE_H_
