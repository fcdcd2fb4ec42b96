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

#ifndef SQLTRACE_RANDOM_H_
#define SQLTRACE_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>

namespace sqltrace {

// Seeded generator with platform-independent bounded sampling. The standard
// distributions are implementation-defined, which would make corpus bytes
// depend on the standard library in use.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform in [0, n). n must be positive.
  std::size_t Uniform(std::size_t n);

  // Uniform in [lo, hi].
  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi);

  // Stream seed for the index-th independent task under a base seed.
  static std::uint64_t Derive(std::uint64_t seed, std::uint64_t index);

 private:
  std::mt19937_64 engine_;
};

}  // namespace sqltrace

#endif  // SQLTRACE_RANDOM_H_
