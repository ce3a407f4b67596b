// Copyright 2026 The Dimlight Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DIMLIGHT_SEED_H_
#define DIMLIGHT_SEED_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace dimlight {

// Engine used for every stochastic step. mt19937_64 output is fixed by the
// standard, and all distributions on top of it come from Boost.Random, so a
// seed reproduces bit-identical draws on any conforming toolchain.
using RandomStream = std::mt19937_64;

// Stable 64-bit hash builder (FNV-1a over length-prefixed fields, finished
// with a SplitMix64 avalanche). Independent of platform and std::hash.
class SeedHasher {
 public:
  SeedHasher& Add(std::uint64_t value);
  SeedHasher& Add(std::string_view text);
  std::uint64_t Finish() const;

 private:
  void Mix(std::uint8_t byte);

  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::uint64_t SplitMix64(std::uint64_t x);

// Seed for one (scene, frame, level) work item of a dataset run.
std::uint64_t DeriveFrameSeed(std::uint64_t global_seed, std::string_view scene,
                              std::string_view frame, int level_index);

// Child seed for a named sub-stream (e.g. "camera", "noise").
std::uint64_t DeriveStreamSeed(std::uint64_t seed, std::string_view purpose);

}  // namespace dimlight

#endif  // DIMLIGHT_SEED_H_
