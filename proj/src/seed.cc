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

#include "dimlight/seed.h"

namespace dimlight {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void SeedHasher::Mix(std::uint8_t byte) {
  state_ ^= byte;
  state_ *= 0x100000001b3ULL;
}

SeedHasher& SeedHasher::Add(std::uint64_t value) {
  for (int i = 0; i < 8; ++i) Mix(static_cast<std::uint8_t>(value >> (8 * i)));
  return *this;
}

SeedHasher& SeedHasher::Add(std::string_view text) {
  Add(static_cast<std::uint64_t>(text.size()));
  for (char c : text) Mix(static_cast<std::uint8_t>(c));
  return *this;
}

std::uint64_t SeedHasher::Finish() const { return SplitMix64(state_); }

std::uint64_t DeriveFrameSeed(std::uint64_t global_seed, std::string_view scene,
                              std::string_view frame, int level_index) {
  return SeedHasher()
      .Add(global_seed)
      .Add(scene)
      .Add(frame)
      .Add(static_cast<std::uint64_t>(level_index))
      .Finish();
}

std::uint64_t DeriveStreamSeed(std::uint64_t seed, std::string_view purpose) {
  return SeedHasher().Add(seed).Add(purpose).Finish();
}

}  // namespace dimlight
