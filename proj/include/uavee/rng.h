// Copyright 2026 The uavee Authors.
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

#ifndef UAVEE_RNG_H_
#define UAVEE_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace uavee {

using Rng = std::mt19937_64;

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream for one labelled component, so adding draws to one
// component never shifts the draws seen by another.
inline Rng DeriveRng(std::uint64_t master_seed, std::string_view label,
                     std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (const char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  std::uint64_t s = SplitMix64(master_seed ^ SplitMix64(h));
  s = SplitMix64(s ^ SplitMix64(a + 0x632be59bd9b4e019ULL));
  s = SplitMix64(s ^ SplitMix64(b + 0x8cb92ba72f3d8dd7ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(s),
                    static_cast<std::uint32_t>(s >> 32)};
  return Rng(seq);
}

}  // namespace uavee

#endif  // UAVEE_RNG_H_
