// Copyright 2026 The csgopt Authors
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

#ifndef CSGOPT_RNG_HPP
#define CSGOPT_RNG_HPP

#include <cstdint>
#include <random>

namespace csgopt {

/// Purposes for which independent streams are split off a replicate seed.
enum class StreamPurpose : std::uint32_t {
  kStartPoint = 1,
  kSamples = 2,
};

/// Seeded random stream.
///
/// std::mt19937_64 and std::seed_seq are fully specified by the standard, so
/// the raw bit stream is identical on every conforming platform. The standard
/// distributions are not, which is why uniform() and normal() are written out
/// here instead of using <random>'s distribution objects.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Stream for (base seed, replicate, purpose). Distinct triples give
  /// statistically independent streams.
  static Rng split(std::uint64_t base_seed, std::uint64_t replicate,
                   StreamPurpose purpose) {
    return Rng(derive_seed(base_seed, replicate, purpose));
  }

  static std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t replicate,
                                   StreamPurpose purpose) {
    std::seed_seq seq{static_cast<std::uint32_t>(base_seed),
                      static_cast<std::uint32_t>(base_seed >> 32),
                      static_cast<std::uint32_t>(replicate),
                      static_cast<std::uint32_t>(replicate >> 32),
                      static_cast<std::uint32_t>(purpose)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via the Marsaglia polar method.
  double normal();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace csgopt

#endif  // CSGOPT_RNG_HPP
