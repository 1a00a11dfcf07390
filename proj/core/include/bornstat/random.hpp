// Copyright 2026 The bornstat Authors
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

#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace bornstat {

/// SplitMix64 finalizer. Used to hash (seed, index) pairs into fresh keys.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Counter-based random stream (Philox4x32-10).
///
/// The key is the master seed and the counter carries the stream index plus a
/// running block counter, so the sequence of a stream depends only on
/// (master_seed, stream_index). Satisfies UniformRandomBitGenerator, so it can
/// drive the <random> distributions directly.
class RandomStream {
 public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t master_seed, std::uint64_t stream_index);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform double in (0, 1]; safe under log and negative powers.
    double uniform_pos();
    /// Uniform integer in [0, bound). Unbiased (rejection on the top range).
    std::uint64_t below(std::uint64_t bound);

    /// A stream statistically independent from this one and from its other children.
    RandomStream child(std::uint64_t index) const;

    std::uint64_t master_seed() const { return seed_; }
    std::uint64_t stream_index() const { return index_; }

 private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t index_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int cursor_ = 2;
};

/// The stream for trial `index` under `master_seed`.
RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t index);

/// Hashes an ordered list of tags into a seed. Used to key sub-experiments.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace bornstat
