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

// Bit-domain primitives: n-bit outcomes, subset masks, parity characters,
// the fast Walsh-Hadamard transform and validated probability vectors.
//
// Bit convention: qubit i (1-based) is bit i-1 of the outcome index, so the
// index of an outcome is the integer whose binary string, most significant
// qubit first, is the outcome.

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bornstat/errors.hpp"

namespace bornstat {

/// Hard cap on dense storage: N = 2^n doubles.
inline constexpr int kMaxQubits = 26;
/// Absolute tolerance on sum(p) - 1.
inline constexpr double kNormTolerance = 1e-9;

inline std::size_t outcome_count(int n) { return std::size_t{1} << n; }

/// An n-bit outcome x in {0,1}^n.
class BitString {
 public:
    BitString(std::uint64_t bits, int n);

    std::uint64_t bits() const { return bits_; }
    int n() const { return n_; }
    /// Value of qubit i, 1-based.
    int bit(int qubit) const { return static_cast<int>((bits_ >> (qubit - 1)) & 1u); }

    /// Most significant qubit first, e.g. "0101".
    std::string to_string() const;
    static BitString parse(const std::string &text);

    friend bool operator==(const BitString &, const BitString &) = default;

 private:
    std::uint64_t bits_;
    int n_;
};

/// Indicator of a subset S of [n].
class SubsetMask {
 public:
    SubsetMask(std::uint64_t mask, int n);
    /// Builds the mask from 1-based qubit labels.
    static SubsetMask of(std::initializer_list<int> qubits, int n);

    std::uint64_t mask() const { return mask_; }
    int n() const { return n_; }
    int weight() const { return std::popcount(mask_); }
    bool empty() const { return mask_ == 0; }

    friend bool operator==(const SubsetMask &, const SubsetMask &) = default;

 private:
    std::uint64_t mask_;
    int n_;
};

int hamming_distance(const BitString &x, const BitString &y);

/// (-1)^{|S & x|}.
int fourier_character(const SubsetMask &s, const BitString &x);

/// Dense probability vector over {0,1}^n. Entries are non-negative and sum to
/// one within kNormTolerance; only validate_prob_vector constructs one.
class ProbVector {
 public:
    int n() const { return n_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t x) const { return values_[x]; }
    double at(const BitString &x) const;

    /// Number of strictly positive entries.
    std::size_t support_size() const;

 private:
    friend ProbVector validate_prob_vector(std::vector<double> values, int n);
    ProbVector(int n, std::vector<double> values) : n_(n), values_(std::move(values)) {}

    int n_;
    std::vector<double> values_;
};

/// Throws DimensionError (length), DomainError (negative or non-finite entry)
/// or NormalizationError (|sum - 1| > kNormTolerance).
ProbVector validate_prob_vector(std::vector<double> values, int n);

ProbVector uniform_prob_vector(int n);
ProbVector point_mass(int n, std::uint64_t x);

/// Multiset of n-bit outcomes drawn from one distribution instance.
struct SampleSet {
    int n = 0;
    std::vector<std::uint64_t> outcomes;
    std::string family;
    std::uint64_t seed = 0;

    std::size_t size() const { return outcomes.size(); }
};

/// Draws `count` outcomes by inverse-CDF over the dense vector.
class RandomStream;
SampleSet sample_prob_vector(const ProbVector &p, RandomStream &stream, std::size_t count);

/// In-place unnormalized Walsh-Hadamard butterfly: v[S] <- sum_x (-1)^{|S&x|} v[x].
/// Size must be a power of two.
template <typename T>
void fwht_inplace(std::span<T> v) {
    const std::size_t size = v.size();
    for (std::size_t half = 1; half < size; half <<= 1) {
        for (std::size_t block = 0; block < size; block += 2 * half) {
            for (std::size_t j = block; j < block + half; ++j) {
                T a = v[j];
                T b = v[j + half];
                v[j] = a + b;
                v[j + half] = a - b;
            }
        }
    }
}

/// All Fourier characters P^(S) = sum_x p(x) chi_S(x), indexed by mask S.
std::vector<double> walsh_hadamard(const ProbVector &p);
/// Same transform on an arbitrary real vector (e.g. a difference p - q).
std::vector<double> walsh_hadamard(std::span<const double> values);
/// Recovers the vector from its characters: v(x) = 2^-n sum_S V^(S) chi_S(x).
std::vector<double> inverse_walsh_hadamard(std::span<const double> spectrum);

}  // namespace bornstat
