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

#include "bornstat/bitmath.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bornstat/random.hpp"

namespace bornstat {
namespace {

void check_qubits(int n) {
    if (n < 1 || n > kMaxQubits) {
        throw DomainError("qubit count " + std::to_string(n) + " outside [1, " + std::to_string(kMaxQubits) + "]");
    }
}

void check_vector_qubits(int n) {
    if (n < 0) {
        throw DomainError("negative qubit count");
    }
    if (n > kMaxQubits) {
        throw ResourceError("dense vector over " + std::to_string(n) + " qubits exceeds the cap of " +
                            std::to_string(kMaxQubits));
    }
}

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

}  // namespace

BitString::BitString(std::uint64_t bits, int n) : bits_(bits), n_(n) {
    check_qubits(n);
    if (bits >> n) {
        throw DomainError("bitstring value does not fit in " + std::to_string(n) + " bits");
    }
}

std::string BitString::to_string() const {
    std::string out(static_cast<std::size_t>(n_), '0');
    for (int q = 0; q < n_; ++q) {
        if ((bits_ >> q) & 1u) {
            out[static_cast<std::size_t>(n_ - 1 - q)] = '1';
        }
    }
    return out;
}

BitString BitString::parse(const std::string &text) {
    if (text.empty() || text.size() > static_cast<std::size_t>(kMaxQubits)) {
        throw DomainError("bitstring length must be in [1, " + std::to_string(kMaxQubits) + "]");
    }
    std::uint64_t bits = 0;
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw DomainError(std::string("invalid bit character '") + c + "'");
        }
        bits = (bits << 1) | static_cast<std::uint64_t>(c == '1');
    }
    return BitString(bits, static_cast<int>(text.size()));
}

SubsetMask::SubsetMask(std::uint64_t mask, int n) : mask_(mask), n_(n) {
    check_qubits(n);
    if (mask >> n) {
        throw DomainError("subset mask does not fit in " + std::to_string(n) + " bits");
    }
}

SubsetMask SubsetMask::of(std::initializer_list<int> qubits, int n) {
    std::uint64_t mask = 0;
    for (int q : qubits) {
        if (q < 1 || q > n) {
            throw DomainError("qubit label " + std::to_string(q) + " outside [1, " + std::to_string(n) + "]");
        }
        mask |= std::uint64_t{1} << (q - 1);
    }
    return SubsetMask(mask, n);
}

int hamming_distance(const BitString &x, const BitString &y) {
    if (x.n() != y.n()) {
        throw DimensionError("hamming_distance: operands have different qubit counts");
    }
    return std::popcount(x.bits() ^ y.bits());
}

int fourier_character(const SubsetMask &s, const BitString &x) {
    if (s.n() != x.n()) {
        throw DimensionError("fourier_character: mask and bitstring have different qubit counts");
    }
    return (std::popcount(s.mask() & x.bits()) & 1) ? -1 : 1;
}

double ProbVector::at(const BitString &x) const {
    if (x.n() != n_) {
        throw DimensionError("ProbVector::at: bitstring has the wrong qubit count");
    }
    return values_[x.bits()];
}

std::size_t ProbVector::support_size() const {
    return static_cast<std::size_t>(std::count_if(values_.begin(), values_.end(), [](double v) { return v > 0.0; }));
}

ProbVector validate_prob_vector(std::vector<double> values, int n) {
    check_vector_qubits(n);
    if (values.size() != outcome_count(n)) {
        throw DimensionError("probability vector length " + std::to_string(values.size()) + " != 2^" +
                             std::to_string(n));
    }
    double sum = 0.0;
    double compensation = 0.0;
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw DomainError("probability vector has a negative or non-finite entry");
        }
        double y = v - compensation;
        double t = sum + y;
        compensation = (t - sum) - y;
        sum = t;
    }
    if (std::abs(sum - 1.0) > kNormTolerance) {
        throw NormalizationError("probability vector sums to " + std::to_string(sum));
    }
    return ProbVector(n, std::move(values));
}

ProbVector uniform_prob_vector(int n) {
    check_qubits(n);
    return validate_prob_vector(std::vector<double>(outcome_count(n), 1.0 / static_cast<double>(outcome_count(n))), n);
}

ProbVector point_mass(int n, std::uint64_t x) {
    check_qubits(n);
    std::vector<double> v(outcome_count(n), 0.0);
    v.at(x) = 1.0;
    return validate_prob_vector(std::move(v), n);
}

SampleSet sample_prob_vector(const ProbVector &p, RandomStream &stream, std::size_t count) {
    std::vector<double> cdf(p.size());
    std::partial_sum(p.values().begin(), p.values().end(), cdf.begin());
    const double total = cdf.back();
    std::size_t last = p.size() - 1;
    while (last > 0 && p[last] == 0.0) {
        --last;
    }
    SampleSet out;
    out.n = p.n();
    out.seed = stream.master_seed();
    out.outcomes.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double u = stream.uniform() * total;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        // u can round up to the total; clamp to the last outcome with mass.
        out.outcomes.push_back(std::min(static_cast<std::size_t>(it - cdf.begin()), last));
    }
    return out;
}

std::vector<double> walsh_hadamard(const ProbVector &p) {
    std::vector<double> out(p.values().begin(), p.values().end());
    fwht_inplace(std::span<double>(out));
    return out;
}

std::vector<double> walsh_hadamard(std::span<const double> values) {
    if (!is_power_of_two(values.size())) {
        throw DimensionError("walsh_hadamard: length is not a power of two");
    }
    std::vector<double> out(values.begin(), values.end());
    fwht_inplace(std::span<double>(out));
    return out;
}

std::vector<double> inverse_walsh_hadamard(std::span<const double> spectrum) {
    std::vector<double> out = walsh_hadamard(spectrum);
    const double scale = 1.0 / static_cast<double>(out.size());
    for (double &v : out) {
        v *= scale;
    }
    return out;
}

}  // namespace bornstat
