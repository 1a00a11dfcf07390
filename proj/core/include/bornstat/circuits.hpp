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

// Circuit-backed distribution generators: product and weight-2 IQP circuits
// simulated on a dense statevector, peaked IQP embeddings, and random matrix
// product states with exact probabilities and perfect sampling.

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bornstat/bitmath.hpp"
#include "bornstat/random.hpp"

namespace bornstat {

using Complex = std::complex<double>;

/// Largest register simulated as a dense statevector.
inline constexpr int kMaxStatevectorQubits = 16;

struct IqpGate {
    std::uint64_t mask;  // qubits acted on, bit i-1 for qubit i
    double theta;
};

/// Diagonal-gate description of an IQP circuit: H^n . D(theta) . H^n.
/// Every mask is nonempty with at most two qubits.
class IqpCircuit {
 public:
    IqpCircuit(int n, std::vector<IqpGate> gates);

    int n() const { return n_; }
    const std::vector<IqpGate> &gates() const { return gates_; }

    /// {"n": n, "gates": [{"qubits": [...], "theta": t}, ...]}, qubits 0-based.
    std::string to_json() const;
    static IqpCircuit from_json(const std::string &text);

 private:
    int n_;
    std::vector<IqpGate> gates_;
};

class StateVector {
 public:
    StateVector(int n, std::vector<Complex> amplitudes);

    int n() const { return n_; }
    std::span<const Complex> amplitudes() const { return amps_; }
    ProbVector probabilities() const;

 private:
    int n_;
    std::vector<Complex> amps_;
};

/// p(x) = prod_i (cos^2(theta_i/2) if x_i = 0 else sin^2(theta_i/2)).
ProbVector iqp_product_prob_vector(std::span<const double> theta);

/// Angles with cos^2(theta/2) uniform on [0, 1], which makes the product IQP
/// family coincide with the uniform-a product family.
std::vector<double> random_iqp_product_angles(int n, RandomStream &stream);

/// All singletons (unless disabled) and all unordered pairs, angles i.i.d.
/// uniform on [0, 2 pi).
IqpCircuit random_iqp_circuit(int n, RandomStream &stream, bool include_singletons = true);

/// H^n D H^n |0>, D|z> = exp(i sum_g theta_g prod_{i in S_g} (-1)^{z_i}) |z>.
/// Throws ResourceError above kMaxStatevectorQubits.
StateVector iqp_state(const IqpCircuit &circuit);
ProbVector iqp_prob_vector(const IqpCircuit &circuit);

/// Random weight-2 IQP distribution on ceil(log2 n) qubits, its K = 2^m
/// masses placed on K distinct uniformly random n-bit outcomes.
ProbVector peaked_iqp_prob_vector(int n, RandomStream &stream);

/// Matrix product state with open boundaries. Site i holds one
/// (left x right) matrix per physical value.
class MpsState {
 public:
    using Matrix = Eigen::MatrixXcd;

    MpsState(int n, int bond_dimension, std::vector<std::array<Matrix, 2>> sites);

    int n() const { return n_; }
    int bond_dimension() const { return chi_; }
    const std::vector<std::array<Matrix, 2>> &sites() const { return sites_; }
    bool left_canonical() const { return left_canonical_; }

    /// Left-canonicalizes by a QR sweep and rescales to unit norm.
    void canonicalize();

    /// <psi|psi> by transfer-matrix contraction.
    double norm_squared() const;

    /// Dense amplitudes <x|psi>, meet-in-the-middle contraction. n <= kMaxStatevectorQubits.
    std::vector<Complex> amplitudes() const;

 private:
    int n_;
    int chi_;
    std::vector<std::array<Matrix, 2>> sites_;
    bool left_canonical_ = false;
};

/// Internal bond dimension between sites i and i+1 (0-based bond index i+1):
/// min(chi, 2^(i+1), 2^(n-i-1)).
int mps_bond_dim(int n, int chi, int bond);

/// Site tensors with i.i.d. standard complex Gaussian entries, left-canonical, unit norm.
MpsState random_mps(int n, int chi, RandomStream &stream);

/// |<x|psi>|^2 by a left-to-right contraction, O(n chi^2).
double mps_probability(const MpsState &state, const BitString &x);

ProbVector mps_prob_vector(const MpsState &state);

/// Perfect sampling: with left-canonical sites the marginal of bits
/// i..n is || A_i^{x_i} ... A_n^{x_n} ||^2, so bits are drawn from the last
/// site backwards, each from its exact conditional.
SampleSet mps_sample(const MpsState &state, RandomStream &stream, std::size_t count);

/// <Z_S> = sum_x chi_S(x) p(x), the Fourier character P^(S).
double diagonal_pauli_expectation(const ProbVector &p, const SubsetMask &s);

}  // namespace bornstat
