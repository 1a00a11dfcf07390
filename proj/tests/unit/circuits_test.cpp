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

#include "bornstat/circuits.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "bornstat/families.hpp"
#include "test_util.hpp"

namespace bornstat {
namespace {

constexpr double kPi = std::numbers::pi;

// psi(x) = 2^-n sum_z (-1)^(x.z) exp(i sum_g theta_g prod_{i in g} (-1)^z_i).
std::vector<double> brute_force_iqp(const IqpCircuit &c) {
    const std::size_t N = outcome_count(c.n());
    std::vector<Complex> phase(N);
    for (std::size_t z = 0; z < N; ++z) {
        double angle = 0.0;
        for (const auto &g : c.gates()) {
            angle += g.theta * ((std::popcount(g.mask & z) & 1) ? -1.0 : 1.0);
        }
        phase[z] = std::polar(1.0, angle);
    }
    std::vector<double> p(N);
    for (std::size_t x = 0; x < N; ++x) {
        Complex amp = 0.0;
        for (std::size_t z = 0; z < N; ++z) {
            amp += (std::popcount(x & z) & 1) ? -phase[z] : phase[z];
        }
        p[x] = std::norm(amp / static_cast<double>(N));
    }
    return p;
}

TEST(IqpProduct, Examples) {
    const std::vector<double> zero{0.0, 0.0};
    EXPECT_DOUBLE_EQ(iqp_product_prob_vector(zero)[0], 1.0);

    const std::vector<double> half{kPi / 2, kPi / 2, kPi / 2};
    const ProbVector flat = iqp_product_prob_vector(half);
    for (double v : flat.values()) EXPECT_NEAR(v, 0.125, 1e-15);

    const std::vector<double> flip{kPi};
    EXPECT_NEAR(iqp_product_prob_vector(flip)[1], 1.0, 1e-15);
}

TEST(IqpProduct, RandomAnglesMatchUniformProductFamily) {
    RandomStream root(31, 0);
    std::vector<double> via_angles, via_weights;
    for (int t = 0; t < 5000; ++t) {
        RandomStream s = root.child(t);
        via_angles.push_back(iqp_product_prob_vector(random_iqp_product_angles(3, s))[0]);
        via_weights.push_back(product_prob_vector(random_product_instance(3, s))[0]);
    }
    EXPECT_GT(testing::ks_two_sample_pvalue(via_angles, via_weights), 0.01);
}

TEST(RandomIqpCircuit, GateCountAndAngles) {
    RandomStream s(32, 0);
    for (int n = 1; n <= 8; ++n) {
        EXPECT_EQ(random_iqp_circuit(n, s).gates().size(), static_cast<std::size_t>(n + n * (n - 1) / 2));
        EXPECT_EQ(random_iqp_circuit(n, s, false).gates().size(), static_cast<std::size_t>(n * (n - 1) / 2));
    }
    std::vector<double> angles;
    for (int t = 0; t < 200; ++t) {
        const IqpCircuit c = random_iqp_circuit(6, s);
        for (const auto &g : c.gates()) {
            EXPECT_GE(std::popcount(g.mask), 1);
            EXPECT_LE(std::popcount(g.mask), 2);
            angles.push_back(g.theta);
        }
    }
    EXPECT_GT(testing::ks_pvalue(angles, [](double x) { return x / (2 * kPi); }), 0.01);
}

TEST(IqpCircuit, RejectsBadGates) {
    EXPECT_THROW(IqpCircuit(3, {{0b111, 0.1}}), DomainError);
    EXPECT_THROW(IqpCircuit(3, {{0, 0.1}}), DomainError);
    EXPECT_THROW(IqpCircuit(2, {{0b100, 0.1}}), DomainError);
    EXPECT_THROW(IqpCircuit(2, {{0b1, std::nan("")}}), DomainError);
}

TEST(IqpState, ZeroAnglesGiveAllZeros) {
    const IqpCircuit c(4, {{0b0011, 0.0}, {0b0100, 0.0}});
    EXPECT_NEAR(iqp_prob_vector(c)[0], 1.0, 1e-14);
}

TEST(IqpState, SingleQubitRotation) {
    for (double theta : {0.1, 0.7, 1.3, 2.9}) {
        const ProbVector p = iqp_prob_vector(IqpCircuit(1, {{0b1, theta}}));
        EXPECT_NEAR(p[1], std::sin(theta) * std::sin(theta), 1e-14);
    }
}

TEST(IqpState, MatchesBruteForceOracle) {
    RandomStream s(33, 0);
    for (int n = 1; n <= 7; ++n) {
        const IqpCircuit c = random_iqp_circuit(n, s);
        const ProbVector p = iqp_prob_vector(c);
        const auto ref = brute_force_iqp(c);
        for (std::size_t x = 0; x < p.size(); ++x) EXPECT_NEAR(p[x], ref[x], 1e-12) << "n=" << n;
    }
}

TEST(IqpState, GateOrderDoesNotMatter) {
    RandomStream s(34, 0);
    const IqpCircuit c = random_iqp_circuit(6, s);
    std::vector<IqpGate> reversed(c.gates().rbegin(), c.gates().rend());
    const ProbVector p = iqp_prob_vector(c);
    const ProbVector q = iqp_prob_vector(IqpCircuit(6, reversed));
    for (std::size_t x = 0; x < p.size(); ++x) EXPECT_NEAR(p[x], q[x], 1e-13);
}

TEST(IqpState, ResourceCap) {
    RandomStream s(35, 0);
    EXPECT_THROW(iqp_state(random_iqp_circuit(kMaxStatevectorQubits + 1, s)), ResourceError);
}

TEST(IqpCircuit, JsonRoundTrip) {
    RandomStream s(36, 0);
    const IqpCircuit c = random_iqp_circuit(5, s);
    const IqpCircuit back = IqpCircuit::from_json(c.to_json());
    ASSERT_EQ(back.n(), 5);
    ASSERT_EQ(back.gates().size(), c.gates().size());
    for (std::size_t i = 0; i < c.gates().size(); ++i) {
        EXPECT_EQ(back.gates()[i].mask, c.gates()[i].mask);
        EXPECT_EQ(back.gates()[i].theta, c.gates()[i].theta);
    }
    EXPECT_THROW(IqpCircuit::from_json("{\"n\": 2, \"gates\": [{\"qubits\": [5], \"theta\": 1}]}"), DomainError);
    EXPECT_THROW(IqpCircuit::from_json("not json"), ParseError);
}

TEST(PeakedIqp, SupportIsAtMostNextPowerOfTwo) {
    RandomStream s(37, 0);
    for (int n : {2, 5, 10, 13}) {
        const std::uint64_t cap = std::bit_ceil(static_cast<std::uint64_t>(n));
        const ProbVector p = peaked_iqp_prob_vector(n, s);
        EXPECT_LE(p.support_size(), cap) << "n=" << n;
        EXPECT_GE(p.support_size(), 1u);
    }
    EXPECT_THROW(peaked_iqp_prob_vector(1, s), DomainError);
}

TEST(DiagonalPauli, Examples) {
    EXPECT_DOUBLE_EQ(diagonal_pauli_expectation(point_mass(3, 0), SubsetMask(0b101, 3)), 1.0);
    EXPECT_DOUBLE_EQ(diagonal_pauli_expectation(point_mass(3, 0b001), SubsetMask(0b101, 3)), -1.0);
    EXPECT_NEAR(diagonal_pauli_expectation(uniform_prob_vector(3), SubsetMask(0b010, 3)), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(diagonal_pauli_expectation(uniform_prob_vector(3), SubsetMask(0, 3)), 1.0);
    EXPECT_THROW(diagonal_pauli_expectation(uniform_prob_vector(3), SubsetMask(1, 2)), DimensionError);
}

TEST(Mps, BondDimensions) {
    EXPECT_EQ(mps_bond_dim(6, 4, 0), 1);
    EXPECT_EQ(mps_bond_dim(6, 4, 1), 2);
    EXPECT_EQ(mps_bond_dim(6, 4, 3), 4);
    EXPECT_EQ(mps_bond_dim(6, 4, 5), 2);
    EXPECT_EQ(mps_bond_dim(6, 4, 6), 1);
}

TEST(Mps, RandomStateIsNormalizedAndCanonical) {
    RandomStream s(38, 0);
    for (int n = 1; n <= 10; ++n) {
        const MpsState psi = random_mps(n, 3, s);
        EXPECT_TRUE(psi.left_canonical());
        EXPECT_NEAR(psi.norm_squared(), 1.0, 1e-12);
        double total = 0.0;
        const ProbVector p = mps_prob_vector(psi);
        for (double v : p.values()) total += v;
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(Mps, BondDimensionOneIsProduct) {
    RandomStream s(39, 0);
    const MpsState psi = random_mps(5, 1, s);
    const ProbVector p = mps_prob_vector(psi);
    std::vector<double> a(5, 0.0);
    for (std::size_t x = 0; x < p.size(); ++x) {
        for (int i = 0; i < 5; ++i) {
            if (!((x >> i) & 1u)) a[static_cast<std::size_t>(i)] += p[x];
        }
    }
    const ProbVector q = product_prob_vector(ProductParams(a));
    for (std::size_t x = 0; x < p.size(); ++x) EXPECT_NEAR(p[x], q[x], 1e-13);
}

TEST(Mps, PointProbabilityMatchesDense) {
    RandomStream s(40, 0);
    const MpsState psi = random_mps(7, 4, s);
    const ProbVector p = mps_prob_vector(psi);
    for (std::uint64_t x = 0; x < p.size(); ++x) {
        EXPECT_NEAR(mps_probability(psi, BitString(x, 7)), p[x], 1e-13);
    }
    EXPECT_THROW(mps_probability(psi, BitString(0, 6)), DimensionError);
}

TEST(Mps, SamplerMatchesDenseDistribution) {
    RandomStream s(41, 0);
    const MpsState psi = random_mps(6, 3, s);
    const ProbVector p = mps_prob_vector(psi);
    std::vector<double> counts(p.size(), 0.0);
    for (auto x : mps_sample(psi, s, 100000).outcomes) counts[x] += 1.0;
    EXPECT_GT(testing::chi_squared_pvalue(counts, {p.values().begin(), p.values().end()}), 0.01);
}

TEST(Mps, Deterministic) {
    RandomStream a(42, 7), b(42, 7);
    const ProbVector p = mps_prob_vector(random_mps(6, 3, a));
    const ProbVector q = mps_prob_vector(random_mps(6, 3, b));
    for (std::size_t x = 0; x < p.size(); ++x) EXPECT_EQ(p[x], q[x]);
}

}  // namespace
}  // namespace bornstat
