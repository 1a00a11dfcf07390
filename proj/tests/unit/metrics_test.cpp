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

#include "bornstat/metrics.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <cmath>

#include "bornstat/circuits.hpp"
#include "bornstat/families.hpp"
#include "bornstat/lab.hpp"
#include "test_util.hpp"

namespace bornstat {
namespace {

ProbVector dirichlet(int n, RandomStream &s) { return pseudo_indep_prob_vector({n, Underlying::gamma()}, s); }

// Direct U-statistic over index pairs, no shortcuts.
double brute_force_unbiased(const SampleSet &x, const SampleSet &y, double rho) {
    auto k = [rho](std::uint64_t a, std::uint64_t b) { return std::pow(rho, std::popcount(a ^ b)); };
    const double m = static_cast<double>(x.outcomes.size());
    const double l = static_cast<double>(y.outcomes.size());
    double xx = 0, yy = 0, xy = 0;
    for (std::size_t i = 0; i < x.outcomes.size(); ++i)
        for (std::size_t j = 0; j < x.outcomes.size(); ++j)
            if (i != j) xx += k(x.outcomes[i], x.outcomes[j]);
    for (std::size_t i = 0; i < y.outcomes.size(); ++i)
        for (std::size_t j = 0; j < y.outcomes.size(); ++j)
            if (i != j) yy += k(y.outcomes[i], y.outcomes[j]);
    for (auto a : x.outcomes)
        for (auto b : y.outcomes) xy += k(a, b);
    return xx / (m * (m - 1)) + yy / (l * (l - 1)) - 2 * xy / (m * l);
}

// The kernel matrix of a random bit relabeling, applied to both vectors.
ProbVector permute_bits(const ProbVector &p, const std::vector<int> &perm) {
    std::vector<double> out(p.size());
    for (std::uint64_t x = 0; x < p.size(); ++x) {
        std::uint64_t y = 0;
        for (std::size_t i = 0; i < perm.size(); ++i) y |= ((x >> i) & 1u) << perm[i];
        out[y] = p[x];
    }
    return validate_prob_vector(std::move(out), p.n());
}

TEST(SquaredDistance, Examples) {
    RandomStream s(51, 0);
    const ProbVector p = dirichlet(4, s);
    EXPECT_EQ(squared_distance(p, p), 0.0);
    EXPECT_DOUBLE_EQ(squared_distance(point_mass(3, 0), point_mass(3, 1)), 2.0);
    EXPECT_NEAR(squared_distance(uniform_prob_vector(5), point_mass(5, 0)), 1.0 - 1.0 / 32.0, 1e-15);
    EXPECT_THROW(squared_distance(uniform_prob_vector(3), uniform_prob_vector(4)), DimensionError);
}

TEST(Kernel, Examples) {
    const KernelSpec k(1.0);
    EXPECT_EQ(gaussian_hamming_kernel(BitString(5, 4), BitString(5, 4), k), 1.0);
    EXPECT_NEAR(gaussian_hamming_kernel(BitString(0b0001, 4), BitString(0, 4), k), 0.60653, 1e-5);
    EXPECT_NEAR(gaussian_hamming_kernel(BitString(0b0011, 4), BitString(0, 4), k), 0.36788, 1e-5);
    EXPECT_THROW(gaussian_hamming_kernel(BitString(0, 3), BitString(0, 4), k), DimensionError);
    EXPECT_THROW(KernelSpec(0.0), DomainError);
    EXPECT_THROW(KernelSpec(-1.0), DomainError);
}

TEST(Kernel, RhoIncreasesWithBandwidth) {
    double prev = 0.0;
    for (double sigma = 0.1; sigma < 20; sigma *= 1.3) {
        const double rho = KernelSpec(sigma).rho();
        EXPECT_GT(rho, prev);
        EXPECT_LT(rho, 1.0);
        prev = rho;
    }
}

TEST(MetricNames, RoundTrip) {
    for (Metric m : {Metric::SD, Metric::MMD2, Metric::MMD2Estimate, Metric::L1, Metric::TVD}) {
        EXPECT_EQ(parse_metric(metric_name(m)), m);
    }
    EXPECT_EQ(parse_metric("SD"), Metric::SD);
    EXPECT_THROW(parse_metric("kl"), DomainError);
}

TEST(MmdPopulation, ZeroOnEqualAndCap) {
    RandomStream s(52, 0);
    const ProbVector p = dirichlet(6, s);
    EXPECT_NEAR(mmd2_population(p, p, KernelSpec(1.0)), 0.0, 1e-15);
    const ProbVector big = uniform_prob_vector(kMaxQuadraticQubits + 1);
    EXPECT_THROW(mmd2_population(big, big, KernelSpec(1.0)), ResourceError);
}

TEST(MmdFourier, WeightsSumToOneOverSubsets) {
    for (int n : {1, 4, 9}) {
        for (double rho : {0.0, 0.3, 0.9}) {
            const auto w = mmd_fourier_weights(n, rho);
            double sum = 0.0, binom = 1.0;
            for (int k = 0; k <= n; ++k) {
                sum += binom * w[static_cast<std::size_t>(k)];
                binom = binom * (n - k) / (k + 1);
            }
            EXPECT_NEAR(sum, 1.0, 1e-14);
        }
    }
    EXPECT_THROW(mmd_fourier_weights(3, 1.0), DomainError);
}

TEST(MmdFourier, ParsevalAtZeroRho) {
    RandomStream s(53, 0);
    for (int n = 1; n <= 12; ++n) {
        const ProbVector p = dirichlet(n, s);
        const ProbVector q = product_prob_vector(random_product_instance(n, s));
        const double sd = squared_distance(p, q);
        EXPECT_NEAR(mmd2_fourier_rho(p, q, 0.0), sd, 1e-12 * sd) << "n=" << n;
    }
}

TEST(MmdFourier, MatchesKernelDoubleSum) {
    RandomStream s(54, 0);
    for (int n = 1; n <= 8; ++n) {
        for (double sigma : {0.5, 1.0, static_cast<double>(n)}) {
            const ProbVector p = dirichlet(n, s);
            const ProbVector q = dirichlet(n, s);
            const KernelSpec k(sigma);
            EXPECT_NEAR(mmd2_fourier(p, q, k), mmd2_population(p, q, k), 1e-10) << n << " " << sigma;
        }
    }
}

TEST(MmdFourier, HolderBound) {
    RandomStream s(55, 0);
    for (int t = 0; t < 50; ++t) {
        const int n = 2 + t % 9;
        const ProbVector p = dirichlet(n, s);
        const ProbVector q = product_prob_vector(random_product_instance(n, s));
        const auto P = walsh_hadamard(p);
        const auto Q = walsh_hadamard(q);
        double worst = 0.0;
        for (std::size_t S = 0; S < P.size(); ++S) worst = std::max(worst, (P[S] - Q[S]) * (P[S] - Q[S]));
        EXPECT_LE(mmd2_fourier(p, q, KernelSpec(1.0)), worst + 1e-15);
    }
}

TEST(MmdPopulation, InvariantUnderBitRelabeling) {
    RandomStream s(56, 0);
    const int n = 6;
    const ProbVector p = dirichlet(n, s);
    const ProbVector q = dirichlet(n, s);
    const std::vector<int> perm{3, 0, 5, 1, 4, 2};
    const KernelSpec k(1.3);
    EXPECT_NEAR(mmd2_population(permute_bits(p, perm), permute_bits(q, perm), k), mmd2_population(p, q, k), 1e-14);
}

TEST(MmdUnbiased, IdenticalPointsGiveZero) {
    SampleSet x{3, {5, 5, 5}};
    EXPECT_NEAR(mmd2_unbiased(x, x, KernelSpec(1.0)), 0.0, 1e-15);
}

TEST(MmdUnbiased, Errors) {
    SampleSet one{3, {1}};
    SampleSet two{3, {1, 2}};
    SampleSet other{4, {1, 2}};
    EXPECT_THROW(mmd2_unbiased(one, two, KernelSpec(1.0)), DomainError);
    EXPECT_THROW(mmd2_unbiased(two, other, KernelSpec(1.0)), DimensionError);
}

TEST(MmdUnbiased, PathsAgreeWithBruteForce) {
    RandomStream s(57, 0);
    for (int n : {1, 3, 6, 9}) {
        const ProbVector p = dirichlet(n, s);
        const ProbVector q = dirichlet(n, s);
        const SampleSet x = sample_prob_vector(p, s, 37);
        const SampleSet y = sample_prob_vector(q, s, 23);
        const KernelSpec k(0.8);
        const double ref = brute_force_unbiased(x, y, k.rho());
        EXPECT_NEAR(mmd2_unbiased(x, y, k, EstimatorPath::Pairwise), ref, 1e-13);
        EXPECT_NEAR(mmd2_unbiased(x, y, k, EstimatorPath::Spectral), ref, 1e-12);
        EXPECT_NEAR(mmd2_unbiased(x, y, k), ref, 1e-12);
    }
}

TEST(MmdUnbiased, UnbiasedAgainstPopulation) {
    const int n = 6;
    RandomStream s(58, 0);
    const ProbVector p = dirichlet(n, s);
    const ProbVector q = dirichlet(n, s);
    const KernelSpec k(1.0);
    const double exact = mmd2_population(p, q, k);
    Moments est;
    RandomStream root(59, 0);
    for (int t = 0; t < 3000; ++t) {
        RandomStream r = root.child(t);
        est.add(mmd2_unbiased(sample_prob_vector(p, r, 200), sample_prob_vector(q, r, 200), k));
    }
    EXPECT_NEAR(est.mean(), exact, 3 * est.mean_stderr());
}

TEST(MmdThreshold, Examples) {
    EXPECT_EQ(mmd_test_threshold(10, 10, 1.0), 0.0);
    EXPECT_NEAR(mmd_test_threshold(4, 4, std::exp(-1.0)), 1.0, 1e-15);
    EXPECT_NEAR(mmd_test_threshold(100, 100, 0.05), std::sqrt(8 * std::log(20.0) / 200), 1e-15);
    EXPECT_NEAR(mmd_test_threshold(100, 100, 0.05), 0.346, 5e-4);
    EXPECT_THROW(mmd_test_threshold(4, 4, 0.0), DomainError);
    EXPECT_THROW(mmd_test_threshold(4, 4, 1.5), DomainError);
}

TEST(MmdThreshold, TypeOneErrorBelowAlpha) {
    const int n = 5;
    RandomStream s(60, 0);
    const ProbVector p = dirichlet(n, s);
    const KernelSpec k(1.0);
    const double thr = mmd_test_threshold(100, 100, 0.05);
    int rejects = 0;
    const int trials = 1000;
    RandomStream root(61, 0);
    for (int t = 0; t < trials; ++t) {
        RandomStream r = root.child(t);
        rejects += mmd2_unbiased(sample_prob_vector(p, r, 100), sample_prob_vector(p, r, 100), k) > thr;
    }
    EXPECT_LE(rejects / static_cast<double>(trials), 0.05);
}

TEST(L1, ExamplesAndBounds) {
    RandomStream s(62, 0);
    const ProbVector p = dirichlet(5, s);
    EXPECT_EQ(l1_distance(p, p), 0.0);
    EXPECT_DOUBLE_EQ(l1_distance(point_mass(2, 0), point_mass(2, 3)), 2.0);
    EXPECT_DOUBLE_EQ(total_variation(point_mass(2, 0), point_mass(2, 3)), 1.0);
    for (int t = 0; t < 200; ++t) {
        const int n = 1 + t % 10;
        const ProbVector a = dirichlet(n, s);
        const ProbVector b = product_prob_vector(random_product_instance(n, s));
        const double l1 = l1_distance(a, b);
        EXPECT_LE(l1, 2.0);
        EXPECT_LE(l1, std::sqrt(static_cast<double>(a.size()) * squared_distance(a, b)) * (1 + 1e-12));
        EXPECT_DOUBLE_EQ(total_variation(a, b), l1 / 2);
    }
}

TEST(L1, DirichletPairMoments) {
    // E|Y - Y'| for normalized Exp(1) weights has the finite-N form 2(N-1)/(2N-1),
    // approaching twice the Gini coefficient. A delta-method expansion of the two
    // normalizations gives variance 1/(2N) to leading order.
    const int n = 10;
    const double N = 1024.0;
    RandomStream root(63, 0);
    Moments m;
    for (int t = 0; t < 10000; ++t) {
        RandomStream s = root.child(t);
        const ProbVector p = dirichlet(n, s);
        const ProbVector q = dirichlet(n, s);
        m.add(l1_distance(p, q));
    }
    EXPECT_NEAR(m.mean(), 2 * (N - 1) / (2 * N - 1), 3 * m.mean_stderr());
    EXPECT_NEAR(m.variance() * 2 * N, 1.0, 0.1);
}

TEST(TriangleBounds, Examples) {
    EXPECT_EQ(triangle_bounds(0.3, 0.3).first, 0.0);
    const auto [lo, hi] = triangle_bounds(0.25, 0.0);
    EXPECT_DOUBLE_EQ(lo, 0.25);
    EXPECT_DOUBLE_EQ(hi, 0.25);
    EXPECT_THROW(triangle_bounds(-0.1, 0.2), DomainError);
}

TEST(TriangleBounds, ContainExactDistance) {
    RandomStream s(64, 0);
    for (int t = 0; t < 10000; ++t) {
        const int n = 1 + t % 10;
        const ProbVector p = dirichlet(n, s);
        const ProbVector q = product_prob_vector(random_product_instance(n, s));
        const ProbVector u = uniform_prob_vector(n);
        const auto [lo, hi] = triangle_bounds(squared_distance(p, u), squared_distance(q, u));
        const double d = squared_distance(p, q);
        ASSERT_GE(d, lo * (1 - 1e-12) - 1e-15);
        ASSERT_LE(d, hi * (1 + 1e-12) + 1e-15);
    }
}

TEST(EvaluateLoss, Dispatch) {
    RandomStream s(65, 0);
    const ProbVector p = dirichlet(4, s);
    const ProbVector q = dirichlet(4, s);
    EXPECT_EQ(evaluate_loss(Metric::SD, p, q).value, squared_distance(p, q));
    const LossValue mmd = evaluate_loss(Metric::MMD2, p, q, KernelSpec(2.0));
    EXPECT_EQ(mmd.sigma, 2.0);
    EXPECT_NEAR(mmd.value, mmd2_population(p, q, KernelSpec(2.0)), 1e-14);
    EXPECT_EQ(evaluate_loss(Metric::TVD, p, q).value, total_variation(p, q));
    EXPECT_THROW(evaluate_loss(Metric::MMD2Estimate, p, q, KernelSpec(1.0)), DomainError);
}

}  // namespace
}  // namespace bornstat
