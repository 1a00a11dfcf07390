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

// Loss functions between distributions over {0,1}^n: squared distance, the
// Gaussian-Hamming MMD^2 in kernel, Fourier and unbiased-estimator form, the
// MMD two-sample test, and 1-norm / total variation.

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bornstat/bitmath.hpp"

namespace bornstat {

/// Largest n for the O(N^2) kernel double sum.
inline constexpr int kMaxQuadraticQubits = 13;

/// Gaussian kernel on Hamming distance, k(x, y) = exp(-d_H / (2 sigma^2)) = rho^d_H.
class KernelSpec {
 public:
    /// Throws DomainError unless sigma > 0 and finite.
    explicit KernelSpec(double sigma);

    double sigma() const { return sigma_; }
    /// exp(-1 / (2 sigma^2)), in (0, 1).
    double rho() const { return rho_; }
    /// Kernel bound: k(x, x) = 1.
    static constexpr double max_value() { return 1.0; }

    /// rho^d for d = 0..n.
    std::vector<double> distance_table(int n) const;

 private:
    double sigma_;
    double rho_;
};

enum class Metric { SD, MMD2, MMD2Estimate, L1, TVD };

std::string metric_name(Metric m);
/// Accepts the names produced by metric_name, case-insensitive. Throws DomainError.
Metric parse_metric(const std::string &name);

struct LossValue {
    Metric metric;
    double value;
    std::optional<double> sigma;
    std::optional<std::size_t> m;
    std::optional<std::size_t> l;
};

/// Sum_x (p(x) - q(x))^2.
double squared_distance(const ProbVector &p, const ProbVector &q);

double gaussian_hamming_kernel(const BitString &x, const BitString &y, const KernelSpec &spec);

/// Kernel double sum sum_{x,y} k(x,y) d(x) d(y), d = p - q. n <= kMaxQuadraticQubits.
double mmd2_population(const ProbVector &p, const ProbVector &q, const KernelSpec &spec);

/// Weight of a Fourier coefficient of order k: (1-rho)^k (1+rho)^(n-k) / 2^n.
std::vector<double> mmd_fourier_weights(int n, double rho);

/// 2^-n sum_S (1-rho)^|S| (1+rho)^(n-|S|) (P^(S) - Q^(S))^2 via one fast transform of p - q.
double mmd2_fourier(const ProbVector &p, const ProbVector &q, const KernelSpec &spec);
/// Same with rho given directly; rho = 0 reduces to the squared distance.
double mmd2_fourier_rho(const ProbVector &p, const ProbVector &q, double rho);

enum class EstimatorPath {
    Auto,      // cheapest of the two below
    Pairwise,  // direct sum over sample pairs, O((m + l)^2)
    Spectral,  // outcome histograms through the Fourier-diagonal kernel, O(N log N)
};

/// Two-sample U-statistic: mean kernel over distinct ordered pairs within X,
/// plus within Y, minus twice the mean over cross pairs. May be negative.
/// Requires at least two samples per side.
double mmd2_unbiased(const SampleSet &x, const SampleSet &y, const KernelSpec &spec,
                     EstimatorPath path = EstimatorPath::Auto);

/// K sqrt(8 ln(1/alpha) / (m + l)). Accept p = q iff the estimate is <= this.
double mmd_test_threshold(std::size_t m, std::size_t l, double alpha, double kernel_max = 1.0);

/// McDiarmid bound on Prob(|estimate - MMD^2| > t): exp(-2 t^2 (m + l) / (8 K^2)).
double mmd_deviation_bound(double t, std::size_t m, std::size_t l, double kernel_max = 1.0);

/// Sum_x |p(x) - q(x)|, in [0, 2].
double l1_distance(const ProbVector &p, const ProbVector &q);
/// Half the 1-norm, in [0, 1].
double total_variation(const ProbVector &p, const ProbVector &q);

/// Sandwich for the squared distance between p and q given their squared
/// distances to a common reference: ((sqrt a - sqrt b)^2, (sqrt a + sqrt b)^2).
std::pair<double, double> triangle_bounds(double dpu, double dqu);

/// Evaluates one metric on a pair. MMD2Estimate is rejected (needs samples).
LossValue evaluate_loss(Metric metric, const ProbVector &p, const ProbVector &q,
                        std::optional<KernelSpec> kernel = std::nullopt);

}  // namespace bornstat
