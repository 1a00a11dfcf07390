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

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>

namespace bornstat {
namespace {

void check_same(const ProbVector &p, const ProbVector &q, const char *op) {
    if (p.n() != q.n()) {
        throw DimensionError(std::string(op) + ": distributions have different qubit counts");
    }
}

std::vector<double> difference(const ProbVector &p, const ProbVector &q) {
    std::vector<double> d(p.size());
    for (std::size_t x = 0; x < p.size(); ++x) {
        d[x] = p[x] - q[x];
    }
    return d;
}

double weighted_spectrum_sum(std::span<const double> a, std::span<const double> b, int n, double rho) {
    const auto weights = mmd_fourier_weights(n, rho);
    double sum = 0.0;
    for (std::size_t s = 0; s < a.size(); ++s) {
        sum += weights[static_cast<std::size_t>(std::popcount(s))] * a[s] * b[s];
    }
    return sum;
}

double pairwise_mean(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                     const std::vector<double> &table, bool distinct) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            row += table[static_cast<std::size_t>(std::popcount(a[i] ^ b[j]))];
        }
        sum += row;
    }
    const double pairs = distinct ? static_cast<double>(a.size()) * static_cast<double>(a.size() - 1)
                                  : static_cast<double>(a.size()) * static_cast<double>(b.size());
    // Diagonal terms i == j each contribute k(x, x) = 1.
    if (distinct) {
        sum -= static_cast<double>(a.size());
    }
    return sum / pairs;
}

std::vector<double> histogram_spectrum(const SampleSet &s) {
    std::vector<double> counts(outcome_count(s.n), 0.0);
    for (auto x : s.outcomes) {
        counts[x] += 1.0;
    }
    fwht_inplace(std::span<double>(counts));
    return counts;
}

}  // namespace

KernelSpec::KernelSpec(double sigma) : sigma_(sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw DomainError("kernel bandwidth must be positive and finite");
    }
    rho_ = std::exp(-1.0 / (2.0 * sigma * sigma));
}

std::vector<double> KernelSpec::distance_table(int n) const {
    std::vector<double> table(static_cast<std::size_t>(n) + 1);
    for (int d = 0; d <= n; ++d) {
        table[static_cast<std::size_t>(d)] = std::exp(-d / (2.0 * sigma_ * sigma_));
    }
    return table;
}

std::string metric_name(Metric m) {
    switch (m) {
        case Metric::SD:
            return "sd";
        case Metric::MMD2:
            return "mmd2";
        case Metric::MMD2Estimate:
            return "mmd2_estimate";
        case Metric::L1:
            return "l1";
        case Metric::TVD:
            return "tvd";
    }
    return "unknown";
}

Metric parse_metric(const std::string &name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    for (Metric m : {Metric::SD, Metric::MMD2, Metric::MMD2Estimate, Metric::L1, Metric::TVD}) {
        if (metric_name(m) == lower) {
            return m;
        }
    }
    throw DomainError("unknown metric '" + name + "'");
}

double squared_distance(const ProbVector &p, const ProbVector &q) {
    check_same(p, q, "squared_distance");
    double sum = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) {
        const double d = p[x] - q[x];
        sum += d * d;
    }
    return sum;
}

double gaussian_hamming_kernel(const BitString &x, const BitString &y, const KernelSpec &spec) {
    return std::exp(-hamming_distance(x, y) / (2.0 * spec.sigma() * spec.sigma()));
}

double mmd2_population(const ProbVector &p, const ProbVector &q, const KernelSpec &spec) {
    check_same(p, q, "mmd2_population");
    if (p.n() > kMaxQuadraticQubits) {
        throw ResourceError("mmd2_population double sum capped at n = " + std::to_string(kMaxQuadraticQubits) +
                            "; use mmd2_fourier");
    }
    const auto d = difference(p, q);
    const auto table = spec.distance_table(p.n());
    double sum = 0.0;
    for (std::size_t x = 0; x < d.size(); ++x) {
        if (d[x] == 0.0) continue;
        double row = 0.0;
        for (std::size_t y = 0; y < d.size(); ++y) {
            row += table[static_cast<std::size_t>(std::popcount(x ^ y))] * d[y];
        }
        sum += d[x] * row;
    }
    return sum;
}

std::vector<double> mmd_fourier_weights(int n, double rho) {
    if (!(rho >= 0.0 && rho < 1.0)) {
        throw DomainError("rho must lie in [0, 1)");
    }
    std::vector<double> w(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        w[static_cast<std::size_t>(k)] = std::exp(k * std::log1p(-rho) + (n - k) * std::log1p(rho) - n * std::log(2.0));
    }
    return w;
}

double mmd2_fourier_rho(const ProbVector &p, const ProbVector &q, double rho) {
    check_same(p, q, "mmd2_fourier");
    auto d = difference(p, q);
    fwht_inplace(std::span<double>(d));
    return weighted_spectrum_sum(d, d, p.n(), rho);
}

double mmd2_fourier(const ProbVector &p, const ProbVector &q, const KernelSpec &spec) {
    return mmd2_fourier_rho(p, q, spec.rho());
}

double mmd2_unbiased(const SampleSet &x, const SampleSet &y, const KernelSpec &spec, EstimatorPath path) {
    if (x.size() < 2 || y.size() < 2) {
        throw DomainError("mmd2_unbiased needs at least two samples per side");
    }
    if (x.n != y.n) {
        throw DimensionError("mmd2_unbiased: sample sets have different qubit counts");
    }
    const int n = x.n;
    const double m = static_cast<double>(x.size());
    const double l = static_cast<double>(y.size());
    if (path == EstimatorPath::Auto) {
        const double spectral_cost = static_cast<double>(outcome_count(std::min(n, 40))) * (n + 2);
        path = (n <= 20 && spectral_cost < (m + l) * (m + l)) ? EstimatorPath::Spectral : EstimatorPath::Pairwise;
    }
    if (path == EstimatorPath::Spectral) {
        if (n > kMaxQubits) {
            throw ResourceError("spectral MMD estimator needs a dense histogram");
        }
        const auto cx = histogram_spectrum(x);
        const auto cy = histogram_spectrum(y);
        // Sum over all ordered pairs of k(a, b) c_a c_b, then drop the diagonal.
        const double xx = (weighted_spectrum_sum(cx, cx, n, spec.rho()) - m) / (m * (m - 1.0));
        const double yy = (weighted_spectrum_sum(cy, cy, n, spec.rho()) - l) / (l * (l - 1.0));
        const double xy = weighted_spectrum_sum(cx, cy, n, spec.rho()) / (m * l);
        return xx + yy - 2.0 * xy;
    }
    const auto table = spec.distance_table(n);
    return pairwise_mean(x.outcomes, x.outcomes, table, true) + pairwise_mean(y.outcomes, y.outcomes, table, true) -
           2.0 * pairwise_mean(x.outcomes, y.outcomes, table, false);
}

double mmd_test_threshold(std::size_t m, std::size_t l, double alpha, double kernel_max) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("test level alpha must lie in (0, 1]");
    }
    if (m + l < 1) {
        throw DomainError("test threshold needs at least one sample");
    }
    return kernel_max * std::sqrt(8.0 * std::log(1.0 / alpha) / static_cast<double>(m + l));
}

double mmd_deviation_bound(double t, std::size_t m, std::size_t l, double kernel_max) {
    return std::exp(-2.0 * t * t * static_cast<double>(m + l) / (8.0 * kernel_max * kernel_max));
}

double l1_distance(const ProbVector &p, const ProbVector &q) {
    check_same(p, q, "l1_distance");
    double sum = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) {
        sum += std::abs(p[x] - q[x]);
    }
    return sum;
}

double total_variation(const ProbVector &p, const ProbVector &q) {
    return 0.5 * l1_distance(p, q);
}

std::pair<double, double> triangle_bounds(double dpu, double dqu) {
    if (!(dpu >= 0.0) || !(dqu >= 0.0)) {
        throw DomainError("triangle_bounds requires non-negative distances");
    }
    const double a = std::sqrt(dpu);
    const double b = std::sqrt(dqu);
    return {(a - b) * (a - b), (a + b) * (a + b)};
}

LossValue evaluate_loss(Metric metric, const ProbVector &p, const ProbVector &q, std::optional<KernelSpec> kernel) {
    switch (metric) {
        case Metric::SD:
            return {metric, squared_distance(p, q), std::nullopt, std::nullopt, std::nullopt};
        case Metric::MMD2:
            if (!kernel) {
                throw DomainError("MMD2 needs a kernel bandwidth");
            }
            return {metric, mmd2_fourier(p, q, *kernel), kernel->sigma(), std::nullopt, std::nullopt};
        case Metric::L1:
            return {metric, l1_distance(p, q), std::nullopt, std::nullopt, std::nullopt};
        case Metric::TVD:
            return {metric, total_variation(p, q), std::nullopt, std::nullopt, std::nullopt};
        case Metric::MMD2Estimate:
            break;
    }
    throw DomainError("metric " + metric_name(metric) + " cannot be evaluated on exact distributions");
}

}  // namespace bornstat
