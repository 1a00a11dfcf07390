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

// Analytical distribution families (product, pseudo-independent, peaked) and
// their closed-form tail and moment formulas.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bornstat/bitmath.hpp"
#include "bornstat/random.hpp"

namespace bornstat {

/// A Monte Carlo estimate with its standard error.
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Law of the i.i.d. weights Y_x that are normalized into a pseudo-independent vector.
class Underlying {
 public:
    enum class Kind { Gamma, Pareto, Constant };

    /// Gamma(shape, rate 1). shape = 1 gives Dirichlet(1), i.e. Porter-Thomas marginals.
    static Underlying gamma(double shape = 1.0);
    /// Density alpha / (1 + y)^(alpha + 1) on y >= 0, alpha > 1.
    static Underlying pareto(double alpha);
    /// Degenerate law at `value` > 0.
    static Underlying constant(double value = 1.0);

    Kind kind() const { return kind_; }
    double parameter() const { return param_; }

    double draw(RandomStream &stream) const;

    double mean() const;
    /// +infinity when the second moment diverges (Pareto with alpha <= 2).
    double variance() const;
    double second_moment() const { return variance() + mean() * mean(); }

    std::string name() const;

 private:
    Underlying(Kind kind, double param) : kind_(kind), param_(param) {}

    Kind kind_;
    double param_;
};

struct ProductParams {
    /// a_i = Prob(x_i = 0), each in [0, 1]. Throws DomainError otherwise.
    explicit ProductParams(std::vector<double> a);

    int n() const { return static_cast<int>(a.size()); }

    std::vector<double> a;
};

struct PseudoIndepParams {
    int n;
    Underlying underlying;
};

struct PeakedParams {
    int n;
    std::uint64_t support;  // K
    Underlying underlying;
};

/// p(x) = prod_i (a_i if x_i = 0 else 1 - a_i).
ProbVector product_prob_vector(const ProductParams &params);

/// Bit-by-bit Bernoulli sampling.
SampleSet sample_product(const ProductParams &params, RandomStream &stream, std::size_t count);

/// a_i i.i.d. uniform on [0, 1].
ProductParams random_product_instance(int n, RandomStream &stream);

/// N i.i.d. draws normalized by their sum. A zero-sum draw is redrawn.
ProbVector pseudo_indep_prob_vector(const PseudoIndepParams &params, RandomStream &stream);

/// Pseudo-independent masses on a uniformly random K-subset, zero elsewhere.
/// K = N consumes the stream exactly like pseudo_indep_prob_vector.
ProbVector peaked_prob_vector(const PeakedParams &params, RandomStream &stream);

/// Uniform random K-subset of [0, N) via partial Fisher-Yates, in draw order.
std::vector<std::uint64_t> random_subset(std::uint64_t population, std::uint64_t k, RandomStream &stream);

/// 2^ceil(log2 n): the default support size for peaked experiments.
std::uint64_t default_peaked_support(int n);

/// Density of p(x) under uniform a: ln(1/y)^(n-1) / (n-1)!, for 0 < y <= 1.
double product_marginal_density(int n, double y);

/// Prob(p(x) >= y / 2^n) = P(n, n ln 2 - ln y), for 0 < y <= 2^n.
double product_tail_exact(int n, double y);

/// Chernoff bound (lambda/n)^n exp(n - lambda), lambda = n ln 2 - ln y.
/// Returns 1 when lambda >= n, where the optimized Chernoff exponent is trivial.
double product_tail_chernoff_bound(int n, double y);

/// Large-n simplification exp(-n/20) / sqrt(y). An approximation, not a bound.
double product_tail_chernoff_approx(int n, double y);

/// Lower bound on Prob(X_i >= alpha/N):
/// (1 - alpha(1 + 1/k))^2 (1 - sigma^2 k^2 / (N mu^2)) mu^2 / sigma^2.
/// Returned as computed; a negative value is a trivially valid bound.
double pseudo_indep_anticoncentration_bound(double alpha, double k, double mu, double sigma, double outcomes);

/// Exact Beta(1, N-1) survival (1 - y)^(N-1), for 0 <= y <= 1.
double porter_thomas_survival(double outcomes, double y);
/// The exponential approximation exp(-N y).
double porter_thomas_exponential(double outcomes, double y);
/// Variant with exponent N, i.e. (1 - y)^N. Kept as a labeled approximation.
double porter_thomas_survival_exponent_n(double outcomes, double y);
/// Exact Beta(1, N-1) density (N-1)(1-y)^(N-2).
double dirichlet_marginal_density(double outcomes, double y);

/// K / 2^n; requires K <= 2^n.
double peaked_tail_bound(int n, std::uint64_t support);

/// Monte Carlo Gini coefficient E|Y - Y'| / (2 E[Y]) from `trials` draws.
Estimate gini_coefficient(const Underlying &law, RandomStream &stream, std::size_t trials);
/// Gini coefficient of an empirical sample (pairwise mean absolute difference over 2 * mean).
double gini_from_samples(std::vector<double> samples);
/// Closed form for the supported laws: Gamma(k) -> Gamma(k+1/2)/(sqrt(pi) Gamma(k+1)),
/// Pareto(alpha) with support [0, inf) -> alpha/(2 alpha - 1), constant -> 0.
double gini_closed_form(const Underlying &law);

struct OverlapMoments {
    double mean;
    double variance;
};

/// Moments of the overlap of two uniformly random K-subsets of an N-set.
OverlapMoments hypergeometric_overlap_moments(std::uint64_t outcomes, std::uint64_t support);

}  // namespace bornstat
