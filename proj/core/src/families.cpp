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

#include "bornstat/families.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>
#include <unordered_map>

#include "bornstat/specfun.hpp"

namespace bornstat {
namespace {

constexpr double kLn2 = std::numbers::ln2;

void check_dense(int n) {
    if (n < 0 || n > kMaxQubits) {
        throw ResourceError("n = " + std::to_string(n) + " exceeds the dense cap of " + std::to_string(kMaxQubits));
    }
}

// N draws from `law` scaled to sum to one; zero-sum draws are redrawn.
std::vector<double> normalized_draws(std::size_t count, const Underlying &law, RandomStream &stream) {
    std::vector<double> v(count);
    for (;;) {
        double sum = 0.0;
        for (double &y : v) {
            y = law.draw(stream);
            sum += y;
        }
        if (sum > 0.0 && std::isfinite(sum)) {
            const double inv = 1.0 / sum;
            for (double &y : v) {
                y *= inv;
            }
            return v;
        }
        std::cerr << "bornstat: warning: degenerate " << law.name() << " draw (sum " << sum << "), resampling\n";
    }
}

void check_tail_y(int n, double y) {
    if (n < 1) {
        throw DomainError("product tail requires n >= 1");
    }
    if (!(y > 0.0) || y > std::ldexp(1.0, n)) {
        throw DomainError("product tail requires 0 < y <= 2^n");
    }
}

double tail_lambda(int n, double y) {
    return std::max(0.0, n * kLn2 - std::log(y));
}

}  // namespace

Underlying Underlying::gamma(double shape) {
    if (!(shape > 0.0) || !std::isfinite(shape)) {
        throw DomainError("Gamma shape must be positive");
    }
    return Underlying(Kind::Gamma, shape);
}

Underlying Underlying::pareto(double alpha) {
    if (!(alpha > 1.0) || !std::isfinite(alpha)) {
        throw DomainError("Pareto alpha must exceed 1");
    }
    return Underlying(Kind::Pareto, alpha);
}

Underlying Underlying::constant(double value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw DomainError("constant law must be positive");
    }
    return Underlying(Kind::Constant, value);
}

double Underlying::draw(RandomStream &stream) const {
    switch (kind_) {
        case Kind::Gamma:
            if (param_ == 1.0) {
                return -std::log(stream.uniform_pos());
            }
            return std::gamma_distribution<double>(param_, 1.0)(stream);
        case Kind::Pareto:
            // Inverse CDF of F(y) = 1 - (1 + y)^-alpha.
            return std::pow(stream.uniform_pos(), -1.0 / param_) - 1.0;
        case Kind::Constant:
            return param_;
    }
    return 0.0;
}

double Underlying::mean() const {
    switch (kind_) {
        case Kind::Gamma:
            return param_;
        case Kind::Pareto:
            return 1.0 / (param_ - 1.0);
        case Kind::Constant:
            return param_;
    }
    return 0.0;
}

double Underlying::variance() const {
    switch (kind_) {
        case Kind::Gamma:
            return param_;
        case Kind::Pareto:
            if (param_ <= 2.0) {
                return std::numeric_limits<double>::infinity();
            }
            return param_ / ((param_ - 1.0) * (param_ - 1.0) * (param_ - 2.0));
        case Kind::Constant:
            return 0.0;
    }
    return 0.0;
}

std::string Underlying::name() const {
    char buf[64];
    switch (kind_) {
        case Kind::Gamma:
            std::snprintf(buf, sizeof buf, "gamma(%g)", param_);
            break;
        case Kind::Pareto:
            std::snprintf(buf, sizeof buf, "pareto(%g)", param_);
            break;
        case Kind::Constant:
            std::snprintf(buf, sizeof buf, "constant(%g)", param_);
            break;
    }
    return buf;
}

ProductParams::ProductParams(std::vector<double> weights) : a(std::move(weights)) {
    check_dense(static_cast<int>(a.size()));
    for (double ai : a) {
        if (!(ai >= 0.0 && ai <= 1.0)) {
            throw DomainError("product weights must lie in [0, 1]");
        }
    }
}

ProbVector product_prob_vector(const ProductParams &params) {
    std::vector<double> p(outcome_count(params.n()));
    p[0] = 1.0;
    std::size_t filled = 1;
    for (double ai : params.a) {
        // Qubit i occupies bit i-1: the upper half of the new block has x_i = 1.
        for (std::size_t x = 0; x < filled; ++x) {
            p[x + filled] = p[x] * (1.0 - ai);
            p[x] *= ai;
        }
        filled *= 2;
    }
    return validate_prob_vector(std::move(p), params.n());
}

SampleSet sample_product(const ProductParams &params, RandomStream &stream, std::size_t count) {
    SampleSet out;
    out.n = params.n();
    out.family = "product";
    out.seed = stream.master_seed();
    out.outcomes.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        std::uint64_t x = 0;
        for (int i = 0; i < params.n(); ++i) {
            if (stream.uniform() >= params.a[static_cast<std::size_t>(i)]) {
                x |= std::uint64_t{1} << i;
            }
        }
        out.outcomes.push_back(x);
    }
    return out;
}

ProductParams random_product_instance(int n, RandomStream &stream) {
    check_dense(n);
    std::vector<double> a(static_cast<std::size_t>(n));
    for (double &ai : a) {
        ai = stream.uniform();
    }
    return ProductParams(std::move(a));
}

ProbVector pseudo_indep_prob_vector(const PseudoIndepParams &params, RandomStream &stream) {
    check_dense(params.n);
    return validate_prob_vector(normalized_draws(outcome_count(params.n), params.underlying, stream), params.n);
}

std::vector<std::uint64_t> random_subset(std::uint64_t population, std::uint64_t k, RandomStream &stream) {
    if (k > population) {
        throw DomainError("subset size exceeds population");
    }
    // Sparse partial Fisher-Yates: only displaced slots are stored.
    std::unordered_map<std::uint64_t, std::uint64_t> displaced;
    displaced.reserve(static_cast<std::size_t>(2 * k));
    auto slot = [&](std::uint64_t i) {
        auto it = displaced.find(i);
        return it == displaced.end() ? i : it->second;
    };
    std::vector<std::uint64_t> out;
    out.reserve(static_cast<std::size_t>(k));
    for (std::uint64_t i = 0; i < k; ++i) {
        const std::uint64_t j = i + stream.below(population - i);
        const std::uint64_t vi = slot(i);
        const std::uint64_t vj = slot(j);
        displaced[j] = vi;
        out.push_back(vj);
    }
    return out;
}

ProbVector peaked_prob_vector(const PeakedParams &params, RandomStream &stream) {
    check_dense(params.n);
    const std::uint64_t outcomes = outcome_count(params.n);
    if (params.support < 1 || params.support > outcomes) {
        throw DomainError("peaked support K must satisfy 1 <= K <= 2^n");
    }
    if (params.support == outcomes) {
        return pseudo_indep_prob_vector({params.n, params.underlying}, stream);
    }
    const auto support = random_subset(outcomes, params.support, stream);
    const auto masses = normalized_draws(static_cast<std::size_t>(params.support), params.underlying, stream);
    std::vector<double> p(outcomes, 0.0);
    for (std::size_t j = 0; j < support.size(); ++j) {
        p[support[j]] = masses[j];
    }
    return validate_prob_vector(std::move(p), params.n);
}

std::uint64_t default_peaked_support(int n) {
    if (n < 1) {
        throw DomainError("default_peaked_support requires n >= 1");
    }
    return std::bit_ceil(static_cast<std::uint64_t>(n));
}

double product_marginal_density(int n, double y) {
    if (n < 1) {
        throw DomainError("product_marginal_density requires n >= 1");
    }
    if (!(y > 0.0) || y > 1.0) {
        throw DomainError("product_marginal_density requires 0 < y <= 1");
    }
    if (n == 1) {
        return 1.0;
    }
    const double log_inv = -std::log(y);
    if (log_inv == 0.0) {
        return 0.0;
    }
    return std::exp((n - 1) * std::log(log_inv) - std::lgamma(static_cast<double>(n)));
}

double product_tail_exact(int n, double y) {
    check_tail_y(n, y);
    return regularized_gamma_p(static_cast<double>(n), tail_lambda(n, y));
}

double product_tail_chernoff_bound(int n, double y) {
    check_tail_y(n, y);
    const double lambda = tail_lambda(n, y);
    if (lambda == 0.0) {
        return 0.0;
    }
    if (lambda >= n) {
        return 1.0;
    }
    return std::exp(n * std::log(lambda / n) + n - lambda);
}

double product_tail_chernoff_approx(int n, double y) {
    check_tail_y(n, y);
    return std::exp(-n / 20.0) / std::sqrt(y);
}

double pseudo_indep_anticoncentration_bound(double alpha, double k, double mu, double sigma, double outcomes) {
    if (!(sigma > 0.0)) {
        throw DomainError("anticoncentration bound requires sigma > 0");
    }
    if (k == 0.0 || !(outcomes > 0.0)) {
        throw DomainError("anticoncentration bound requires k != 0 and N > 0");
    }
    const double lead = 1.0 - alpha * (1.0 + 1.0 / k);
    const double ratio = mu * mu / (sigma * sigma);
    return lead * lead * (1.0 - k * k / (outcomes * ratio)) * ratio;
}

namespace {
void check_unit_y(double outcomes, double y) {
    if (!(outcomes >= 1.0)) {
        throw DomainError("outcome count must be at least 1");
    }
    if (!(y >= 0.0 && y <= 1.0)) {
        throw DomainError("probability threshold y must lie in [0, 1]");
    }
}

// (1 - y)^e through log1p, which keeps relative accuracy when N is large and y ~ 1/N.
double pow_one_minus(double y, double e) {
    if (e == 0.0) return 1.0;
    if (y == 1.0) return 0.0;
    return std::exp(e * std::log1p(-y));
}
}  // namespace

double porter_thomas_survival(double outcomes, double y) {
    check_unit_y(outcomes, y);
    return pow_one_minus(y, outcomes - 1.0);
}

double porter_thomas_exponential(double outcomes, double y) {
    check_unit_y(outcomes, y);
    return std::exp(-outcomes * y);
}

double porter_thomas_survival_exponent_n(double outcomes, double y) {
    check_unit_y(outcomes, y);
    return pow_one_minus(y, outcomes);
}

double dirichlet_marginal_density(double outcomes, double y) {
    check_unit_y(outcomes, y);
    return (outcomes - 1.0) * pow_one_minus(y, outcomes - 2.0);
}

double peaked_tail_bound(int n, std::uint64_t support) {
    check_dense(n);
    if (support > outcome_count(n)) {
        throw DomainError("peaked support K exceeds 2^n");
    }
    return static_cast<double>(support) / static_cast<double>(outcome_count(n));
}

double gini_from_samples(std::vector<double> samples) {
    const std::size_t m = samples.size();
    if (m < 2) {
        throw DomainError("Gini estimate needs at least two samples");
    }
    std::sort(samples.begin(), samples.end());
    double weighted = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        weighted += (2.0 * static_cast<double>(i + 1) - static_cast<double>(m) - 1.0) * samples[i];
        total += samples[i];
    }
    if (!(total > 0.0)) {
        throw DomainError("Gini coefficient needs a positive mean");
    }
    const double mean_abs_diff = 2.0 * weighted / (static_cast<double>(m) * static_cast<double>(m - 1));
    return mean_abs_diff / (2.0 * total / static_cast<double>(m));
}

Estimate gini_coefficient(const Underlying &law, RandomStream &stream, std::size_t trials) {
    constexpr std::size_t kBatches = 20;
    if (trials < 2 * kBatches) {
        throw DomainError("gini_coefficient needs at least 40 trials");
    }
    std::vector<double> all(trials);
    for (double &y : all) {
        y = law.draw(stream);
    }
    // Batch means give the standard error without resampling.
    const std::size_t per = trials / kBatches;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t b = 0; b < kBatches; ++b) {
        auto first = all.begin() + static_cast<std::ptrdiff_t>(b * per);
        const double g = gini_from_samples(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(per)));
        sum += g;
        sum_sq += g * g;
    }
    const double mean_b = sum / kBatches;
    const double var_b = std::max(0.0, (sum_sq - kBatches * mean_b * mean_b) / (kBatches - 1));
    return {gini_from_samples(std::move(all)), std::sqrt(var_b / kBatches)};
}

double gini_closed_form(const Underlying &law) {
    switch (law.kind()) {
        case Underlying::Kind::Gamma: {
            const double k = law.parameter();
            return std::exp(std::lgamma(k + 0.5) - std::lgamma(k + 1.0)) / std::sqrt(std::numbers::pi);
        }
        case Underlying::Kind::Pareto: {
            const double alpha = law.parameter();
            return alpha / (2.0 * alpha - 1.0);
        }
        case Underlying::Kind::Constant:
            return 0.0;
    }
    return 0.0;
}

OverlapMoments hypergeometric_overlap_moments(std::uint64_t outcomes, std::uint64_t support) {
    if (outcomes < 1 || support > outcomes) {
        throw DomainError("overlap moments require 1 <= N and K <= N");
    }
    const double n = static_cast<double>(outcomes);
    const double k = static_cast<double>(support);
    const double mean = k * k / n;
    if (outcomes == 1) {
        return {mean, 0.0};
    }
    return {mean, mean * ((n - k) / n) * ((n - k) / (n - 1.0))};
}

}  // namespace bornstat
