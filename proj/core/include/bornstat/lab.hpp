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

// Monte Carlo statistics over random distribution families: tail curves of
// a reference marginal, pairwise loss moments, anticoncentration and
// diagonal-observable variance, all reduced deterministically across threads.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "bornstat/bitmath.hpp"
#include "bornstat/families.hpp"
#include "bornstat/metrics.hpp"
#include "bornstat/random.hpp"

namespace bornstat {

/// A random distribution family. Textual form is `name` or `name:key=value,...`:
///   product | iqp_product | dirichlet | gamma:k=K | pareto:alpha=A | constant
///   peaked[:K=16,law=gamma1] | peaked_iqp | iqp[:singletons=0] | mps[:chi=3]
///   uniform | point_mass
/// Laws inside `peaked` are written gamma<k>, pareto<alpha> or constant.
struct FamilySpec {
    enum class Kind { Product, IqpProduct, PseudoIndep, Peaked, PeakedIqp, Iqp, Mps, Uniform, PointMass };

    Kind kind = Kind::Product;
    Underlying law = Underlying::gamma(1.0);
    std::uint64_t support = 0;  // peaked K; 0 selects default_peaked_support(n)
    int chi = 0;                // MPS bond dimension; 0 selects chi = n
    bool singletons = true;     // IQP single-qubit gates

    static FamilySpec parse(const std::string &text);
    std::string name() const;

    /// Largest n this family can be instantiated at.
    int max_qubits() const;
    /// Throws DomainError / ResourceError when n is outside [min, max_qubits()].
    void check_qubits(int n) const;
};

/// One random instance of the family on n qubits.
ProbVector draw_instance(const FamilySpec &family, int n, RandomStream &stream);

/// Unbiased sample variance and standard errors of a stream of values,
/// with order-stable pairwise merging.
class Moments {
 public:
    void add(double x);
    void merge(const Moments &other);

    std::uint64_t count() const { return n_; }
    double mean() const { return mean_; }
    /// Unbiased sample variance; 0 with fewer than two values.
    double variance() const;
    /// sqrt(variance / count).
    double mean_stderr() const;
    /// Large-sample standard error of the sample variance from the fourth central moment.
    double variance_stderr() const;

 private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    double m3_ = 0.0;
    double m4_ = 0.0;
};

struct RunOptions {
    unsigned workers = 0;  // 0 selects std::thread::hardware_concurrency()
};

/// Trials per work unit. Fixed so the reduction tree does not depend on the worker count.
inline constexpr std::size_t kTrialChunk = 64;

unsigned resolve_workers(unsigned requested);

/// Runs fn(begin, end) -> Acc over fixed chunks of [0, trials) on a thread
/// pool and returns the per-chunk results in chunk order. Exceptions thrown
/// by fn are rethrown on the calling thread.
template <typename Acc, typename Fn>
std::vector<Acc> run_chunked(std::size_t trials, const RunOptions &options, Fn fn) {
    const std::size_t chunks = (trials + kTrialChunk - 1) / kTrialChunk;
    std::vector<std::optional<Acc>> results(chunks);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto work = [&]() {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= chunks || failed.load()) {
                return;
            }
            try {
                results[c].emplace(fn(c * kTrialChunk, std::min(trials, (c + 1) * kTrialChunk)));
            } catch (...) {
                if (!failed.exchange(true)) {
                    failure = std::current_exception();
                }
                return;
            }
        }
    };
    const unsigned workers = std::min<std::size_t>(resolve_workers(options.workers), std::max<std::size_t>(chunks, 1));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    std::vector<Acc> out;
    out.reserve(chunks);
    for (auto &r : results) {
        out.push_back(std::move(*r));
    }
    return out;
}

/// Two-sided Wilson score interval for a binomial proportion.
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

struct TailCurve {
    std::string family;
    int n = 0;
    std::vector<double> y;         // thresholds in units of 1/N
    std::vector<double> survival;  // Prob(N p(x) >= y)
    std::vector<double> ci_low;
    std::vector<double> ci_high;
    std::uint64_t trials = 0;

    double half_width(std::size_t i) const { return 0.5 * (ci_high[i] - ci_low[i]); }
};

struct TailOptions {
    /// Score a uniformly random outcome per trial instead of x = 0...0.
    bool random_outcome = false;
    RunOptions run;
};

/// Per trial draws one instance and scores N p(x*) against every y.
/// Requires trials >= 100.
TailCurve estimate_tail_curve(const FamilySpec &family, int n, std::vector<double> y_grid, std::uint64_t trials,
                              const RandomStream &stream, const TailOptions &options = {});

/// Log-spaced grid 2^lo, 2^(lo+1), ..., 2^hi.
std::vector<double> dyadic_grid(int lo, int hi);

struct LossSpec {
    Metric metric = Metric::SD;
    std::optional<double> sigma;  // MMD2 bandwidth
};

struct MomentReport {
    std::string family;
    int n = 0;
    std::string metric;
    std::optional<double> sigma;
    double mean = 0.0;
    double variance = 0.0;
    double mean_stderr = 0.0;
    double variance_stderr = 0.0;
    std::uint64_t trials = 0;
};

MomentReport make_report(const std::string &family, int n, const std::string &metric, std::optional<double> sigma,
                         const Moments &m);

/// Independent instance pairs (p, q), each scored under every loss. MMD2
/// shares one transform of p - q across bandwidths. Requires pairs >= 100.
std::vector<MomentReport> pairwise_loss_moments(const FamilySpec &family, int n, const std::vector<LossSpec> &losses,
                                                std::uint64_t pairs, const RandomStream &stream,
                                                const RunOptions &options = {});
MomentReport pairwise_loss_moments(const FamilySpec &family, int n, const LossSpec &loss, std::uint64_t pairs,
                                   const RandomStream &stream, const RunOptions &options = {});

/// Raw values of one loss over `pairs` instance pairs, in trial order.
std::vector<double> pairwise_loss_samples(const FamilySpec &family, int n, const LossSpec &loss, std::uint64_t pairs,
                                          const RandomStream &stream, const RunOptions &options = {});

struct AnticoncentrationReport {
    std::string family;
    int n = 0;
    /// 2^(2n) E[p(x)^2], estimated per instance as N sum_x p(x)^2.
    double statistic = 0.0;
    double statistic_stderr = 0.0;
    /// Prob(p(x*) >= 1 / (2N)) with its Wilson interval.
    double tail_half = 0.0;
    double tail_low = 0.0;
    double tail_high = 0.0;
    std::uint64_t trials = 0;
};

AnticoncentrationReport anticoncentration_statistic(const FamilySpec &family, int n, std::uint64_t trials,
                                                    const RandomStream &stream, const RunOptions &options = {});

/// Moments of <Z_S> across instances. Empty S throws DomainError.
MomentReport diagonal_observable_variance(const FamilySpec &family, int n, const SubsetMask &s, std::uint64_t trials,
                                          const RandomStream &stream, const RunOptions &options = {});

/// Moments of the squared distance to the uniform distribution across instances.
MomentReport distance_to_uniform_moments(const FamilySpec &family, int n, std::uint64_t trials,
                                         const RandomStream &stream, const RunOptions &options = {});

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Least squares of ln(y) against x. Non-positive y throws DomainError.
LinearFit fit_log_linear(const std::vector<double> &x, const std::vector<double> &y);

}  // namespace bornstat
