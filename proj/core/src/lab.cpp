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

#include "bornstat/lab.hpp"

#include <bit>
#include <random>

#include "bornstat/circuits.hpp"

namespace bornstat {
namespace {

void require_trials(std::uint64_t trials, const char *op) {
    if (trials < 100) {
        throw DomainError(std::string(op) + " needs at least 100 trials");
    }
}

// N p(x*) for x* = 0...0 without building the full vector, for families
// where the marginal has a cheap exact sampler.
std::optional<double> reference_marginal(const FamilySpec &family, int n, RandomStream &stream) {
    using Kind = FamilySpec::Kind;
    switch (family.kind) {
        case Kind::Product:
        case Kind::IqpProduct: {
            // cos^2(theta/2) is uniform for the product IQP angles, so both reduce to prod 2 a_i.
            double v = 1.0;
            for (int i = 0; i < n; ++i) {
                v *= 2.0 * stream.uniform();
            }
            return v;
        }
        case Kind::PseudoIndep:
            if (family.law.kind() == Underlying::Kind::Gamma) {
                const double y0 = family.law.draw(stream);
                std::gamma_distribution<double> rest(family.law.parameter() * static_cast<double>(outcome_count(n) - 1));
                const double r = rest(stream);
                return static_cast<double>(outcome_count(n)) * y0 / (y0 + r);
            }
            if (family.law.kind() == Underlying::Kind::Constant) {
                return 1.0;
            }
            return std::nullopt;
        case Kind::Uniform:
            return 1.0;
        default:
            return std::nullopt;
    }
}

struct TailAcc {
    std::vector<std::uint64_t> hits;
};

struct PairScorer {
    PairScorer(int n, const std::vector<LossSpec> &losses) : losses(losses) {
        for (const auto &loss : losses) {
            if (loss.metric == Metric::MMD2) {
                if (!loss.sigma) {
                    throw DomainError("MMD2 needs a kernel bandwidth");
                }
                weights.push_back(mmd_fourier_weights(n, KernelSpec(*loss.sigma).rho()));
            } else if (loss.metric == Metric::MMD2Estimate) {
                throw DomainError("mmd2_estimate needs sample sets, not exact distribution pairs");
            } else {
                weights.emplace_back();
            }
        }
    }

    void score(const ProbVector &p, const ProbVector &q, std::vector<double> &out) {
        const std::size_t size = p.size();
        bool transformed = false;
        diff.resize(size);
        out.assign(losses.size(), 0.0);
        for (std::size_t k = 0; k < losses.size(); ++k) {
            switch (losses[k].metric) {
                case Metric::SD:
                    out[k] = squared_distance(p, q);
                    break;
                case Metric::L1:
                    out[k] = l1_distance(p, q);
                    break;
                case Metric::TVD:
                    out[k] = total_variation(p, q);
                    break;
                case Metric::MMD2: {
                    if (!transformed) {
                        for (std::size_t x = 0; x < size; ++x) {
                            diff[x] = p[x] - q[x];
                        }
                        fwht_inplace(std::span<double>(diff));
                        transformed = true;
                    }
                    double sum = 0.0;
                    const auto &w = weights[k];
                    for (std::size_t s = 0; s < size; ++s) {
                        sum += w[static_cast<std::size_t>(std::popcount(s))] * diff[s] * diff[s];
                    }
                    out[k] = sum;
                    break;
                }
                case Metric::MMD2Estimate:
                    break;
            }
        }
    }

    const std::vector<LossSpec> &losses;
    std::vector<std::vector<double>> weights;
    std::vector<double> diff;
};

Moments merge_all(const std::vector<Moments> &parts) {
    Moments total;
    for (const auto &m : parts) {
        total.merge(m);
    }
    return total;
}

}  // namespace

void Moments::add(double x) {
    const double n1 = static_cast<double>(n_);
    ++n_;
    const double n = static_cast<double>(n_);
    const double delta = x - mean_;
    const double dn = delta / n;
    const double dn2 = dn * dn;
    const double term1 = delta * dn * n1;
    mean_ += dn;
    m4_ += term1 * dn2 * (n * n - 3.0 * n + 3.0) + 6.0 * dn2 * m2_ - 4.0 * dn * m3_;
    m3_ += term1 * dn * (n - 2.0) - 3.0 * dn * m2_;
    m2_ += term1;
}

void Moments::merge(const Moments &b) {
    if (b.n_ == 0) {
        return;
    }
    if (n_ == 0) {
        *this = b;
        return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(b.n_);
    const double n = na + nb;
    const double d = b.mean_ - mean_;
    const double d2 = d * d;
    const double m2 = m2_ + b.m2_ + d2 * na * nb / n;
    const double m3 = m3_ + b.m3_ + d2 * d * na * nb * (na - nb) / (n * n) + 3.0 * d * (na * b.m2_ - nb * m2_) / n;
    const double m4 = m4_ + b.m4_ + d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
                      6.0 * d2 * (na * na * b.m2_ + nb * nb * m2_) / (n * n) + 4.0 * d * (na * b.m3_ - nb * m3_) / n;
    mean_ += d * nb / n;
    m2_ = m2;
    m3_ = m3;
    m4_ = m4;
    n_ += b.n_;
}

double Moments::variance() const {
    return n_ < 2 ? 0.0 : std::max(0.0, m2_ / static_cast<double>(n_ - 1));
}

double Moments::mean_stderr() const {
    return n_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_));
}

double Moments::variance_stderr() const {
    if (n_ < 4) {
        return 0.0;
    }
    const double n = static_cast<double>(n_);
    const double s2 = variance();
    const double mu4 = m4_ / n;
    return std::sqrt(std::max(0.0, (mu4 - s2 * s2 * (n - 3.0) / (n - 1.0)) / n));
}

unsigned resolve_workers(unsigned requested) {
    if (requested > 0) {
        return requested;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0 || successes > trials) {
        throw DomainError("wilson_interval needs 0 <= successes <= trials, trials > 0");
    }
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    // The endpoints are exact at the boundary; the formula leaves rounding residue there.
    const double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
    const double hi = successes == trials ? 1.0 : std::min(1.0, center + half);
    return {lo, hi};
}

std::vector<double> dyadic_grid(int lo, int hi) {
    std::vector<double> grid;
    for (int e = lo; e <= hi; ++e) {
        grid.push_back(std::ldexp(1.0, e));
    }
    return grid;
}

TailCurve estimate_tail_curve(const FamilySpec &family, int n, std::vector<double> y_grid, std::uint64_t trials,
                              const RandomStream &stream, const TailOptions &options) {
    require_trials(trials, "estimate_tail_curve");
    family.check_qubits(n);
    std::sort(y_grid.begin(), y_grid.end());
    const double outcomes = static_cast<double>(outcome_count(n));
    auto parts = run_chunked<TailAcc>(trials, options.run, [&](std::size_t begin, std::size_t end) {
        TailAcc acc{std::vector<std::uint64_t>(y_grid.size(), 0)};
        for (std::size_t t = begin; t < end; ++t) {
            RandomStream s = stream.child(t);
            std::optional<double> value;
            if (!options.random_outcome) {
                value = reference_marginal(family, n, s);
            }
            if (!value) {
                const ProbVector p = draw_instance(family, n, s);
                const std::uint64_t x = options.random_outcome ? s.below(p.size()) : 0;
                value = outcomes * p[x];
            }
            for (std::size_t i = 0; i < y_grid.size(); ++i) {
                if (*value >= y_grid[i]) {
                    ++acc.hits[i];
                }
            }
        }
        return acc;
    });
    TailCurve curve;
    curve.family = family.name();
    curve.n = n;
    curve.y = y_grid;
    curve.trials = trials;
    std::vector<std::uint64_t> hits(y_grid.size(), 0);
    for (const auto &part : parts) {
        for (std::size_t i = 0; i < hits.size(); ++i) {
            hits[i] += part.hits[i];
        }
    }
    for (std::size_t i = 0; i < hits.size(); ++i) {
        curve.survival.push_back(static_cast<double>(hits[i]) / static_cast<double>(trials));
        const auto [lo, hi] = wilson_interval(hits[i], trials);
        curve.ci_low.push_back(lo);
        curve.ci_high.push_back(hi);
    }
    return curve;
}

MomentReport make_report(const std::string &family, int n, const std::string &metric, std::optional<double> sigma,
                         const Moments &m) {
    MomentReport r;
    r.family = family;
    r.n = n;
    r.metric = metric;
    r.sigma = sigma;
    r.mean = m.mean();
    r.variance = m.variance();
    r.mean_stderr = m.mean_stderr();
    r.variance_stderr = m.variance_stderr();
    r.trials = m.count();
    return r;
}

std::vector<MomentReport> pairwise_loss_moments(const FamilySpec &family, int n, const std::vector<LossSpec> &losses,
                                                std::uint64_t pairs, const RandomStream &stream,
                                                const RunOptions &options) {
    require_trials(pairs, "pairwise_loss_moments");
    family.check_qubits(n);
    PairScorer probe(n, losses);  // validates the loss list before any work starts
    auto parts = run_chunked<std::vector<Moments>>(pairs, options, [&](std::size_t begin, std::size_t end) {
        PairScorer scorer(n, losses);
        std::vector<Moments> acc(losses.size());
        std::vector<double> values;
        for (std::size_t t = begin; t < end; ++t) {
            RandomStream s = stream.child(t);
            const ProbVector p = draw_instance(family, n, s);
            const ProbVector q = draw_instance(family, n, s);
            scorer.score(p, q, values);
            for (std::size_t k = 0; k < values.size(); ++k) {
                acc[k].add(values[k]);
            }
        }
        return acc;
    });
    std::vector<MomentReport> out;
    for (std::size_t k = 0; k < losses.size(); ++k) {
        Moments total;
        for (const auto &part : parts) {
            total.merge(part[k]);
        }
        out.push_back(make_report(family.name(), n, metric_name(losses[k].metric), losses[k].sigma, total));
    }
    return out;
}

MomentReport pairwise_loss_moments(const FamilySpec &family, int n, const LossSpec &loss, std::uint64_t pairs,
                                   const RandomStream &stream, const RunOptions &options) {
    return pairwise_loss_moments(family, n, std::vector<LossSpec>{loss}, pairs, stream, options).front();
}

std::vector<double> pairwise_loss_samples(const FamilySpec &family, int n, const LossSpec &loss, std::uint64_t pairs,
                                          const RandomStream &stream, const RunOptions &options) {
    family.check_qubits(n);
    const std::vector<LossSpec> losses{loss};
    PairScorer probe(n, losses);
    auto parts = run_chunked<std::vector<double>>(pairs, options, [&](std::size_t begin, std::size_t end) {
        PairScorer scorer(n, losses);
        std::vector<double> chunk;
        std::vector<double> values;
        for (std::size_t t = begin; t < end; ++t) {
            RandomStream s = stream.child(t);
            const ProbVector p = draw_instance(family, n, s);
            const ProbVector q = draw_instance(family, n, s);
            scorer.score(p, q, values);
            chunk.push_back(values[0]);
        }
        return chunk;
    });
    std::vector<double> out;
    out.reserve(pairs);
    for (const auto &part : parts) {
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

AnticoncentrationReport anticoncentration_statistic(const FamilySpec &family, int n, std::uint64_t trials,
                                                    const RandomStream &stream, const RunOptions &options) {
    require_trials(trials, "anticoncentration_statistic");
    family.check_qubits(n);
    const double outcomes = static_cast<double>(outcome_count(n));
    struct Acc {
        Moments stat;
        std::uint64_t hits = 0;
    };
    auto parts = run_chunked<Acc>(trials, options, [&](std::size_t begin, std::size_t end) {
        Acc acc;
        for (std::size_t t = begin; t < end; ++t) {
            RandomStream s = stream.child(t);
            const ProbVector p = draw_instance(family, n, s);
            double sq = 0.0;
            for (double v : p.values()) {
                sq += v * v;
            }
            acc.stat.add(outcomes * sq);
            if (outcomes * p[0] >= 0.5) {
                ++acc.hits;
            }
        }
        return acc;
    });
    Moments stat;
    std::uint64_t hits = 0;
    for (const auto &part : parts) {
        stat.merge(part.stat);
        hits += part.hits;
    }
    AnticoncentrationReport r;
    r.family = family.name();
    r.n = n;
    r.statistic = stat.mean();
    r.statistic_stderr = stat.mean_stderr();
    r.tail_half = static_cast<double>(hits) / static_cast<double>(trials);
    std::tie(r.tail_low, r.tail_high) = wilson_interval(hits, trials);
    r.trials = trials;
    return r;
}

MomentReport diagonal_observable_variance(const FamilySpec &family, int n, const SubsetMask &s, std::uint64_t trials,
                                          const RandomStream &stream, const RunOptions &options) {
    if (s.empty()) {
        throw DomainError("diagonal observable needs a nonempty qubit subset");
    }
    if (s.n() != n) {
        throw DimensionError("observable subset and family have different qubit counts");
    }
    if (trials < 2) {
        throw DomainError("diagonal_observable_variance needs at least two trials");
    }
    family.check_qubits(n);
    auto parts = run_chunked<Moments>(trials, options, [&](std::size_t begin, std::size_t end) {
        Moments acc;
        for (std::size_t t = begin; t < end; ++t) {
            RandomStream rs = stream.child(t);
            acc.add(diagonal_pauli_expectation(draw_instance(family, n, rs), s));
        }
        return acc;
    });
    return make_report(family.name(), n, "z_expectation", std::nullopt, merge_all(parts));
}

MomentReport distance_to_uniform_moments(const FamilySpec &family, int n, std::uint64_t trials,
                                         const RandomStream &stream, const RunOptions &options) {
    require_trials(trials, "distance_to_uniform_moments");
    family.check_qubits(n);
    const double inv = 1.0 / static_cast<double>(outcome_count(n));
    auto parts = run_chunked<Moments>(trials, options, [&](std::size_t begin, std::size_t end) {
        Moments acc;
        for (std::size_t t = begin; t < end; ++t) {
            RandomStream rs = stream.child(t);
            const ProbVector p = draw_instance(family, n, rs);
            double sum = 0.0;
            for (double v : p.values()) {
                sum += (v - inv) * (v - inv);
            }
            acc.add(sum);
        }
        return acc;
    });
    return make_report(family.name(), n, "sd_to_uniform", std::nullopt, merge_all(parts));
}

LinearFit fit_log_linear(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw DimensionError("fit_log_linear needs two equal-length series of at least two points");
    }
    const double k = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    std::vector<double> ly(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(y[i] > 0.0)) {
            throw DomainError("fit_log_linear needs positive values");
        }
        ly[i] = std::log(y[i]);
        sx += x[i];
        sy += ly[i];
    }
    const double mx = sx / k;
    const double my = sy / k;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0.0) {
        throw DomainError("fit_log_linear needs distinct x values");
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

}  // namespace bornstat
