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

#include "bornstat/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bornstat/circuits.hpp"

#ifndef BORNSTAT_VERSION_STRING
#define BORNSTAT_VERSION_STRING "0.0.0"
#endif

namespace bornstat {
namespace {

using json = nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

std::uint64_t fnv1a(const std::string &s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

double binomial_stderr(double p, std::uint64_t trials) {
    return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(trials));
}

bool is_product_like(const FamilySpec &f) {
    return f.kind == FamilySpec::Kind::Product || f.kind == FamilySpec::Kind::IqpProduct;
}

bool is_dirichlet(const FamilySpec &f) {
    return f.kind == FamilySpec::Kind::PseudoIndep && f.law.kind() == Underlying::Kind::Gamma &&
           f.law.parameter() == 1.0;
}

std::vector<LossSpec> losses_for(const ExperimentConfig &config, int n) {
    std::vector<LossSpec> out;
    for (const auto &name : config.metrics) {
        const Metric m = parse_metric(name);
        if (m == Metric::MMD2) {
            for (const auto &s : config.sigmas) {
                out.push_back({m, resolve_sigma(s, n)});
            }
        } else {
            out.push_back({m, std::nullopt});
        }
    }
    return out;
}

std::string observable_label(const std::vector<int> &qubits) {
    std::string out = "z";
    for (int q : qubits) {
        out += "_" + std::to_string(q);
    }
    return out;
}

struct Emitter {
    const ExperimentConfig &config;
    const std::string &family;
    int n;
    std::vector<ExperimentRow> &rows;

    void operator()(const std::string &metric, std::optional<double> sigma, const std::string &statistic, double value,
                    double stderr_, std::uint64_t trials) const {
        rows.push_back({config.experiment(), family, n, metric, sigma, statistic, value, stderr_, trials, config.seed});
    }
};

void run_tails(const ExperimentConfig &config, const FamilySpec &family, int n, const Emitter &emit) {
    const auto grid = config.y_grid.empty() ? dyadic_grid(-5, 4) : config.y_grid;
    TailOptions options;
    options.run.workers = config.workers;
    const auto curve =
        estimate_tail_curve(family, n, grid, config.trials, cell_stream(config.seed, family.name(), n), options);
    const double outcomes = static_cast<double>(outcome_count(n));
    for (std::size_t i = 0; i < curve.y.size(); ++i) {
        const double y = curve.y[i];
        const std::string at = "@y=" + fmt_short(y);
        emit("tail", std::nullopt, "survival" + at, curve.survival[i], binomial_stderr(curve.survival[i], curve.trials),
             curve.trials);
        emit("tail", std::nullopt, "wilson_low" + at, curve.ci_low[i], 0.0, curve.trials);
        emit("tail", std::nullopt, "wilson_high" + at, curve.ci_high[i], 0.0, curve.trials);
        if (is_product_like(family) && y <= outcomes) {
            emit("tail", std::nullopt, "exact" + at, product_tail_exact(n, y), 0.0, 0);
        } else if (is_dirichlet(family) && y <= outcomes) {
            emit("tail", std::nullopt, "exact" + at, porter_thomas_survival(outcomes, y / outcomes), 0.0, 0);
        } else if (family.kind == FamilySpec::Kind::Peaked) {
            const auto k = family.support == 0 ? default_peaked_support(n) : family.support;
            emit("tail", std::nullopt, "bound" + at, peaked_tail_bound(n, k), 0.0, 0);
        }
    }
}

void run_pairwise(const ExperimentConfig &config, const FamilySpec &family, int n, const Emitter &emit) {
    const auto losses = losses_for(config, n);
    const auto reports = pairwise_loss_moments(family, n, losses, config.trials,
                                               cell_stream(config.seed, family.name(), n), RunOptions{config.workers});
    const double outcomes = static_cast<double>(outcome_count(n));
    for (const auto &r : reports) {
        emit(r.metric, r.sigma, "mean", r.mean, r.mean_stderr, r.trials);
        emit(r.metric, r.sigma, "variance", r.variance, r.variance_stderr, r.trials);
        if (r.metric == "sd" && is_product_like(family)) {
            emit(r.metric, r.sigma, "exact_mean", 2.0 * (std::pow(2.0 / 3.0, n) - std::ldexp(1.0, -n)), 0.0, 0);
        } else if (r.metric == "sd" && is_dirichlet(family)) {
            emit(r.metric, r.sigma, "exact_mean", 2.0 * (outcomes - 1.0) / (outcomes * (outcomes + 1.0)), 0.0, 0);
        }
    }
}

void run_anticoncentration(const ExperimentConfig &config, const FamilySpec &family, int n, const Emitter &emit) {
    const auto r = anticoncentration_statistic(family, n, config.trials, cell_stream(config.seed, family.name(), n),
                                               RunOptions{config.workers});
    emit("anticoncentration", std::nullopt, "second_moment", r.statistic, r.statistic_stderr, r.trials);
    emit("anticoncentration", std::nullopt, "tail_half", r.tail_half, binomial_stderr(r.tail_half, r.trials), r.trials);
    emit("anticoncentration", std::nullopt, "tail_half_wilson_low", r.tail_low, 0.0, r.trials);
    emit("anticoncentration", std::nullopt, "tail_half_wilson_high", r.tail_high, 0.0, r.trials);
}

void run_observable(const ExperimentConfig &config, const FamilySpec &family, int n, const Emitter &emit) {
    std::uint64_t mask = 0;
    for (int q : config.observable) {
        mask |= std::uint64_t{1} << (q - 1);
    }
    const auto r = diagonal_observable_variance(family, n, SubsetMask(mask, n), config.trials,
                                                cell_stream(config.seed, family.name(), n), RunOptions{config.workers});
    const std::string metric = observable_label(config.observable);
    emit(metric, std::nullopt, "mean", r.mean, r.mean_stderr, r.trials);
    emit(metric, std::nullopt, "variance", r.variance, r.variance_stderr, r.trials);
    if (family.kind == FamilySpec::Kind::PseudoIndep && std::isfinite(family.law.variance())) {
        const double mu = family.law.mean();
        const double s = family.law.variance() / (static_cast<double>(outcome_count(n)) * mu * mu);
        emit(metric, std::nullopt, "variance_bound", s * (1.0 + s), 0.0, 0);
    }
}

void run_mmdtest(const ExperimentConfig &config, const FamilySpec &family, int n, const Emitter &emit) {
    const RandomStream stream = cell_stream(config.seed, family.name(), n);
    for (const auto &token : config.sigmas) {
        const double sigma = resolve_sigma(token, n);
        struct Acc {
            std::uint64_t false_rejects = 0;
            std::uint64_t rejects = 0;
            Moments null_estimate;
        };
        auto parts = run_chunked<Acc>(config.trials, RunOptions{config.workers}, [&](std::size_t b, std::size_t e) {
            Acc acc;
            for (std::size_t t = b; t < e; ++t) {
                RandomStream s = stream.child(t);
                const ProbVector p = draw_instance(family, n, s);
                const ProbVector q = draw_instance(family, n, s);
                const SampleSet x = sample_prob_vector(p, s, config.samples);
                const SampleSet y = sample_prob_vector(p, s, config.samples);
                const SampleSet z = sample_prob_vector(q, s, config.samples);
                const auto same = mmd_two_sample_test(x, y, sigma, config.alpha);
                const auto diff = mmd_two_sample_test(x, z, sigma, config.alpha);
                acc.null_estimate.add(same.estimate);
                acc.false_rejects += same.accept ? 0 : 1;
                acc.rejects += diff.accept ? 0 : 1;
            }
            return acc;
        });
        Acc total;
        for (const auto &p : parts) {
            total.false_rejects += p.false_rejects;
            total.rejects += p.rejects;
            total.null_estimate.merge(p.null_estimate);
        }
        const double trials = static_cast<double>(config.trials);
        const double type1 = static_cast<double>(total.false_rejects) / trials;
        const double power = static_cast<double>(total.rejects) / trials;
        emit("mmd2_estimate", sigma, "null_mean", total.null_estimate.mean(), total.null_estimate.mean_stderr(),
             config.trials);
        emit("mmd2_estimate", sigma, "type1_error", type1, binomial_stderr(type1, config.trials), config.trials);
        emit("mmd2_estimate", sigma, "power", power, binomial_stderr(power, config.trials), config.trials);
        emit("mmd2_estimate", sigma, "threshold",
             mmd_test_threshold(config.samples, config.samples, config.alpha, KernelSpec::max_value()), 0.0, 0);
    }
}

json config_json(const ExperimentConfig &c) {
    return json{{"kind", kind_name(c.kind)}, {"label", c.label},     {"families", c.families},
                {"n_min", c.n_min},          {"n_max", c.n_max},     {"trials", c.trials},
                {"metrics", c.metrics},      {"sigmas", c.sigmas},   {"y_grid", c.y_grid},
                {"observable", c.observable}, {"samples", c.samples}, {"alpha", c.alpha},
                {"seed", c.seed},            {"workers", c.workers}, {"out", c.out}};
}

}  // namespace

std::string version_string() {
    return BORNSTAT_VERSION_STRING;
}

std::string kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Tails:
            return "tails";
        case ExperimentKind::Pairwise:
            return "pairwise";
        case ExperimentKind::Anticoncentration:
            return "anticoncentration";
        case ExperimentKind::Observable:
            return "observable";
        case ExperimentKind::MmdTest:
            return "mmdtest";
    }
    return "unknown";
}

ExperimentKind parse_kind(const std::string &name) {
    for (auto k : {ExperimentKind::Tails, ExperimentKind::Pairwise, ExperimentKind::Anticoncentration,
                   ExperimentKind::Observable, ExperimentKind::MmdTest}) {
        if (kind_name(k) == name) {
            return k;
        }
    }
    throw DomainError("unknown experiment kind '" + name + "'");
}

double resolve_sigma(const std::string &token, int n) {
    if (token == "n") {
        return static_cast<double>(n);
    }
    double v = 0.0;
    try {
        std::size_t used = 0;
        v = std::stod(token, &used);
        if (used != token.size()) {
            throw DomainError("");
        }
    } catch (const std::exception &) {
        throw DomainError("bandwidth '" + token + "' is neither a number nor 'n'");
    }
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw DomainError("bandwidth must be positive and finite");
    }
    return v;
}

void validate_config(const ExperimentConfig &c) {
    if (c.families.empty()) {
        throw DomainError("no family selected");
    }
    if (c.n_min < 1 || c.n_max < c.n_min) {
        throw DomainError("n range [" + std::to_string(c.n_min) + ", " + std::to_string(c.n_max) + "] is empty or below 1");
    }
    if (c.trials < 1) {
        throw DomainError("trials must be at least 1");
    }
    const bool needs_hundred = c.kind == ExperimentKind::Tails || c.kind == ExperimentKind::Pairwise ||
                               c.kind == ExperimentKind::Anticoncentration;
    if (needs_hundred && c.trials < 100) {
        throw DomainError(kind_name(c.kind) + " needs at least 100 trials");
    }
    if (c.kind == ExperimentKind::Observable && c.trials < 2) {
        throw DomainError("observable needs at least 2 trials");
    }
    for (const auto &name : c.families) {
        const FamilySpec f = FamilySpec::parse(name);
        f.check_qubits(c.n_min);
        f.check_qubits(c.n_max);
    }
    if (c.kind == ExperimentKind::Pairwise) {
        if (c.metrics.empty()) {
            throw DomainError("no metric selected");
        }
        for (const auto &m : c.metrics) {
            const Metric metric = parse_metric(m);
            if (metric == Metric::MMD2Estimate) {
                throw DomainError("mmd2_estimate is produced by the mmdtest experiment, not pairwise");
            }
            if (metric == Metric::MMD2 && c.sigmas.empty()) {
                throw DomainError("mmd2 needs at least one --sigma");
            }
        }
    }
    if (c.kind == ExperimentKind::Pairwise || c.kind == ExperimentKind::MmdTest) {
        for (const auto &s : c.sigmas) {
            resolve_sigma(s, c.n_min);
        }
    }
    if (c.kind == ExperimentKind::MmdTest) {
        if (c.sigmas.empty()) {
            throw DomainError("mmdtest needs at least one --sigma");
        }
        if (c.samples < 2) {
            throw DomainError("mmdtest needs at least 2 samples per side");
        }
        if (!(c.alpha > 0.0 && c.alpha <= 1.0)) {
            throw DomainError("alpha must lie in (0, 1]");
        }
    }
    if (c.kind == ExperimentKind::Observable) {
        if (c.observable.empty()) {
            throw DomainError("observable needs a nonempty qubit subset");
        }
        for (int q : c.observable) {
            if (q < 1 || q > c.n_min) {
                throw DomainError("observable qubit " + std::to_string(q) + " outside [1, n_min]");
            }
        }
    }
    for (double y : c.y_grid) {
        if (!(y > 0.0) || !std::isfinite(y)) {
            throw DomainError("tail thresholds must be positive and finite");
        }
    }
}

std::string config_to_json(const ExperimentConfig &config) {
    return config_json(config).dump(2);
}

ExperimentConfig config_from_json(const std::string &text) {
    try {
        json doc = json::parse(text);
        if (doc.contains("config")) {
            doc = doc.at("config");
        }
        ExperimentConfig c;
        c.kind = parse_kind(doc.at("kind").get<std::string>());
        auto read = [&](const char *key, auto &field) {
            if (doc.contains(key)) {
                field = doc.at(key).get<std::decay_t<decltype(field)>>();
            }
        };
        read("label", c.label);
        read("families", c.families);
        read("n_min", c.n_min);
        read("n_max", c.n_max);
        read("trials", c.trials);
        read("metrics", c.metrics);
        read("sigmas", c.sigmas);
        read("y_grid", c.y_grid);
        read("observable", c.observable);
        read("samples", c.samples);
        read("alpha", c.alpha);
        read("seed", c.seed);
        read("workers", c.workers);
        read("out", c.out);
        return c;
    } catch (const json::exception &e) {
        throw ParseError(std::string("config JSON: ") + e.what(), 0);
    }
}

void write_csv(std::ostream &os, const std::vector<ExperimentRow> &rows) {
    for (const auto &r : rows) {
        if (!std::isfinite(r.value) || !std::isfinite(r.stderr_) || (r.sigma && !std::isfinite(*r.sigma))) {
            throw DomainError("non-finite value in row " + r.family + " n=" + std::to_string(r.n) + " " + r.metric +
                              " " + r.statistic + "; nothing written");
        }
    }
    std::ostringstream buf;
    buf << kCsvHeader << '\n';
    for (const auto &r : rows) {
        buf << csv_field(r.experiment) << ',' << csv_field(r.family) << ',' << r.n << ',' << csv_field(r.metric) << ','
            << (r.sigma ? fmt17(*r.sigma) : "") << ',' << csv_field(r.statistic) << ',' << fmt17(r.value) << ','
            << fmt17(r.stderr_) << ',' << r.trials << ',' << r.seed << '\n';
    }
    os << buf.str();
}

RandomStream cell_stream(std::uint64_t seed, const std::string &family, int n) {
    return derive_stream(mix_seed(seed, fnv1a(family)), static_cast<std::uint64_t>(n));
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig &config) {
    validate_config(config);
    std::vector<ExperimentRow> rows;
    for (const auto &name : config.families) {
        const FamilySpec family = FamilySpec::parse(name);
        const std::string canonical = family.name();
        for (int n = config.n_min; n <= config.n_max; ++n) {
            const Emitter emit{config, canonical, n, rows};
            switch (config.kind) {
                case ExperimentKind::Tails:
                    run_tails(config, family, n, emit);
                    break;
                case ExperimentKind::Pairwise:
                    run_pairwise(config, family, n, emit);
                    break;
                case ExperimentKind::Anticoncentration:
                    run_anticoncentration(config, family, n, emit);
                    break;
                case ExperimentKind::Observable:
                    run_observable(config, family, n, emit);
                    break;
                case ExperimentKind::MmdTest:
                    run_mmdtest(config, family, n, emit);
                    break;
            }
        }
    }
    return rows;
}

void run_and_write(const ExperimentConfig &config, std::ostream &stdout_stream) {
    const auto rows = run_experiment(config);
    if (config.out.empty()) {
        write_csv(stdout_stream, rows);
        return;
    }
    std::ostringstream csv;
    write_csv(csv, rows);
    std::ofstream file(config.out, std::ios::binary);
    if (!file) {
        throw DomainError("cannot open output file '" + config.out + "'");
    }
    file << csv.str();
    json manifest{{"tool", "bornstat"},
                  {"version", version_string()},
                  {"config", config_json(config)},
                  {"csv", config.out},
                  {"header", kCsvHeader},
                  {"rows", rows.size()}};
    std::ofstream meta(config.out + ".json", std::ios::binary);
    if (!meta) {
        throw DomainError("cannot open manifest file '" + config.out + ".json'");
    }
    meta << manifest.dump(2) << '\n';
}

std::vector<std::string> figure_names() {
    return {"fig2", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"};
}

ExperimentConfig figure_preset(const std::string &figure, std::uint64_t seed, bool paper_scale) {
    ExperimentConfig c;
    c.label = figure;
    c.seed = seed;
    c.n_min = 2;
    c.n_max = 13;
    c.trials = paper_scale ? 100000 : 10000;
    const std::vector<std::string> models{"iqp_product", "mps", "iqp", "pareto:alpha=2", "peaked_iqp"};
    if (figure == "fig2") {
        c.kind = ExperimentKind::Tails;
        c.families = {"iqp_product"};
    } else if (figure == "fig4") {
        c.kind = ExperimentKind::Tails;
        c.families = {"dirichlet", "pareto:alpha=2"};
    } else if (figure == "fig5" || figure == "fig6") {
        c.kind = ExperimentKind::Pairwise;
        c.families = models;
        c.metrics = {"sd"};
    } else if (figure == "fig7") {
        c.kind = ExperimentKind::Pairwise;
        c.families = models;
        c.metrics = {"mmd2"};
        c.sigmas = {"1"};
    } else if (figure == "fig8") {
        c.kind = ExperimentKind::Pairwise;
        c.families = models;
        c.metrics = {"mmd2"};
        c.sigmas = {"n"};
    } else if (figure == "fig9") {
        c.kind = ExperimentKind::Pairwise;
        c.families = models;
        c.metrics = {"l1", "tvd"};
    } else {
        throw DomainError("unknown figure '" + figure + "' (expected fig2, fig4, fig5, fig6, fig7, fig8 or fig9)");
    }
    return c;
}

}  // namespace bornstat
