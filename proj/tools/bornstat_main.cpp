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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "bornstat/harness.hpp"

namespace {

using bornstat::ExperimentConfig;
using bornstat::ExperimentKind;

struct GridFlags {
    std::uint64_t seed = 1;
    int n_min = 2;
    int n_max = 6;
    std::uint64_t trials = 10000;
    std::vector<std::string> families;
    std::vector<std::string> metrics;
    std::vector<std::string> sigmas;
    std::vector<double> y_grid;
    std::vector<int> observable;
    std::uint64_t samples = 200;
    double alpha = 0.05;
    unsigned workers = 0;
    std::string out;
    std::string experiment = "pairwise";
    std::string config_path;

    CLI::Option *seed_opt = nullptr;
    CLI::Option *n_min_opt = nullptr;
    CLI::Option *n_max_opt = nullptr;
    CLI::Option *trials_opt = nullptr;
    CLI::Option *workers_opt = nullptr;
    CLI::Option *out_opt = nullptr;
    CLI::Option *samples_opt = nullptr;
    CLI::Option *alpha_opt = nullptr;
};

void add_grid_flags(CLI::App *app, GridFlags &f, const std::string &count_name) {
    f.seed_opt = app->add_option("--seed", f.seed, "Master seed")->envname("BORN_SEED");
    f.n_min_opt = app->add_option("--n-min", f.n_min, "Smallest qubit count");
    f.n_max_opt = app->add_option("--n-max", f.n_max, "Largest qubit count");
    f.trials_opt = app->add_option(count_name, f.trials, "Monte Carlo trials per (family, n) cell");
    app->add_option("--family", f.families, "Distribution family (repeatable)");
    f.workers_opt = app->add_option("--workers", f.workers, "Worker threads, 0 for all cores");
    f.out_opt = app->add_option("--out", f.out, "CSV output path (manifest written to <out>.json)");
}

// Flags given on the command line replace the corresponding config fields.
bool given(const CLI::Option *opt) { return opt != nullptr && opt->count() > 0; }

// Subcommands register only some of the grid flags; absent ones are left null.
void apply(const GridFlags &f, ExperimentConfig &c) {
    if (given(f.seed_opt)) c.seed = f.seed;
    if (given(f.n_min_opt)) c.n_min = f.n_min;
    if (given(f.n_max_opt)) c.n_max = f.n_max;
    if (given(f.trials_opt)) c.trials = f.trials;
    if (given(f.workers_opt)) c.workers = f.workers;
    if (given(f.out_opt)) c.out = f.out;
    if (!f.families.empty()) c.families = f.families;
    if (!f.metrics.empty()) c.metrics = f.metrics;
    if (!f.sigmas.empty()) c.sigmas = f.sigmas;
    if (!f.y_grid.empty()) c.y_grid = f.y_grid;
    if (!f.observable.empty()) c.observable = f.observable;
    if (given(f.samples_opt)) c.samples = f.samples;
    if (given(f.alpha_opt)) c.alpha = f.alpha;
}

ExperimentConfig base_config(ExperimentKind kind, const GridFlags &f) {
    ExperimentConfig c;
    c.kind = kind;
    c.seed = f.seed;
    c.n_min = f.n_min;
    c.n_max = f.n_max;
    c.trials = f.trials;
    c.workers = f.workers;
    apply(f, c);
    return c;
}

std::string slurp(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw bornstat::ParseError("cannot open '" + path + "'", 0);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"bornstat: loss concentration experiments for random distribution families"};
    app.set_version_flag("--version", bornstat::version_string());
    app.require_subcommand(1);

    GridFlags run_f, tails_f, pair_f, fig_f;

    auto *run = app.add_subcommand("run", "Run an experiment from flags or a JSON config / manifest");
    add_grid_flags(run, run_f, "--trials");
    run->add_option("--config", run_f.config_path, "JSON config or manifest to re-run");
    run->add_option("--experiment", run_f.experiment, "tails | pairwise | anticoncentration | observable | mmdtest");
    run->add_option("--metric", run_f.metrics, "Loss metric (repeatable): sd, mmd2, l1, tvd");
    run->add_option("--sigma", run_f.sigmas, "Kernel bandwidth (repeatable), a number or 'n'");
    run->add_option("--y", run_f.y_grid, "Tail threshold in units of 1/2^n (repeatable)");
    run->add_option("--observable", run_f.observable, "Qubits (1-based) of the diagonal observable");
    run_f.samples_opt = run->add_option("--samples", run_f.samples, "Samples per side for mmdtest experiments");
    run_f.alpha_opt = run->add_option("--alpha", run_f.alpha, "Test level for mmdtest experiments");

    auto *tails = app.add_subcommand("tails", "Tail curve Prob(p(x) >= y / 2^n)");
    add_grid_flags(tails, tails_f, "--trials");
    tails->add_option("--y", tails_f.y_grid, "Tail threshold in units of 1/2^n (repeatable)");

    auto *pairwise = app.add_subcommand("pairwise", "Pairwise loss moments over random instance pairs");
    add_grid_flags(pairwise, pair_f, "--pairs");
    pairwise->add_option("--metric", pair_f.metrics, "Loss metric (repeatable): sd, mmd2, l1, tvd");
    pairwise->add_option("--sigma", pair_f.sigmas, "Kernel bandwidth (repeatable), a number or 'n'");

    std::vector<std::string> figures;
    bool paper_scale = false;
    std::string fig_dir = ".";
    auto *fig = app.add_subcommand("figures", "Preset figure bundles");
    fig->add_option("figure", figures, "fig2 fig4 fig5 fig6 fig7 fig8 fig9, or all")->required();
    fig_f.seed_opt = fig->add_option("--seed", fig_f.seed, "Master seed")->envname("BORN_SEED");
    fig_f.trials_opt = fig->add_option("--pairs,--trials", fig_f.trials, "Override the trial count");
    fig_f.n_min_opt = fig->add_option("--n-min", fig_f.n_min, "Smallest qubit count");
    fig_f.n_max_opt = fig->add_option("--n-max", fig_f.n_max, "Largest qubit count");
    fig_f.workers_opt = fig->add_option("--workers", fig_f.workers, "Worker threads, 0 for all cores");
    fig->add_option("--out", fig_dir, "Output directory");
    fig->add_flag("--paper-scale", paper_scale, "Use 10^5 trials instead of 10^4");

    std::string x_path, y_path, sigma_token = "1";
    double alpha = 0.05;
    auto *mmd = app.add_subcommand("mmdtest", "MMD two-sample test on two bitstring files");
    mmd->add_option("x", x_path, "First sample file")->required();
    mmd->add_option("y", y_path, "Second sample file")->required();
    mmd->add_option("--sigma", sigma_token, "Kernel bandwidth, a number or 'n'");
    mmd->add_option("--alpha", alpha, "Test level in (0, 1]");

    std::string sample_family = "product", sample_out;
    int sample_n = 4;
    std::uint64_t sample_count = 100, sample_seed = 1;
    auto *sample = app.add_subcommand("sample", "Draw one instance of a family and write samples from it");
    sample->add_option("--family", sample_family, "Distribution family");
    sample->add_option("--n", sample_n, "Qubit count");
    sample->add_option("--count", sample_count, "Number of samples");
    sample->add_option("--seed", sample_seed, "Master seed")->envname("BORN_SEED");
    sample->add_option("--out", sample_out, "Output file (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            ExperimentConfig c;
            if (!run_f.config_path.empty()) {
                c = bornstat::config_from_json(slurp(run_f.config_path));
                apply(run_f, c);
            } else {
                c = base_config(bornstat::parse_kind(run_f.experiment), run_f);
            }
            bornstat::run_and_write(c, std::cout);
        } else if (tails->parsed()) {
            ExperimentConfig c = base_config(ExperimentKind::Tails, tails_f);
            bornstat::run_and_write(c, std::cout);
        } else if (pairwise->parsed()) {
            ExperimentConfig c = base_config(ExperimentKind::Pairwise, pair_f);
            bornstat::run_and_write(c, std::cout);
        } else if (fig->parsed()) {
            if (figures.size() == 1 && figures[0] == "all") {
                figures = bornstat::figure_names();
            }
            std::filesystem::create_directories(fig_dir);
            for (const auto &name : figures) {
                ExperimentConfig c = bornstat::figure_preset(name, fig_f.seed, paper_scale);
                apply(fig_f, c);
                c.out = (std::filesystem::path(fig_dir) / (name + ".csv")).string();
                std::cerr << "running " << name << " -> " << c.out << "\n";
                bornstat::run_and_write(c, std::cout);
            }
        } else if (mmd->parsed()) {
            const auto xs = bornstat::read_samples_file(x_path);
            const auto ys = bornstat::read_samples_file(y_path);
            const double sigma = bornstat::resolve_sigma(sigma_token, xs.n);
            const auto r = bornstat::mmd_two_sample_test(xs, ys, sigma, alpha);
            std::printf("n %d\nm %zu\nl %zu\nsigma %.17g\nalpha %.17g\n", r.n, r.m, r.l, r.sigma, r.alpha);
            std::printf("estimate %.17g\nthreshold %.17g\nverdict %s\n", r.estimate, r.threshold,
                        r.accept ? "ACCEPT" : "REJECT");
        } else if (sample->parsed()) {
            const auto family = bornstat::FamilySpec::parse(sample_family);
            bornstat::RandomStream stream = bornstat::cell_stream(sample_seed, family.name(), sample_n);
            const auto p = bornstat::draw_instance(family, sample_n, stream);
            const auto samples = bornstat::sample_prob_vector(p, stream, sample_count);
            if (sample_out.empty()) {
                bornstat::write_samples(std::cout, samples);
            } else {
                std::ofstream out(sample_out);
                if (!out) {
                    throw bornstat::DomainError("cannot open '" + sample_out + "'");
                }
                bornstat::write_samples(out, samples);
            }
        }
    } catch (const bornstat::ParseError &e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 3;
    } catch (const bornstat::ResourceError &e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return 4;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
