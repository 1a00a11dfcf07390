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

// Experiment configuration, the family x n grid driver, CSV / JSON output,
// figure presets and the file-based MMD two-sample test.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bornstat/bitmath.hpp"
#include "bornstat/lab.hpp"

namespace bornstat {

std::string version_string();

enum class ExperimentKind { Tails, Pairwise, Anticoncentration, Observable, MmdTest };

std::string kind_name(ExperimentKind kind);
ExperimentKind parse_kind(const std::string &name);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Pairwise;
    /// Label written to the `experiment` column; defaults to kind_name(kind).
    std::string label;
    std::vector<std::string> families{"product"};
    int n_min = 2;
    int n_max = 6;
    std::uint64_t trials = 10000;
    std::vector<std::string> metrics{"sd"};
    /// Bandwidths for mmd2 metrics: a positive number, or "n" for sigma = n.
    std::vector<std::string> sigmas{"1"};
    /// Tail thresholds in units of 1/N; empty selects 2^-5 .. 2^4.
    std::vector<double> y_grid;
    /// Qubits (1-based) of the observable Z_S.
    std::vector<int> observable{1};
    /// Two-sample test size per side and level.
    std::uint64_t samples = 200;
    double alpha = 0.05;
    std::uint64_t seed = 1;
    unsigned workers = 0;
    /// CSV path; the manifest goes next to it with a .json suffix. Empty means stdout, no manifest.
    std::string out;

    std::string experiment() const { return label.empty() ? kind_name(kind) : label; }
};

/// Throws DomainError / ResourceError describing the first problem found.
void validate_config(const ExperimentConfig &config);

std::string config_to_json(const ExperimentConfig &config);
/// Accepts a bare config object or a manifest with a "config" member. Throws ParseError.
ExperimentConfig config_from_json(const std::string &text);

struct ExperimentRow {
    std::string experiment;
    std::string family;
    int n = 0;
    std::string metric;
    std::optional<double> sigma;
    std::string statistic;
    double value = 0.0;
    double stderr_ = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

inline constexpr const char *kCsvHeader = "experiment,family,n,metric,sigma,statistic,value,stderr,trials,seed";

/// Header plus one line per row. A non-finite value or stderr throws DomainError
/// before anything is written.
void write_csv(std::ostream &os, const std::vector<ExperimentRow> &rows);

/// Stream for one (family, n) cell: independent of the other cells in the grid.
RandomStream cell_stream(std::uint64_t seed, const std::string &family, int n);

/// Runs the family x n grid and returns the rows in grid order.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig &config);

/// Runs, then writes the CSV (stdout when config.out is empty) and the manifest.
void run_and_write(const ExperimentConfig &config, std::ostream &stdout_stream);

/// Preset for fig2, fig4, fig5, fig6, fig7, fig8 or fig9. Throws DomainError otherwise.
ExperimentConfig figure_preset(const std::string &figure, std::uint64_t seed, bool paper_scale);
std::vector<std::string> figure_names();

/// One bitstring per line, most significant qubit first. Blank lines are skipped.
/// Throws ParseError with the 1-based line number.
SampleSet read_samples(std::istream &is);
SampleSet read_samples_file(const std::string &path);
void write_samples(std::ostream &os, const SampleSet &samples);

struct MmdTestResult {
    int n = 0;
    std::size_t m = 0;
    std::size_t l = 0;
    double sigma = 0.0;
    double alpha = 0.0;
    double estimate = 0.0;
    double threshold = 0.0;
    bool accept = false;
};

/// Unbiased MMD^2 estimate against the acceptance threshold; H0 (p = q) is
/// accepted iff estimate <= threshold.
MmdTestResult mmd_two_sample_test(const SampleSet &x, const SampleSet &y, double sigma, double alpha);

/// "n" resolves to the qubit count; otherwise a positive number.
double resolve_sigma(const std::string &token, int n);

}  // namespace bornstat
