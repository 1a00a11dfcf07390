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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace bornstat {
namespace {

std::vector<std::string> lines_of(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) out.push_back(line);
    return out;
}

std::string csv_of(const ExperimentConfig &c) {
    std::ostringstream os;
    write_csv(os, run_experiment(c));
    return os.str();
}

ExperimentConfig small_pairwise() {
    ExperimentConfig c;
    c.families = {"product", "dirichlet"};
    c.n_min = 2;
    c.n_max = 4;
    c.trials = 300;
    c.metrics = {"sd", "mmd2", "tvd"};
    c.sigmas = {"1", "n"};
    c.seed = 7;
    c.workers = 1;
    return c;
}

TEST(Csv, HeaderAndFormatting) {
    ExperimentRow r{"pairwise", "product", 3, "mmd2", 1.5, "mean", 0.1, 0.01, 100, 7};
    std::ostringstream os;
    write_csv(os, {r});
    const auto lines = lines_of(os.str());
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_EQ(lines[0], kCsvHeader);
    EXPECT_EQ(lines[1], "pairwise,product,3,mmd2,1.5,mean,0.10000000000000001,0.01,100,7");
}

TEST(Csv, QuotesFieldsWithCommas) {
    ExperimentRow r{"tails", "peaked:K=16,law=gamma1", 10, "tail", std::nullopt, "survival@y=0.5", 0.25, 0, 100, 1};
    std::ostringstream os;
    write_csv(os, {r});
    EXPECT_EQ(lines_of(os.str())[1], "tails,\"peaked:K=16,law=gamma1\",10,tail,,survival@y=0.5,0.25,0,100,1");
}

TEST(Csv, NonFiniteAbortsBeforeWriting) {
    ExperimentRow good{"a", "b", 2, "sd", std::nullopt, "mean", 1.0, 0.0, 1, 1};
    ExperimentRow bad = good;
    bad.value = std::numeric_limits<double>::quiet_NaN();
    std::ostringstream os;
    EXPECT_THROW(write_csv(os, {good, bad}), DomainError);
    EXPECT_TRUE(os.str().empty());
    bad.value = 1.0;
    bad.stderr_ = std::numeric_limits<double>::infinity();
    EXPECT_THROW(write_csv(os, {bad}), DomainError);
}

TEST(Config, JsonRoundTrip) {
    ExperimentConfig c = small_pairwise();
    c.kind = ExperimentKind::Tails;
    c.label = "fig4";
    c.y_grid = {0.125, 1.0};
    c.observable = {1, 3};
    c.alpha = 0.01;
    c.out = "x.csv";
    const ExperimentConfig back = config_from_json(config_to_json(c));
    EXPECT_EQ(config_to_json(back), config_to_json(c));
    EXPECT_EQ(back.kind, ExperimentKind::Tails);
    EXPECT_EQ(back.y_grid, c.y_grid);
}

TEST(Config, AcceptsManifest) {
    const ExperimentConfig c = small_pairwise();
    const std::string manifest = "{\"tool\": \"bornstat\", \"config\": " + config_to_json(c) + "}";
    EXPECT_EQ(config_to_json(config_from_json(manifest)), config_to_json(c));
    EXPECT_THROW(config_from_json("{"), ParseError);
    EXPECT_THROW(config_from_json("{\"kind\": \"nope\"}"), std::exception);
}

TEST(Config, Validation) {
    ExperimentConfig c = small_pairwise();
    EXPECT_NO_THROW(validate_config(c));
    c.trials = 0;
    EXPECT_THROW(validate_config(c), DomainError);
    c = small_pairwise();
    c.n_min = 5;
    c.n_max = 4;
    EXPECT_THROW(validate_config(c), DomainError);
    c = small_pairwise();
    c.families = {"iqp"};
    c.n_max = 17;
    EXPECT_THROW(validate_config(c), ResourceError);
    c = small_pairwise();
    c.metrics = {"kl"};
    EXPECT_THROW(validate_config(c), DomainError);
    c = small_pairwise();
    c.sigmas = {"-1"};
    EXPECT_THROW(validate_config(c), DomainError);
}

TEST(KindNames, RoundTrip) {
    for (auto k : {ExperimentKind::Tails, ExperimentKind::Pairwise, ExperimentKind::Anticoncentration,
                   ExperimentKind::Observable, ExperimentKind::MmdTest}) {
        EXPECT_EQ(parse_kind(kind_name(k)), k);
    }
    EXPECT_THROW(parse_kind("x"), DomainError);
}

TEST(RunExperiment, DeterministicAcrossWorkers) {
    ExperimentConfig a = small_pairwise();
    ExperimentConfig b = a;
    b.workers = 3;
    EXPECT_EQ(csv_of(a), csv_of(b));
    ExperimentConfig c = a;
    c.seed = 8;
    EXPECT_NE(csv_of(a), csv_of(c));
}

TEST(RunExperiment, CellsIndependentOfGrid) {
    ExperimentConfig wide = small_pairwise();
    ExperimentConfig narrow = wide;
    narrow.families = {"dirichlet"};
    narrow.n_min = narrow.n_max = 3;
    const auto all = run_experiment(wide);
    const auto one = run_experiment(narrow);
    std::size_t matched = 0;
    for (const auto &r : one) {
        for (const auto &s : all) {
            if (s.family == r.family && s.n == r.n && s.metric == r.metric && s.sigma == r.sigma &&
                s.statistic == r.statistic) {
                EXPECT_EQ(s.value, r.value);
                ++matched;
            }
        }
    }
    EXPECT_EQ(matched, one.size());
}

TEST(RunExperiment, PairwiseRowsTrackClosedForm) {
    ExperimentConfig c;
    c.families = {"product"};
    c.n_min = 2;
    c.n_max = 6;
    c.trials = 10000;
    c.seed = 7;
    for (const auto &r : run_experiment(c)) {
        if (r.statistic != "mean") continue;
        EXPECT_NEAR(r.value, 2 * (std::pow(2.0 / 3.0, r.n) - std::pow(0.5, r.n)), 3 * r.stderr_) << "n=" << r.n;
    }
}

TEST(RunExperiment, EveryKindProducesFiniteRows) {
    for (auto k : {ExperimentKind::Tails, ExperimentKind::Pairwise, ExperimentKind::Anticoncentration,
                   ExperimentKind::Observable, ExperimentKind::MmdTest}) {
        ExperimentConfig c;
        c.kind = k;
        c.families = {"dirichlet", "peaked", "product"};
        c.n_min = 4;
        c.n_max = 5;
        c.trials = 100;
        c.samples = 20;
        c.workers = 1;
        const auto rows = run_experiment(c);
        EXPECT_FALSE(rows.empty()) << kind_name(k);
        for (const auto &r : rows) {
            EXPECT_TRUE(std::isfinite(r.value));
            EXPECT_EQ(r.experiment, kind_name(k));
        }
    }
}

TEST(RunExperiment, TailRowsCarryExactReference) {
    ExperimentConfig c;
    c.kind = ExperimentKind::Tails;
    c.families = {"dirichlet"};
    c.n_min = c.n_max = 8;
    c.trials = 20000;
    c.y_grid = {0.5, 2.0};
    std::map<std::string, ExperimentRow> by;
    for (const auto &r : run_experiment(c)) by[r.statistic] = r;
    ASSERT_TRUE(by.count("exact@y=0.5"));
    const double exact = by["exact@y=0.5"].value;
    EXPECT_GE(exact, by["wilson_low@y=0.5"].value - 0.01);
    EXPECT_LE(exact, by["wilson_high@y=0.5"].value + 0.01);
}

TEST(Figures, PresetsAreValid) {
    for (const auto &f : figure_names()) {
        const ExperimentConfig c = figure_preset(f, 3, false);
        EXPECT_NO_THROW(validate_config(c)) << f;
        EXPECT_EQ(c.experiment(), f);
        EXPECT_EQ(c.trials, 10000u);
        EXPECT_EQ(figure_preset(f, 3, true).trials, 100000u);
    }
    EXPECT_EQ(figure_preset("fig8", 1, false).sigmas, std::vector<std::string>{"n"});
    EXPECT_THROW(figure_preset("fig3", 1, false), DomainError);
}

TEST(Samples, ReadWriteRoundTrip) {
    SampleSet s{5, {0, 1, 31, 16}};
    std::ostringstream os;
    write_samples(os, s);
    EXPECT_EQ(os.str(), "00000\n00001\n11111\n10000\n");
    std::istringstream is(os.str());
    const SampleSet back = read_samples(is);
    EXPECT_EQ(back.n, 5);
    EXPECT_EQ(back.outcomes, s.outcomes);
}

TEST(Samples, ToleratesBlankLinesAndCarriageReturns) {
    std::istringstream is("01\r\n\n10  \n");
    const SampleSet s = read_samples(is);
    EXPECT_EQ(s.outcomes, (std::vector<std::uint64_t>{1, 2}));
}

TEST(Samples, ParseErrorsCarryLineNumbers) {
    std::istringstream bad("010\n011\n0x1\n");
    try {
        read_samples(bad);
        FAIL() << "expected ParseError";
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line(), 3u);
    }
    std::istringstream ragged("010\n0110\n");
    try {
        read_samples(ragged);
        FAIL() << "expected ParseError";
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line(), 2u);
    }
    std::istringstream empty("\n\n");
    EXPECT_THROW(read_samples(empty), ParseError);
    EXPECT_THROW(read_samples_file("/nonexistent/x.txt"), ParseError);
}

TEST(MmdTest, IdenticalFilesAccept) {
    SampleSet x{4, {0, 3, 5, 9, 9, 12}};
    const auto r = mmd_two_sample_test(x, x, 1.0, 0.05);
    EXPECT_LE(r.estimate, 0.0);
    EXPECT_TRUE(r.accept);
}

TEST(MmdTest, DisjointPointMassesReject) {
    const int n = 6;
    SampleSet x{n, std::vector<std::uint64_t>(100, 0)};
    SampleSet y{n, std::vector<std::uint64_t>(100, 63)};
    const auto r = mmd_two_sample_test(x, y, 1.0, 0.05);
    const double rho = std::exp(-0.5);
    EXPECT_NEAR(r.estimate, 2 * (1 - std::pow(rho, n)), 1e-12);
    EXPECT_NEAR(r.threshold, 0.346, 5e-4);
    EXPECT_FALSE(r.accept);
    EXPECT_EQ(r.m, 100u);
}

TEST(MmdTest, AlphaOneRejectsAnyPositiveEstimate) {
    SampleSet x{3, {0, 1, 2, 3}};
    SampleSet y{3, {4, 5, 6, 7}};
    const auto r = mmd_two_sample_test(x, y, 1.0, 1.0);
    EXPECT_EQ(r.threshold, 0.0);
    EXPECT_GT(r.estimate, 0.0);
    EXPECT_FALSE(r.accept);
}

TEST(MmdTest, SigmaTokens) {
    EXPECT_EQ(resolve_sigma("n", 7), 7.0);
    EXPECT_EQ(resolve_sigma("0.5", 7), 0.5);
    EXPECT_THROW(resolve_sigma("0", 7), DomainError);
    EXPECT_THROW(resolve_sigma("abc", 7), DomainError);
}

}  // namespace
}  // namespace bornstat
