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

#include <fstream>
#include <istream>
#include <ostream>

#include "bornstat/harness.hpp"
#include "bornstat/metrics.hpp"

namespace bornstat {

SampleSet read_samples(std::istream &is) {
    SampleSet out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        BitString x(0, 1);
        try {
            x = BitString::parse(line);
        } catch (const DomainError &e) {
            throw ParseError(e.what(), lineno);
        }
        if (out.n == 0) {
            out.n = x.n();
        } else if (x.n() != out.n) {
            throw ParseError("bitstring has " + std::to_string(x.n()) + " bits, expected " + std::to_string(out.n),
                             lineno);
        }
        out.outcomes.push_back(x.bits());
    }
    if (is.bad()) {
        throw ParseError("read failure", lineno);
    }
    if (out.outcomes.empty()) {
        throw ParseError("no samples", 0);
    }
    return out;
}

SampleSet read_samples_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open sample file '" + path + "'", 0);
    }
    try {
        return read_samples(in);
    } catch (const ParseError &e) {
        throw ParseError(path + ": " + e.what(), 0);
    }
}

void write_samples(std::ostream &os, const SampleSet &samples) {
    for (auto x : samples.outcomes) {
        os << BitString(x, samples.n).to_string() << '\n';
    }
}

MmdTestResult mmd_two_sample_test(const SampleSet &x, const SampleSet &y, double sigma, double alpha) {
    if (x.size() < 2 || y.size() < 2) {
        throw DomainError("two-sample test needs at least two samples per side");
    }
    if (x.n != y.n) {
        throw DimensionError("sample sets have different bitstring lengths (" + std::to_string(x.n) + " vs " +
                             std::to_string(y.n) + ")");
    }
    MmdTestResult r;
    r.n = x.n;
    r.m = x.size();
    r.l = y.size();
    r.sigma = sigma;
    r.alpha = alpha;
    r.threshold = mmd_test_threshold(r.m, r.l, alpha, KernelSpec::max_value());
    r.estimate = mmd2_unbiased(x, y, KernelSpec(sigma));
    r.accept = r.estimate <= r.threshold;
    return r;
}

}  // namespace bornstat
