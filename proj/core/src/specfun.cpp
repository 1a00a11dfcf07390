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

#include "bornstat/specfun.hpp"

#include <cmath>
#include <limits>

#include "bornstat/errors.hpp"

namespace bornstat {
namespace {

constexpr int kMaxIterations = 10000;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

void check_args(double s, double x) {
    if (!(s > 0.0) || !(x >= 0.0) || !std::isfinite(s)) {
        throw DomainError("incomplete gamma requires s > 0 and x >= 0");
    }
}

// log(x^s e^-x / Gamma(s)), the common prefactor.
double log_prefactor(double s, double x) {
    return s * std::log(x) - x - std::lgamma(s);
}

double series_p(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    for (int k = 1; k < kMaxIterations; ++k) {
        term *= x / (s + k);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) {
            break;
        }
    }
    return sum * std::exp(log_prefactor(s, x));
}

// Modified Lentz evaluation of the continued fraction for Q(s, x).
double continued_fraction_q(double s, double x) {
    double b = x + 1.0 - s;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) {
            break;
        }
    }
    return std::exp(log_prefactor(s, x)) * h;
}

}  // namespace

double regularized_gamma_p(double s, double x) {
    check_args(s, x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < s + 1.0) {
        return series_p(s, x);
    }
    return 1.0 - continued_fraction_q(s, x);
}

double regularized_gamma_q(double s, double x) {
    check_args(s, x);
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < s + 1.0) {
        return 1.0 - series_p(s, x);
    }
    return continued_fraction_q(s, x);
}

}  // namespace bornstat
