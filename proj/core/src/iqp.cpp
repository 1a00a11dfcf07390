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

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "bornstat/circuits.hpp"
#include "bornstat/families.hpp"

namespace bornstat {
namespace {

void check_statevector(int n) {
    if (n < 1) {
        throw DomainError("circuit needs at least one qubit");
    }
    if (n > kMaxStatevectorQubits) {
        throw ResourceError("statevector simulation capped at n = " + std::to_string(kMaxStatevectorQubits) +
                            " (requested " + std::to_string(n) + ")");
    }
}

}  // namespace

IqpCircuit::IqpCircuit(int n, std::vector<IqpGate> gates) : n_(n), gates_(std::move(gates)) {
    if (n < 1 || n > kMaxQubits) {
        throw DomainError("IQP circuit qubit count outside [1, " + std::to_string(kMaxQubits) + "]");
    }
    for (const auto &g : gates_) {
        if (g.mask == 0 || std::popcount(g.mask) > 2 || (g.mask >> n) != 0) {
            throw DomainError("IQP gate must act on one or two qubits of the register");
        }
        if (!std::isfinite(g.theta)) {
            throw DomainError("IQP gate angle must be finite");
        }
    }
}

std::string IqpCircuit::to_json() const {
    nlohmann::json gates = nlohmann::json::array();
    for (const auto &g : gates_) {
        nlohmann::json qubits = nlohmann::json::array();
        for (int q = 0; q < n_; ++q) {
            if ((g.mask >> q) & 1u) {
                qubits.push_back(q);
            }
        }
        gates.push_back({{"qubits", qubits}, {"theta", g.theta}});
    }
    nlohmann::json doc{{"n", n_}, {"gates", gates}};
    return doc.dump();
}

IqpCircuit IqpCircuit::from_json(const std::string &text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
        const int n = doc.at("n").get<int>();
        std::vector<IqpGate> gates;
        for (const auto &g : doc.at("gates")) {
            std::uint64_t mask = 0;
            for (const auto &q : g.at("qubits")) {
                const int qi = q.get<int>();
                if (qi < 0 || qi >= n) {
                    throw DomainError("gate qubit index out of range");
                }
                mask |= std::uint64_t{1} << qi;
            }
            gates.push_back({mask, g.at("theta").get<double>()});
        }
        return IqpCircuit(n, std::move(gates));
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("circuit JSON: ") + e.what(), 0);
    }
}

StateVector::StateVector(int n, std::vector<Complex> amplitudes) : n_(n), amps_(std::move(amplitudes)) {
    if (amps_.size() != outcome_count(n)) {
        throw DimensionError("statevector length does not match 2^n");
    }
    double norm = 0.0;
    for (const auto &a : amps_) {
        norm += std::norm(a);
    }
    if (std::abs(norm - 1.0) > kNormTolerance) {
        throw NormalizationError("statevector norm " + std::to_string(norm));
    }
}

ProbVector StateVector::probabilities() const {
    std::vector<double> p(amps_.size());
    std::transform(amps_.begin(), amps_.end(), p.begin(), [](const Complex &a) { return std::norm(a); });
    return validate_prob_vector(std::move(p), n_);
}

ProbVector iqp_product_prob_vector(std::span<const double> theta) {
    std::vector<double> a(theta.size());
    std::transform(theta.begin(), theta.end(), a.begin(), [](double t) {
        const double c = std::cos(0.5 * t);
        return c * c;
    });
    return product_prob_vector(ProductParams(std::move(a)));
}

std::vector<double> random_iqp_product_angles(int n, RandomStream &stream) {
    std::vector<double> theta(static_cast<std::size_t>(n));
    for (double &t : theta) {
        t = 2.0 * std::acos(std::sqrt(stream.uniform()));
    }
    return theta;
}

IqpCircuit random_iqp_circuit(int n, RandomStream &stream, bool include_singletons) {
    if (n < 1) {
        throw DomainError("random_iqp_circuit requires n >= 1");
    }
    std::vector<IqpGate> gates;
    const double two_pi = 2.0 * std::numbers::pi;
    if (include_singletons) {
        for (int i = 0; i < n; ++i) {
            gates.push_back({std::uint64_t{1} << i, two_pi * stream.uniform()});
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            gates.push_back({(std::uint64_t{1} << i) | (std::uint64_t{1} << j), two_pi * stream.uniform()});
        }
    }
    return IqpCircuit(n, std::move(gates));
}

StateVector iqp_state(const IqpCircuit &circuit) {
    const int n = circuit.n();
    check_statevector(n);
    const std::size_t size = outcome_count(n);

    // Canonical gate order makes the result independent of the input order bit for bit.
    std::vector<IqpGate> gates = circuit.gates();
    std::sort(gates.begin(), gates.end(), [](const IqpGate &a, const IqpGate &b) {
        return a.mask != b.mask ? a.mask < b.mask : a.theta < b.theta;
    });

    // Diagonal phase phi(z) built bit by bit: setting bit k flips the sign of
    // every gate containing k, weighted by the parity of its other qubits.
    std::vector<std::vector<IqpGate>> touching(static_cast<std::size_t>(n));
    double phase0 = 0.0;
    for (const auto &g : gates) {
        phase0 += g.theta;
        for (int k = 0; k < n; ++k) {
            if ((g.mask >> k) & 1u) {
                touching[static_cast<std::size_t>(k)].push_back({g.mask & ~(std::uint64_t{1} << k), g.theta});
            }
        }
    }
    std::vector<double> phase(size);
    phase[0] = phase0;
    for (int k = 0; k < n; ++k) {
        const std::size_t filled = std::size_t{1} << k;
        const auto &list = touching[static_cast<std::size_t>(k)];
        for (std::size_t z = 0; z < filled; ++z) {
            double delta = 0.0;
            for (const auto &g : list) {
                const double sign = (std::popcount(g.mask & z) & 1) ? -1.0 : 1.0;
                delta -= 2.0 * g.theta * sign;
            }
            phase[z + filled] = phase[z] + delta;
        }
    }

    std::vector<Complex> amps(size);
    const double scale = 1.0 / static_cast<double>(size);
    for (std::size_t z = 0; z < size; ++z) {
        amps[z] = std::polar(1.0, phase[z]);
    }
    fwht_inplace(std::span<Complex>(amps));
    for (auto &a : amps) {
        a *= scale;
    }
    return StateVector(n, std::move(amps));
}

ProbVector iqp_prob_vector(const IqpCircuit &circuit) {
    return iqp_state(circuit).probabilities();
}

ProbVector peaked_iqp_prob_vector(int n, RandomStream &stream) {
    if (n < 2) {
        throw DomainError("peaked_iqp_prob_vector requires n >= 2");
    }
    if (n > kMaxQubits) {
        throw ResourceError("peaked IQP over n = " + std::to_string(n) + " exceeds the dense cap");
    }
    const int m = std::bit_width(static_cast<std::uint64_t>(n - 1));  // ceil(log2 n)
    const ProbVector inner = iqp_prob_vector(random_iqp_circuit(m, stream));
    const auto support = random_subset(outcome_count(n), inner.size(), stream);
    std::vector<double> p(outcome_count(n), 0.0);
    for (std::size_t j = 0; j < support.size(); ++j) {
        p[support[j]] = inner[j];
    }
    return validate_prob_vector(std::move(p), n);
}

double diagonal_pauli_expectation(const ProbVector &p, const SubsetMask &s) {
    if (s.n() != p.n()) {
        throw DimensionError("diagonal_pauli_expectation: mask and distribution have different qubit counts");
    }
    double sum = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) {
        sum += (std::popcount(s.mask() & x) & 1) ? -p[x] : p[x];
    }
    return sum;
}

}  // namespace bornstat
