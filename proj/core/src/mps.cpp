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
#include <cmath>
#include <random>

#include "bornstat/circuits.hpp"

namespace bornstat {

using Matrix = MpsState::Matrix;

int mps_bond_dim(int n, int chi, int bond) {
    if (bond <= 0 || bond >= n) {
        return 1;
    }
    // Saturate before shifting past 62 bits.
    auto capped_pow2 = [chi](int e) { return e >= 30 ? chi : static_cast<int>(std::min<long long>(chi, 1LL << e)); };
    return std::min({chi, capped_pow2(bond), capped_pow2(n - bond)});
}

MpsState::MpsState(int n, int bond_dimension, std::vector<std::array<Matrix, 2>> sites)
    : n_(n), chi_(bond_dimension), sites_(std::move(sites)) {
    if (n < 1 || n > kMaxQubits) {
        throw DomainError("MPS qubit count outside [1, " + std::to_string(kMaxQubits) + "]");
    }
    if (bond_dimension < 1) {
        throw DomainError("MPS bond dimension must be at least 1");
    }
    if (sites_.size() != static_cast<std::size_t>(n)) {
        throw DimensionError("MPS needs one site tensor per qubit");
    }
    for (int i = 0; i < n; ++i) {
        const auto &site = sites_[static_cast<std::size_t>(i)];
        if (site[0].rows() != site[1].rows() || site[0].cols() != site[1].cols()) {
            throw DimensionError("MPS site matrices disagree in shape");
        }
        if (i > 0 && site[0].rows() != sites_[static_cast<std::size_t>(i - 1)][0].cols()) {
            throw DimensionError("MPS bond dimensions do not chain");
        }
        if (site[0].rows() > bond_dimension || site[0].cols() > bond_dimension) {
            throw DimensionError("MPS internal dimension exceeds the bond dimension");
        }
    }
    if (sites_.front()[0].rows() != 1 || sites_.back()[0].cols() != 1) {
        throw DimensionError("MPS boundary dimensions must be 1");
    }
}

void MpsState::canonicalize() {
    for (int i = 0; i + 1 < n_; ++i) {
        auto &site = sites_[static_cast<std::size_t>(i)];
        const Eigen::Index left = site[0].rows();
        const Eigen::Index right = site[0].cols();
        Matrix stacked(2 * left, right);
        stacked << site[0], site[1];
        Eigen::HouseholderQR<Matrix> qr(stacked);
        const Eigen::Index k = std::min(2 * left, right);
        Matrix q = qr.householderQ() * Matrix::Identity(2 * left, k);
        Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
        site[0] = q.topRows(left);
        site[1] = q.bottomRows(left);
        auto &next = sites_[static_cast<std::size_t>(i + 1)];
        next[0] = r * next[0];
        next[1] = r * next[1];
    }
    auto &last = sites_.back();
    const double norm = std::sqrt(last[0].squaredNorm() + last[1].squaredNorm());
    if (!(norm > 0.0)) {
        throw DomainError("MPS has zero norm");
    }
    last[0] /= norm;
    last[1] /= norm;
    left_canonical_ = true;
}

double MpsState::norm_squared() const {
    Matrix env = Matrix::Identity(1, 1);
    for (const auto &site : sites_) {
        env = site[0].adjoint() * env * site[0] + site[1].adjoint() * env * site[1];
    }
    return env(0, 0).real();
}

std::vector<Complex> MpsState::amplitudes() const {
    if (n_ > kMaxStatevectorQubits) {
        throw ResourceError("dense MPS contraction capped at n = " + std::to_string(kMaxStatevectorQubits));
    }
    const int half = n_ / 2;
    // Rows of `left` are prefixes over sites [0, half); bit i of the row index is site i.
    Matrix left = Matrix::Ones(1, 1);
    for (int i = 0; i < half; ++i) {
        const auto &site = sites_[static_cast<std::size_t>(i)];
        const Eigen::Index count = left.rows();
        Matrix grown(2 * count, site[0].cols());
        grown.topRows(count) = left * site[0];
        grown.bottomRows(count) = left * site[1];
        left = std::move(grown);
    }
    // Columns of `right` are suffixes over sites [half, n); bit (i - half) is site i.
    Matrix right = Matrix::Ones(1, 1);
    for (int i = n_ - 1; i >= half; --i) {
        const auto &site = sites_[static_cast<std::size_t>(i)];
        const Eigen::Index count = right.cols();
        Matrix grown(site[0].rows(), 2 * count);
        Matrix c0 = site[0] * right;
        Matrix c1 = site[1] * right;
        for (Eigen::Index j = 0; j < count; ++j) {
            grown.col(2 * j) = c0.col(j);
            grown.col(2 * j + 1) = c1.col(j);
        }
        right = std::move(grown);
    }
    // Column-major storage of left * right is exactly the outcome index low + (high << half).
    Matrix dense = left * right;
    return std::vector<Complex>(dense.data(), dense.data() + dense.size());
}

MpsState random_mps(int n, int chi, RandomStream &stream) {
    if (chi < 1) {
        throw DomainError("random_mps requires chi >= 1");
    }
    if (n < 1 || n > kMaxQubits) {
        throw DomainError("random_mps qubit count outside [1, " + std::to_string(kMaxQubits) + "]");
    }
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    std::vector<std::array<Matrix, 2>> sites;
    sites.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int left = mps_bond_dim(n, chi, i);
        const int right = mps_bond_dim(n, chi, i + 1);
        std::array<Matrix, 2> site{Matrix(left, right), Matrix(left, right)};
        for (auto &m : site) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                for (Eigen::Index r = 0; r < m.rows(); ++r) {
                    const double re = gauss(stream);
                    const double im = gauss(stream);
                    m(r, c) = Complex(re, im);
                }
            }
        }
        sites.push_back(std::move(site));
    }
    MpsState state(n, chi, std::move(sites));
    state.canonicalize();
    return state;
}

double mps_probability(const MpsState &state, const BitString &x) {
    if (x.n() != state.n()) {
        throw DimensionError("mps_probability: bitstring has the wrong qubit count");
    }
    Eigen::RowVectorXcd v = Eigen::RowVectorXcd::Ones(1);
    for (int i = 0; i < state.n(); ++i) {
        v = v * state.sites()[static_cast<std::size_t>(i)][static_cast<std::size_t>(x.bit(i + 1))];
    }
    return std::norm(v(0));
}

ProbVector mps_prob_vector(const MpsState &state) {
    const auto amps = state.amplitudes();
    std::vector<double> p(amps.size());
    std::transform(amps.begin(), amps.end(), p.begin(), [](const Complex &a) { return std::norm(a); });
    return validate_prob_vector(std::move(p), state.n());
}

SampleSet mps_sample(const MpsState &state, RandomStream &stream, std::size_t count) {
    if (!state.left_canonical()) {
        throw DomainError("mps_sample requires a left-canonical state");
    }
    SampleSet out;
    out.n = state.n();
    out.family = "mps";
    out.seed = stream.master_seed();
    out.outcomes.reserve(count);
    for (std::size_t s = 0; s < count; ++s) {
        Eigen::VectorXcd w = Eigen::VectorXcd::Ones(1);
        std::uint64_t x = 0;
        for (int i = state.n() - 1; i >= 0; --i) {
            const auto &site = state.sites()[static_cast<std::size_t>(i)];
            Eigen::VectorXcd c0 = site[0] * w;
            Eigen::VectorXcd c1 = site[1] * w;
            const double p0 = c0.squaredNorm();
            const double p1 = c1.squaredNorm();
            const bool one = stream.uniform() * (p0 + p1) >= p0;
            if (one) {
                x |= std::uint64_t{1} << i;
                w = c1 / std::sqrt(p1);
            } else {
                w = c0 / std::sqrt(p0);
            }
        }
        out.outcomes.push_back(x);
    }
    return out;
}

}  // namespace bornstat
