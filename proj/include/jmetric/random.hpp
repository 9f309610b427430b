// Copyright 2026 The jmetric Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded random matrices, symmetries, states and channels. Sampling goes
// through raw mt19937_64 output so results do not depend on the standard
// library's distribution implementations.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "jmetric/channels.hpp"
#include "jmetric/metric.hpp"
#include "jmetric/states.hpp"

namespace jmetric {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal by Box-Muller.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    int integer(int lo, int hi) {
        return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline Matrix random_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    Matrix a(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = rng.normal();
            const double im = rng.normal();
            a(i, j) = Complex(re, im);
        }
    }
    return a;
}

inline Matrix random_gaussian(Rng& rng, Eigen::Index n) { return random_gaussian(rng, n, n); }

/// Modified Gram-Schmidt on a complex Gaussian matrix.
inline Matrix random_unitary(Rng& rng, Eigen::Index n) {
    Matrix q = random_gaussian(rng, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index i = 0; i < k; ++i) {
            const Complex r = q.col(i).dot(q.col(k));
            q.col(k) -= r * q.col(i);
        }
        q.col(k) /= q.col(k).norm();
    }
    return q;
}

inline Matrix random_hermitian(Rng& rng, Eigen::Index n) {
    const Matrix g = random_gaussian(rng, n);
    return 0.5 * (g + g.adjoint());
}

/// U diag(I_p, -I_q) U* for a random unitary U.
inline FundamentalSymmetry random_symmetry(Rng& rng, int p, int q) {
    const Matrix u = random_unitary(rng, p + q);
    const Matrix d = FundamentalSymmetry::from_signature(p, q).matrix();
    const Matrix j = u * d * u.adjoint();
    return FundamentalSymmetry::from_matrix(0.5 * (j + j.adjoint()));
}

/// Random signature p + q = n with q >= 1 whenever n >= 2, then a random unitary frame.
inline FundamentalSymmetry random_symmetry(Rng& rng, Eigen::Index n) {
    const int size = static_cast<int>(n);
    const int p = size == 1 ? 1 : rng.integer(1, size - 1);
    return random_symmetry(rng, p, size - p);
}

/// J-selfadjoint matrix J H for a random Hermitian H.
inline Matrix random_j_selfadjoint(Rng& rng, const FundamentalSymmetry& j) {
    return j.matrix() * random_hermitian(rng, j.dim());
}

/// J-positive matrix J C*C.
inline Matrix random_j_positive(Rng& rng, const FundamentalSymmetry& j) {
    const Matrix c = random_gaussian(rng, j.dim());
    return j.matrix() * c.adjoint() * c;
}

/// B = J C*C / Tr(C*C), a unitary-origin J-state.
inline JState random_jstate(Rng& rng, const FundamentalSymmetry& j) {
    const Matrix c = random_gaussian(rng, j.dim());
    const Matrix rho = c.adjoint() * c;
    return make_jstate(j.matrix() * rho / rho.trace().real(), j, Origin::unitary);
}

/// Gaussian K_i rescaled as K_i <- S^{-1/2} K_i with S = sum K K*, so sum K K* = I
/// and Phi(A) = sum K* A K is trace preserving.
inline std::vector<Matrix> random_cptp_kraus(Rng& rng, Eigen::Index n, int count) {
    std::vector<Matrix> k;
    Matrix s = Matrix::Zero(n, n);
    for (int i = 0; i < count; ++i) {
        k.push_back(random_gaussian(rng, n));
        s += k.back() * k.back().adjoint();
    }
    const HermitianEig eig = eig_hermitian(0.5 * (s + s.adjoint()), kInfinity);
    const RealVector inv_sqrt = eig.eigenvalues.cwiseSqrt().cwiseInverse();
    const Matrix s_inv_sqrt = eig.eigenvectors * inv_sqrt.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
    for (Matrix& m : k) m = s_inv_sqrt * m;
    return k;
}

/// The J-twist V_i = K_i of a random CPTP map; admissible under (J, J).
inline KrausJMap random_lifted_channel(Rng& rng, const FundamentalSymmetry& j, int count) {
    return KrausJMap(random_cptp_kraus(rng, j.dim(), count), j);
}

}  // namespace jmetric
