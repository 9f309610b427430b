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

// Fundamental symmetries J (J* = J, J^2 = I), the indefinite inner product
// [x, y] = <Jx, y>, the J-adjoint and the two-metric adjoint, and the cone of
// J-positive matrices.

#pragma once

#include <string>

#include "jmetric/linalg.hpp"

namespace jmetric {

/// A validated fundamental symmetry with its signature (p, q): p eigenvalues
/// equal to +1 and q equal to -1.
class FundamentalSymmetry {
public:
    /// J = diag(+1 x p, -1 x q).
    static FundamentalSymmetry from_signature(int p, int q) {
        if (p < 0 || q < 0) throw Error("shape", "negative signature entry");
        if (p + q == 0) throw Error("empty", "signature (0, 0) has no dimension");
        Matrix j = Matrix::Zero(p + q, p + q);
        for (int i = 0; i < p + q; ++i) j(i, i) = i < p ? 1.0 : -1.0;
        return FundamentalSymmetry(std::move(j), p, q);
    }

    /// J = 2P - I for an orthogonal projector P.
    static FundamentalSymmetry from_projector(const Matrix& projector) {
        require_square(projector, "projector");
        const double tol = 1e-9 * tol_scale(projector);
        if ((projector - projector.adjoint()).norm() > tol ||
            (projector * projector - projector).norm() > tol) {
            throw Error("not-projector", "P must satisfy P = P* = P^2");
        }
        return from_matrix(2.0 * projector - identity(projector.rows()));
    }

    /// Validates J* = J and J^2 = I within 1e-12 (relative to n), then reads
    /// the signature off the eigenvalues.
    static FundamentalSymmetry from_matrix(const Matrix& j) {
        require_square(j, "symmetry");
        require_finite(j);
        const Eigen::Index n = j.rows();
        const double tol = 1e-12 * static_cast<double>(n);
        if ((j - j.adjoint()).norm() > tol) throw Error("not-fundamental-symmetry", "J is not self-adjoint");
        if ((j * j - identity(n)).norm() > tol) throw Error("not-fundamental-symmetry", "J^2 != I");
        const RealVector ev = eig_hermitian(j).eigenvalues;
        int p = 0;
        int q = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(ev(i) - 1.0) < 0.5) ++p;
            else if (std::abs(ev(i) + 1.0) < 0.5) ++q;
        }
        if (p + q != n) throw Error("not-fundamental-symmetry", "eigenvalues are not +-1");
        return FundamentalSymmetry(0.5 * (j + j.adjoint()), p, q);
    }

    const Matrix& matrix() const noexcept { return j_; }
    Eigen::Index dim() const noexcept { return j_.rows(); }
    int p() const noexcept { return p_; }
    int q() const noexcept { return q_; }

    /// P+ = (I + J)/2 and P- = (I - J)/2.
    Matrix positive_projector() const { return 0.5 * (identity(dim()) + j_); }
    Matrix negative_projector() const { return 0.5 * (identity(dim()) - j_); }

    bool same_as(const FundamentalSymmetry& other, double tol = 1e-12) const {
        return dim() == other.dim() && (j_ - other.j_).norm() <= tol;
    }

    FundamentalSymmetry negated() const { return FundamentalSymmetry(-j_, q_, p_); }

private:
    FundamentalSymmetry(Matrix j, int p, int q) : j_(std::move(j)), p_(p), q_(q) {}

    Matrix j_;
    int p_;
    int q_;
};

inline void require_dim(const Matrix& a, const FundamentalSymmetry& j) {
    if (a.rows() != j.dim() || a.cols() != j.dim()) {
        throw Error("shape", "matrix is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                 ", symmetry is " + std::to_string(j.dim()));
    }
}

inline void require_dim(const FundamentalSymmetry& j1, const FundamentalSymmetry& j2) {
    if (j1.dim() != j2.dim()) throw Error("shape", "symmetries act on different dimensions");
}

/// [x, y] = <Jx, y> = y* J x, linear in x.
inline Complex indefinite_inner(const Vector& x, const Vector& y, const FundamentalSymmetry& j) {
    if (x.size() != j.dim() || y.size() != j.dim()) throw Error("shape", "vector dimension mismatch");
    return y.dot(j.matrix() * x);
}

/// A^natural = J A* J, the adjoint with respect to [., .].
inline Matrix j_adjoint(const Matrix& a, const FundamentalSymmetry& j) {
    require_dim(a, j);
    return j.matrix() * a.adjoint() * j.matrix();
}

/// A^flat = J2 A* J1, so that [Ax, y]_1 = [x, A^flat y]_2.
inline Matrix flat_adjoint(const Matrix& a, const FundamentalSymmetry& j1, const FundamentalSymmetry& j2) {
    require_dim(j1, j2);
    require_dim(a, j1);
    return j2.matrix() * a.adjoint() * j1.matrix();
}

inline bool is_j_selfadjoint(const Matrix& a, const FundamentalSymmetry& j, double tol = kDefaultTol) {
    require_dim(a, j);
    return (a - j_adjoint(a, j)).norm() <= tol * tol_scale(a);
}

struct JPositivity {
    bool is_j_positive = false;
    double min_eig = 0.0;  // smallest eigenvalue of the Hermitian part of JA
};

/// A is J-positive iff [Ax, x] = <JAx, x> >= 0 for all x, i.e. JA is PSD.
inline JPositivity is_j_positive(const Matrix& a, const FundamentalSymmetry& j, double tol = kDefaultTol) {
    require_dim(a, j);
    const Matrix ja = j.matrix() * a;
    const bool hermitian = is_hermitian(ja, tol);
    const RealVector ev = eig_hermitian(ja, kInfinity).eigenvalues;
    JPositivity out;
    out.min_eig = ev(0);
    out.is_j_positive = hermitian && out.min_eig >= -tol * tol_scale(ja);
    return out;
}

/// B with A = B^natural J B, taken as the PSD square root of JA.
inline Matrix j_positive_factor(const Matrix& a, const FundamentalSymmetry& j, double tol = kDefaultTol) {
    if (!is_j_positive(a, j, tol).is_j_positive) throw Error("not-j-positive", "JA is not PSD");
    return sqrt_psd(j.matrix() * a, tol);
}

struct JordanSplit {
    Matrix positive_part;  // T+
    Matrix negative_part;  // T-
};

/// T = T+ - T- with T+, T- J-positive, built from the nonnegative and
/// negative spectral subspaces of JT. Zero eigenvalues go to T+.
inline JordanSplit jordan_split(const Matrix& t, const FundamentalSymmetry& j, double tol = kDefaultTol) {
    require_dim(t, j);
    if (!is_j_selfadjoint(t, j, tol)) throw Error("not-j-selfadjoint", "T != J T* J");
    const HermitianEig eig = eig_hermitian(j.matrix() * t, kInfinity);
    const Eigen::Index n = t.rows();
    RealVector pos = RealVector::Zero(n);
    RealVector neg = RealVector::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (eig.eigenvalues(i) >= 0.0) pos(i) = eig.eigenvalues(i);
        else neg(i) = -eig.eigenvalues(i);
    }
    const Matrix& v = eig.eigenvectors;
    const Matrix a_pos = v * pos.cast<Complex>().asDiagonal() * v.adjoint();
    const Matrix a_neg = v * neg.cast<Complex>().asDiagonal() * v.adjoint();
    return {j.matrix() * a_pos, j.matrix() * a_neg};
}

/// Theta(A) = Tr(JA), the canonical J-positive functional.
inline Complex trace_functional(const Matrix& a, const FundamentalSymmetry& j) {
    require_dim(a, j);
    return (j.matrix() * a).trace();
}

}  // namespace jmetric
