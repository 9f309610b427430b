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

// Dense complex-matrix kernel shared by every other module. Desk scale
// (n <= 16); all functions are pure and allocate their results.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "jmetric/error.hpp"

namespace jmetric {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Relative tolerance used wherever a caller does not pass one. Comparisons
/// scale it by max(1, ||A||) with ||A|| the max-row-sum norm.
inline constexpr double kDefaultTol = 1e-9;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// ------------------------------------------------------------ validation

inline void require_square(const Matrix& a, const char* what = "matrix") {
    if (a.rows() == 0 || a.rows() != a.cols()) {
        throw Error("shape", std::string(what) + " must be square and non-empty, got " +
                                 std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
}

inline void require_same_shape(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error("shape", std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
                                 std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
}

inline bool all_finite(const Matrix& a) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
        }
    }
    return true;
}

inline void require_finite(const Matrix& a) {
    if (!all_finite(a)) throw Error("non-finite", "matrix has NaN or infinite entries");
}

// ------------------------------------------------------------ norms

/// Max absolute row sum (induced infinity norm). Cheap upper bound on the
/// spectral norm within a factor sqrt(n).
inline double row_sum_norm(const Matrix& a) {
    double best = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) best = std::max(best, a.row(i).cwiseAbs().sum());
    return best;
}

inline double tol_scale(const Matrix& a) { return std::max(1.0, row_sum_norm(a)); }

/// Frobenius norm of a - b.
inline double residual(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b);
    return (a - b).norm();
}

// ------------------------------------------------------------ arithmetic

inline Matrix add(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b);
    return a + b;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw Error("shape", "cannot multiply " + std::to_string(a.rows()) + "x" +
                                 std::to_string(a.cols()) + " by " + std::to_string(b.rows()) +
                                 "x" + std::to_string(b.cols()));
    }
    return a * b;
}

inline Matrix adjoint(const Matrix& a) { return a.adjoint(); }

inline Complex trace(const Matrix& a) {
    require_square(a);
    return a.trace();
}

/// Matrix of z -> <z, y> x, i.e. x y^*.
inline Matrix outer(const Vector& x, const Vector& y) { return x * y.adjoint(); }

inline Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

inline bool is_hermitian(const Matrix& a, double tol = kDefaultTol) {
    return a.rows() == a.cols() && (a - a.adjoint()).norm() <= tol * tol_scale(a);
}

inline bool is_unitary(const Matrix& v, double tol = kDefaultTol) {
    if (v.rows() != v.cols()) return false;
    const Matrix id = identity(v.rows());
    return (v.adjoint() * v - id).norm() <= tol && (v * v.adjoint() - id).norm() <= tol;
}

// ------------------------------------------------------------ eigensolvers

namespace detail {

// Makes the first component with modulus above 1e-10 real and positive.
inline void fix_phase(Eigen::Ref<Vector> v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i));
        if (mag > 1e-10) {
            v *= std::conj(v(i)) / mag;
            v(i) = Complex(v(i).real(), 0.0);
            return;
        }
    }
}

inline void normalize_columns(Matrix& vecs) {
    for (Eigen::Index j = 0; j < vecs.cols(); ++j) {
        const double nrm = vecs.col(j).norm();
        if (nrm > 0.0) vecs.col(j) /= nrm;
        fix_phase(vecs.col(j));
    }
}

}  // namespace detail

struct HermitianEig {
    RealVector eigenvalues;  // ascending
    Matrix eigenvectors;     // orthonormal columns
};

/// Spectral decomposition of a Hermitian matrix. The Hermitian part is
/// decomposed, so the antihermitian residue allowed by `tol` is discarded.
inline HermitianEig eig_hermitian(const Matrix& a, double tol = kDefaultTol) {
    require_square(a);
    require_finite(a);
    const double skew = (a - a.adjoint()).norm();
    if (skew > tol * tol_scale(a)) {
        throw Error("not-hermitian", "||A - A*|| = " + std::to_string(skew));
    }
    const Matrix herm = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm);
    if (solver.info() != Eigen::Success) throw Error("no-convergence", "hermitian eigensolver");
    HermitianEig out{solver.eigenvalues(), solver.eigenvectors()};
    detail::normalize_columns(out.eigenvectors);
    return out;
}

struct GeneralEig {
    Vector eigenvalues;   // ascending by (real, imag)
    Matrix eigenvectors;  // unit-norm columns, not orthogonal in general
};

namespace detail {

inline Vector eigvec_2x2(const Matrix& a, Complex lambda) {
    const Complex b = a(0, 1);
    const Complex c = a(1, 0);
    const double tiny = 1e-14 * std::max(1.0, row_sum_norm(a));
    Vector v(2);
    if (std::abs(b) >= std::abs(c) && std::abs(b) > tiny) {
        v << b, lambda - a(0, 0);
    } else if (std::abs(c) > tiny) {
        v << lambda - a(1, 1), c;
    } else if (std::abs(lambda - a(0, 0)) <= std::abs(lambda - a(1, 1))) {
        v << 1.0, 0.0;
    } else {
        v << 0.0, 1.0;
    }
    return v;
}

inline GeneralEig eig_2x2(const Matrix& a) {
    const Complex half_gap = 0.5 * (a(0, 0) - a(1, 1));
    const Complex mean = 0.5 * (a(0, 0) + a(1, 1));
    const Complex root = std::sqrt(half_gap * half_gap + a(0, 1) * a(1, 0));
    GeneralEig out;
    out.eigenvalues.resize(2);
    out.eigenvalues << mean - root, mean + root;
    out.eigenvectors.resize(2, 2);
    out.eigenvectors.col(0) = eigvec_2x2(a, out.eigenvalues(0));
    out.eigenvectors.col(1) = eigvec_2x2(a, out.eigenvalues(1));
    // Diagonal input with equal entries: both branches pick e1.
    if (std::abs(a(0, 1)) == 0.0 && std::abs(a(1, 0)) == 0.0 && a(0, 0) == a(1, 1)) {
        out.eigenvectors << 1.0, 0.0, 0.0, 1.0;
    }
    return out;
}

// Sort by real part, then imaginary part; real parts closer than `eps` count
// as equal so rounding cannot reorder a conjugate pair.
inline void sort_spectrum(GeneralEig& eig) {
    const Eigen::Index n = eig.eigenvalues.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    double scale = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) scale = std::max(scale, std::abs(eig.eigenvalues(i)));
    const double eps = 1e-9 * scale;
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index l, Eigen::Index r) {
        return eig.eigenvalues(l).real() < eig.eigenvalues(r).real() - eps;
    });
    for (Eigen::Index start = 0; start < n;) {
        Eigen::Index stop = start + 1;
        while (stop < n && std::abs(eig.eigenvalues(order[stop]).real() -
                                    eig.eigenvalues(order[start]).real()) <= eps) {
            ++stop;
        }
        std::stable_sort(order.begin() + start, order.begin() + stop,
                         [&](Eigen::Index l, Eigen::Index r) {
                             return eig.eigenvalues(l).imag() < eig.eigenvalues(r).imag();
                         });
        start = stop;
    }
    GeneralEig sorted;
    sorted.eigenvalues.resize(n);
    sorted.eigenvectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        sorted.eigenvalues(i) = eig.eigenvalues(order[i]);
        sorted.eigenvectors.col(i) = eig.eigenvectors.col(order[i]);
    }
    eig = std::move(sorted);
}

}  // namespace detail

/// Eigenvalues and eigenvectors of a general square matrix. n <= 2 uses the
/// closed-form characteristic roots; larger inputs go through Hessenberg
/// reduction and shifted QR (complex Schur form).
inline GeneralEig eig_general(const Matrix& a) {
    require_square(a);
    require_finite(a);
    GeneralEig out;
    if (a.rows() == 1) {
        out.eigenvalues = Vector::Constant(1, a(0, 0));
        out.eigenvectors = Matrix::Identity(1, 1);
        return out;
    }
    if (a.rows() == 2) {
        out = detail::eig_2x2(a);
    } else {
        Eigen::ComplexEigenSolver<Matrix> solver(a, true);
        if (solver.info() != Eigen::Success) throw Error("no-convergence", "shifted QR iteration");
        out.eigenvalues = solver.eigenvalues();
        out.eigenvectors = solver.eigenvectors();
    }
    detail::normalize_columns(out.eigenvectors);
    detail::sort_spectrum(out);
    return out;
}

// ------------------------------------------------------------ norms, cones

/// Singular values, descending, from the eigenvalues of A*A.
inline RealVector singular_values(const Matrix& a) {
    const Matrix gram = a.adjoint() * a;
    const RealVector ev = eig_hermitian(gram, 1.0).eigenvalues;
    RealVector out(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        out(i) = std::sqrt(std::max(0.0, ev(ev.size() - 1 - i)));
    }
    return out;
}

/// Schatten p-norm; p = kInfinity gives the spectral norm.
inline double schatten_norm(const Matrix& a, double p) {
    if (!(p >= 1.0)) throw Error("invalid-p", "Schatten index must be >= 1, got " + std::to_string(p));
    const RealVector s = singular_values(a);
    if (std::isinf(p)) return s.size() ? s(0) : 0.0;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) sum += std::pow(s(i), p);
    return std::pow(sum, 1.0 / p);
}

inline double trace_norm(const Matrix& a) { return schatten_norm(a, 1.0); }
inline double operator_norm(const Matrix& a) { return schatten_norm(a, kInfinity); }

struct PsdVerdict {
    bool is_psd = false;
    double min_eig = 0.0;
};

inline PsdVerdict psd_check(const Matrix& a, double tol = kDefaultTol) {
    const RealVector ev = eig_hermitian(a, tol).eigenvalues;
    const double min_eig = ev(0);
    return {min_eig >= -tol * tol_scale(a), min_eig};
}

/// Hermitian PSD square root. Eigenvalues inside the tolerance band below
/// zero, and those at rounding level above it, are clamped to zero.
inline Matrix sqrt_psd(const Matrix& a, double tol = kDefaultTol) {
    if (!psd_check(a, tol).is_psd) throw Error("not-psd", "matrix has a negative eigenvalue");
    const HermitianEig eig = eig_hermitian(a, tol);
    const double top = eig.eigenvalues.cwiseAbs().maxCoeff();
    const double noise = static_cast<double>(a.rows()) * std::numeric_limits<double>::epsilon() * top;
    RealVector root(eig.eigenvalues.size());
    for (Eigen::Index i = 0; i < root.size(); ++i) {
        root(i) = eig.eigenvalues(i) <= noise ? 0.0 : std::sqrt(eig.eigenvalues(i));
    }
    return eig.eigenvectors * root.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
}

// ------------------------------------------------------------ exponential

/// exp(A) by scaling and squaring around a truncated Taylor series.
inline Matrix matrix_exp(const Matrix& a) {
    require_square(a);
    require_finite(a);
    const Eigen::Index n = a.rows();
    double col_norm = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) col_norm = std::max(col_norm, a.col(j).cwiseAbs().sum());
    int squarings = 0;
    if (col_norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(col_norm / 0.5)));
    const Matrix scaled = a / std::ldexp(1.0, squarings);

    Matrix sum = identity(n);
    Matrix term = identity(n);
    for (int k = 1; k <= 30; ++k) {
        term = term * scaled / static_cast<double>(k);
        sum += term;
        if (term.norm() <= 1e-18 * sum.norm()) break;
    }
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum;
}

}  // namespace jmetric
