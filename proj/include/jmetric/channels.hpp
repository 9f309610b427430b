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

// Linear maps on M_n between two indefinite metrics: Kraus J-maps, their
// superoperator and Choi forms, complete J-positivity, admissibility, trace
// preservation, block lifts, and indefinite representations.
//
// Conventions
//   vec(A) stacks columns: vec(A)[i + j n] = A(i, j).
//   A Superoperator S acts by vec(Psi(A)) = S vec(A).
//   Choi(Phi) = sum_ij E_ij (x) Phi(E_ij), basis E_ij taken row then column;
//   entry (i n + r, j n + c) is Phi(E_ij)(r, c).
//   Ordinary completely positive maps are written Phi(A) = sum K* A K, the
//   J-twisted ones Psi(A) = sum V^flat A V with V^flat = J2 V* J1.

#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jmetric/metric.hpp"
#include "jmetric/states.hpp"

namespace jmetric {

inline Vector vec(const Matrix& a) {
    const Eigen::Index n = a.rows();
    Vector v(n * a.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j) v.segment(j * n, n) = a.col(j);
    return v;
}

inline Matrix unvec(const Vector& v, Eigen::Index n) {
    if (v.size() != n * n) throw Error("shape", "vector length is not n^2");
    Matrix a(n, n);
    for (Eigen::Index j = 0; j < n; ++j) a.col(j) = v.segment(j * n, n);
    return a;
}

inline Matrix basis_matrix(Eigen::Index n, Eigen::Index i, Eigen::Index j) {
    Matrix e = Matrix::Zero(n, n);
    e(i, j) = 1.0;
    return e;
}

/// Matrix representation of a linear map M_n -> M_n.
class Superoperator {
public:
    Superoperator(Matrix matrix, Eigen::Index n) : matrix_(std::move(matrix)), n_(n) {
        if (n_ < 1 || matrix_.rows() != n_ * n_ || matrix_.cols() != n_ * n_) {
            throw Error("shape", "superoperator must be n^2 x n^2");
        }
    }

    /// Tabulates `map` on the basis E_ij.
    template <typename Map>
    static Superoperator from_map(Eigen::Index n, Map&& map) {
        Matrix s(n * n, n * n);
        for (Eigen::Index j = 0; j < n; ++j) {
            for (Eigen::Index i = 0; i < n; ++i) {
                const Matrix image = map(basis_matrix(n, i, j));
                if (image.rows() != n || image.cols() != n) throw Error("shape", "map changes dimension");
                s.col(i + j * n) = vec(image);
            }
        }
        return Superoperator(std::move(s), n);
    }

    static Superoperator identity(Eigen::Index n) { return Superoperator(Matrix::Identity(n * n, n * n), n); }

    /// A -> A^T.
    static Superoperator transpose(Eigen::Index n) {
        return from_map(n, [](const Matrix& a) -> Matrix { return a.transpose(); });
    }

    Matrix apply(const Matrix& a) const {
        if (a.rows() != n_ || a.cols() != n_) throw Error("shape", "input does not match superoperator");
        return unvec(matrix_ * vec(a), n_);
    }

    Matrix operator()(const Matrix& a) const { return apply(a); }

    const Matrix& matrix() const noexcept { return matrix_; }
    Eigen::Index base_dim() const noexcept { return n_; }

private:
    Matrix matrix_;
    Eigen::Index n_;
};

/// Psi(A) = sum_i V_i^flat A V_i with V^flat = J2 V* J1.
class KrausJMap {
public:
    KrausJMap(std::vector<Matrix> kraus, FundamentalSymmetry j1, FundamentalSymmetry j2)
        : kraus_(std::move(kraus)), j1_(std::move(j1)), j2_(std::move(j2)) {
        if (kraus_.empty()) throw Error("shape", "a Kraus J-map needs at least one operator");
        require_dim(j1_, j2_);
        for (const Matrix& v : kraus_) require_dim(v, j1_);
    }

    KrausJMap(std::vector<Matrix> kraus, const FundamentalSymmetry& j) : KrausJMap(std::move(kraus), j, j) {}

    const std::vector<Matrix>& kraus() const noexcept { return kraus_; }
    const FundamentalSymmetry& j1() const noexcept { return j1_; }
    const FundamentalSymmetry& j2() const noexcept { return j2_; }
    std::size_t kraus_rank() const noexcept { return kraus_.size(); }
    Eigen::Index dim() const noexcept { return j1_.dim(); }
    bool same_symmetry() const { return j1_.same_as(j2_); }

private:
    std::vector<Matrix> kraus_;
    FundamentalSymmetry j1_;
    FundamentalSymmetry j2_;
};

inline Matrix apply_kraus(const KrausJMap& m, const Matrix& a) {
    require_dim(a, m.j1());
    Matrix out = Matrix::Zero(a.rows(), a.cols());
    for (const Matrix& v : m.kraus()) out += flat_adjoint(v, m.j1(), m.j2()) * a * v;
    return out;
}

inline Superoperator to_superoperator(const KrausJMap& m) {
    return Superoperator::from_map(m.dim(), [&](const Matrix& a) { return apply_kraus(m, a); });
}

/// Phi(A) = J2 Psi(J1 A): the ordinary map behind a J-map.
inline Superoperator to_ordinary(const Superoperator& psi, const FundamentalSymmetry& j1,
                                 const FundamentalSymmetry& j2) {
    require_dim(j1, j2);
    if (psi.base_dim() != j1.dim()) throw Error("shape", "superoperator and symmetry dimensions differ");
    return Superoperator::from_map(psi.base_dim(),
                                   [&](const Matrix& a) -> Matrix { return j2.matrix() * psi.apply(j1.matrix() * a); });
}

inline Superoperator to_ordinary(const KrausJMap& m) { return to_ordinary(to_superoperator(m), m.j1(), m.j2()); }

/// Psi(A) = J2 Phi(J1 A). Inverse of to_ordinary since J^2 = I.
inline Superoperator from_ordinary(const Superoperator& phi, const FundamentalSymmetry& j1,
                                   const FundamentalSymmetry& j2) {
    return to_ordinary(phi, j1, j2);
}

struct ChoiMatrix {
    Matrix matrix;  // n^2 x n^2
    Eigen::Index n = 0;
};

inline ChoiMatrix choi_matrix(const Superoperator& phi) {
    const Eigen::Index n = phi.base_dim();
    const Matrix& s = phi.matrix();
    Matrix c(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            for (Eigen::Index r = 0; r < n; ++r) {
                for (Eigen::Index col = 0; col < n; ++col) c(i * n + r, j * n + col) = s(r + col * n, i + j * n);
            }
        }
    }
    return {std::move(c), n};
}

struct CompletePositivity {
    bool pass = false;
    double min_choi_eig = 0.0;
};

/// Certifies complete J-positivity of psi through the Choi matrix of its
/// ordinary map J2 psi(J1 .).
inline CompletePositivity is_completely_jpositive(const Superoperator& psi, const FundamentalSymmetry& j1,
                                                  const FundamentalSymmetry& j2, double tol = kDefaultTol) {
    const ChoiMatrix choi = choi_matrix(to_ordinary(psi, j1, j2));
    const bool hermitian = is_hermitian(choi.matrix, tol);
    const RealVector ev = eig_hermitian(choi.matrix, kInfinity).eigenvalues;
    return {hermitian && ev(0) >= -tol * tol_scale(choi.matrix), ev(0)};
}

/// Minimal Kraus J-form of a completely J-positive superoperator. Choi
/// eigenvalues below tol * (largest eigenvalue) are discarded.
inline KrausJMap kraus_from_superoperator(const Superoperator& psi, const FundamentalSymmetry& j1,
                                          const FundamentalSymmetry& j2, double tol = kDefaultTol) {
    const CompletePositivity cp = is_completely_jpositive(psi, j1, j2, tol);
    if (!cp.pass) {
        throw Error("not-completely-jpositive", "Choi matrix has eigenvalue " + std::to_string(cp.min_choi_eig));
    }
    const ChoiMatrix choi = choi_matrix(to_ordinary(psi, j1, j2));
    const HermitianEig eig = eig_hermitian(choi.matrix, kInfinity);
    const Eigen::Index m = eig.eigenvalues.size();
    const double top = eig.eigenvalues(m - 1);
    std::vector<Matrix> kraus;
    for (Eigen::Index i = m - 1; i >= 0; --i) {
        const double mu = eig.eigenvalues(i);
        if (top <= 0.0 || mu < tol * top) break;
        // Choi = sum mu w w*, each w = vec(L) with Phi(A) = sum L A L*, so K = L*.
        kraus.push_back(std::sqrt(mu) * unvec(eig.eigenvectors.col(i), choi.n).adjoint());
    }
    if (kraus.empty()) kraus.push_back(Matrix::Zero(choi.n, choi.n));
    return KrausJMap(std::move(kraus), j1, j2);
}

/// Numerical rank of a Choi matrix with the same cut as kraus_from_superoperator.
inline std::size_t choi_rank(const ChoiMatrix& choi, double tol = kDefaultTol) {
    const RealVector ev = eig_hermitian(choi.matrix, kInfinity).eigenvalues;
    const double top = ev(ev.size() - 1);
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (top > 0.0 && ev(i) >= tol * top) ++rank;
    }
    return rank;
}

struct ResidualVerdict {
    bool pass = false;
    double residual = 0.0;
};

/// Same symmetry: sum V J V^natural = J (equivalently sum V V* = I).
/// Two symmetries: sum V^flat V = I.
inline ResidualVerdict is_admissible(const KrausJMap& m, double tol = kDefaultTol) {
    const Eigen::Index n = m.dim();
    Matrix acc = Matrix::Zero(n, n);
    double r = 0.0;
    if (m.same_symmetry()) {
        const Matrix& j = m.j1().matrix();
        for (const Matrix& v : m.kraus()) acc += v * j * j_adjoint(v, m.j1());
        r = (acc - j).norm();
    } else {
        for (const Matrix& v : m.kraus()) acc += flat_adjoint(v, m.j1(), m.j2()) * v;
        r = (acc - identity(n)).norm();
    }
    return {r <= tol, r};
}

struct TracePreservation {
    bool pass = false;
    double residual = 0.0;  // ||sum V V^natural - I||
    bool direct_pass = false;
    double direct_residual = 0.0;  // max_ij |Tr Psi(E_ij) - delta_ij|
};

namespace detail {
inline double basis_trace_defect(const KrausJMap& m) {
    const Eigen::Index n = m.dim();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const Complex expected = i == j ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(apply_kraus(m, basis_matrix(n, i, j)).trace() - expected));
        }
    }
    return worst;
}
}  // namespace detail

/// Psi itself preserves traces iff sum V V^natural = I (same symmetry only).
inline TracePreservation is_trace_preserving(const KrausJMap& m, double tol = kDefaultTol) {
    if (!m.same_symmetry()) throw Error("mixed-symmetry", "natural-adjoint criterion needs J1 = J2");
    const Eigen::Index n = m.dim();
    Matrix acc = Matrix::Zero(n, n);
    for (const Matrix& v : m.kraus()) acc += v * j_adjoint(v, m.j1());
    TracePreservation out;
    out.residual = (acc - identity(n)).norm();
    out.pass = out.residual <= tol;
    out.direct_residual = detail::basis_trace_defect(m);
    out.direct_pass = out.direct_residual <= tol;
    return out;
}

/// Trace preservation for two symmetries: Tr(sum V^flat A V) = Tr(A sum V V^flat),
/// so the criterion is sum V V^flat = I.
inline TracePreservation is_flat_trace_preserving(const KrausJMap& m, double tol = kDefaultTol) {
    const Eigen::Index n = m.dim();
    Matrix acc = Matrix::Zero(n, n);
    for (const Matrix& v : m.kraus()) acc += v * flat_adjoint(v, m.j1(), m.j2());
    TracePreservation out;
    out.residual = (acc - identity(n)).norm();
    out.pass = out.residual <= tol;
    out.direct_residual = detail::basis_trace_defect(m);
    out.direct_pass = out.direct_residual <= tol;
    return out;
}

inline constexpr int kMaxBlockLift = 4;

/// Block-diagonal diag(J, ..., J) on C^{kn}.
inline FundamentalSymmetry lift_symmetry(const FundamentalSymmetry& j, int k) {
    if (k < 1 || k > kMaxBlockLift) throw Error("k-out-of-range", "k = " + std::to_string(k));
    const Eigen::Index n = j.dim();
    Matrix big = Matrix::Zero(k * n, k * n);
    for (int b = 0; b < k; ++b) big.block(b * n, b * n, n, n) = j.matrix();
    return FundamentalSymmetry::from_matrix(big);
}

/// Psi^k acting blockwise on kn x kn matrices.
inline Superoperator block_lift(const Superoperator& psi, int k) {
    if (k < 1 || k > kMaxBlockLift) throw Error("k-out-of-range", "k = " + std::to_string(k));
    const Eigen::Index n = psi.base_dim();
    return Superoperator::from_map(k * n, [&](const Matrix& c) {
        Matrix out(k * n, k * n);
        for (int bi = 0; bi < k; ++bi) {
            for (int bj = 0; bj < k; ++bj) out.block(bi * n, bj * n, n, n) = psi.apply(c.block(bi * n, bj * n, n, n));
        }
        return out;
    });
}

/// Definitional check of one block level: every input must be J1^k-positive,
/// and the verdict says whether every image is J2^k-positive.
inline JPositivity block_lift_positivity(const Superoperator& psi, const FundamentalSymmetry& j1,
                                         const FundamentalSymmetry& j2, int k, std::span<const Matrix> inputs,
                                         double tol = kDefaultTol) {
    const Superoperator lifted = block_lift(psi, k);
    const FundamentalSymmetry big1 = lift_symmetry(j1, k);
    const FundamentalSymmetry big2 = lift_symmetry(j2, k);
    JPositivity out{true, kInfinity};
    for (const Matrix& c : inputs) {
        if (!is_j_positive(c, big1, tol).is_j_positive) throw Error("not-j-positive", "block-lift input");
        const JPositivity image = is_j_positive(lifted.apply(c), big2, tol);
        out.is_j_positive = out.is_j_positive && image.is_j_positive;
        out.min_eig = std::min(out.min_eig, image.min_eig);
    }
    return out;
}

/// V_s = sqrt(mu_s) U_s under (J, J): the J-twist of a random unitary channel.
inline KrausJMap random_unitary_jchannel(std::span<const double> weights, std::span<const Matrix> unitaries,
                                         const FundamentalSymmetry& j, double tol = kDefaultTol) {
    if (weights.empty() || weights.size() != unitaries.size()) throw Error("bad-weights", "one weight per unitary");
    double total = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw Error("bad-weights", "weights must be positive");
        total += w;
    }
    if (std::abs(total - 1.0) > tol) throw Error("bad-weights", "weights sum to " + std::to_string(total));
    std::vector<Matrix> kraus;
    for (std::size_t s = 0; s < weights.size(); ++s) {
        require_dim(unitaries[s], j);
        if (!is_unitary(unitaries[s], tol)) throw Error("not-unitary", "term " + std::to_string(s));
        kraus.push_back(std::sqrt(weights[s]) * unitaries[s]);
    }
    return KrausJMap(std::move(kraus), j);
}

/// Psi(A) = J2 (J1 A)^T; not completely J-positive for n >= 2.
inline Superoperator twisted_transpose(const FundamentalSymmetry& j1, const FundamentalSymmetry& j2) {
    return from_ordinary(Superoperator::transpose(j1.dim()), j1, j2);
}

enum class RepresentationKind {
    indefinite,              // pi(A J1 B) = pi(A) J2 pi(B), pi(A^nat1) = pi(A)^nat2
    ordinary,                // pi(AB) = pi(A) pi(B), pi(A*) = pi(A)*
    ordinary_with_symmetry,  // ordinary plus pi(J1) = J2
};

struct RepresentationFailure {
    std::string identity;  // "product", "adjoint" or "symmetry"
    Eigen::Index a_row = 0, a_col = 0, b_row = 0, b_col = 0;
};

struct RepresentationCheck {
    bool pass = false;
    double max_residual = 0.0;
    std::optional<RepresentationFailure> first_failure;
};

/// Checks the representation identities on every pair of basis matrices.
inline RepresentationCheck check_representation(const Superoperator& pi, const FundamentalSymmetry& j1,
                                                const FundamentalSymmetry& j2,
                                                RepresentationKind kind = RepresentationKind::indefinite,
                                                double tol = kDefaultTol) {
    require_dim(j1, j2);
    const Eigen::Index n = pi.base_dim();
    if (n != j1.dim()) throw Error("shape", "representation and symmetry dimensions differ");
    const bool indefinite = kind == RepresentationKind::indefinite;
    const Matrix middle1 = indefinite ? j1.matrix() : identity(n);
    const Matrix middle2 = indefinite ? j2.matrix() : identity(n);

    std::vector<Matrix> images;
    images.reserve(static_cast<std::size_t>(n * n));
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) images.push_back(pi.apply(basis_matrix(n, i, j)));
    }
    const auto image_of = [&](Eigen::Index i, Eigen::Index j) -> const Matrix& {
        return images[static_cast<std::size_t>(i + j * n)];
    };

    RepresentationCheck out{true, 0.0, std::nullopt};
    const auto record = [&](double r, RepresentationFailure where) {
        out.max_residual = std::max(out.max_residual, r);
        if (r > tol && out.pass) {
            out.pass = false;
            out.first_failure = std::move(where);
        }
    };

    for (Eigen::Index ai = 0; ai < n; ++ai) {
        for (Eigen::Index aj = 0; aj < n; ++aj) {
            const Matrix a = basis_matrix(n, ai, aj);
            for (Eigen::Index bi = 0; bi < n; ++bi) {
                for (Eigen::Index bj = 0; bj < n; ++bj) {
                    const Matrix b = basis_matrix(n, bi, bj);
                    const Matrix lhs = pi.apply(a * middle1 * b);
                    const Matrix rhs = image_of(ai, aj) * middle2 * image_of(bi, bj);
                    record((lhs - rhs).norm(), {"product", ai, aj, bi, bj});
                }
            }
            const Matrix lhs = indefinite ? pi.apply(j_adjoint(a, j1)) : pi.apply(a.adjoint());
            const Matrix rhs = indefinite ? j_adjoint(image_of(ai, aj), j2) : Matrix(image_of(ai, aj).adjoint());
            record((lhs - rhs).norm(), {"adjoint", ai, aj, 0, 0});
        }
    }
    if (kind == RepresentationKind::ordinary_with_symmetry) {
        record((pi.apply(j1.matrix()) - j2.matrix()).norm(), {"symmetry", 0, 0, 0, 0});
    }
    return out;
}

/// Psi(A) = J2 V* pi(J1 A) V for an ordinary representation pi.
inline Superoperator stinespring_map(const Superoperator& pi, const Matrix& v, const FundamentalSymmetry& j1,
                                     const FundamentalSymmetry& j2, double tol = kDefaultTol) {
    require_dim(v, j1);
    const RepresentationCheck rep = check_representation(pi, j1, j2, RepresentationKind::ordinary, tol);
    if (!rep.pass) {
        throw Error("not-a-representation", "pi fails the " + rep.first_failure->identity + " identity");
    }
    return Superoperator::from_map(pi.base_dim(), [&](const Matrix& a) -> Matrix {
        return j2.matrix() * v.adjoint() * pi.apply(j1.matrix() * a) * v;
    });
}

}  // namespace jmetric
