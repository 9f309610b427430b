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

// J-states, pure J-states, J-effects, convex mixing and state automorphisms.

#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "jmetric/metric.hpp"

namespace jmetric {

/// Unitary origin: JB is a density matrix (Tr BJ = 1).
/// J-unitary origin: B is J-positive with Tr B = 1.
enum class Origin { unitary, j_unitary };

inline const char* to_string(Origin o) { return o == Origin::unitary ? "unitary" : "j-unitary"; }

inline constexpr double kStateTraceTol = 1e-9;

/// A validated J-state. Construct through make_jstate.
class JState {
public:
    const Matrix& matrix() const noexcept { return b_; }
    const FundamentalSymmetry& symmetry() const noexcept { return j_; }
    Origin origin() const noexcept { return origin_; }
    Eigen::Index dim() const noexcept { return b_.rows(); }

    /// JB, the ordinary positive matrix behind the state.
    Matrix ordinary() const { return j_.matrix() * b_; }

private:
    friend JState make_jstate(const Matrix&, const FundamentalSymmetry&, Origin, double);
    JState(Matrix b, FundamentalSymmetry j, Origin origin)
        : b_(std::move(b)), j_(std::move(j)), origin_(origin) {}

    Matrix b_;
    FundamentalSymmetry j_;
    Origin origin_;
};

inline JState make_jstate(const Matrix& b, const FundamentalSymmetry& j, Origin origin = Origin::unitary,
                          double tol = kDefaultTol) {
    require_dim(b, j);
    require_finite(b);
    const JPositivity pos = is_j_positive(b, j, tol);
    if (!pos.is_j_positive) {
        if (!is_hermitian(j.matrix() * b, tol)) throw Error("not-j-positive", "JB is not Hermitian");
        throw Error("not-j-positive", "min eigenvalue of JB is " + std::to_string(pos.min_eig));
    }
    const Complex tr = origin == Origin::unitary ? (b * j.matrix()).trace() : b.trace();
    if (std::abs(tr - 1.0) > kStateTraceTol) {
        throw Error("trace-violation", std::string(origin == Origin::unitary ? "Tr(BJ)" : "Tr(B)") +
                                           " = " + std::to_string(tr.real()) + "+" +
                                           std::to_string(tr.imag()) + "i");
    }
    return JState(b, j, origin);
}

/// Pi = (Je) e*, the pure J-state along the unit vector e.
inline JState pure_jstate(const Vector& e, const FundamentalSymmetry& j) {
    if (e.size() != j.dim()) throw Error("shape", "vector dimension mismatch");
    if (std::abs(e.norm() - 1.0) > 1e-10) throw Error("not-normalized", "||e|| = " + std::to_string(e.norm()));
    return make_jstate(outer(j.matrix() * e, e), j, Origin::unitary);
}

/// Rank one test on JB: the second-largest eigenvalue must not exceed tol.
inline bool is_pure(const JState& s, double tol = kDefaultTol) {
    if (s.dim() == 1) return true;
    const RealVector ev = eig_hermitian(s.ordinary(), kInfinity).eigenvalues;
    return ev(ev.size() - 2) <= tol;
}

struct SchmidtDecomposition {
    std::vector<double> weights;  // descending, each > tol
    std::vector<Vector> vectors;  // orthonormal e_i
};

/// B = sum_i w_i (J e_i) e_i*, from the spectral decomposition of JB.
inline SchmidtDecomposition schmidt_decompose(const JState& s, double tol = kDefaultTol) {
    const HermitianEig eig = eig_hermitian(s.ordinary(), kInfinity);
    SchmidtDecomposition out;
    for (Eigen::Index i = eig.eigenvalues.size() - 1; i >= 0; --i) {
        if (eig.eigenvalues(i) <= tol) continue;
        out.weights.push_back(eig.eigenvalues(i));
        out.vectors.emplace_back(eig.eigenvectors.col(i));
    }
    return out;
}

inline Matrix reconstruct(const SchmidtDecomposition& d, const FundamentalSymmetry& j) {
    Matrix b = Matrix::Zero(j.dim(), j.dim());
    for (std::size_t i = 0; i < d.weights.size(); ++i) b += d.weights[i] * outer(j.matrix() * d.vectors[i], d.vectors[i]);
    return b;
}

inline JState convex_mix(std::span<const JState> states, std::span<const double> weights) {
    if (states.empty() || states.size() != weights.size()) {
        throw Error("bad-weights", "need one weight per state");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw Error("bad-weights", "negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw Error("bad-weights", "weights sum to " + std::to_string(total));
    const JState& first = states.front();
    Matrix b = Matrix::Zero(first.dim(), first.dim());
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (!states[i].symmetry().same_as(first.symmetry())) {
            throw Error("symmetry-mismatch", "states carry different fundamental symmetries");
        }
        if (states[i].origin() != first.origin()) {
            throw Error("symmetry-mismatch", "states have different origins");
        }
        b += weights[i] * states[i].matrix();
    }
    return make_jstate(b, first.symmetry(), first.origin());
}

/// A J-effect E: JE is an ordinary effect, 0 <= JE <= I.
class JEffect {
public:
    const Matrix& matrix() const noexcept { return e_; }
    const FundamentalSymmetry& symmetry() const noexcept { return j_; }
    Matrix ordinary() const { return j_.matrix() * e_; }

private:
    friend JEffect make_jeffect(const Matrix&, const FundamentalSymmetry&, double);
    JEffect(Matrix e, FundamentalSymmetry j) : e_(std::move(e)), j_(std::move(j)) {}

    Matrix e_;
    FundamentalSymmetry j_;
};

inline JEffect make_jeffect(const Matrix& e, const FundamentalSymmetry& j, double tol = kDefaultTol) {
    require_dim(e, j);
    const Matrix je = j.matrix() * e;
    if (!is_hermitian(je, tol)) throw Error("not-j-effect", "JE is not Hermitian");
    const RealVector ev = eig_hermitian(je, kInfinity).eigenvalues;
    if (ev(0) < -tol || ev(ev.size() - 1) > 1.0 + tol) {
        throw Error("not-j-effect", "spectrum of JE leaves [0, 1]: [" + std::to_string(ev(0)) + ", " +
                                        std::to_string(ev(ev.size() - 1)) + "]");
    }
    return JEffect(e, j);
}

/// Tr((JE)(JB)): probability that effect E fires on state s.
inline double effect_probability(const JEffect& e, const JState& s) {
    if (!e.symmetry().same_as(s.symmetry())) throw Error("symmetry-mismatch", "effect and state differ in J");
    return (e.ordinary() * s.ordinary()).trace().real();
}

struct HolderCheck {
    double lhs = 0.0;    // |Tr(ST)|
    double bound = 0.0;  // ||S||_1 ||T||_inf
    bool holds = false;
};

inline HolderCheck holder_check(const Matrix& s, const Matrix& t) {
    require_same_shape(s, t);
    HolderCheck out;
    out.lhs = std::abs((s * t).trace());
    out.bound = trace_norm(s) * operator_norm(t);
    out.holds = out.lhs <= out.bound * (1.0 + 1e-12) + 1e-15;
    return out;
}

/// s_V(B) = V^natural B V for unitary V.
inline JState conjugation_automorphism(const Matrix& v, const JState& s, double tol = kDefaultTol) {
    require_dim(v, s.symmetry());
    if (!is_unitary(v, tol)) throw Error("not-unitary", "V*V != I");
    const Matrix& j = s.symmetry().matrix();
    return make_jstate(j * v.adjoint() * j * s.matrix() * v, s.symmetry(), s.origin());
}

namespace detail {
inline const Matrix& state_image(const Matrix& m) { return m; }
inline const Matrix& state_image(const JState& s) { return s.matrix(); }
}  // namespace detail

/// Linear extension of a state automorphism to J-selfadjoint T:
///   s~(T) = ||T+ J||_1 s(T+ / ||T+ J||_1) - ||T- J||_1 s(T- / ||T- J||_1).
/// Zero parts are skipped. `state_map` takes a JState and returns a JState or
/// a Matrix; the latter is validated as a unitary-origin state.
template <typename StateMap>
Matrix extend_automorphism(StateMap&& state_map, const Matrix& t, const FundamentalSymmetry& j,
                           double tol = kDefaultTol) {
    const JordanSplit split = jordan_split(t, j, tol);
    const double zero_cut = 1e-14 * tol_scale(t);
    Matrix out = Matrix::Zero(t.rows(), t.cols());
    const auto image = [&](const Matrix& part, double sign) {
        // T+- J = J A+- J is PSD, so its trace norm is its trace.
        const double weight = (part * j.matrix()).trace().real();
        if (weight <= zero_cut) return;
        const JState normalized = make_jstate(part / weight, j, Origin::unitary);
        Matrix mapped;
        try {
            mapped = detail::state_image(state_map(normalized));
            make_jstate(mapped, j, Origin::unitary);
        } catch (const Error& e) {
            throw Error("not-an-automorphism", std::string("image is not a J-state: ") + e.what());
        }
        out += sign * weight * mapped;
    };
    image(split.positive_part, 1.0);
    image(split.negative_part, -1.0);
    return out;
}

}  // namespace jmetric
