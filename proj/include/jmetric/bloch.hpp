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

// The 2x2 Bloch J-ball under J = diag(1, -1): state coordinates, J-observables,
// J-orthogonal spectral measurement, J-unitaries, and Lax-type evolution.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "jmetric/metric.hpp"
#include "jmetric/states.hpp"

namespace jmetric {

inline constexpr double kBallSlack = 1e-12;

/// diag(1, -1).
inline FundamentalSymmetry bloch_symmetry() { return FundamentalSymmetry::from_signature(1, 1); }

struct BlochPoint {
    double x0 = 0.0;
    double x1 = 0.0;
    double x2 = 0.0;

    double norm() const { return std::sqrt(x0 * x0 + x1 * x1 + x2 * x2); }
};

namespace detail {
inline void require_bloch_symmetry(const FundamentalSymmetry& j) {
    if (j.dim() != 2 || !j.same_as(bloch_symmetry())) throw Error("symmetry-mismatch", "expected J = diag(1, -1)");
}
}  // namespace detail

inline Matrix bloch_matrix(const BlochPoint& pt) {
    const Complex i(0.0, 1.0);
    Matrix s(2, 2);
    s << (1.0 + pt.x0) / 2.0, (pt.x2 - i * pt.x1) / 2.0,
        -(pt.x2 + i * pt.x1) / 2.0, -(1.0 - pt.x0) / 2.0;
    return s;
}

inline JState state_from_bloch(const BlochPoint& pt) {
    if (!std::isfinite(pt.norm())) throw Error("non-finite", "Bloch coordinates must be finite");
    if (pt.norm() > 1.0 + kBallSlack) throw Error("outside-ball", "||x|| = " + std::to_string(pt.norm()));
    return make_jstate(bloch_matrix(pt), bloch_symmetry(), Origin::unitary);
}

inline BlochPoint bloch_from_state(const JState& s, double tol = kDefaultTol) {
    detail::require_bloch_symmetry(s.symmetry());
    if (s.origin() != Origin::unitary) throw Error("not-bloch", "Bloch coordinates need a unitary-origin state");
    const Matrix& b = s.matrix();
    const Complex a = b(0, 0), bb = b(0, 1), c = b(1, 0), d = b(1, 1);
    const double defect = std::max({std::abs(a - d - 1.0), std::abs(c + std::conj(bb)), std::abs(a.imag()),
                                    std::abs(d.imag())});
    if (defect > tol) throw Error("not-bloch", "matrix is not of Bloch form, defect " + std::to_string(defect));
    BlochPoint pt;
    pt.x0 = (a + d).real();
    pt.x2 = bb.real() - c.real();
    pt.x1 = -(bb.imag() + c.imag());
    return pt;
}

/// (p1, p2) = ((1 + x0)/2, (x0 - 1)/2): the diagonal of S, so p1 - p2 = Tr(JS) = 1.
inline std::array<double, 2> generalized_probabilities(const JState& s) {
    const BlochPoint pt = bloch_from_state(s);
    return {(1.0 + pt.x0) / 2.0, (pt.x0 - 1.0) / 2.0};
}

/// Eigenvalues (x0 +- sqrt(1 - x1^2 - x2^2)) / 2 of S, larger first. They are
/// real on the ball and coincide with generalized_probabilities when x1 = x2 = 0.
inline std::array<double, 2> state_eigenvalues(const JState& s) {
    const BlochPoint pt = bloch_from_state(s);
    const double root = std::sqrt(std::max(0.0, 1.0 - pt.x1 * pt.x1 - pt.x2 * pt.x2));
    return {(pt.x0 + root) / 2.0, (pt.x0 - root) / 2.0};
}

/// Tr(P J A) for a J-density matrix P (JP >= 0, Tr JP = 1).
inline double ej_expectation(const Matrix& p, const Matrix& a, const FundamentalSymmetry& j,
                             double tol = kDefaultTol) {
    require_dim(p, j);
    require_dim(a, j);
    const Matrix jp = j.matrix() * p;
    if (!psd_check(jp, tol).is_psd || std::abs(jp.trace() - 1.0) > tol) {
        throw Error("invalid-j-density", "JP must be a density matrix");
    }
    return (p * j.matrix() * a).trace().real();
}

/// A = [[(y0 + y3)/2, (y2 + i y1)/2], [-(y2 - i y1)/2, (y0 - y3)/2]], J-selfadjoint for real y.
struct JObservable2 {
    double y0 = 0.0;
    double y1 = 0.0;
    double y2 = 0.0;
    double y3 = 0.0;

    Matrix matrix() const {
        const Complex i(0.0, 1.0);
        Matrix a(2, 2);
        a << (y0 + y3) / 2.0, (y2 + i * y1) / 2.0,
            -(y2 - i * y1) / 2.0, (y0 - y3) / 2.0;
        return a;
    }

    /// y3^2 - y1^2 - y2^2; positive means two distinct real outcomes.
    double discriminant() const { return y3 * y3 - y1 * y1 - y2 * y2; }
};

struct MeasurementResult {
    std::array<double, 2> outcomes{};           // lambda1 > lambda2
    std::array<Vector, 2> eigenvectors;         // E_k, unit Euclidean norm
    std::array<Vector, 2> normalized;           // V_k with |[V_k, V_k]| = 1
    std::array<double, 2> signs{};              // [V_k, V_k] = +-1
    std::array<Matrix, 2> projectors;           // Pi_k = [., V_k] V_k / [V_k, V_k]
    std::array<double, 2> probabilities{};      // Re Tr(S Pi_k)
    double expectation = 0.0;                   // Re Tr(S A)
    Complex cross_inner{0.0, 0.0};              // [E_1, E_2]
};

namespace detail {
inline void require_simple_spectrum(const JObservable2& obs) {
    if (!(obs.y1 * obs.y1 + obs.y2 * obs.y2 < obs.y3 * obs.y3)) {
        throw Error("degenerate-spectrum", "needs y1^2 + y2^2 < y3^2");
    }
}

inline std::array<Vector, 2> observable_eigenvectors(const JObservable2& obs, const std::array<double, 2>& lambda) {
    std::array<Vector, 2> e;
    if (obs.y1 == 0.0 && obs.y2 == 0.0) {
        Vector e1 = Vector::Zero(2), e2 = Vector::Zero(2);
        e1(0) = 1.0;
        e2(1) = 1.0;
        // lambda1 sits on e1 when y3 > 0, on e2 otherwise.
        e = obs.y3 > 0.0 ? std::array<Vector, 2>{e1, e2} : std::array<Vector, 2>{e2, e1};
        return e;
    }
    const GeneralEig eig = eig_general(obs.matrix());
    for (std::size_t k = 0; k < 2; ++k) {
        const Eigen::Index pick =
            std::abs(eig.eigenvalues(0) - lambda[k]) <= std::abs(eig.eigenvalues(1) - lambda[k]) ? 0 : 1;
        e[k] = eig.eigenvectors.col(pick);
    }
    return e;
}
}  // namespace detail

/// Outcomes (y0 +- sqrt(y3^2 - y1^2 - y2^2)) / 2.
inline std::array<double, 2> measurement_outcomes(const JObservable2& obs) {
    detail::require_simple_spectrum(obs);
    const double root = std::sqrt(obs.discriminant());
    return {(obs.y0 + root) / 2.0, (obs.y0 - root) / 2.0};
}

inline MeasurementResult measure(const JObservable2& obs, const JState& s) {
    detail::require_bloch_symmetry(s.symmetry());
    const FundamentalSymmetry& j = s.symmetry();
    MeasurementResult out;
    out.outcomes = measurement_outcomes(obs);
    out.eigenvectors = detail::observable_eigenvectors(obs, out.outcomes);
    out.cross_inner = indefinite_inner(out.eigenvectors[0], out.eigenvectors[1], j);
    const Matrix& b = s.matrix();
    for (std::size_t k = 0; k < 2; ++k) {
        const Vector& e = out.eigenvectors[k];
        const double self = indefinite_inner(e, e, j).real();
        if (std::abs(self) < 1e-14) throw Error("degenerate-spectrum", "neutral eigenvector");
        out.normalized[k] = e / std::sqrt(std::abs(self));
        out.signs[k] = self > 0.0 ? 1.0 : -1.0;
        // [x, V] V = V V* J x.
        out.projectors[k] = out.normalized[k] * out.normalized[k].adjoint() * j.matrix() / out.signs[k];
        out.probabilities[k] = (b * out.projectors[k]).trace().real();
    }
    out.expectation = (b * obs.matrix()).trace().real();
    return out;
}

/// Pi_k = V_k V_k* J with Euclidean-normalized V_k; these satisfy Pi^natural = Pi
/// and Pi J Pi = Pi but do not resolve A in general.
inline std::array<Matrix, 2> euclidean_projectors(const JObservable2& obs) {
    const std::array<double, 2> lambda = measurement_outcomes(obs);
    const std::array<Vector, 2> e = detail::observable_eigenvectors(obs, lambda);
    const Matrix j = bloch_symmetry().matrix();
    std::array<Matrix, 2> out;
    for (std::size_t k = 0; k < 2; ++k) {
        const Vector v = e[k] / e[k].norm();
        out[k] = v * v.adjoint() * j;
    }
    return out;
}

/// Real parts of the spectrum of a J-selfadjoint matrix, ascending. The
/// spectrum must be closed under conjugation within 1e-8.
inline std::vector<double> observable_outcomes(const Matrix& a, const FundamentalSymmetry& j,
                                               double tol = kDefaultTol) {
    require_dim(a, j);
    if (!is_j_selfadjoint(a, j, tol)) throw Error("not-j-selfadjoint", "A^natural != A");
    const GeneralEig eig = eig_general(a);
    const Eigen::Index n = eig.eigenvalues.size();
    const double slack = 1e-8 * tol_scale(a);
    for (Eigen::Index i = 0; i < n; ++i) {
        double nearest = kInfinity;
        for (Eigen::Index k = 0; k < n; ++k) {
            nearest = std::min(nearest, std::abs(std::conj(eig.eigenvalues(i)) - eig.eigenvalues(k)));
        }
        if (nearest > slack) throw Error("no-conjugate-pair", "spectrum is not symmetric about the real axis");
    }
    std::vector<double> out;
    for (Eigen::Index i = 0; i < n; ++i) out.push_back(eig.eigenvalues(i).real());
    std::sort(out.begin(), out.end());
    return out;
}

/// [[alpha, beta], [conj(beta), conj(alpha)]] with |alpha|^2 - |beta|^2 = 1.
inline Matrix j_unitary_2x2(Complex alpha, Complex beta) {
    const double defect = std::norm(alpha) - std::norm(beta) - 1.0;
    if (!(std::abs(defect) <= 1e-10)) throw Error("not-j-unitary", "|alpha|^2 - |beta|^2 - 1 = " + std::to_string(defect));
    Matrix v(2, 2);
    v << alpha, beta, std::conj(beta), std::conj(alpha);
    return v;
}

/// B^natural = -B within 1e-9 * max(1, ||B||).
inline bool check_skew(const Matrix& b, const FundamentalSymmetry& j) {
    require_dim(b, j);
    return (j_adjoint(b, j) + b).norm() <= 1e-9 * std::max(1.0, b.norm());
}

struct LaxSample {
    double t = 0.0;
    Matrix state;
    Vector spectrum;             // eig_general order
    double trace_sj = 0.0;       // Re Tr(S J)
    double trace_s = 0.0;        // Re Tr(S)
    double min_eig_js = 0.0;     // smallest eigenvalue of the Hermitian part of J S
    double closed_form_gap = 0.0;  // ||S - V S0 V^natural||_2
};

struct LaxTrajectory {
    Matrix generator;  // B = -i M
    bool generator_skew = false;
    std::vector<LaxSample> samples;
    double max_spectrum_drift = 0.0;
    double max_trace_sj_drift = 0.0;
    double max_trace_s_drift = 0.0;
    double min_positivity = kInfinity;
    double max_closed_form_gap = 0.0;
};

/// e^{-itM} S0 e^{itM}: conjugation by V(t) = e^{-itM}, whose J-adjoint is e^{itM}.
inline Matrix lax_closed_form(const Matrix& s0, const Matrix& m, double t) {
    const Complex i(0.0, 1.0);
    return matrix_exp(-i * t * m) * s0 * matrix_exp(i * t * m);
}

/// Integrates dS/dt = [B, S] with B = -V dV^natural/dt = -iM by classical RK4.
/// A sample is kept every `record_every` steps plus the final time.
inline LaxTrajectory lax_evolve(const Matrix& s0, const Matrix& m, const FundamentalSymmetry& j, double t_end,
                                double dt, std::size_t record_every = 1, double tol = kDefaultTol) {
    require_dim(s0, j);
    require_dim(m, j);
    require_finite(s0);
    require_finite(m);
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("bad-step", "dt must be positive");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw Error("bad-step", "t_end must be non-negative");
    if (!is_j_selfadjoint(m, j, tol)) throw Error("not-j-selfadjoint", "M^natural != M");
    if (record_every == 0) record_every = 1;

    const Complex i(0.0, 1.0);
    LaxTrajectory out;
    out.generator = -i * m;
    out.generator_skew = check_skew(out.generator, j);
    const Matrix& b = out.generator;
    const auto rhs = [&](const Matrix& s) -> Matrix { return b * s - s * b; };

    const Vector spectrum0 = eig_general(s0).eigenvalues;
    const Complex trace_sj0 = (s0 * j.matrix()).trace();
    const Complex trace_s0 = s0.trace();

    const auto record = [&](double t, const Matrix& s) {
        LaxSample sample;
        sample.t = t;
        sample.state = s;
        sample.spectrum = eig_general(s).eigenvalues;
        const Complex tsj = (s * j.matrix()).trace();
        sample.trace_sj = tsj.real();
        sample.trace_s = s.trace().real();
        const Matrix js = j.matrix() * s;
        sample.min_eig_js = eig_hermitian(0.5 * (js + js.adjoint()), kInfinity).eigenvalues(0);
        sample.closed_form_gap = operator_norm(s - lax_closed_form(s0, m, t));
        out.max_spectrum_drift = std::max(out.max_spectrum_drift, (sample.spectrum - spectrum0).cwiseAbs().maxCoeff());
        out.max_trace_sj_drift = std::max(out.max_trace_sj_drift, std::abs(tsj - trace_sj0));
        out.max_trace_s_drift = std::max(out.max_trace_s_drift, std::abs(s.trace() - trace_s0));
        out.min_positivity = std::min(out.min_positivity, sample.min_eig_js);
        out.max_closed_form_gap = std::max(out.max_closed_form_gap, sample.closed_form_gap);
        out.samples.push_back(std::move(sample));
    };

    const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    Matrix s = s0;
    record(0.0, s);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t0 = static_cast<double>(k) * dt;
        const double h = std::min(dt, t_end - t0);
        const Matrix k1 = rhs(s);
        const Matrix k2 = rhs(s + 0.5 * h * k1);
        const Matrix k3 = rhs(s + 0.5 * h * k2);
        const Matrix k4 = rhs(s + h * k3);
        s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if ((k + 1) % record_every == 0 || k + 1 == steps) record(k + 1 == steps ? t_end : t0 + h, s);
    }
    return out;
}

}  // namespace jmetric
