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

// Command-line front end. Reads matrices, symmetries and channels from JSON
// documents and writes exactly one JSON report to `out`; diagnostics go to
// `err`. Exit codes: 0 all verdicts pass, 1 a verdict or domain check failed,
// 2 input error.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "jmetric/bloch.hpp"
#include "jmetric/channels.hpp"
#include "jmetric/metric.hpp"
#include "jmetric/random.hpp"
#include "jmetric/states.hpp"

namespace jmetric::cli {

using Json = nlohmann::json;

enum ExitCode : int { kPass = 0, kFail = 1, kInputError = 2 };

/// Errors that describe the input document rather than a failed check.
class InputError : public std::runtime_error {
public:
    InputError(std::string code, const std::string& what) : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// ---------------------------------------------------------------- writing

inline std::string format_number(double x) {
    if (!std::isfinite(x)) return "null";
    if (x == 0.0) return "0";  // folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline void write_string(std::ostream& os, const std::string& s) { os << Json(s).dump(); }

inline bool is_flat(const Json& v) {
    return std::none_of(v.begin(), v.end(), [](const Json& e) { return e.is_structured(); });
}

inline void write_json(std::ostream& os, const Json& v, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    switch (v.type()) {
        case Json::value_t::object: {
            if (v.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << pad;
                write_string(os, it.key());
                os << ": ";
                write_json(os, it.value(), depth + 1);
            }
            os << "\n" << close << "}";
            return;
        }
        case Json::value_t::array: {
            if (v.empty()) {
                os << "[]";
                return;
            }
            if (is_flat(v)) {
                os << "[";
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (i) os << ", ";
                    write_json(os, v[i], depth + 1);
                }
                os << "]";
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) os << ",\n";
                os << pad;
                write_json(os, v[i], depth + 1);
            }
            os << "\n" << close << "]";
            return;
        }
        case Json::value_t::number_float:
            os << format_number(v.get<double>());
            return;
        default:
            os << v.dump();
            return;
    }
}

}  // namespace detail

/// Sorted keys, two-space indent, scalar arrays on one line, doubles as %.17g.
inline std::string write_report(const Json& v) {
    std::ostringstream os;
    detail::write_json(os, v, 0);
    os << "\n";
    return os.str();
}

// ---------------------------------------------------------------- documents

inline Json matrix_document(const Matrix& a) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(Json::array({a(i, j).real(), a(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return Json{{"n", a.rows()}, {"entries", std::move(rows)}};
}

inline double parse_real(const Json& v, const std::string& where) {
    if (!v.is_number()) throw InputError("parse", where + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw InputError("non-finite", where + ": non-finite number");
    return x;
}

inline Matrix parse_matrix(const Json& doc) {
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("entries")) {
        throw InputError("parse", "matrix document needs \"n\" and \"entries\"");
    }
    if (!doc["n"].is_number_integer() || doc["n"].get<long long>() < 1) {
        throw InputError("shape", "\"n\" must be a positive integer");
    }
    const auto n = static_cast<Eigen::Index>(doc["n"].get<long long>());
    const Json& rows = doc["entries"];
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n) {
        throw InputError("shape", "\"entries\" must have n rows");
    }
    Matrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Json& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            throw InputError("shape", "row " + std::to_string(i) + " must have n entries");
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            const Json& z = row[static_cast<std::size_t>(j)];
            const std::string where = "entry (" + std::to_string(i) + ", " + std::to_string(j) + ")";
            if (!z.is_array() || z.size() != 2) throw InputError("parse", where + ": expected [re, im]");
            a(i, j) = Complex(parse_real(z[0], where), parse_real(z[1], where));
        }
    }
    return a;
}

inline Json symmetry_document(const FundamentalSymmetry& j) {
    const Matrix d = FundamentalSymmetry::from_signature(j.p(), j.q()).matrix();
    if ((j.matrix() - d).norm() == 0.0) return Json{{"signature", Json::array({j.p(), j.q()})}};
    return Json{{"matrix", matrix_document(j.matrix())}};
}

inline FundamentalSymmetry parse_symmetry(const Json& doc) {
    if (!doc.is_object()) throw InputError("parse", "symmetry document must be an object");
    try {
        if (doc.contains("signature")) {
            const Json& sig = doc["signature"];
            if (!sig.is_array() || sig.size() != 2 || !sig[0].is_number_integer() || !sig[1].is_number_integer()) {
                throw InputError("parse", "\"signature\" must be [p, q]");
            }
            const long long p = sig[0].get<long long>(), q = sig[1].get<long long>();
            if (p < 0 || q < 0 || p + q > 4096) throw InputError("shape", "signature out of range");
            return FundamentalSymmetry::from_signature(static_cast<int>(p), static_cast<int>(q));
        }
        if (doc.contains("matrix")) return FundamentalSymmetry::from_matrix(parse_matrix(doc["matrix"]));
    } catch (const Error& e) {
        throw InputError(e.code(), e.message());
    }
    throw InputError("parse", "symmetry document needs \"signature\" or \"matrix\"");
}

inline Json load_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("io", "cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return Json::parse(buffer.str());
    } catch (const Json::parse_error& e) {
        throw InputError("parse", path + ": " + e.what());
    }
}

/// "p,q" or a path to a SymmetryDocument.
inline FundamentalSymmetry resolve_symmetry(const std::string& text) {
    const auto comma = text.find(',');
    if (comma != std::string::npos && text.find_first_not_of("0123456789,") == std::string::npos &&
        text.find(',', comma + 1) == std::string::npos && comma > 0 && comma + 1 < text.size()) {
        Json doc{{"signature", Json::array({std::stoll(text.substr(0, comma)), std::stoll(text.substr(comma + 1))})}};
        return parse_symmetry(doc);
    }
    return parse_symmetry(load_json(text));
}

struct ChannelInput {
    std::optional<KrausJMap> kraus;
    Superoperator psi;
    FundamentalSymmetry j1;
    FundamentalSymmetry j2;
};

inline ChannelInput parse_channel(const Json& doc) {
    if (!doc.is_object() || !doc.contains("j1")) throw InputError("parse", "channel document needs \"j1\"");
    const FundamentalSymmetry j1 = parse_symmetry(doc["j1"]);
    const FundamentalSymmetry j2 = doc.contains("j2") ? parse_symmetry(doc["j2"]) : j1;
    try {
        if (doc.contains("kraus")) {
            const Json& list = doc["kraus"];
            if (!list.is_array() || list.empty()) throw InputError("parse", "\"kraus\" must be a non-empty list");
            std::vector<Matrix> ops;
            for (const Json& m : list) ops.push_back(parse_matrix(m));
            KrausJMap map(std::move(ops), j1, j2);
            Superoperator psi = to_superoperator(map);
            return {std::move(map), std::move(psi), j1, j2};
        }
        if (doc.contains("superoperator")) {
            const Matrix s = parse_matrix(doc["superoperator"]);
            const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(s.rows()))));
            if (n * n != s.rows()) throw InputError("shape", "superoperator size must be a perfect square");
            if (n != j1.dim()) throw InputError("shape", "superoperator and symmetry dimensions differ");
            require_dim(j1, j2);
            return {std::nullopt, Superoperator(s, n), j1, j2};
        }
    } catch (const Error& e) {
        throw InputError(e.code(), e.message());
    }
    throw InputError("parse", "channel document needs \"kraus\" or \"superoperator\"");
}

inline Json channel_document(const KrausJMap& m) {
    Json kraus = Json::array();
    for (const Matrix& v : m.kraus()) kraus.push_back(matrix_document(v));
    Json doc{{"kraus", std::move(kraus)}, {"j1", symmetry_document(m.j1())}};
    if (!m.same_symmetry()) doc["j2"] = symmetry_document(m.j2());
    return doc;
}

// ---------------------------------------------------------------- report

class Report {
public:
    explicit Report(std::string command) { doc_["command"] = std::move(command); }

    void verdict(const std::string& name, bool pass, double residual) {
        doc_["verdicts"][name] = Json{{"pass", pass}, {"residual", residual}};
        all_pass_ = all_pass_ && pass;
    }

    Json& outputs() { return doc_["outputs"]; }
    void seed(std::uint64_t s) { doc_["seed"] = s; }

    int exit_code() const { return all_pass_ ? kPass : kFail; }

    Json finish() {
        if (!doc_.contains("verdicts")) doc_["verdicts"] = Json::object();
        if (!doc_.contains("outputs")) doc_["outputs"] = Json::object();
        return doc_;
    }

private:
    Json doc_;
    bool all_pass_ = true;
};

// ---------------------------------------------------------------- commands

struct Globals {
    double tol = kDefaultTol;
    std::optional<std::uint64_t> seed;
    std::string symmetry;
};

namespace detail {

inline FundamentalSymmetry require_symmetry(const Globals& g, Eigen::Index n) {
    if (g.symmetry.empty()) throw InputError("missing-symmetry", "--symmetry is required");
    FundamentalSymmetry j = resolve_symmetry(g.symmetry);
    if (j.dim() != n) throw InputError("shape", "symmetry dimension does not match input");
    return j;
}

inline Json real_array(std::span<const double> xs) {
    Json a = Json::array();
    for (double x : xs) a.push_back(x);
    return a;
}

inline Json complex_array(const Vector& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(Json::array({v(i).real(), v(i).imag()}));
    return a;
}

inline double violation_below(double min_eig) { return std::max(0.0, -min_eig); }

}  // namespace detail

inline Report cmd_check(const Globals& g, const std::string& path, const std::string& what, const std::string& origin) {
    Report r("check");
    const Matrix a = parse_matrix(load_json(path));
    const FundamentalSymmetry j = detail::require_symmetry(g, a.rows());
    r.outputs()["what"] = what;
    if (what == "j-positive") {
        const JPositivity pos = is_j_positive(a, j, g.tol);
        r.verdict("j-positive", pos.is_j_positive, detail::violation_below(pos.min_eig));
        r.outputs()["min_eig"] = pos.min_eig;
    } else if (what == "j-state") {
        const JPositivity pos = is_j_positive(a, j, g.tol);
        const bool unitary = origin != "j-unitary";
        const Complex tr = unitary ? (a * j.matrix()).trace() : a.trace();
        r.verdict("j-positive", pos.is_j_positive, detail::violation_below(pos.min_eig));
        r.verdict("trace", std::abs(tr - 1.0) <= kStateTraceTol, std::abs(tr - 1.0));
        r.outputs()["min_eig"] = pos.min_eig;
        r.outputs()["origin"] = unitary ? "unitary" : "j-unitary";
        r.outputs()["trace"] = Json::array({tr.real(), tr.imag()});
    } else if (what == "j-effect") {
        const Matrix je = j.matrix() * a;
        const double herm = (je - je.adjoint()).norm();
        const RealVector ev = eig_hermitian(0.5 * (je + je.adjoint()), kInfinity).eigenvalues;
        const double scale = tol_scale(je);
        r.verdict("hermitian", herm <= g.tol * scale, herm);
        r.verdict("lower", ev(0) >= -g.tol * scale, detail::violation_below(ev(0)));
        r.verdict("upper", ev(ev.size() - 1) <= 1.0 + g.tol * scale, std::max(0.0, ev(ev.size() - 1) - 1.0));
        r.outputs()["min_eig"] = ev(0);
        r.outputs()["max_eig"] = ev(ev.size() - 1);
    } else if (what == "j-selfadjoint") {
        const double res = (j_adjoint(a, j) - a).norm();
        r.verdict("j-selfadjoint", is_j_selfadjoint(a, j, g.tol), res);
    } else {
        throw InputError("bad-argument", "unknown check " + what);
    }
    return r;
}

inline Report cmd_channel(const Globals& g, const std::string& path, const std::string& action,
                          const std::string& matrix_path) {
    Report r("channel");
    ChannelInput ch = parse_channel(load_json(path));
    r.outputs()["action"] = action;
    const auto kraus_form = [&]() -> KrausJMap {
        if (ch.kraus) return *ch.kraus;
        return kraus_from_superoperator(ch.psi, ch.j1, ch.j2, g.tol);
    };
    if (action == "admissible") {
        const ResidualVerdict v = is_admissible(kraus_form(), g.tol);
        r.verdict("admissible", v.pass, v.residual);
    } else if (action == "trace-preserving") {
        const KrausJMap m = kraus_form();
        const TracePreservation tp = m.same_symmetry() ? is_trace_preserving(m, g.tol)
                                                       : is_flat_trace_preserving(m, g.tol);
        r.verdict("kraus-criterion", tp.pass, tp.residual);
        r.verdict("direct", tp.direct_pass, tp.direct_residual);
    } else if (action == "completely-jpositive") {
        const CompletePositivity cp = is_completely_jpositive(ch.psi, ch.j1, ch.j2, g.tol);
        r.verdict("completely-jpositive", cp.pass, detail::violation_below(cp.min_choi_eig));
        r.outputs()["min_choi_eig"] = cp.min_choi_eig;
    } else if (action == "apply") {
        if (matrix_path.empty()) throw InputError("bad-argument", "apply needs a matrix file");
        const Matrix a = parse_matrix(load_json(matrix_path));
        if (a.rows() != ch.psi.base_dim()) throw InputError("shape", "input matrix dimension mismatch");
        r.outputs()["image"] = matrix_document(ch.psi.apply(a));
    } else if (action == "extract-kraus") {
        const KrausJMap m = kraus_from_superoperator(ch.psi, ch.j1, ch.j2, g.tol);
        const double res = (to_superoperator(m).matrix() - ch.psi.matrix()).norm();
        r.verdict("roundtrip", res <= g.tol * tol_scale(ch.psi.matrix()), res);
        r.outputs()["channel"] = channel_document(m);
        r.outputs()["kraus_rank"] = m.kraus_rank();
    } else if (action == "choi") {
        const ChoiMatrix c = choi_matrix(to_ordinary(ch.psi, ch.j1, ch.j2));
        const double herm = (c.matrix - c.matrix.adjoint()).norm();
        r.verdict("hermitian", herm <= g.tol * tol_scale(c.matrix), herm);
        r.outputs()["choi"] = matrix_document(c.matrix);
        r.outputs()["choi_rank"] = choi_rank(c, g.tol);
    } else {
        throw InputError("bad-argument", "unknown channel action " + action);
    }
    return r;
}

inline Report cmd_bloch(const Globals& g, const BlochPoint& pt) {
    Report r("bloch");
    const JState s = state_from_bloch(pt);
    const auto p = generalized_probabilities(s);
    const auto ev = state_eigenvalues(s);
    const JPositivity pos = is_j_positive(s.matrix(), s.symmetry(), g.tol);
    r.verdict("j-state", pos.is_j_positive, detail::violation_below(pos.min_eig));
    r.verdict("p1-minus-p2", std::abs(p[0] - p[1] - 1.0) <= 1e-12, std::abs(p[0] - p[1] - 1.0));
    r.outputs()["state"] = matrix_document(s.matrix());
    r.outputs()["probabilities"] = detail::real_array(p);
    r.outputs()["eigenvalues"] = detail::real_array(ev);
    r.outputs()["point"] = Json::array({pt.x0, pt.x1, pt.x2});
    return r;
}

inline Report cmd_measure(const Globals& g, const JObservable2& obs, const BlochPoint& pt) {
    Report r("measure");
    const JState s = state_from_bloch(pt);
    const MeasurementResult m = measure(obs, s);
    const Matrix a = obs.matrix();
    const double resolution =
        (a - m.outcomes[0] * m.projectors[0] - m.outcomes[1] * m.projectors[1]).norm();
    const double expectation = std::abs(m.expectation - m.outcomes[0] * m.probabilities[0] -
                                        m.outcomes[1] * m.probabilities[1]);
    const double completeness = (m.projectors[0] + m.projectors[1] - identity(2)).norm();
    const double tol = std::max(g.tol, 1e-9);
    r.verdict("resolution", resolution <= tol, resolution);
    r.verdict("expectation", expectation <= tol, expectation);
    r.verdict("completeness", completeness <= tol, completeness);
    r.outputs()["outcomes"] = detail::real_array(m.outcomes);
    r.outputs()["probabilities"] = detail::real_array(m.probabilities);
    r.outputs()["expectation"] = m.expectation;
    r.outputs()["signs"] = detail::real_array(m.signs);
    r.outputs()["projectors"] = Json::array({matrix_document(m.projectors[0]), matrix_document(m.projectors[1])});
    r.outputs()["observable"] = matrix_document(a);
    return r;
}

inline void write_plot_data(std::ostream& os, const LaxTrajectory& tr) {
    os << "# t\ttrace_sj\ttrace_s\tmin_eig_js\tclosed_form_gap";
    const Eigen::Index n = tr.samples.empty() ? 0 : tr.samples.front().spectrum.size();
    for (Eigen::Index k = 0; k < n; ++k) os << "\tlambda" << k + 1 << "_re\tlambda" << k + 1 << "_im";
    os << "\n";
    for (const LaxSample& s : tr.samples) {
        os << format_number(s.t) << '\t' << format_number(s.trace_sj) << '\t' << format_number(s.trace_s) << '\t'
           << format_number(s.min_eig_js) << '\t' << format_number(s.closed_form_gap);
        for (Eigen::Index k = 0; k < s.spectrum.size(); ++k) {
            os << '\t' << format_number(s.spectrum(k).real()) << '\t' << format_number(s.spectrum(k).imag());
        }
        os << "\n";
    }
}

inline Report cmd_evolve(const Globals& g, const std::string& state_path, const std::string& m_path, double t_end,
                         double dt, std::size_t every, const std::string& plot_path) {
    Report r("evolve");
    const Matrix s0 = parse_matrix(load_json(state_path));
    const Matrix m = parse_matrix(load_json(m_path));
    if (m.rows() != s0.rows()) throw InputError("shape", "state and generator dimensions differ");
    const FundamentalSymmetry j = g.symmetry.empty() && s0.rows() == 2 ? bloch_symmetry()
                                                                       : detail::require_symmetry(g, s0.rows());
    const LaxTrajectory tr = lax_evolve(s0, m, j, t_end, dt, every, g.tol);
    r.verdict("closed-form", tr.max_closed_form_gap <= 1e-6, tr.max_closed_form_gap);
    r.verdict("isospectral", tr.max_spectrum_drift <= 1e-6, tr.max_spectrum_drift);
    r.verdict("trace-s", tr.max_trace_s_drift <= 1e-6, tr.max_trace_s_drift);
    r.verdict("skew-generator", tr.generator_skew, (j_adjoint(tr.generator, j) + tr.generator).norm());
    r.outputs()["trace_sj_drift"] = tr.max_trace_sj_drift;
    r.outputs()["min_eig_js"] = tr.min_positivity;
    Json rows = Json::array();
    for (const LaxSample& s : tr.samples) {
        Json row = Json::array({s.t, s.trace_sj, s.min_eig_js});
        for (Eigen::Index k = 0; k < s.spectrum.size(); ++k) {
            row.push_back(s.spectrum(k).real());
            row.push_back(s.spectrum(k).imag());
        }
        rows.push_back(std::move(row));
    }
    r.outputs()["columns"] = "t, Re Tr(SJ), min eig of JS, then Re/Im of each eigenvalue";
    r.outputs()["rows"] = std::move(rows);
    r.outputs()["final_state"] = matrix_document(tr.samples.back().state);
    if (!plot_path.empty()) {
        std::ofstream plot(plot_path, std::ios::binary);
        if (!plot) throw InputError("io", "cannot write " + plot_path);
        write_plot_data(plot, tr);
    }
    return r;
}

inline Report cmd_random(const Globals& g, const std::string& kind, int n, int count) {
    Report r("random");
    if (n < 1 || n > 64) throw InputError("shape", "n must be in [1, 64]");
    const std::uint64_t seed = g.seed.value_or(0);
    r.seed(seed);
    Rng rng(seed);
    const FundamentalSymmetry j = g.symmetry.empty() ? FundamentalSymmetry::from_signature((n + 1) / 2, n / 2)
                                                     : detail::require_symmetry(g, n);
    r.outputs()["kind"] = kind;
    if (kind == "state") {
        const JState s = random_jstate(rng, j);
        const JPositivity pos = is_j_positive(s.matrix(), j, g.tol);
        r.verdict("j-state", pos.is_j_positive, detail::violation_below(pos.min_eig));
        r.outputs()["state"] = matrix_document(s.matrix());
        r.outputs()["symmetry"] = symmetry_document(j);
    } else if (kind == "channel") {
        if (count < 1 || count > 64) throw InputError("shape", "count must be in [1, 64]");
        const KrausJMap m = random_lifted_channel(rng, j, count);
        const ResidualVerdict adm = is_admissible(m, g.tol);
        const CompletePositivity cp = is_completely_jpositive(to_superoperator(m), j, j, g.tol);
        r.verdict("admissible", adm.pass, adm.residual);
        r.verdict("completely-jpositive", cp.pass, detail::violation_below(cp.min_choi_eig));
        r.outputs()["channel"] = channel_document(m);
    } else if (kind == "unitary") {
        const Matrix u = random_unitary(rng, n);
        const double res = (u.adjoint() * u - identity(n)).norm();
        r.verdict("unitary", res <= g.tol, res);
        r.outputs()["unitary"] = matrix_document(u);
    } else {
        throw InputError("bad-argument", "unknown random kind " + kind);
    }
    return r;
}

// ---------------------------------------------------------------- driver

namespace detail {

// Domain outcomes that count as a failed verdict rather than bad input.
inline bool is_domain_failure(const std::string& code) {
    return code == "outside-ball" || code == "degenerate-spectrum" || code == "not-completely-jpositive";
}

inline int emit_error(std::ostream& out, std::ostream& err, const std::string& command, const std::string& code,
                      const std::string& message, int exit_code) {
    err << "jmetric: " << code << ": " << message << "\n";
    Json doc{{"command", command}, {"error", Json{{"code", code}, {"message", message}}}};
    out << write_report(doc);
    return exit_code;
}

}  // namespace detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Indefinite-metric quantum states and channels"};
    app.name("jmetric");
    app.require_subcommand(1);

    Globals g;
    std::uint64_t seed = 0;
    app.add_option("--tol", g.tol, "numerical tolerance")->check(CLI::PositiveNumber);
    auto* seed_opt = app.add_option("--seed", seed, "random seed");
    app.add_option("--symmetry", g.symmetry, "fundamental symmetry: p,q or a JSON file");

    std::string path, what = "j-state", origin = "unitary";
    auto* check = app.add_subcommand("check", "validate a matrix against a J-predicate");
    check->add_option("matrix", path, "matrix document")->required();
    check->add_option("--what", what, "predicate")
        ->check(CLI::IsMember({"j-positive", "j-state", "j-effect", "j-selfadjoint"}));
    check->add_option("--origin", origin, "J-state origin")->check(CLI::IsMember({"unitary", "j-unitary"}));

    std::string action, matrix_path;
    auto* channel = app.add_subcommand("channel", "inspect a Kraus J-map or superoperator");
    channel->add_option("channel", path, "channel document")->required();
    channel->add_option("action", action, "action")
        ->required()
        ->check(CLI::IsMember(
            {"admissible", "trace-preserving", "completely-jpositive", "apply", "extract-kraus", "choi"}));
    channel->add_option("input", matrix_path, "matrix document for apply");

    BlochPoint pt;
    auto* bloch = app.add_subcommand("bloch", "state at a point of the Bloch J-ball");
    bloch->add_option("--x0", pt.x0);
    bloch->add_option("--x1", pt.x1);
    bloch->add_option("--x2", pt.x2);
    JObservable2 obs;
    auto* meas = app.add_subcommand("measure", "J-orthogonal measurement of a 2x2 J-observable");
    meas->add_option("--y0", obs.y0);
    meas->add_option("--y1", obs.y1);
    meas->add_option("--y2", obs.y2);
    meas->add_option("--y3", obs.y3);
    meas->add_option("--x0", pt.x0);
    meas->add_option("--x1", pt.x1);
    meas->add_option("--x2", pt.x2);

    std::string m_path, plot_path;
    double t_end = 1.0, dt = 1e-3;
    std::size_t every = 100;
    auto* evolve = app.add_subcommand("evolve", "Lax-type evolution S(t) = V S0 V^natural");
    evolve->add_option("state", path, "initial matrix document")->required();
    evolve->add_option("generator", m_path, "J-selfadjoint generator M")->required();
    evolve->add_option("--t", t_end, "final time");
    evolve->add_option("--dt", dt, "step size");
    evolve->add_option("--every", every, "record every k-th step");
    evolve->add_option("--plot-data", plot_path, "write a tab-separated trajectory table");

    std::string kind;
    int n = 2, count = 2;
    auto* random = app.add_subcommand("random", "seeded random state, channel or unitary");
    random->add_option("kind", kind, "state|channel|unitary")
        ->required()
        ->check(CLI::IsMember({"state", "channel", "unitary"}));
    random->add_option("--n", n, "dimension");
    random->add_option("--count", count, "number of Kraus operators");

    std::vector<std::string> argv_storage{"jmetric"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (std::string& a : argv_storage) argv.push_back(a.data());

    std::string command = "jmetric";
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kPass;
    } catch (const CLI::ParseError& e) {
        return detail::emit_error(out, err, command, "usage", e.what(), kInputError);
    }
    if (seed_opt->count() > 0) g.seed = seed;

    try {
        Report report("");
        if (*check) {
            command = "check";
            report = cmd_check(g, path, what, origin);
        } else if (*channel) {
            command = "channel";
            report = cmd_channel(g, path, action, matrix_path);
        } else if (*bloch) {
            command = "bloch";
            report = cmd_bloch(g, pt);
        } else if (*meas) {
            command = "measure";
            report = cmd_measure(g, obs, pt);
        } else if (*evolve) {
            command = "evolve";
            report = cmd_evolve(g, path, m_path, t_end, dt, every, plot_path);
        } else {
            command = "random";
            report = cmd_random(g, kind, n, count);
        }
        out << write_report(report.finish());
        return report.exit_code();
    } catch (const InputError& e) {
        return detail::emit_error(out, err, command, e.code(), e.what(), kInputError);
    } catch (const Error& e) {
        const int code = detail::is_domain_failure(e.code()) ? kFail : kInputError;
        return detail::emit_error(out, err, command, e.code(), e.message(), code);
    } catch (const std::exception& e) {
        return detail::emit_error(out, err, command, "internal", e.what(), kInputError);
    }
}

}  // namespace jmetric::cli
