/*
   Copyright 2026 The opercalc authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef OPERCALC_BOPER_HPP
#define OPERCALC_BOPER_HPP

#include <optional>
#include <string>
#include <vector>

#include "diffop.hpp"
#include "ode.hpp"

namespace opercalc {

enum class FormParity { Orthogonal, Symplectic };

inline const char* parity_name(FormParity p) {
    return p == FormParity::Orthogonal ? "orthogonal" : "symplectic";
}

/// Non-degenerate bilinear pairing on the ambient frame, symmetric or
/// antisymmetric according to its declared parity.
struct BilinearForm {
    int rank = 0;
    RfMatrix mat;
    FormParity parity = FormParity::Orthogonal;

    BilinearForm() = default;
    BilinearForm(RfMatrix m, FormParity p) : rank(m.rows()), mat(std::move(m)), parity(p) {
        if (mat.rows() != mat.cols()) fail(Errc::MalformedInput, "bilinear form must be square");
        RfMatrix t = mat.transpose();
        bool ok = (parity == FormParity::Orthogonal) ? (t == mat) : (t == -mat);
        if (!ok) fail(Errc::MalformedInput, "form entries do not match the declared parity");
        if (determinant(mat).is_zero()) fail(Errc::DegenerateForm, "form is degenerate over Q(z)");
    }
};

/// Increasing filtration given by arbitrary column-span generators; step i
/// (1-based) must span rank i*r inside rank n*r, nested in the next step.
struct Filtration {
    int total_rank = 0;
    int step_rank = 0;
    int length = 0;
    std::vector<RfMatrix> steps; // steps[i-1]: total_rank x (i * step_rank) generators

    Filtration() = default;
    Filtration(int n, int r, std::vector<RfMatrix> step_gens)
        : total_rank(n * r), step_rank(r), length(n), steps(std::move(step_gens)) {
        if (static_cast<int>(steps.size()) != n) fail(Errc::MalformedInput, "need one generator set per step");
        for (int i = 0; i < n; ++i) {
            const RfMatrix& s = steps[static_cast<size_t>(i)];
            if (s.rows() != total_rank) fail(Errc::MalformedInput, "generator length mismatch");
            if (rank(s) != (i + 1) * r) fail(Errc::MalformedInput, "step " + std::to_string(i + 1) + " does not span rank " + std::to_string((i + 1) * r));
            if (i > 0 && !span_contained(steps[static_cast<size_t>(i - 1)], s))
                fail(Errc::MalformedInput, "filtration steps do not nest");
        }
    }

    /// Standard filtration by spans of the trailing coordinate blocks.
    static Filtration tail_standard(int n, int r) {
        int nr = n * r;
        std::vector<RfMatrix> steps;
        for (int i = 1; i <= n; ++i) {
            RfMatrix s(nr, i * r);
            for (int c = 0; c < i * r; ++c) s.at(nr - i * r + c, c) = RationalFunction(1);
            steps.push_back(std::move(s));
        }
        return Filtration(n, r, std::move(steps));
    }
};

/// D = d + A dz in the ambient frame; flat sections satisfy s' + A s = 0.
struct ConnectionMatrix {
    int rank = 0;
    RfMatrix A;

    ConnectionMatrix() = default;
    explicit ConnectionMatrix(RfMatrix a) : rank(a.rows()), A(std::move(a)) {
        if (A.rows() != A.cols()) fail(Errc::MalformedInput, "connection matrix must be square");
    }
};

struct BOperData {
    BilinearForm form;
    Filtration filt;
    ConnectionMatrix conn;
    long genus = 2;
    long deg_Q = 0;
    Rational base_point = Rational(0);
    std::optional<RfMatrix> nabla_Q; // connection on the top quotient, when known

    BOperData() = default;
    BOperData(BilinearForm f, Filtration fl, ConnectionMatrix c, long g, long dq,
              Rational bp = Rational(0), std::optional<RfMatrix> nq = std::nullopt)
        : form(std::move(f)), filt(std::move(fl)), conn(std::move(c)), genus(g), deg_Q(dq),
          base_point(std::move(bp)), nabla_Q(std::move(nq)) {
        if (form.rank != filt.total_rank || conn.rank != filt.total_rank)
            fail(Errc::MalformedInput, "form, filtration and connection ranks disagree");
        bool even = filt.length % 2 == 0;
        if (even != (form.parity == FormParity::Symplectic))
            fail(Errc::MalformedInput, "filtration length parity does not match the form parity");
        if (genus < 2) fail(Errc::UnsupportedGenus, "genus must be at least 2");
    }

    int n() const { return filt.length; }
    int r() const { return filt.step_rank; }
    int rank() const { return filt.total_rank; }
    int default_order() const { return 2 * n() + 2; }
};

// ---- perpendicular subbundles ----

/// Generators of {w : w^T B f = 0 for all f in span(F)}, by exact kernel
/// computation over Q(z).
inline RfMatrix perp(const RfMatrix& span_gens, const BilinearForm& b) {
    if (determinant(b.mat).is_zero()) fail(Errc::DegenerateForm, "perp of a degenerate form");
    RfMatrix k = (b.mat * span_gens).transpose();
    return kernel_basis(std::move(k));
}

// ---- connection compatibility ----

struct BConnectionCheck {
    bool ok = false;
    RfMatrix residual;
};

/// Frame-level compatibility of the connection with the form:
/// dB/dz = A^T B + B A, residual returned entrywise.
inline BConnectionCheck check_b_connection(const ConnectionMatrix& conn, const BilinearForm& b) {
    if (conn.rank != b.rank) fail(Errc::MalformedInput, "rank mismatch");
    RfMatrix residual = entrywise_derivative(b.mat) - conn.A.transpose() * b.mat - b.mat * conn.A;
    return {residual.is_zero(), std::move(residual)};
}

/// Perpendicularity E_i-perp = E_{n-i} for every interior step, plus the
/// parity/length constraint.
inline bool check_b_filtration(const Filtration& f, const BilinearForm& b) {
    bool even = f.length % 2 == 0;
    if (even != (b.parity == FormParity::Symplectic)) return false;
    for (int i = 1; i <= f.length - 1; ++i) {
        RfMatrix p = perp(f.steps[static_cast<size_t>(i - 1)], b);
        if (!same_column_span(p, f.steps[static_cast<size_t>(f.length - i - 1)])) return false;
    }
    return true;
}

// ---- adapted frames and second fundamental forms ----

/// Frame whose leading i*r columns span E_i, chosen greedily from the given
/// generators by exact column reduction.
inline RfMatrix adapted_frame(const Filtration& f) {
    int nr = f.total_rank;
    RfMatrix cur(nr, 0);
    for (int i = 0; i < f.length; ++i) {
        const RfMatrix& gens = f.steps[static_cast<size_t>(i)];
        for (int c = 0; c < gens.cols(); ++c) {
            RfMatrix cand = cur.hcat(gens.column(c));
            if (rank(cand) > cur.cols()) cur = std::move(cand);
        }
        if (cur.cols() != (i + 1) * f.step_rank)
            fail(Errc::MalformedInput, "filtration generators do not fill step " + std::to_string(i + 1));
    }
    return cur;
}

/// Connection matrix after the frame change s = g s-hat, including the
/// inhomogeneous term: A-hat = g^{-1} A g + g^{-1} g'.
inline RfMatrix conjugate_connection(const RfMatrix& a, const RfMatrix& g) {
    RfMatrix ginv = inverse(g);
    return ginv * a * g + ginv * entrywise_derivative(g);
}

namespace detail {

/// Indices of adapted-frame blocks that violate one-step transversality,
/// i.e. nonzero blocks (bi, bj) with bi > bj + 1 (0-based block indices).
inline bool transversal_through(const RfMatrix& conj, int n, int r, int upto_block_col) {
    for (int bj = 0; bj <= upto_block_col; ++bj)
        for (int bi = bj + 2; bi < n; ++bi)
            if (!conj.block(bi * r, bj * r, r, r).is_zero()) return false;
    return true;
}

} // namespace detail

/// Second fundamental form at level i: the induced map
/// E_i/E_{i-1} -> (E_{i+1}/E_i) (x) K in the adapted graded frames, read off
/// as the (i+1, i) block of the conjugated connection.
inline RfMatrix second_fundamental_form(const ConnectionMatrix& conn, const Filtration& f, int i) {
    if (i < 1 || i > f.length - 1) fail(Errc::IndexOutOfRange, "second fundamental form level");
    RfMatrix g = adapted_frame(f);
    RfMatrix conj = conjugate_connection(conn.A, g);
    if (!detail::transversal_through(conj, f.length, f.step_rank, i - 1))
        fail(Errc::TransversalityViolation, "connection does not shift the filtration by one step");
    return conj.block(i * f.step_rank, (i - 1) * f.step_rank, f.step_rank, f.step_rank);
}

// ---- generic point selection ----

/// First candidate point at which every listed function is regular and every
/// listed function in `nonzero` is regular and nonvanishing. Starts from the
/// preferred point, then walks 1, 2, 3, ...
inline Rational choose_regular_point(const std::vector<RationalFunction>& regular,
                                     const std::vector<RationalFunction>& nonzero,
                                     const Rational& preferred) {
    auto admissible = [&](const Rational& x) {
        for (const auto& f : regular)
            if (!f.regular_at(x)) return false;
        for (const auto& f : nonzero) {
            if (!f.regular_at(x)) return false;
            if (f.eval(x).is_zero()) return false;
        }
        return true;
    };
    if (admissible(preferred)) return preferred;
    for (long k = 1; k <= 512; ++k) {
        Rational x(k);
        if (x == preferred) continue;
        if (admissible(x)) return x;
    }
    fail(Errc::PoleAtBasePoint, "no regular evaluation point found");
}

inline void collect_entries(const RfMatrix& m, std::vector<RationalFunction>& out) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out.push_back(m.at(i, j));
}

// ---- the composed symmetric form ----

struct SPrimeResult {
    std::vector<RfMatrix> sff;  // S_1..S_{n-1}
    RfMatrix s_matrix;          // matrix of the induced form on the top quotient dual
    bool symmetric = false;
    bool nondegenerate = false;
};

/// Composes the second fundamental forms into S' = S_{n-1} o ... o S_1 and
/// rewrites it, through the duality E_1 ~ Q* furnished by B, as a bilinear
/// form on Q*. The symplectic orientation is normalized so that the length-2
/// companion datum of d^2 + q yields the form [1].
inline SPrimeResult s_prime_form(const BOperData& d) {
    int n = d.n(), r = d.r();
    RfMatrix g = adapted_frame(d.filt);
    RfMatrix conj = conjugate_connection(d.conn.A, g);
    if (!detail::transversal_through(conj, n, r, n - 2))
        fail(Errc::TransversalityViolation, "connection does not shift the filtration by one step");

    SPrimeResult out;
    RfMatrix prod = RfMatrix::identity(r);
    for (int i = 1; i <= n - 1; ++i) {
        RfMatrix si = conj.block(i * r, (i - 1) * r, r, r);
        if (determinant(si).is_zero())
            fail(Errc::NonInvertibleStep, "second fundamental form " + std::to_string(i) + " is singular");
        prod = si * prod;
        out.sff.push_back(std::move(si));
    }

    RfMatrix u = g.block(0, 0, d.rank(), r);
    RfMatrix v = g.block(0, (n - 1) * r, d.rank(), r);
    RfMatrix pairing = u.transpose() * d.form.mat * v;
    RfMatrix s = inverse(pairing) * prod.transpose();
    if (d.form.parity == FormParity::Symplectic) s = -s;
    out.symmetric = (s.transpose() == s);
    out.nondegenerate = !determinant(s).is_zero();
    out.s_matrix = std::move(s);
    return out;
}

// ---- the iterated-derivative identity on the first step ----

/// Evaluates B(V^{n-1} s, t) + (-1)^n B(s, V^{n-1} t) on series sections,
/// where V u = u' + A u is the connection contracted with d/dz. Returns true
/// when the scalar series vanishes through order N - (n-1).
inline bool v_identity_check(const BOperData& d, const std::vector<TruncatedSeries>& s,
                             const std::vector<TruncatedSeries>& t, int order) {
    int n = d.n(), nr = d.rank();
    if (static_cast<int>(s.size()) != nr || static_cast<int>(t.size()) != nr)
        fail(Errc::ArityMismatch, "sections must have one series per ambient coordinate");
    for (const auto& e : s)
        if (e.order() < n + 1) fail(Errc::InsufficientOrder, "section order below n+1");
    for (const auto& e : t)
        if (e.order() < n + 1) fail(Errc::InsufficientOrder, "section order below n+1");
    Rational z0 = s[0].base();
    SeriesMatrix a = expand_at(d.conn.A, z0, order);
    SeriesMatrix b = expand_at(d.form.mat, z0, order);
    auto as_col = [&](const std::vector<TruncatedSeries>& v) {
        SeriesMatrix m(nr, 1);
        for (int i = 0; i < nr; ++i) m.at(i, 0) = v[static_cast<size_t>(i)];
        return m;
    };
    auto vmap = [&](SeriesMatrix u) {
        SeriesMatrix du = u.map([](const TruncatedSeries& e) { return e.derivative(); });
        int new_order = du.at(0, 0).order();
        return du + (a * u).map([&](const TruncatedSeries& e) { return e.truncate(new_order); });
    };
    SeriesMatrix vs = as_col(s), vt = as_col(t);
    for (int k = 0; k < n - 1; ++k) {
        vs = vmap(vs);
        vt = vmap(vt);
    }
    TruncatedSeries lhs = (vs.transpose() * b * as_col(t)).at(0, 0);
    TruncatedSeries rhs = (as_col(s).transpose() * b * vt).at(0, 0);
    Rational sgn((n % 2 == 0) ? 1 : -1);
    TruncatedSeries total = lhs + sgn * rhs.truncate(lhs.order());
    return total.is_zero_through(order - (n - 1));
}

// ---- the full validation report ----

struct CheckItem {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckItem> checks;
    bool pass = true;
    Rational witness_point;
    std::vector<RfMatrix> sff;
    RfMatrix s_matrix;

    void add(const std::string& name, bool ok, const std::string& detail = "") {
        checks.push_back({name, ok, detail});
        pass = pass && ok;
    }
};

/// Compact rendering of the leading nonzero entries of a residual matrix.
inline std::string residual_summary(const RfMatrix& m, int limit = 3) {
    std::string out;
    int shown = 0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            if (m.at(i, j).is_zero()) continue;
            if (shown == limit) return out + ", ...";
            if (shown++) out += ", ";
            out += "(" + std::to_string(i) + "," + std::to_string(j) + ") = " + m.at(i, j).str();
        }
    return out;
}

/// Runs every axiom: (a) connection/form compatibility, (b) perpendicular
/// filtration, (c) one-step transversality, (d) invertible second fundamental
/// forms (generic and at a witnessed point), (e) symmetry and non-degeneracy
/// of the composed form, (f) the iterated-derivative identity on E_1 sections.
inline ValidationReport validate_boper(const BOperData& d, int order = -1) {
    ValidationReport rep;
    int n = d.n(), r = d.r();
    if (order < 0) order = d.default_order();

    BConnectionCheck bc = check_b_connection(d.conn, d.form);
    rep.add("b_connection", bc.ok,
            bc.ok ? "residual = 0" : "residual " + residual_summary(bc.residual));

    bool bf = check_b_filtration(d.filt, d.form);
    rep.add("b_filtration", bf, bf ? "E_i-perp = E_{n-i}" : "perpendicularity or parity fails");

    RfMatrix g = adapted_frame(d.filt);
    RfMatrix conj = conjugate_connection(d.conn.A, g);
    bool trans = detail::transversal_through(conj, n, r, n - 2);
    rep.add("transversality", trans, trans ? "D(E_i) inside E_{i+1} (x) K" : "connection leaks past one step");

    bool sff_ok = trans;
    std::vector<RationalFunction> generic_dets;
    if (trans) {
        for (int i = 1; i <= n - 1; ++i) {
            RfMatrix si = conj.block(i * r, (i - 1) * r, r, r);
            RationalFunction det = determinant(si);
            if (det.is_zero()) sff_ok = false;
            generic_dets.push_back(det);
            rep.sff.push_back(std::move(si));
        }
    }
    std::string sff_detail = trans ? (sff_ok ? "all det S_i nonzero" : "some S_i singular")
                                   : "not evaluated: transversality failed";
    if (sff_ok) {
        std::vector<RationalFunction> regular;
        collect_entries(d.conn.A, regular);
        collect_entries(d.form.mat, regular);
        for (const auto& s : d.filt.steps) collect_entries(s, regular);
        std::vector<RationalFunction> nonzero = generic_dets;
        nonzero.push_back(determinant(g));
        nonzero.push_back(determinant(d.form.mat));
        rep.witness_point = choose_regular_point(regular, nonzero, d.base_point);
        sff_detail += "; witnessed at z = " + rep.witness_point.str();
    }
    rep.add("graded_isomorphisms", sff_ok, sff_detail);

    bool prereq = bc.ok && bf && trans && sff_ok;
    if (prereq) {
        SPrimeResult sp = s_prime_form(d);
        rep.s_matrix = sp.s_matrix;
        rep.add("composed_form_symmetric", sp.symmetric && sp.nondegenerate,
                sp.symmetric ? (sp.nondegenerate ? "symmetric, det != 0" : "symmetric but degenerate")
                             : "not symmetric");

        bool vident = true;
        const RfMatrix& e1 = d.filt.steps[0];
        std::vector<std::vector<TruncatedSeries>> basis;
        for (int c = 0; c < e1.cols(); ++c) {
            std::vector<TruncatedSeries> sec;
            for (int i = 0; i < d.rank(); ++i) sec.push_back(expand_at(e1.at(i, c), rep.witness_point, order));
            basis.push_back(std::move(sec));
        }
        for (size_t a = 0; a < basis.size() && vident; ++a)
            for (size_t b = 0; b < basis.size() && vident; ++b)
                vident = v_identity_check(d, basis[a], basis[b], order);
        rep.add("v_identity", vident,
                vident ? "vanishes through order " + std::to_string(order - (n - 1)) : "nonzero defect");
    } else {
        rep.add("composed_form_symmetric", false, "not evaluated: a prerequisite check failed");
        rep.add("v_identity", false, "not evaluated: a prerequisite check failed");
    }
    return rep;
}

// ---- induced Higgs data and degree bookkeeping ----

struct HiggsData {
    int n = 0, r = 0;
    long genus = 0, deg_Q = 0;
    RfMatrix phi;
    std::vector<long> graded_degrees;
    bool stable = false;
    bool char_poly_ok = false;
};

/// Assembles the nilpotent Higgs field with the second fundamental forms on
/// the subdiagonal blocks of the associated graded frame, and fills in the
/// degree ledger.
inline HiggsData higgs_from_boper(const BOperData& d) {
    int n = d.n(), r = d.r();
    BConnectionCheck bc = check_b_connection(d.conn, d.form);
    if (!bc.ok) fail(Errc::MalformedInput, "connection is not compatible with the form");
    if (!check_b_filtration(d.filt, d.form)) fail(Errc::MalformedInput, "filtration is not B-perpendicular");
    RfMatrix g = adapted_frame(d.filt);
    RfMatrix conj = conjugate_connection(d.conn.A, g);
    if (!detail::transversal_through(conj, n, r, n - 2))
        fail(Errc::TransversalityViolation, "connection does not shift the filtration by one step");

    HiggsData h;
    h.n = n;
    h.r = r;
    h.genus = d.genus;
    h.deg_Q = d.deg_Q;
    h.phi = RfMatrix(n * r, n * r);
    for (int i = 1; i <= n - 1; ++i) {
        RfMatrix si = conj.block(i * r, (i - 1) * r, r, r);
        if (determinant(si).is_zero())
            fail(Errc::NonInvertibleStep, "second fundamental form " + std::to_string(i) + " is singular");
        h.phi.set_block(i * r, (i - 1) * r, si);
    }
    for (int i = 0; i < n; ++i)
        h.graded_degrees.push_back(d.deg_Q + static_cast<long>(r) * (n - 1 - i) * (2 * d.genus - 2));
    h.stable = (n > 1 && d.genus > 1);
    std::vector<RationalFunction> cp = char_poly(h.phi);
    h.char_poly_ok = true;
    for (int k = 0; k < n * r; ++k)
        if (!cp[static_cast<size_t>(k)].is_zero()) h.char_poly_ok = false;
    return h;
}

struct DegreeData {
    long deg_det_Ei = 0;
    Rational slope_E;
    Rational slope_Q;
    Rational gap;
};

/// det(E_i) degree and the slope ledger:
/// deg det E_i = i deg(Q) + r (n i - i(i+1)/2)(2g - 2), and the stability gap
/// slope(E) - slope(Q) = (n-1)(g-1).
inline DegreeData degree_and_slope(int n, int r, long g, long deg_Q, int i) {
    if (n < 1 || r < 1) fail(Errc::MalformedInput, "need n >= 1 and r >= 1");
    if (g < 0) fail(Errc::UnsupportedGenus, "negative genus");
    if (i < 1 || i > n) fail(Errc::IndexOutOfRange, "filtration index out of range");
    auto deg_det = [&](long j) {
        return j * deg_Q + static_cast<long>(r) * (static_cast<long>(n) * j - j * (j + 1) / 2) * (2 * g - 2);
    };
    DegreeData out;
    out.deg_det_Ei = deg_det(i);
    out.slope_E = Rational(deg_det(n)) / Rational(static_cast<long>(n) * r);
    out.slope_Q = Rational(deg_Q) / Rational(r);
    out.gap = out.slope_E - out.slope_Q;
    return out;
}

struct ModuliDims {
    long dim_C = 0, dim_P = 0, dim_sum = 0, total = 0;
};

/// Dimension count of the parameter space: flat orthogonal bundles of rank r,
/// projective structures, and the even-degree differentials. The first two
/// are the standard counts (g-1) r (r-1) and 3g-3; the last is Riemann-Roch,
/// dim H^0(K^{2i}) = (4i-1)(g-1).
inline ModuliDims moduli_dimension(int n, int r, long g) {
    if (n < 2 || n == 3) fail(Errc::UnsupportedN, "length must be >= 2 and != 3");
    if (g < 2) fail(Errc::UnsupportedGenus, "genus must be >= 2");
    if (r < 1) fail(Errc::MalformedInput, "rank must be positive");
    ModuliDims out;
    out.dim_C = (r == 1) ? 0 : (g - 1) * r * (r - 1);
    out.dim_P = 3 * g - 3;
    for (int i = 2; i <= n / 2; ++i) out.dim_sum += (4L * i - 1) * (g - 1);
    out.total = out.dim_C + out.dim_P + out.dim_sum;
    return out;
}

} // namespace opercalc

#endif
