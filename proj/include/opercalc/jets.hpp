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

#ifndef OPERCALC_JETS_HPP
#define OPERCALC_JETS_HPP

#include <optional>
#include <string>
#include <vector>

#include "boper.hpp"

namespace opercalc {

/// Taylor data (s(z0), s'(z0), ..., s^(k)(z0)) of a rank-r section,
/// flattened derivative-major: entry (j, comp) sits at j*r + comp.
struct JetVector {
    int k = 0;
    int r = 0;
    std::vector<Rational> entries;
};

inline JetVector jet_prolong(const std::vector<TruncatedSeries>& s, int k) {
    if (s.empty()) fail(Errc::MalformedInput, "empty section");
    JetVector out;
    out.k = k;
    out.r = static_cast<int>(s.size());
    for (const auto& comp : s)
        if (comp.order() < k) fail(Errc::InsufficientOrder, "section order below jet order");
    for (int j = 0; j <= k; ++j)
        for (const auto& comp : s) out.entries.push_back(Rational::factorial(j) * comp.coeff(j));
    return out;
}

inline JetVector jet_prolong(const std::vector<RationalFunction>& s, int k, const Rational& z0) {
    std::vector<TruncatedSeries> expanded;
    expanded.reserve(s.size());
    for (const auto& f : s) expanded.push_back(expand_at(f, z0, k));
    return jet_prolong(expanded, k);
}

inline QMatrix eval_at(const RfMatrix& m, const Rational& z0) {
    return m.map([&](const RationalFunction& f) { return f.eval(z0); });
}

// ---- flat-jet maps ----

struct FlatJetMap {
    int k = 0;
    QMatrix mat; // (k+1) r x m, columns are jets of projected flat sections
};

/// The jet matrix evaluated at the base point: column j is the k-jet of the
/// projection of the flat section through the j-th frame vector.
inline FlatJetMap flat_jet_map(const ConnectionMatrix& conn, const RfMatrix& proj, int k,
                               const Rational& z0) {
    SeriesMatrix psi = series_solve_linear_ode(conn.A, z0, k);
    SeriesMatrix q = expand_at(proj, z0, k) * psi;
    int r = proj.rows(), m = conn.rank;
    FlatJetMap out;
    out.k = k;
    out.mat = QMatrix((k + 1) * r, m);
    for (int j = 0; j <= k; ++j)
        for (int c = 0; c < m; ++c)
            for (int comp = 0; comp < r; ++comp)
                out.mat.at(j * r + comp, c) = Rational::factorial(j) * q.at(comp, c).coeff(j);
    return out;
}

/// Verifies that tensoring a jet space by a flat bundle is an isomorphism
/// onto the jets of the tensor product: the matrix of
/// jet (x) fiber-vector -> jet(section * flat extension) must be invertible.
inline bool check_jet_tensor_iso(int v_rank, int w_rank, const RfMatrix& w_conn, int n,
                                 const Rational& z0) {
    if (v_rank < 1 || w_rank < 1 || n < 1) fail(Errc::MalformedInput, "ranks and order must be positive");
    if (w_conn.rows() != w_rank) fail(Errc::MalformedInput, "flat factor rank mismatch");
    SeriesMatrix phi = series_solve_linear_ode(w_conn, z0, n);
    int size = (n + 1) * v_rank * w_rank;
    QMatrix m(size, size);
    for (int i = 0; i <= n; ++i)
        for (int a = 0; a < v_rank; ++a)
            for (int b = 0; b < w_rank; ++b) {
                int col = (i * v_rank + a) * w_rank + b;
                for (int j = i; j <= n; ++j)
                    for (int b2 = 0; b2 < w_rank; ++b2) {
                        int row = (j * v_rank + a) * w_rank + b2;
                        // d^j/dz^j [ (z-z0)^i / i! * phi_{b2 b} ] at z0
                        m.at(row, col) = Rational::binomial(j, i) * Rational::factorial(j - i) *
                                         phi.at(b2, b).coeff(j - i);
                    }
            }
    return rank(m) == size;
}

// ---- scalar-oper input bundle for the converse construction ----

struct ScalarOperBundle {
    WeightedDiffOp oper;
    int w_rank = 1;
    BilinearForm w_form;
    ConnectionMatrix w_conn;
};

inline ScalarOperBundle trivial_line_bundle_parts(WeightedDiffOp op) {
    ScalarOperBundle p;
    p.oper = std::move(op);
    p.w_rank = 1;
    p.w_form = BilinearForm(RfMatrix(1, 1, {RationalFunction(1)}), FormParity::Orthogonal);
    p.w_conn = ConnectionMatrix(RfMatrix(1, 1, {RationalFunction(0)}));
    return p;
}

namespace detail {

/// Companion matrix of a monic scalar operator: jets of solutions are flat
/// for d + A dz with A = -C.
inline RfMatrix companion_matrix(const WeightedDiffOp& op) {
    int n = op.order;
    RfMatrix c(n, n);
    for (int i = 0; i + 1 < n; ++i) c.at(i, i + 1) = RationalFunction(1);
    for (int k = 0; k < n; ++k) c.at(n - 1, k) = -op.coeff(k);
    return c;
}

/// Pairing on jet coordinates whose derivative witnesses integration by
/// parts: P(s, t) with d/dz P = (D s) t - s (D-transpose t). For D* = D the
/// pairing is constant on pairs of solutions, so it is a horizontal bilinear
/// form on the companion bundle. Entry [l][m] pairs s^(l) with t^(m); the
/// matrix is anti-triangular with constant antidiagonal (-1)^{n-1-l}.
inline RfMatrix concomitant_form(const WeightedDiffOp& op) {
    int n = op.order;
    RfMatrix g(n, n);
    for (int k = 1; k <= n; ++k) {
        std::vector<RationalFunction> ak_der{op.coeff(k)};
        for (int i = 1; i <= k - 1; ++i) ak_der.push_back(ak_der.back().derivative());
        for (int i = 0; i <= k - 1; ++i) {
            Rational sgn((i % 2 == 0) ? 1 : -1);
            int l = k - 1 - i;
            for (int m2 = 0; m2 <= i; ++m2)
                g.at(l, m2) = g.at(l, m2) + (sgn * Rational::binomial(i, m2)) * ak_der[static_cast<size_t>(i - m2)];
        }
    }
    return g;
}

/// Filtration-preserving frame change T (lower triangular) with
/// T^T G T = c * sym-power Gram matrix. G must be anti-triangular with
/// constant antidiagonal, which is what concomitant_form produces.
inline RfMatrix normalize_horizontal_form(const RfMatrix& g, FormParity parity, const Rational& c) {
    int nn = g.rows();
    QMatrix gram = sym_power_gram(nn - 1);
    RfMatrix t(nn, nn);
    auto pair_cols = [&](const RfMatrix& x, const RfMatrix& y) {
        return (x.transpose() * g * y).at(0, 0);
    };
    auto unit = [&](int idx) {
        RfMatrix e(nn, 1);
        e.at(idx, 0) = RationalFunction(1);
        return e;
    };
    for (int k = nn - 1; k >= 0; --k) {
        int partner = nn - 1 - k;
        RfMatrix x(nn, 1);
        if (partner > k) {
            RationalFunction denom = pair_cols(unit(k), t.column(partner));
            if (denom.is_zero()) fail(Errc::DegenerateForm, "horizontal form is not anti-triangular");
            x.at(k, 0) = RationalFunction(c * gram.at(k, partner)) / denom;
        } else {
            x.at(k, 0) = RationalFunction(1);
        }
        for (int m = partner - 1; m >= k + 1; --m) {
            int l = nn - 1 - m;
            RationalFunction piv = pair_cols(unit(l), t.column(m));
            if (piv.is_zero()) fail(Errc::DegenerateForm, "horizontal form is not anti-triangular");
            x.at(l, 0) = x.at(l, 0) - pair_cols(x, t.column(m)) / piv;
        }
        if (parity == FormParity::Orthogonal && partner > k) {
            RationalFunction coef = pair_cols(x, unit(partner)) + pair_cols(unit(partner), x);
            if (coef.is_zero()) fail(Errc::DegenerateForm, "cannot complete the isotropic normalization");
            x.at(partner, 0) = x.at(partner, 0) - pair_cols(x, x) / coef;
        }
        t.set_block(0, k, x);
    }
    return t;
}

} // namespace detail

/// Converse construction: from a symplectic/orthogonal scalar oper and a flat
/// orthogonal bundle, assembles the full filtered datum. The rank-n factor is
/// the companion bundle of the scalar oper, re-framed so that its horizontal
/// pairing equals the symmetric-power pairing in the monomial basis (times a
/// constant square normalizer for odd length).
inline BOperData build_boper_from_parts(const ScalarOperBundle& parts, long genus, long deg_W = 0) {
    const WeightedDiffOp& op = parts.oper;
    int n = op.order;
    if (n < 2) fail(Errc::NotAnOper, "filtration length must be at least 2");
    OperClass cls = classify(op);
    if (cls != OperClass::Sp && cls != OperClass::SO)
        fail(Errc::NotAnOper, std::string("operator classifies as ") + oper_class_name(cls));
    int r = parts.w_rank;
    if (parts.w_form.rank != r || parts.w_conn.rank != r)
        fail(Errc::MalformedInput, "flat factor ranks disagree");
    if (parts.w_form.parity != FormParity::Orthogonal)
        fail(Errc::MalformedInput, "flat factor form must be orthogonal");
    if (!check_b_connection(parts.w_conn, parts.w_form).ok)
        fail(Errc::MalformedInput, "flat factor connection does not preserve its form");

    FormParity parity = (n % 2 == 0) ? FormParity::Symplectic : FormParity::Orthogonal;
    Rational c = (n % 2 == 1) ? Rational::binomial(n - 1, (n - 1) / 2) : Rational(1);

    RfMatrix companion = detail::companion_matrix(op);
    RfMatrix a_jet = -companion;
    RfMatrix g_form = detail::concomitant_form(op);
    RfMatrix t = detail::normalize_horizontal_form(g_form, parity, c);
    RfMatrix b_n = (t.transpose() * g_form * t);
    QMatrix gram = sym_power_gram(n - 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (b_n.at(i, j) != RationalFunction(c * gram.at(i, j)))
                fail(Errc::DegenerateForm, "form normalization failed");
    RfMatrix a_norm = conjugate_connection(a_jet, t);

    RfMatrix a_total = kron(a_norm, RfMatrix::identity(r)) + kron(RfMatrix::identity(n), parts.w_conn.A);
    RfMatrix b_total = kron(b_n, parts.w_form.mat);

    long deg_Q = static_cast<long>(r) * (1 - n) * (genus - 1) + deg_W;
    return BOperData(BilinearForm(std::move(b_total), parity), Filtration::tail_standard(n, r),
                     ConnectionMatrix(std::move(a_total)), genus, deg_Q, Rational(0),
                     parts.w_conn.A);
}

// ---- jet correspondence checks ----

struct JetCorrespondence {
    bool invertible = false;
    bool carries_filtration = false;
    Rational point;
};

/// Checks that the flat-jet map at order n-1 is a fiber isomorphism at a
/// regular point and that it carries the given filtration onto the jet
/// filtration (top rows of each mapped step vanish).
inline JetCorrespondence check_jet_correspondence(const BOperData& d, int order = -1) {
    int n = d.n(), r = d.r(), nr = d.rank();
    if (order < 0) order = d.default_order();
    RfMatrix g = adapted_frame(d.filt);
    std::vector<RationalFunction> regular;
    collect_entries(d.conn.A, regular);
    for (const auto& s : d.filt.steps) collect_entries(s, regular);
    std::vector<RationalFunction> nonzero{determinant(g)};
    JetCorrespondence out;
    out.point = choose_regular_point(regular, nonzero, d.base_point);

    RfMatrix ginv = inverse(g);
    RfMatrix proj = ginv.block((n - 1) * r, 0, r, nr);
    FlatJetMap f = flat_jet_map(d.conn, proj, n - 1, out.point);
    out.invertible = (rank(f.mat) == nr);
    if (!out.invertible) return out;

    out.carries_filtration = true;
    for (int i = 1; i <= n - 1; ++i) {
        QMatrix gens = eval_at(d.filt.steps[static_cast<size_t>(i - 1)], out.point);
        QMatrix image = f.mat * gens;
        if (!image.block(0, 0, (n - i) * r, image.cols()).is_zero()) out.carries_filtration = false;
        if (rank(image) != i * r) out.carries_filtration = false;
    }
    return out;
}

// ---- extraction of the quotient differential operator ----

/// Order-n matrix differential operator on the top quotient, with series
/// coefficients at the extraction point: D q = q^(n) - sum_k c_k q^(k)
/// annihilates the projections of flat sections. Stored as M_0..M_n with
/// M_n = Id; D = sum_k M_k d^k means M_k = -c_k below the top.
struct QuotientOperator {
    int order = 0;
    int rank = 0;
    Rational z0;
    std::vector<SeriesMatrix> coeffs;
};

inline QuotientOperator extract_quotient_operator(const BOperData& d, int order = -1) {
    int n = d.n(), r = d.r(), nr = d.rank();
    if (order < 0) order = d.default_order();
    if (order < n + 1) fail(Errc::InsufficientOrder, "series order too small for extraction");

    RfMatrix g = adapted_frame(d.filt);
    RfMatrix conj = conjugate_connection(d.conn.A, g);
    if (!detail::transversal_through(conj, n, r, n - 2))
        fail(Errc::TransversalityViolation, "connection does not shift the filtration by one step");

    std::vector<RationalFunction> regular;
    collect_entries(d.conn.A, regular);
    RfMatrix ginv = inverse(g);
    collect_entries(ginv, regular);
    std::vector<RationalFunction> nonzero{determinant(g)};
    Rational z0 = choose_regular_point(regular, nonzero, d.base_point);

    RfMatrix proj = ginv.block((n - 1) * r, 0, r, nr);
    SeriesMatrix psi = series_solve_linear_ode(d.conn.A, z0, order);
    SeriesMatrix q = expand_at(proj, z0, order) * psi;

    std::vector<SeriesMatrix> jets{q};
    for (int k = 1; k <= n; ++k)
        jets.push_back(jets.back().map([](const TruncatedSeries& e) { return e.derivative(); }));

    int avail = order - n;
    SeriesMatrix f(nr, nr);
    for (int k = 0; k < n; ++k)
        f.set_block(k * r, 0, jets[static_cast<size_t>(k)].map([&](const TruncatedSeries& e) {
            return e.truncate(avail);
        }));
    QMatrix f0 = series_coefficient(f, 0);
    if (rank(f0) != nr) fail(Errc::JetDegenerate, "flat-jet matrix is singular at the base point");

    SeriesMatrix c_all = jets[static_cast<size_t>(n)].map([&](const TruncatedSeries& e) {
                             return e.truncate(avail);
                         }) *
                         series_inverse(f);

    QuotientOperator out;
    out.order = n;
    out.rank = r;
    out.z0 = z0;
    for (int k = 0; k < n; ++k) out.coeffs.push_back(-c_all.block(0, k * r, r, r));
    out.coeffs.push_back(from_constant(QMatrix::identity(r), z0, avail));
    return out;
}

/// Self-adjointness of the extracted operator for the pairing induced by the
/// composed form: compares D with S^{-1} (sum_k (-1)^{n+k} d^k (M_k^T S .))
/// coefficient-by-coefficient through the available truncation order.
/// Returns the order through which the defect vanishes (-1 when the leading
/// coefficients already disagree).
inline int quotient_selfadjoint_order(const QuotientOperator& dq, const RfMatrix& s_on_qstar) {
    int n = dq.order, r = dq.rank;
    int avail = dq.coeffs[0].at(0, 0).order();
    SeriesMatrix s = expand_at(inverse(s_on_qstar), dq.z0, avail);
    SeriesMatrix s_inv = expand_at(s_on_qstar, dq.z0, avail);

    int result_order = avail - n;
    std::vector<SeriesMatrix> acc(static_cast<size_t>(n) + 1,
                                  SeriesMatrix(r, r).map([&](const TruncatedSeries&) {
                                      return TruncatedSeries::zero(dq.z0, result_order);
                                  }));
    for (int k = 0; k <= n; ++k) {
        SeriesMatrix wd = dq.coeffs[static_cast<size_t>(k)].transpose() * s;
        Rational sgn(((n + k) % 2 == 0) ? 1 : -1);
        for (int i = 0; i <= k; ++i) {
            // i derivatives of (M_k^T S .) land on t^(k-i)
            if (i > 0) wd = wd.map([](const TruncatedSeries& e) { return e.derivative(); });
            int j = k - i;
            acc[static_cast<size_t>(j)] =
                acc[static_cast<size_t>(j)] +
                (sgn * Rational::binomial(k, i)) *
                    wd.map([&](const TruncatedSeries& e) { return e.truncate(result_order); });
        }
    }
    int matched = result_order;
    for (int j = 0; j <= n; ++j) {
        SeriesMatrix adj = s_inv.map([&](const TruncatedSeries& e) { return e.truncate(result_order); }) *
                           acc[static_cast<size_t>(j)];
        SeriesMatrix diff = adj - dq.coeffs[static_cast<size_t>(j)].map([&](const TruncatedSeries& e) {
                                return e.truncate(result_order);
                            });
        for (int a = 0; a < r; ++a)
            for (int b = 0; b < r; ++b) {
                const TruncatedSeries& e = diff.at(a, b);
                int m = -1;
                while (m < result_order && e.coeff(m + 1).is_zero()) ++m;
                if (m < matched) matched = m;
            }
    }
    return matched;
}

/// Trace scalarization: conjugates the matrix coefficients into a flat frame
/// of the quotient connection and averages the trace, producing a scalar
/// operator with symbol 1.
inline SeriesDiffOp tau_scalarize(const QuotientOperator& dq, const RfMatrix& nabla_q) {
    int n = dq.order, r = dq.rank;
    if (nabla_q.rows() != r) fail(Errc::MalformedInput, "quotient connection rank mismatch");
    int avail = dq.coeffs[0].at(0, 0).order();
    SeriesMatrix phi = series_solve_linear_ode(nabla_q, dq.z0, avail + n);
    SeriesMatrix phi_inv = series_inverse(phi);

    std::vector<TruncatedSeries> scal;
    Rational inv_r = Rational(1, r);
    for (int j = 0; j <= n; ++j) {
        SeriesMatrix acc(r, r);
        acc = acc.map([&](const TruncatedSeries&) { return TruncatedSeries::zero(dq.z0, avail); });
        for (int k = j; k <= n; ++k) {
            SeriesMatrix phid = phi;
            for (int i = 0; i < k - j; ++i)
                phid = phid.map([](const TruncatedSeries& e) { return e.derivative(); });
            acc = acc + Rational::binomial(k, j) *
                            (dq.coeffs[static_cast<size_t>(k)] *
                             phid.map([&](const TruncatedSeries& e) { return e.truncate(avail); }));
        }
        SeriesMatrix conj = phi_inv.map([&](const TruncatedSeries& e) { return e.truncate(avail); }) * acc;
        TruncatedSeries tr = TruncatedSeries::zero(dq.z0, avail);
        for (int a = 0; a < r; ++a) tr += conj.at(a, a);
        scal.push_back(inv_r * tr);
    }
    return SeriesDiffOp(n, HalfInteger(1 - n), HalfInteger(n + 1), std::move(scal));
}

} // namespace opercalc

#endif
