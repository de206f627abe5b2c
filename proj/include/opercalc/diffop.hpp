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

#ifndef OPERCALC_DIFFOP_HPP
#define OPERCALC_DIFFOP_HPP

#include <string>
#include <vector>

#include "half_integer.hpp"
#include "matrix.hpp"

namespace opercalc {

/// Holomorphic differential operator between density lines K^a -> K^b on a
/// chart, written in the trivializing frame: D s = sum_k a_k s^(k).
/// The order is declared, not inferred: a vanishing leading coefficient is
/// kept as given so that operator spaces of a fixed order stay closed under
/// the calculus below.
template <class C>
struct DiffOperator {
    int order = 0;
    HalfInteger source_weight;
    HalfInteger target_weight;
    std::vector<C> coeffs; // a_0..a_order

    DiffOperator() : coeffs(1) {}
    DiffOperator(int n, HalfInteger a, HalfInteger b, std::vector<C> c)
        : order(n), source_weight(a), target_weight(b), coeffs(std::move(c)) {
        if (static_cast<int>(coeffs.size()) != order + 1)
            fail(Errc::ArityMismatch, "operator needs order+1 coefficients");
    }

    const C& coeff(int k) const { return coeffs[static_cast<size_t>(k)]; }

    bool weights_are_oper_pair() const {
        return source_weight.twice == 1 - order && target_weight.twice == order + 1;
    }

    friend bool operator==(const DiffOperator& a, const DiffOperator& b) {
        return a.order == b.order && a.source_weight == b.source_weight &&
               a.target_weight == b.target_weight && a.coeffs == b.coeffs;
    }
    friend bool operator!=(const DiffOperator& a, const DiffOperator& b) { return !(a == b); }
};

using WeightedDiffOp = DiffOperator<RationalFunction>;
using SeriesDiffOp = DiffOperator<TruncatedSeries>;

/// Order-n operator on the weight pair ((1-n)/2, (n+1)/2).
inline WeightedDiffOp make_oper_op(int n, std::vector<RationalFunction> coeffs) {
    return WeightedDiffOp(n, HalfInteger(1 - n), HalfInteger(n + 1), std::move(coeffs));
}

namespace detail {

inline RationalFunction coeff_const(const RationalFunction&, const Rational& v) {
    return RationalFunction(v);
}
inline TruncatedSeries coeff_const(const TruncatedSeries& model, const Rational& v) {
    return TruncatedSeries::constant(v, model.base(), model.order());
}

/// Coefficient list of (sum_i a_i d^i) o (sum_j b_j d^j), by Leibniz expansion
/// d^i (b_j s^(j)) = sum_l C(i,l) b_j^(l) s^(j+i-l).
template <class C>
std::vector<C> compose_coeff_lists(const std::vector<C>& a, const std::vector<C>& b) {
    int na = static_cast<int>(a.size()) - 1;
    int nb = static_cast<int>(b.size()) - 1;
    std::vector<C> out(static_cast<size_t>(na + nb) + 1, coeff_const(a[0], Rational(0)));
    for (int i = 0; i <= na; ++i) {
        if (a[static_cast<size_t>(i)].is_zero()) continue;
        for (int j = 0; j <= nb; ++j) {
            C bderiv = b[static_cast<size_t>(j)];
            for (int l = 0; l <= i; ++l) {
                if (l > 0) bderiv = bderiv.derivative();
                size_t m = static_cast<size_t>(j + i - l);
                out[m] = out[m] + Rational::binomial(i, l) * (a[static_cast<size_t>(i)] * bderiv);
            }
        }
    }
    return out;
}

/// Coefficient list of the formal transpose t -> sum_k (-1)^k (a_k t)^(k).
template <class C>
std::vector<C> transpose_coeff_list(const std::vector<C>& a) {
    int n = static_cast<int>(a.size()) - 1;
    std::vector<C> out(a.size(), coeff_const(a[0], Rational(0)));
    for (int k = 0; k <= n; ++k) {
        C d = a[static_cast<size_t>(k)];
        // (a_k t)^(k) = sum_j C(k,j) a_k^(k-j) t^(j); the i-th derivative of a_k
        // appears against t^(k-i).
        for (int i = 0; i <= k; ++i) {
            if (i > 0) d = d.derivative();
            Rational sgn((k % 2 == 0) ? 1 : -1);
            size_t j = static_cast<size_t>(k - i);
            out[j] = out[j] + (sgn * Rational::binomial(k, i)) * d;
        }
    }
    return out;
}

} // namespace detail

template <class C>
C apply(const DiffOperator<C>& d, const C& s) {
    C out = d.coeff(0) * s;
    C ds = s;
    for (int k = 1; k <= d.order; ++k) {
        ds = ds.derivative();
        out = out + d.coeff(k) * ds;
    }
    return out;
}

/// Action on a truncated series; the result is truncated to order - D.order.
inline TruncatedSeries apply(const WeightedDiffOp& d, const TruncatedSeries& s) {
    if (s.order() < d.order) fail(Errc::InsufficientOrder, "series order below operator order");
    TruncatedSeries out = TruncatedSeries::zero(s.base(), s.order() - d.order);
    TruncatedSeries ds = s;
    for (int k = 0; k <= d.order; ++k) {
        if (k > 0) ds = ds.derivative();
        out = out + expand_at(d.coeff(k), s.base(), s.order() - d.order) * ds.truncate(s.order() - d.order);
    }
    return out;
}

template <class C>
DiffOperator<C> compose(const DiffOperator<C>& d1, const DiffOperator<C>& d2) {
    if (d2.target_weight != d1.source_weight)
        fail(Errc::WeightMismatch, "composition weight mismatch");
    return DiffOperator<C>(d1.order + d2.order, d2.source_weight, d1.target_weight,
                           detail::compose_coeff_lists(d1.coeffs, d2.coeffs));
}

template <class C>
C symbol(const DiffOperator<C>& d) {
    return d.coeff(d.order);
}

/// Formal transpose of the coefficient data, with unchanged weights attached.
template <class C>
DiffOperator<C> formal_transpose(const DiffOperator<C>& d) {
    return DiffOperator<C>(d.order, d.source_weight, d.target_weight,
                           detail::transpose_coeff_list(d.coeffs));
}

/// Symbol-preserving adjoint D* = (-1)^n D-transpose on the oper weight pair.
/// The pairing of densities K^{(1-n)/2} x K^{(n+1)/2} -> K makes
/// <D s, t> - <s, D-transpose t> a total derivative; the sign normalization
/// keeps symbol(D*) = symbol(D) and (D*)* = D for every order.
template <class C>
DiffOperator<C> adjoint(const DiffOperator<C>& d) {
    if (!d.weights_are_oper_pair())
        fail(Errc::WeightMismatch, "adjoint requires the oper weight pair");
    DiffOperator<C> t = formal_transpose(d);
    if (d.order % 2 == 1)
        for (auto& c : t.coeffs) c = -c;
    return t;
}

/// Bilinear concomitant P(s,t) with d/dz P = (D s) t - s (D-transpose t);
/// used as the independent oracle for the adjoint convention.
inline RationalFunction bilinear_concomitant(const WeightedDiffOp& d, const RationalFunction& s,
                                             const RationalFunction& t) {
    RationalFunction acc(0);
    for (int k = 1; k <= d.order; ++k) {
        RationalFunction akt = d.coeff(k) * t;
        std::vector<RationalFunction> akt_deriv{akt};
        std::vector<RationalFunction> s_deriv{s};
        for (int i = 1; i <= k - 1; ++i) akt_deriv.push_back(akt_deriv.back().derivative());
        for (int i = 1; i <= k - 1; ++i) s_deriv.push_back(s_deriv.back().derivative());
        for (int i = 0; i <= k - 1; ++i) {
            Rational sgn((i % 2 == 0) ? 1 : -1);
            acc += sgn * (akt_deriv[static_cast<size_t>(i)] * s_deriv[static_cast<size_t>(k - 1 - i)]);
        }
    }
    return acc;
}

// ---- decomposition into tensor components ----

/// Graded pieces of an order-n operator: w_j represents a j-differential.
template <class C>
struct TensorComponents {
    int n = 0;
    std::vector<C> components; // w_0..w_n
};

namespace detail {

/// Lift coefficients for the order-(n-j) lift of a j-differential,
/// L_j(w) = sum_i c_i w^(i) d^{n-j-i}. For j >= 1 the c_i are fixed by
/// equivariance under Moebius changes of chart,
///   c_i = C(n-j, i) (j)_i / (2j)_i,
/// which also forces the adjoint parity L_j(w)* = (-1)^j L_j(w). The j = 0
/// slot (non-constant symbols, outside the oper stratum) uses the symmetrized
/// convention c_i = C(n,i)/2 so the parity rule extends to it.
inline std::vector<Rational> lift_coefficients(int n, int j) {
    int m = n - j;
    std::vector<Rational> c(static_cast<size_t>(m) + 1);
    c[0] = Rational(1);
    for (int i = 1; i <= m; ++i) {
        if (j == 0)
            c[static_cast<size_t>(i)] = Rational(1, 2) * Rational::binomial(n, i);
        else
            c[static_cast<size_t>(i)] =
                Rational::binomial(m, i) * Rational::rising(j, i) / Rational::rising(2 * j, i);
    }
    return c;
}

} // namespace detail

/// L_j(w): the fixed order-(n-j) lift of the j-differential w into the space
/// of declared-order-n operators on the oper weight pair.
template <class C>
DiffOperator<C> lift_operator(int n, int j, const C& w) {
    if (j < 0 || j > n) fail(Errc::IndexOutOfRange, "lift index out of range");
    std::vector<Rational> c = detail::lift_coefficients(n, j);
    std::vector<C> coeffs(static_cast<size_t>(n) + 1, detail::coeff_const(w, Rational(0)));
    C wd = w;
    for (int i = 0; i <= n - j; ++i) {
        if (i > 0) wd = wd.derivative();
        coeffs[static_cast<size_t>(n - j - i)] = c[static_cast<size_t>(i)] * wd;
    }
    return DiffOperator<C>(n, HalfInteger(1 - n), HalfInteger(n + 1), std::move(coeffs));
}

/// Triangular solve against the lift family: D = sum_j L_j(w_j) exactly.
template <class C>
TensorComponents<C> decompose(const DiffOperator<C>& d) {
    if (!d.weights_are_oper_pair())
        fail(Errc::WeightMismatch, "decomposition requires the oper weight pair");
    int n = d.order;
    std::vector<C> rem = d.coeffs;
    TensorComponents<C> tc;
    tc.n = n;
    for (int j = 0; j <= n; ++j) {
        C w = rem[static_cast<size_t>(n - j)];
        tc.components.push_back(w);
        if (!w.is_zero()) {
            DiffOperator<C> lj = lift_operator(n, j, w);
            for (int k = 0; k <= n; ++k) rem[static_cast<size_t>(k)] = rem[static_cast<size_t>(k)] - lj.coeff(k);
        }
    }
    return tc;
}

template <class C>
DiffOperator<C> recompose(const TensorComponents<C>& tc) {
    int n = tc.n;
    if (static_cast<int>(tc.components.size()) != n + 1)
        fail(Errc::ArityMismatch, "component count must be order+1");
    DiffOperator<C> out(n, HalfInteger(1 - n), HalfInteger(n + 1),
                        std::vector<C>(static_cast<size_t>(n) + 1,
                                       detail::coeff_const(tc.components[0], Rational(0))));
    for (int j = 0; j <= n; ++j) {
        if (tc.components[static_cast<size_t>(j)].is_zero()) continue;
        DiffOperator<C> lj = lift_operator(n, j, tc.components[static_cast<size_t>(j)]);
        for (int k = 0; k <= n; ++k) out.coeffs[static_cast<size_t>(k)] = out.coeff(k) + lj.coeff(k);
    }
    return out;
}

// ---- oper classification ----

enum class OperClass { NotOper, GL, SL, Sp, SO };

inline const char* oper_class_name(OperClass c) {
    switch (c) {
        case OperClass::NotOper: return "NotOper";
        case OperClass::GL: return "GL";
        case OperClass::SL: return "SL";
        case OperClass::Sp: return "Sp";
        case OperClass::SO: return "SO";
    }
    return "?";
}

/// Classification by vanishing of graded components: symbol 1, then the
/// sub-principal component, then every odd component. On the SL stratum the
/// last condition is equivalent to D* = D.
inline OperClass classify(const WeightedDiffOp& d) {
    TensorComponents<RationalFunction> tc = decompose(d);
    if (!tc.components[0].is_one()) return OperClass::NotOper;
    if (d.order >= 1 && !tc.components[1].is_zero()) return OperClass::GL;
    for (int j = 3; j <= d.order; j += 2)
        if (!tc.components[static_cast<size_t>(j)].is_zero()) return OperClass::SL;
    return (d.order % 2 == 0) ? OperClass::Sp : OperClass::SO;
}

// ---- pullback under a coordinate change ----

namespace detail {

template <class C>
std::vector<C> pullback_lists(const std::vector<C>& composed_coeffs, const C& phi_prime,
                              const C& log_deriv, const Rational& minus_source_weight, int ndiff) {
    // L = (1/phi')(d - a (phi''/phi')): conjugating the chain rule by the
    // source density factor keeps every coefficient in the ground ring.
    C inv_p = coeff_const(phi_prime, Rational(1)) / phi_prime;
    std::vector<C> L{minus_source_weight * (log_deriv * inv_p), inv_p};
    std::vector<C> power{coeff_const(phi_prime, Rational(1))};
    std::vector<C> acc{composed_coeffs[0]};
    int n = static_cast<int>(composed_coeffs.size()) - 1;
    acc.resize(static_cast<size_t>(n) + 1, coeff_const(phi_prime, Rational(0)));
    for (int k = 1; k <= n; ++k) {
        power = compose_coeff_lists(power, L);
        for (size_t m = 0; m < power.size(); ++m)
            acc[m] = acc[m] + composed_coeffs[static_cast<size_t>(k)] * power[m];
    }
    C weight_factor = coeff_const(phi_prime, Rational(1));
    for (int i = 0; i < ndiff; ++i) weight_factor = weight_factor * phi_prime;
    for (auto& c : acc) c = weight_factor * c;
    return acc;
}

} // namespace detail

/// Pullback of D under the rational change of coordinate z = phi(zeta),
/// including the density-weight factors. Moebius phi keeps the coefficients
/// rational of the same flavor.
inline WeightedDiffOp pullback(const WeightedDiffOp& d, const RationalFunction& phi) {
    RationalFunction dphi = phi.derivative();
    if (dphi.is_zero()) fail(Errc::SingularChange, "coordinate change has vanishing derivative");
    long wdiff = d.target_weight.twice - d.source_weight.twice;
    if (wdiff % 2 != 0) fail(Errc::WeightMismatch, "weight difference must be an integer");
    RationalFunction log_deriv = dphi.derivative() / dphi;
    std::vector<RationalFunction> composed;
    composed.reserve(d.coeffs.size());
    for (const auto& a : d.coeffs) composed.push_back(a.compose(phi));
    Rational msw = Rational(-d.source_weight.twice, 2);
    return WeightedDiffOp(d.order, d.source_weight, d.target_weight,
                          detail::pullback_lists(composed, dphi, log_deriv, msw,
                                                 static_cast<int>(wdiff / 2)));
}

/// Pullback under a formal change z = phi(zeta) given as a truncated series;
/// the result has series coefficients around phi's base point.
inline SeriesDiffOp pullback(const WeightedDiffOp& d, const TruncatedSeries& phi) {
    TruncatedSeries dphi = phi.derivative();
    if (dphi.value().is_zero()) fail(Errc::SingularChange, "coordinate change is singular at the base point");
    long wdiff = d.target_weight.twice - d.source_weight.twice;
    if (wdiff % 2 != 0) fail(Errc::WeightMismatch, "weight difference must be an integer");
    TruncatedSeries log_deriv = dphi.derivative() / dphi.truncate(dphi.order() - 1);
    Rational z0 = phi.value();
    std::vector<TruncatedSeries> composed;
    composed.reserve(d.coeffs.size());
    for (const auto& a : d.coeffs) composed.push_back(expand_at(a, z0, phi.order()).compose(phi));
    Rational msw = Rational(-d.source_weight.twice, 2);
    std::vector<TruncatedSeries> lists = detail::pullback_lists(
        composed, dphi, log_deriv, msw, static_cast<int>(wdiff / 2));
    return SeriesDiffOp(d.order, d.source_weight, d.target_weight, std::move(lists));
}

inline RationalFunction schwarzian(const RationalFunction& phi) {
    RationalFunction p1 = phi.derivative();
    if (p1.is_zero()) fail(Errc::SingularChange, "Schwarzian of a constant map");
    RationalFunction p2 = p1.derivative();
    RationalFunction p3 = p2.derivative();
    RationalFunction ratio = p2 / p1;
    return p3 / p1 - Rational(3, 2) * (ratio * ratio);
}

inline TruncatedSeries schwarzian(const TruncatedSeries& phi) {
    TruncatedSeries p1 = phi.derivative();
    if (p1.value().is_zero()) fail(Errc::SingularChange, "Schwarzian is singular at the base point");
    TruncatedSeries p2 = p1.derivative();
    TruncatedSeries p3 = p2.derivative();
    TruncatedSeries ratio = p2.truncate(p3.order()) / p1.truncate(p3.order());
    return p3 / p1.truncate(p3.order()) - Rational(3, 2) * (ratio * ratio);
}

// ---- pairing on symmetric powers of the standard symplectic plane ----

/// <e1^{d-k} e2^k, e1^{d-k'} e2^{k'}>_d in the monomial basis: the product
/// pairing on aligned decomposables, extended bilinearly by averaging over
/// permutations of one argument. Nonzero only on complementary monomials:
/// <., .> = (-1)^k / C(d,k) when k' = d - k.
inline Rational sym_power_pairing(int d, const std::vector<Rational>& v,
                                  const std::vector<Rational>& w) {
    if (d < 1) fail(Errc::IndexOutOfRange, "symmetric power degree must be positive");
    if (static_cast<int>(v.size()) != d + 1 || static_cast<int>(w.size()) != d + 1)
        fail(Errc::ArityMismatch, "Sym^d vectors need d+1 monomial coordinates");
    Rational acc(0);
    for (int k = 0; k <= d; ++k) {
        Rational sgn((k % 2 == 0) ? 1 : -1);
        acc += v[static_cast<size_t>(k)] * w[static_cast<size_t>(d - k)] * sgn /
               Rational::binomial(d, k);
    }
    return acc;
}

inline QMatrix sym_power_gram(int d) {
    QMatrix g(d + 1, d + 1);
    for (int k = 0; k <= d; ++k)
        g.at(k, d - k) = Rational((k % 2 == 0) ? 1 : -1) / Rational::binomial(d, k);
    return g;
}

} // namespace opercalc

#endif
