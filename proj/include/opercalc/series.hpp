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

#ifndef OPERCALC_SERIES_HPP
#define OPERCALC_SERIES_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "rational_function.hpp"

namespace opercalc {

/// Taylor polynomial of a local section at a base point, truncated at a fixed
/// order. Arithmetic never reads past the stored order; binary operations
/// truncate to the smaller operand order. Derivative drops the order by one.
class TruncatedSeries {
  public:
    TruncatedSeries() : base_(0), c_(1) {}

    TruncatedSeries(Rational base_point, int order, std::vector<Rational> coeffs)
        : base_(std::move(base_point)), c_(std::move(coeffs)) {
        if (static_cast<int>(c_.size()) != order + 1)
            fail(Errc::MalformedInput, "series coefficient count does not match order");
    }

    static TruncatedSeries constant(const Rational& v, const Rational& base, int order) {
        std::vector<Rational> c(static_cast<size_t>(order) + 1);
        c[0] = v;
        return TruncatedSeries(base, order, std::move(c));
    }

    static TruncatedSeries zero(const Rational& base, int order) {
        return constant(Rational(0), base, order);
    }

    /// (z - base) as a series.
    static TruncatedSeries local_coordinate(const Rational& base, int order) {
        std::vector<Rational> c(static_cast<size_t>(order) + 1);
        if (order >= 1) c[1] = Rational(1);
        return TruncatedSeries(base, order, std::move(c));
    }

    const Rational& base() const { return base_; }
    int order() const { return static_cast<int>(c_.size()) - 1; }

    Rational coeff(int k) const {
        if (k < 0 || k > order()) return Rational(0);
        return c_[static_cast<size_t>(k)];
    }

    Rational value() const { return c_[0]; }

    bool is_zero() const {
        for (const auto& c : c_)
            if (!c.is_zero()) return false;
        return true;
    }

    bool is_zero_through(int k) const {
        for (int i = 0; i <= std::min(k, order()); ++i)
            if (!c_[static_cast<size_t>(i)].is_zero()) return false;
        return true;
    }

    TruncatedSeries truncate(int new_order) const {
        if (new_order >= order()) return *this;
        if (new_order < 0) fail(Errc::InsufficientOrder, "cannot truncate below order 0");
        std::vector<Rational> c(c_.begin(), c_.begin() + new_order + 1);
        return TruncatedSeries(base_, new_order, std::move(c));
    }

    TruncatedSeries operator-() const {
        TruncatedSeries r = *this;
        for (auto& c : r.c_) c = -c;
        return r;
    }

    // An identically-zero operand is treated as the exact zero: it neither
    // truncates a sum nor limits the order of a product. Zero series arise
    // here from fresh accumulators and exact cancellations, not from unknown
    // tails.
    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
        a.check_base(b);
        if (a.is_zero() && a.order() < b.order()) return b;
        if (b.is_zero() && b.order() < a.order()) return a;
        int n = std::min(a.order(), b.order());
        std::vector<Rational> c(static_cast<size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) c[static_cast<size_t>(i)] = a.coeff(i) + b.coeff(i);
        return TruncatedSeries(a.base_, n, std::move(c));
    }

    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) { return a + (-b); }

    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
        a.check_base(b);
        if (a.is_zero() || b.is_zero()) return zero(a.base_, std::max(a.order(), b.order()));
        int n = std::min(a.order(), b.order());
        std::vector<Rational> c(static_cast<size_t>(n) + 1);
        for (int i = 0; i <= n; ++i)
            for (int j = 0; i + j <= n; ++j) c[static_cast<size_t>(i + j)] += a.coeff(i) * b.coeff(j);
        return TruncatedSeries(a.base_, n, std::move(c));
    }

    friend TruncatedSeries operator*(const Rational& s, const TruncatedSeries& a) {
        TruncatedSeries r = a;
        for (auto& c : r.c_) c *= s;
        return r;
    }

    /// Division; the divisor must be a unit (nonzero value at the base point).
    friend TruncatedSeries operator/(const TruncatedSeries& a, const TruncatedSeries& b) {
        a.check_base(b);
        if (b.coeff(0).is_zero()) fail(Errc::DivisionByZero, "series division by a non-unit");
        int n = std::min(a.order(), b.order());
        std::vector<Rational> c(static_cast<size_t>(n) + 1);
        Rational inv = b.coeff(0).inverse();
        for (int i = 0; i <= n; ++i) {
            Rational acc = a.coeff(i);
            for (int j = 0; j < i; ++j) acc -= c[static_cast<size_t>(j)] * b.coeff(i - j);
            c[static_cast<size_t>(i)] = acc * inv;
        }
        return TruncatedSeries(a.base_, n, std::move(c));
    }

    TruncatedSeries& operator+=(const TruncatedSeries& o) { return *this = *this + o; }
    TruncatedSeries& operator-=(const TruncatedSeries& o) { return *this = *this - o; }
    TruncatedSeries& operator*=(const TruncatedSeries& o) { return *this = *this * o; }

    TruncatedSeries derivative() const {
        if (order() == 0) fail(Errc::InsufficientOrder, "derivative of an order-0 series");
        std::vector<Rational> c(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) c[i - 1] = Rational(static_cast<long>(i)) * c_[i];
        return TruncatedSeries(base_, order() - 1, std::move(c));
    }

    TruncatedSeries inverse() const {
        return constant(Rational(1), base_, order()) / *this;
    }

    /// Substitution f(g): g must be a series whose value equals f's base point.
    /// The result is only known through the smaller of the two orders.
    TruncatedSeries compose(const TruncatedSeries& g) const {
        if (g.value() != base_) fail(Errc::MalformedInput, "series composition base mismatch");
        int n = std::min(order(), g.order());
        TruncatedSeries t = g.truncate(n) - constant(g.value(), g.base(), n); // nilpotent part
        TruncatedSeries r = zero(g.base(), n);
        for (int i = n; i >= 0; --i) r = r * t + constant(coeff(i), g.base(), n);
        return r;
    }

    /// True when the two series agree on all coefficients up to `k`.
    static bool agree_through(const TruncatedSeries& a, const TruncatedSeries& b, int k) {
        if (a.base_ != b.base_) return false;
        if (k > a.order() || k > b.order()) return false;
        for (int i = 0; i <= k; ++i)
            if (a.coeff(i) != b.coeff(i)) return false;
        return true;
    }

    std::string str() const {
        std::string t = base_.is_zero() ? "z" : "(z - " + base_.str() + ")";
        std::string out;
        for (int k = 0; k <= order(); ++k) {
            const Rational& c = c_[static_cast<size_t>(k)];
            if (c.is_zero()) continue;
            bool neg = c.sign() < 0;
            Rational a = c.abs();
            if (out.empty())
                out += neg ? "-" : "";
            else
                out += neg ? " - " : " + ";
            bool unit = a.is_one() && k > 0;
            if (!unit) out += a.str();
            if (k >= 1) {
                if (!unit) out += "*";
                out += t;
                if (k > 1) out += "^" + std::to_string(k);
            }
        }
        if (out.empty()) out = "0";
        out += " + O(" + t + "^" + std::to_string(order() + 1) + ")";
        return out;
    }

  private:
    void check_base(const TruncatedSeries& o) const {
        if (base_ != o.base_) fail(Errc::MalformedInput, "series base points differ");
    }

    Rational base_;
    std::vector<Rational> c_;
};

/// Taylor expansion of a rational function at z0 through the given order.
inline TruncatedSeries expand_at(const RationalFunction& f, const Rational& z0, int order) {
    if (!f.regular_at(z0)) fail(Errc::PoleAtBasePoint, "rational function has a pole at the base point");
    Polynomial num = f.numerator().taylor_shift(z0);
    Polynomial den = f.denominator().taylor_shift(z0);
    auto take = [&](const Polynomial& p) {
        std::vector<Rational> c(static_cast<size_t>(order) + 1);
        for (int i = 0; i <= order; ++i) c[static_cast<size_t>(i)] = p.coeff(i);
        return TruncatedSeries(z0, order, std::move(c));
    };
    return take(num) / take(den);
}

} // namespace opercalc

#endif
