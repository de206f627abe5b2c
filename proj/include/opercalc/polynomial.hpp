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

#ifndef OPERCALC_POLYNOMIAL_HPP
#define OPERCALC_POLYNOMIAL_HPP

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace opercalc {

/// Dense univariate polynomial over the rationals in the chart coordinate z.
/// Coefficients are stored ascending; trailing zeros are trimmed so that the
/// zero polynomial has an empty coefficient list and degree -1.
class Polynomial {
  public:
    Polynomial() = default;
    Polynomial(const Rational& c) {
        if (!c.is_zero()) c_.push_back(c);
    }
    Polynomial(long c) : Polynomial(Rational(c)) {}
    Polynomial(std::initializer_list<Rational> ascending) : c_(ascending) { trim(); }
    explicit Polynomial(std::vector<Rational> ascending) : c_(std::move(ascending)) { trim(); }

    static Polynomial variable() { return Polynomial({Rational(0), Rational(1)}); }

    static Polynomial monomial(const Rational& c, int k) {
        if (c.is_zero()) return Polynomial();
        std::vector<Rational> v(static_cast<size_t>(k) + 1);
        v.back() = c;
        return Polynomial(std::move(v));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    bool is_one() const { return c_.size() == 1 && c_[0].is_one(); }

    Rational coeff(int k) const {
        if (k < 0 || k >= static_cast<int>(c_.size())) return Rational(0);
        return c_[static_cast<size_t>(k)];
    }

    Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

    Polynomial operator-() const {
        Polynomial r = *this;
        for (auto& c : r.c_) c = -c;
        return r;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<Rational> v(std::max(a.c_.size(), b.c_.size()));
        for (size_t i = 0; i < v.size(); ++i) v[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
        return Polynomial(std::move(v));
    }

    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return Polynomial();
        std::vector<Rational> v(a.c_.size() + b.c_.size() - 1);
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(v));
    }

    friend Polynomial operator*(const Rational& s, const Polynomial& p) {
        if (s.is_zero()) return Polynomial();
        Polynomial r = p;
        for (auto& c : r.c_) c *= s;
        return r;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    /// Euclidean division: returns (quotient, remainder) with deg(rem) < deg(divisor).
    static std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
        if (b.is_zero()) fail(Errc::DivisionByZero, "polynomial division by zero");
        Polynomial q, r = a;
        Rational lb = b.leading();
        while (!r.is_zero() && r.degree() >= b.degree()) {
            int k = r.degree() - b.degree();
            Rational f = r.leading() / lb;
            Polynomial t = monomial(f, k);
            q = q + t;
            r = r - t * b;
        }
        return {q, r};
    }

    Polynomial derivative() const {
        if (c_.size() <= 1) return Polynomial();
        std::vector<Rational> v(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) v[i - 1] = Rational(static_cast<long>(i)) * c_[i];
        return Polynomial(std::move(v));
    }

    Rational eval(const Rational& x) const {
        Rational r(0);
        for (size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
        return r;
    }

    /// Substitutes another polynomial for the variable (Horner).
    Polynomial compose(const Polynomial& g) const {
        Polynomial r;
        for (size_t i = c_.size(); i-- > 0;) r = r * g + Polynomial(c_[i]);
        return r;
    }

    /// Coefficients of p(z0 + t) as a polynomial in t.
    Polynomial taylor_shift(const Rational& z0) const {
        return compose(Polynomial({z0, Rational(1)}));
    }

    Polynomial monic() const {
        if (is_zero()) return *this;
        return leading().inverse() * *this;
    }

    /// Monic gcd over the rationals, computed as a primitive pseudo-remainder
    /// sequence over the integers to keep coefficient growth in check.
    static Polynomial gcd(const Polynomial& pa, const Polynomial& pb) {
        if (pa.is_zero()) return pb.monic();
        if (pb.is_zero()) return pa.monic();
        if (pa.is_constant() || pb.is_constant()) return Polynomial(Rational(1));

        using ZP = std::vector<mpz_class>;
        auto strip = [](ZP& v) {
            while (!v.empty() && v.back() == 0) v.pop_back();
            mpz_class g(0);
            for (const auto& x : v) g = ::gcd(g, x);
            if (g > 1)
                for (auto& x : v) x /= g;
        };
        auto primitive = [&](const Polynomial& p) {
            mpz_class l(1);
            for (const auto& c : p.coeffs()) l = lcm(l, c.denominator());
            ZP v(p.coeffs().size());
            for (size_t i = 0; i < v.size(); ++i) {
                const Rational& c = p.coeffs()[i];
                v[i] = c.numerator() * (l / c.denominator());
            }
            strip(v);
            return v;
        };
        auto pseudo_rem = [&](ZP a, const ZP& b) {
            const mpz_class& lb = b.back();
            while (a.size() >= b.size()) {
                mpz_class la = a.back();
                size_t k = a.size() - b.size();
                for (auto& x : a) x *= lb;
                for (size_t i = 0; i < b.size(); ++i) a[k + i] -= la * b[i];
                while (!a.empty() && a.back() == 0) a.pop_back();
            }
            strip(a);
            return a;
        };

        ZP a = primitive(pa), b = primitive(pb);
        if (a.size() < b.size()) std::swap(a, b);
        while (!b.empty()) {
            ZP r = pseudo_rem(a, b);
            a = std::move(b);
            b = std::move(r);
        }
        std::vector<Rational> out(a.size());
        for (size_t i = 0; i < a.size(); ++i) out[i] = Rational(a[i]);
        return Polynomial(std::move(out)).monic();
    }

    const std::vector<Rational>& coeffs() const { return c_; }

    /// Renders with descending powers, e.g. "3*z^2 - z + 1/2".
    std::string str() const {
        if (is_zero()) return "0";
        std::string out;
        for (int k = degree(); k >= 0; --k) {
            Rational c = coeff(k);
            if (c.is_zero()) continue;
            bool first = out.empty();
            bool neg = c.sign() < 0;
            Rational a = c.abs();
            if (first)
                out += neg ? "-" : "";
            else
                out += neg ? " - " : " + ";
            bool unit = a.is_one() && k > 0;
            if (!unit) out += a.str();
            if (k > 0) {
                if (!unit) out += "*";
                out += "z";
                if (k > 1) out += "^" + std::to_string(k);
            }
        }
        return out;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    std::vector<Rational> c_;
};

} // namespace opercalc

#endif
