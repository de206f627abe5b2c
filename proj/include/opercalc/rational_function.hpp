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

#ifndef OPERCALC_RATIONAL_FUNCTION_HPP
#define OPERCALC_RATIONAL_FUNCTION_HPP

#include <cctype>
#include <string>
#include <utility>

#include "polynomial.hpp"

namespace opercalc {

/// Element of Q(z), stored reduced with monic denominator so that equality
/// is a structural comparison.
class RationalFunction {
  public:
    RationalFunction() : num_(), den_(Rational(1)) {}
    RationalFunction(const Rational& c) : num_(c), den_(Rational(1)) {}
    RationalFunction(long c) : num_(Rational(c)), den_(Rational(1)) {}
    RationalFunction(const Polynomial& p) : num_(p), den_(Rational(1)) {}
    RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
        normalize();
    }

    static RationalFunction variable() { return RationalFunction(Polynomial::variable()); }

    const Polynomial& numerator() const { return num_; }
    const Polynomial& denominator() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_polynomial() const { return den_.is_one(); }
    bool is_constant() const { return num_.is_constant() && den_.is_one(); }

    RationalFunction operator-() const {
        RationalFunction r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.is_zero()) fail(Errc::DivisionByZero, "division by the zero function");
        return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
    }
    friend RationalFunction operator*(const Rational& s, const RationalFunction& a) {
        return RationalFunction(s) * a;
    }

    RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
    RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
    RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
    RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

    /// d/dz by the quotient rule, reduced.
    RationalFunction derivative() const {
        return RationalFunction(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
    }

    RationalFunction inverse() const {
        if (is_zero()) fail(Errc::DivisionByZero, "inverse of the zero function");
        return RationalFunction(den_, num_);
    }

    RationalFunction pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        RationalFunction r(1), b = *this;
        for (long k = e; k > 0; k >>= 1) {
            if (k & 1) r *= b;
            b *= b;
        }
        return r;
    }

    bool regular_at(const Rational& x) const { return !den_.eval(x).is_zero(); }

    Rational eval(const Rational& x) const {
        Rational d = den_.eval(x);
        if (d.is_zero()) fail(Errc::PoleAtBasePoint, "evaluation at a pole");
        return num_.eval(x) / d;
    }

    /// Substitutes a rational function for z.
    RationalFunction compose(const RationalFunction& g) const {
        RationalFunction n(0), d(0);
        for (size_t i = num_.coeffs().size(); i-- > 0;) n = n * g + RationalFunction(num_.coeff(static_cast<int>(i)));
        for (size_t i = den_.coeffs().size(); i-- > 0;) d = d * g + RationalFunction(den_.coeff(static_cast<int>(i)));
        if (d.is_zero()) fail(Errc::DivisionByZero, "composition lands in a pole");
        return n / d;
    }

    std::string str() const {
        if (den_.is_one()) return num_.str();
        return "(" + num_.str() + ") / (" + den_.str() + ")";
    }

  private:
    void normalize() {
        if (den_.is_zero()) fail(Errc::DivisionByZero, "zero denominator");
        if (num_.is_zero()) {
            den_ = Polynomial(Rational(1));
            return;
        }
        if (!num_.is_constant() && !den_.is_constant()) {
            Polynomial g = Polynomial::gcd(num_, den_);
            if (g.degree() > 0) {
                num_ = Polynomial::divmod(num_, g).first;
                den_ = Polynomial::divmod(den_, g).first;
            }
        }
        Rational lead = den_.leading();
        if (!lead.is_one()) {
            Rational inv = lead.inverse();
            num_ = inv * num_;
            den_ = inv * den_;
        }
    }

    Polynomial num_;
    Polynomial den_;
};

namespace detail {

/// Recursive-descent parser for rational-function expressions in z.
/// Grammar: expr := term (('+'|'-') term)* ; term := unary (('*'|'/') unary)* ;
/// unary := '-' unary | power ; power := atom ('^' uint)? ;
/// atom := integer | 'z' | '(' expr ')'.
class RfParser {
  public:
    explicit RfParser(const std::string& s) : s_(s) {}

    RationalFunction parse() {
        RationalFunction r = expr();
        skip_ws();
        if (pos_ != s_.size()) fail(Errc::ParseError, "trailing input at '" + s_.substr(pos_) + "'");
        return r;
    }

  private:
    RationalFunction expr() {
        RationalFunction r = term();
        for (;;) {
            skip_ws();
            if (peek() == '+') {
                ++pos_;
                r += term();
            } else if (peek() == '-') {
                ++pos_;
                r -= term();
            } else {
                return r;
            }
        }
    }

    RationalFunction term() {
        RationalFunction r = unary();
        for (;;) {
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                r *= unary();
            } else if (peek() == '/') {
                ++pos_;
                RationalFunction d = unary();
                if (d.is_zero()) fail(Errc::ParseError, "division by zero in expression");
                r /= d;
            } else {
                return r;
            }
        }
    }

    RationalFunction unary() {
        skip_ws();
        if (peek() == '-') {
            ++pos_;
            return -unary();
        }
        if (peek() == '+') {
            ++pos_;
            return unary();
        }
        return power();
    }

    RationalFunction power() {
        RationalFunction base = atom();
        skip_ws();
        if (peek() == '^') {
            ++pos_;
            skip_ws();
            if (!std::isdigit(peek())) fail(Errc::ParseError, "exponent must be a nonnegative integer");
            long e = 0;
            while (std::isdigit(peek())) e = e * 10 + (s_[pos_++] - '0');
            return base.pow(e);
        }
        return base;
    }

    RationalFunction atom() {
        skip_ws();
        char c = peek();
        if (c == '(') {
            ++pos_;
            RationalFunction r = expr();
            skip_ws();
            if (peek() != ')') fail(Errc::ParseError, "missing ')'");
            ++pos_;
            return r;
        }
        if (c == 'z') {
            ++pos_;
            return RationalFunction::variable();
        }
        if (std::isdigit(c)) {
            std::string digits;
            while (std::isdigit(peek())) digits += s_[pos_++];
            return RationalFunction(Rational::from_string(digits));
        }
        fail(Errc::ParseError, std::string("unexpected character '") + (c ? std::string(1, c) : "<end>") + "'");
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    const std::string& s_;
    size_t pos_ = 0;
};

} // namespace detail

inline RationalFunction parse_rf(const std::string& s) { return detail::RfParser(s).parse(); }

} // namespace opercalc

#endif
