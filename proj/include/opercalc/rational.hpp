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

#ifndef OPERCALC_RATIONAL_HPP
#define OPERCALC_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "error.hpp"

namespace opercalc {

/// Exact rational scalar: reduced fraction with positive denominator.
/// Backed by GMP; canonical form is maintained on every construction.
class Rational {
  public:
    Rational() : q_(0) {}
    Rational(long v) : q_(static_cast<signed long>(v)) {}
    Rational(int v) : q_(v) {}
    Rational(long long num, long long den) {
        if (den == 0) fail(Errc::DivisionByZero, "rational with zero denominator");
        q_ = mpq_class(mpz_class(std::to_string(num)), mpz_class(std::to_string(den)));
        q_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }
    explicit Rational(const mpz_class& z) : q_(z) {}

    /// Parses "a" or "a/b" with optional sign.
    static Rational from_string(const std::string& s) {
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos) return Rational(mpq_class(mpz_class(s)));
            mpz_class num(s.substr(0, slash));
            mpz_class den(s.substr(slash + 1));
            if (den == 0) fail(Errc::DivisionByZero, "rational with zero denominator");
            mpq_class q(num, den);
            q.canonicalize();
            return Rational(q);
        } catch (const std::invalid_argument&) {
            fail(Errc::ParseError, "bad rational literal '" + s + "'");
        }
    }

    mpz_class numerator() const { return q_.get_num(); }
    mpz_class denominator() const { return q_.get_den(); }

    bool is_zero() const { return q_ == 0; }
    bool is_one() const { return q_ == 1; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) fail(Errc::DivisionByZero, "rational division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

    Rational inverse() const {
        if (is_zero()) fail(Errc::DivisionByZero, "inverse of zero");
        return Rational(mpq_class(1) / q_);
    }

    Rational abs() const { return Rational(mpq_class(::abs(q_))); }

    Rational pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        mpq_class r(1), b = q_;
        for (long k = e; k > 0; k >>= 1) {
            if (k & 1) r *= b;
            b *= b;
        }
        return Rational(r);
    }

    std::string str() const { return q_.get_str(); }

    const mpq_class& raw() const { return q_; }

    static Rational binomial(long n, long k) {
        if (k < 0 || k > n) return Rational(0);
        mpz_class b;
        mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
        return Rational(b);
    }

    static Rational factorial(long n) {
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
        return Rational(f);
    }

    /// Rising factorial x(x+1)...(x+k-1).
    static Rational rising(long x, long k) {
        Rational r(1);
        for (long i = 0; i < k; ++i) r *= Rational(x + i);
        return r;
    }

  private:
    mpq_class q_;
};

inline Rational operator*(long a, const Rational& b) { return Rational(a) * b; }
inline Rational operator*(const Rational& a, long b) { return a * Rational(b); }

} // namespace opercalc

#endif
