#pragma once

#include <gmpxx.h>

#include <string>

namespace wormcov {

using Integer = mpz_class;

/// Arbitrary-precision rational, always in canonical form: positive
/// denominator, gcd(|num|, den) = 1.
class Rational {
public:
    Rational() : q_(0) {}
    Rational(int value) : q_(value) {}
    Rational(long value) : q_(static_cast<signed long>(value)) {}
    Rational(const Integer& value) : q_(value) {}
    Rational(long num, long den);
    Rational(const Integer& num, const Integer& den);

    /// Parses "p", "-p" or "p/q". Throws std::invalid_argument on junk or q = 0.
    static Rational parse(const std::string& text);
    /// Exact conversion of a finite double (doubles are dyadic rationals).
    static Rational from_double(double value);

    Integer num() const { return q_.get_num(); }
    Integer den() const { return q_.get_den(); }

    int sign() const { return sgn(q_); }
    bool is_zero() const { return sign() == 0; }

    Rational pow(long exponent) const;
    Rational abs() const { return Rational(::abs(q_)); }
    Rational reciprocal() const;

    /// Truncating conversion (mpq_get_d); exact when representable.
    double to_double() const { return q_.get_d(); }
    /// "p" or "p/q".
    std::string str() const;

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ + b.q_)); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ - b.q_)); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ * b.q_)); }
    friend Rational operator/(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o);

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

private:
    explicit Rational(const mpq_class& q) : q_(q) {}
    mpq_class q_;
};

/// base^exp for non-negative integer exponents.
Integer ipow(const Integer& base, unsigned long exp);

/// 2^exp.
Integer pow2(unsigned long exp);

}  // namespace wormcov
