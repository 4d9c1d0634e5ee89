#include "wormcov/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace wormcov {

Rational::Rational(long num, long den) : q_(num, den) {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    q_.canonicalize();
}

Rational::Rational(const Integer& num, const Integer& den) : q_(num, den) {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    q_.canonicalize();
}

Rational Rational::parse(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(Integer(text));
        }
        Integer num(text.substr(0, slash));
        Integer den(text.substr(slash + 1));
        return Rational(num, den);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("rational: cannot parse '" + text + "'");
    }
}

Rational Rational::from_double(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("rational: non-finite double");
    return Rational(mpq_class(value));
}

Rational Rational::pow(long exponent) const {
    if (exponent == 0) return Rational(1);
    if (is_zero() && exponent < 0) throw std::invalid_argument("rational: 0^negative");
    const unsigned long e = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
    Integer n, d;
    mpz_pow_ui(n.get_mpz_t(), num().get_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), den().get_mpz_t(), e);
    return exponent > 0 ? Rational(n, d) : Rational(d, n);
}

Rational Rational::reciprocal() const {
    if (is_zero()) throw std::invalid_argument("rational: reciprocal of zero");
    return Rational(den(), num());
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::invalid_argument("rational: division by zero");
    return Rational(mpq_class(a.q_ / b.q_));
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::invalid_argument("rational: division by zero");
    q_ /= o.q_;
    return *this;
}

std::string Rational::str() const {
    if (den() == 1) return num().get_str();
    return num().get_str() + "/" + den().get_str();
}

Integer ipow(const Integer& base, unsigned long exp) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

Integer pow2(unsigned long exp) {
    Integer r = 1;
    mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), exp);
    return r;
}

}  // namespace wormcov
