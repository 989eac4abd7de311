#ifndef ENVERIFY_RATIONAL_H
#define ENVERIFY_RATIONAL_H

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace enverify {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "0.7", "7/10", "1", "-0.25" or "1e-3" into an exact rational.
/// Decimal strings are read digit by digit, so "0.7" is exactly 7/10.
Rational parse_rational(std::string_view text);

/// Shorthand used throughout tests and tools.
inline Rational rat(std::string_view text) {
    return parse_rational(text);
}

Rational ipow(const Rational &base, unsigned exponent);
BigInt binomial(unsigned n, unsigned k);

/// Nearest double (ties to even); mpq_get_d truncates instead.
double to_double(const Rational &x);
inline double to_double(double x) {
    return x;
}

std::string to_string(const Rational &x);

/// Arithmetic backend used by the templated closed forms. `double` is the
/// fast path (log-space binomials above `kExactBinomialLimit`), `Rational`
/// is exact.
template <class T>
struct Arith;

template <>
struct Arith<double> {
    static constexpr unsigned kExactBinomialLimit = 60;

    static double from(const Rational &x) {
        return x.get_d();
    }
    static double from_int(long v) {
        return static_cast<double>(v);
    }
    static double pow(double base, unsigned e);
    /// C(n,k) * a^i * b^j, evaluated in log space for large n.
    static double binomial_term(unsigned n, unsigned k, double a, unsigned i, double b, unsigned j);
    /// n!/(i! k! l!) * a^i * b^k * c^l.
    static double multinomial_term(
        unsigned n, unsigned i, unsigned k, unsigned l, double a, double b, double c);
};

template <>
struct Arith<Rational> {
    static Rational from(const Rational &x) {
        return x;
    }
    static Rational from_int(long v) {
        return Rational(v);
    }
    static Rational pow(const Rational &base, unsigned e) {
        return ipow(base, e);
    }
    static Rational binomial_term(
        unsigned n, unsigned k, const Rational &a, unsigned i, const Rational &b, unsigned j);
    static Rational multinomial_term(
        unsigned n,
        unsigned i,
        unsigned k,
        unsigned l,
        const Rational &a,
        const Rational &b,
        const Rational &c);
};

}  // namespace enverify

#endif
