#include "enverify/rational.h"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>

#include "enverify/errors.h"

namespace enverify {

namespace {

Rational parse_decimal(std::string_view text) {
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string exp_text(s.substr(e + 1));
        if (exp_text.empty()) {
            throw DomainError("malformed number: " + std::string(text));
        }
        size_t used = 0;
        try {
            exponent = std::stol(exp_text, &used);
        } catch (const std::exception &) {
            throw DomainError("malformed number: " + std::string(text));
        }
        if (used != exp_text.size()) {
            throw DomainError("malformed number: " + std::string(text));
        }
        s = s.substr(0, e);
    }
    std::string digits;
    long scale = 0;
    bool seen_point = false;
    for (char c : s) {
        if (c == '.') {
            if (seen_point) {
                throw DomainError("malformed number: " + std::string(text));
            }
            seen_point = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            if (seen_point) {
                scale++;
            }
        } else {
            throw DomainError("malformed number: " + std::string(text));
        }
    }
    if (digits.empty()) {
        throw DomainError("malformed number: " + std::string(text));
    }
    scale -= exponent;
    BigInt numerator(digits, 10);
    BigInt ten_power;
    mpz_ui_pow_ui(ten_power.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
    Rational r = scale >= 0 ? Rational(numerator, ten_power) : Rational(numerator * ten_power);
    r.canonicalize();
    return negative ? Rational(-r) : r;
}

}  // namespace

double to_double(const Rational &x) {
    const int sign = sgn(x);
    if (sign == 0) {
        return 0.0;
    }
    BigInt a = abs(x.get_num());
    const BigInt &b = x.get_den();
    // Scale so the quotient carries 54 bits: 53 for the mantissa, one guard.
    long shift = 54 - (static_cast<long>(mpz_sizeinbase(a.get_mpz_t(), 2)) -
                       static_cast<long>(mpz_sizeinbase(b.get_mpz_t(), 2)));
    BigInt q, r;
    while (true) {
        BigInt num = a;
        BigInt den = b;
        if (shift >= 0) {
            num <<= static_cast<mp_bitcnt_t>(shift);
        } else {
            den <<= static_cast<mp_bitcnt_t>(-shift);
        }
        mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        const size_t bits = mpz_sizeinbase(q.get_mpz_t(), 2);
        if (bits == 54) {
            break;
        }
        shift += bits < 54 ? 1 : -1;
    }
    const bool guard = mpz_tstbit(q.get_mpz_t(), 0) != 0;
    q >>= 1;
    uint64_t mantissa = q.get_ui();
    if (guard && (r != 0 || (mantissa & 1u) != 0)) {
        mantissa++;
    }
    const double value = std::ldexp(static_cast<double>(mantissa), static_cast<int>(1 - shift));
    return sign < 0 ? -value : value;
}

Rational parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
        text.remove_prefix(1);
    }
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
        text.remove_suffix(1);
    }
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Rational num = parse_decimal(text.substr(0, slash));
        Rational den = parse_decimal(text.substr(slash + 1));
        if (den == 0) {
            throw DomainError("zero denominator: " + std::string(text));
        }
        return num / den;
    }
    return parse_decimal(text);
}

Rational ipow(const Rational &base, unsigned exponent) {
    Rational r;
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
    // Powers of a canonical fraction stay canonical, except 0^0.
    if (r.get_den() == 0) {
        r = 1;
    }
    return r;
}

BigInt binomial(unsigned n, unsigned k) {
    BigInt r;
    if (k > n) {
        return 0;
    }
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

std::string to_string(const Rational &x) {
    return x.get_str();
}

double Arith<double>::pow(double base, unsigned e) {
    if (e == 0) {
        return 1.0;
    }
    double result = 1.0;
    double b = base;
    while (e) {
        if (e & 1u) {
            result *= b;
        }
        b *= b;
        e >>= 1u;
    }
    return result;
}

namespace {

// Pascal triangle up to the exact limit; entries are exact below 2^53 and
// correctly rounded above.
const std::vector<std::vector<double>> &pascal() {
    static const std::vector<std::vector<double>> table = [] {
        std::vector<std::vector<double>> t(Arith<double>::kExactBinomialLimit + 1);
        for (unsigned n = 0; n < t.size(); n++) {
            t[n].assign(n + 1, 1.0);
            for (unsigned k = 1; k < n; k++) {
                t[n][k] = t[n - 1][k - 1] + t[n - 1][k];
            }
        }
        return t;
    }();
    return table;
}

double log_factorial(unsigned n) {
    return std::lgamma(static_cast<double>(n) + 1.0);
}

// log(a^i), or nullopt-like sentinel when the factor is exactly zero.
bool log_power(double a, unsigned i, double &out) {
    if (i == 0) {
        out = 0;
        return true;
    }
    if (a == 0) {
        return false;
    }
    out = static_cast<double>(i) * std::log(a);
    return true;
}

}  // namespace

double Arith<double>::binomial_term(unsigned n, unsigned k, double a, unsigned i, double b, unsigned j) {
    if (k > n) {
        return 0.0;
    }
    if (n <= kExactBinomialLimit) {
        return pascal()[n][k] * pow(a, i) * pow(b, j);
    }
    double la, lb;
    if (!log_power(a, i, la) || !log_power(b, j, lb)) {
        return 0.0;
    }
    double lc = log_factorial(n) - log_factorial(k) - log_factorial(n - k);
    return std::exp(lc + la + lb);
}

double Arith<double>::multinomial_term(
    unsigned n, unsigned i, unsigned k, unsigned l, double a, double b, double c) {
    if (i + k + l != n) {
        return 0.0;
    }
    if (n <= kExactBinomialLimit) {
        return pascal()[n][k] * pascal()[n - k][l] * pow(a, i) * pow(b, k) * pow(c, l);
    }
    double la, lb, lc;
    if (!log_power(a, i, la) || !log_power(b, k, lb) || !log_power(c, l, lc)) {
        return 0.0;
    }
    double lm = log_factorial(n) - log_factorial(i) - log_factorial(k) - log_factorial(l);
    return std::exp(lm + la + lb + lc);
}

Rational Arith<Rational>::binomial_term(
    unsigned n, unsigned k, const Rational &a, unsigned i, const Rational &b, unsigned j) {
    if (k > n) {
        return 0;
    }
    return Rational(binomial(n, k)) * ipow(a, i) * ipow(b, j);
}

Rational Arith<Rational>::multinomial_term(
    unsigned n,
    unsigned i,
    unsigned k,
    unsigned l,
    const Rational &a,
    const Rational &b,
    const Rational &c) {
    if (i + k + l != n) {
        return 0;
    }
    BigInt coefficient = binomial(n, k) * binomial(n - k, l);
    return Rational(coefficient) * ipow(a, i) * ipow(b, k) * ipow(c, l);
}

}  // namespace enverify
