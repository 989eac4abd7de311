#include "enverify/rational.h"

#include <gtest/gtest.h>

#include <cmath>

#include "enverify/errors.h"

using namespace enverify;

TEST(rational, parse_decimal_is_exact) {
    ASSERT_EQ(rat("0.7"), Rational(7, 10));
    ASSERT_EQ(rat("-0.25"), Rational(-1, 4));
    ASSERT_EQ(rat("1"), Rational(1));
    ASSERT_EQ(rat("1e-3"), Rational(1, 1000));
    ASSERT_EQ(rat("2.5E2"), Rational(250));
    ASSERT_EQ(rat("7/10"), Rational(7, 10));
    ASSERT_EQ(rat(" 3/6 "), Rational(1, 2));
    ASSERT_EQ(rat("0.10"), Rational(1, 10));
    ASSERT_EQ(rat("0.99"), Rational(99, 100));
    ASSERT_EQ(rat("010/08"), Rational(5, 4));
}

TEST(rational, parse_rejects_garbage) {
    ASSERT_THROW(rat(""), DomainError);
    ASSERT_THROW(rat("abc"), DomainError);
    ASSERT_THROW(rat("1/0"), DomainError);
    ASSERT_THROW(rat("0.7x"), DomainError);
    ASSERT_THROW(rat("1e"), DomainError);
}

TEST(rational, ipow_and_binomial) {
    ASSERT_EQ(ipow(Rational(9, 10), 2), Rational(81, 100));
    ASSERT_EQ(ipow(Rational(3), 0), Rational(1));
    ASSERT_EQ(binomial(10, 3), BigInt(120));
    ASSERT_EQ(binomial(3, 5), BigInt(0));
    ASSERT_EQ(binomial(60, 30), BigInt("118264581564861424"));
}

TEST(rational, float_backend_matches_exact_terms) {
    for (unsigned n : {5u, 40u, 60u, 61u, 200u}) {
        for (unsigned k = 0; k <= n; k += n / 5 + 1) {
            double exact = to_double(Arith<Rational>::binomial_term(
                n, k, Rational(7, 10), n - k, Rational(3, 10), k));
            double fast = Arith<double>::binomial_term(n, k, 0.7, n - k, 0.3, k);
            ASSERT_NEAR(fast, exact, 1e-12 * std::max(1e-300, exact) + 1e-300) << n << " " << k;
        }
    }
}

TEST(rational, float_multinomial_matches_exact) {
    for (unsigned n : {4u, 30u, 90u}) {
        unsigned i = n / 2, k = n / 4, l = n - i - k;
        double exact = to_double(Arith<Rational>::multinomial_term(
            n, i, k, l, Rational(3, 4), Rational(1, 10), Rational(3, 20)));
        double fast = Arith<double>::multinomial_term(n, i, k, l, 0.75, 0.1, 0.15);
        ASSERT_NEAR(fast / exact, 1.0, 1e-11);
    }
}

TEST(rational, to_double_rounds_to_nearest) {
    ASSERT_EQ(to_double(rat("0.9")), 0.9);
    ASSERT_EQ(to_double(rat("0.7")), 0.7);
    ASSERT_EQ(to_double(rat("-0.1")), -0.1);
    ASSERT_EQ(to_double(Rational(0)), 0.0);
    for (long p = -40; p <= 40; p++) {
        for (long q = 1; q <= 60; q++) {
            Rational x(p, q);
            x.canonicalize();
            ASSERT_EQ(to_double(x), static_cast<double>(p) / static_cast<double>(q)) << p << "/" << q;
        }
    }
    ASSERT_EQ(to_double(ipow(rat("0.5"), 1000)), std::ldexp(1.0, -1000));
    ASSERT_EQ(to_double(rat("1e30")), 1e30);
    ASSERT_EQ(to_double(rat("123456789.123456789")), 123456789.123456789);
}
