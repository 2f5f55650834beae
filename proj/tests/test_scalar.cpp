#include "helpers.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <doctest.h>

using namespace refinery;
using testutil::R;
using testutil::random_quad;
using testutil::random_rational;

namespace {
Scalar alpha() { return (Scalar::sqrt_of(5) - Scalar(1)) * R(1, 2); }
}

TEST_CASE("rational ordering") {
    CHECK(scalar_cmp(R(1, 2), R(1, 3)) == Ordering::Greater);
    CHECK(scalar_cmp(R(-1, 2), R(0)) == Ordering::Less);
    CHECK(scalar_cmp(R(3, 6), R(1, 2)) == Ordering::Equal);
}

TEST_CASE("golden section comparisons") {
    Scalar a = alpha();
    CHECK(scalar_cmp(a, Scalar(0)) == Ordering::Greater);
    CHECK(scalar_cmp(a, Scalar(1)) == Ordering::Less);
    CHECK(scalar_cmp(a * a, Scalar(1) - a) == Ordering::Equal); // alpha^2 = 1 - alpha
}

TEST_CASE("quad scalar with zero radical part equals the rational") {
    Scalar q(Rational(2, 3), Rational(0), 5);
    CHECK(q == R(2, 3));
    CHECK(q.is_rational());
    Scalar r5 = Scalar::sqrt_of(5);
    CHECK((r5 * r5) == Scalar(5));
    CHECK((r5 - r5).is_rational());
}

TEST_CASE("mixed radicands are a context error") {
    Scalar x = Scalar(1) + Scalar::sqrt_of(5);
    Scalar y = Scalar(1) + Scalar::sqrt_of(2);
    CHECK_THROWS_AS((void)(x + y), field_context_error);
    CHECK_THROWS_AS((void)(x * y), field_context_error);
    CHECK_NOTHROW((void)(x + Scalar(2))); // rationals are context-free
}

TEST_CASE("field axioms on random inputs") {
    std::mt19937_64 rng(12345);
    for (int it = 0; it < 300; ++it) {
        Scalar x = it % 2 ? random_quad(rng) : random_rational(rng);
        Scalar y = it % 2 ? random_quad(rng) : random_rational(rng);
        Scalar z = it % 2 ? random_quad(rng) : random_rational(rng);
        CHECK((x + y) + z == x + (y + z));
        CHECK((x * y) * z == x * (y * z));
        CHECK(x * (y + z) == x * y + x * z);
        CHECK(x + y == y + x);
        CHECK(x * y == y * x);
        CHECK(x - x == Scalar(0));
        if (!x.is_zero()) {
            CHECK(x * x.inverse() == Scalar(1));
            CHECK(x / x == Scalar(1));
        }
    }
}

TEST_CASE("sign agrees with 100-digit evaluation") {
    using Big = boost::multiprecision::cpp_dec_float_100;
    std::mt19937_64 rng(777);
    int checked = 0;
    for (int it = 0; it < 1000; ++it) {
        Scalar x = random_quad(rng);
        Big a = Big(numerator(x.rational_part()).str()) / Big(denominator(x.rational_part()).str());
        Big b = Big(numerator(x.radical_part()).str()) / Big(denominator(x.radical_part()).str());
        Big v = a + b * sqrt(Big(x.is_rational() ? 5u : x.radicand()));
        if (abs(v) > Big("1e-80")) {
            int float_sign = v > 0 ? 1 : -1;
            CHECK(x.sign() == float_sign);
            ++checked;
        } else {
            CHECK(x.sign() == 0);
        }
    }
    CHECK(checked > 900);
}

TEST_CASE("parse and print round-trip") {
    for (const char* s : {"0", "7", "-3", "1/2", "-22/7", "1/4+1/4*sqrt(5)",
                          "-1/4-1/4*sqrt(5)", "2*sqrt(5)", "-1/2+3*sqrt(2)", "sqrt(5)"}) {
        Scalar v = Scalar::parse(s);
        CHECK(Scalar::parse(v.str()) == v);
        CHECK(Scalar::parse(v.str()).str() == v.str());
    }
    std::mt19937_64 rng(4242);
    for (int it = 0; it < 200; ++it) {
        Scalar v = it % 2 ? random_quad(rng) : random_rational(rng);
        CHECK(Scalar::parse(v.str()) == v);
        CHECK(Scalar::parse(v.str()).str() == v.str());
    }
}

TEST_CASE("parse is whitespace-insensitive") {
    CHECK(Scalar::parse(" -1/4 + 1/4 * sqrt( 5 ) ") == Scalar(Rational(-1, 4), Rational(1, 4), 5));
    CHECK(Scalar::parse("1 / 2") == R(1, 2));
}

TEST_CASE("parse rejects malformed input") {
    for (const char* s : {"", "1/0", "1+2", "sqrt(5)+sqrt(5)", "x", "1//2", "1/2+", "sqrt(5"}) {
        CHECK_THROWS_AS(Scalar::parse(s), std::invalid_argument);
    }
}

TEST_CASE("scalar_cmp mirrors subtraction sign on random pairs") {
    std::mt19937_64 rng(99);
    for (int it = 0; it < 200; ++it) {
        Scalar x = random_quad(rng), y = random_quad(rng);
        Ordering o = scalar_cmp(x, y);
        if (o == Ordering::Less) CHECK(x < y);
        if (o == Ordering::Greater) CHECK(x > y);
        if (o == Ordering::Equal) CHECK(x == y);
    }
}
