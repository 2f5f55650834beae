#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>
#include <string_view>

namespace refinery {

using BigInt = boost::multiprecision::cpp_int;
// Canonical exact rational: gcd-reduced, denominator > 0, maintained by the
// backend after every operation. et_off gives plain value semantics.
using Rational = boost::multiprecision::number<
    boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

/// Two values live in different quadratic extensions (distinct radicands).
struct field_context_error : std::runtime_error {
    explicit field_context_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Element of Q or of a real quadratic extension Q(sqrt(d)):  a + b*sqrt(d).
///
/// d is square-free and >= 2 whenever b != 0; values with b == 0 carry d == 0
/// and are compatible with any context. All comparisons are exact: the sign of
/// a + b*sqrt(d) is decided by integer case analysis, never by floating point.
class QuadScalar {
  public:
    QuadScalar() = default;
    QuadScalar(int v) : a_(v) {}
    QuadScalar(long long v) : a_(v) {}
    QuadScalar(BigInt v) : a_(std::move(v)) {}
    QuadScalar(Rational a) : a_(std::move(a)) {}
    QuadScalar(Rational a, Rational b, unsigned d = 5);

    /// sqrt(d) itself.
    static QuadScalar sqrt_of(unsigned d) { return QuadScalar(Rational(0), Rational(1), d); }
    static QuadScalar ratio(long long num, long long den) {
        return QuadScalar(Rational(num) / Rational(den));
    }

    const Rational& rational_part() const { return a_; }
    const Rational& radical_part() const { return b_; }
    unsigned radicand() const { return d_; }
    bool is_rational() const { return b_.is_zero(); }
    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }

    /// Exact sign in the real embedding: -1, 0, +1.
    int sign() const;

    QuadScalar operator-() const { return QuadScalar(-a_, -b_, d_, unchecked{}); }
    QuadScalar operator+(const QuadScalar& o) const;
    QuadScalar operator-(const QuadScalar& o) const;
    QuadScalar operator*(const QuadScalar& o) const;
    QuadScalar operator/(const QuadScalar& o) const;
    QuadScalar& operator+=(const QuadScalar& o) { return *this = *this + o; }
    QuadScalar& operator-=(const QuadScalar& o) { return *this = *this - o; }
    QuadScalar& operator*=(const QuadScalar& o) { return *this = *this * o; }
    QuadScalar& operator/=(const QuadScalar& o) { return *this = *this / o; }

    QuadScalar inverse() const;
    QuadScalar abs() const { return sign() < 0 ? -*this : *this; }

    friend bool operator==(const QuadScalar& x, const QuadScalar& y) { return (x - y).is_zero(); }
    friend bool operator!=(const QuadScalar& x, const QuadScalar& y) { return !(x == y); }
    friend bool operator<(const QuadScalar& x, const QuadScalar& y) { return (x - y).sign() < 0; }
    friend bool operator>(const QuadScalar& x, const QuadScalar& y) { return (x - y).sign() > 0; }
    friend bool operator<=(const QuadScalar& x, const QuadScalar& y) { return (x - y).sign() <= 0; }
    friend bool operator>=(const QuadScalar& x, const QuadScalar& y) { return (x - y).sign() >= 0; }

    /// Canonical text form; parse() accepts it back bit-exactly.
    std::string str() const;
    /// Grammar: `p/q`, `r/s*sqrt(d)`, or `p/q+r/s*sqrt(d)` (signs allowed,
    /// whitespace ignored, `/q` and `r/s*` parts optional).
    static QuadScalar parse(std::string_view text);

    double to_double() const;

  private:
    struct unchecked {};
    QuadScalar(Rational a, Rational b, unsigned d, unchecked) : a_(std::move(a)), b_(std::move(b)), d_(d) {
        if (b_.is_zero()) d_ = 0;
    }
    // Resolve the common radicand of two operands, or throw.
    static unsigned merge_context(const QuadScalar& x, const QuadScalar& y);

    Rational a_;
    Rational b_;
    unsigned d_ = 0;
};

using Scalar = QuadScalar;

/// -1 / 0 / +1 ordering helper used across the geometry code.
enum class Ordering { Less, Equal, Greater };
Ordering scalar_cmp(const Scalar& x, const Scalar& y);

std::string to_string(const Scalar& s);

} // namespace refinery
