#include "refinery/scalar.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

namespace refinery {

namespace {

bool is_square_free(unsigned d) {
    for (unsigned p = 2; p * p <= d; ++p)
        if (d % (p * p) == 0) return false;
    return true;
}

int rat_sign(const Rational& r) { return r.sign(); }

std::string rat_str(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) {
        s += '/';
        s += denominator(r).str();
    }
    return s;
}

} // namespace

QuadScalar::QuadScalar(Rational a, Rational b, unsigned d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
    if (b_.is_zero()) {
        d_ = 0;
    } else if (d_ < 2 || !is_square_free(d_)) {
        throw std::invalid_argument("QuadScalar: radicand must be square-free and >= 2");
    }
}

unsigned QuadScalar::merge_context(const QuadScalar& x, const QuadScalar& y) {
    if (x.b_.is_zero()) return y.d_;
    if (y.b_.is_zero()) return x.d_;
    if (x.d_ != y.d_)
        throw field_context_error("mixed radicands sqrt(" + std::to_string(x.d_) + ") and sqrt(" +
                                  std::to_string(y.d_) + ")");
    return x.d_;
}

int QuadScalar::sign() const {
    int sa = rat_sign(a_);
    int sb = rat_sign(b_);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: compare a^2 against b^2 d; the larger magnitude wins.
    Rational lhs = a_ * a_;
    Rational rhs = b_ * b_ * Rational(d_);
    int c = (lhs == rhs) ? 0 : (lhs < rhs ? -1 : 1);
    return c == 0 ? 0 : (c > 0 ? sa : sb);
}

QuadScalar QuadScalar::operator+(const QuadScalar& o) const {
    unsigned d = merge_context(*this, o);
    return QuadScalar(a_ + o.a_, b_ + o.b_, d, unchecked{});
}

QuadScalar QuadScalar::operator-(const QuadScalar& o) const {
    unsigned d = merge_context(*this, o);
    return QuadScalar(a_ - o.a_, b_ - o.b_, d, unchecked{});
}

QuadScalar QuadScalar::operator*(const QuadScalar& o) const {
    unsigned d = merge_context(*this, o);
    return QuadScalar(a_ * o.a_ + b_ * o.b_ * Rational(d), a_ * o.b_ + b_ * o.a_, d, unchecked{});
}

QuadScalar QuadScalar::inverse() const {
    if (is_zero()) throw std::domain_error("division by zero");
    if (b_.is_zero()) return QuadScalar(Rational(1) / a_);
    // 1/(a+b*sqrt(d)) = (a-b*sqrt(d)) / (a^2 - b^2 d); the norm is nonzero
    // because d is square-free.
    Rational norm = a_ * a_ - b_ * b_ * Rational(d_);
    return QuadScalar(a_ / norm, -b_ / norm, d_, unchecked{});
}

QuadScalar QuadScalar::operator/(const QuadScalar& o) const { return *this * o.inverse(); }

std::string QuadScalar::str() const {
    if (b_.is_zero()) return rat_str(a_);
    std::string tail = rat_str(boost::multiprecision::abs(b_)) + "*sqrt(" + std::to_string(d_) + ")";
    if (a_.is_zero()) return (rat_sign(b_) < 0 ? "-" : "") + tail;
    return rat_str(a_) + (rat_sign(b_) < 0 ? "-" : "+") + tail;
}

namespace {

struct Cursor {
    std::string_view s;
    size_t i = 0;
    bool done() const { return i >= s.size(); }
    char peek() const { return s[i]; }
    bool eat(char c) {
        if (!done() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
};

BigInt parse_digits(Cursor& c) {
    if (c.done() || !std::isdigit(static_cast<unsigned char>(c.peek())))
        throw std::invalid_argument("scalar parse: digit expected");
    BigInt v = 0;
    while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek()))) {
        v = v * 10 + (c.s[c.i] - '0');
        ++c.i;
    }
    return v;
}

Rational parse_rat(Cursor& c) {
    BigInt num = parse_digits(c);
    if (c.eat('/')) {
        BigInt den = parse_digits(c);
        if (den.is_zero()) throw std::invalid_argument("scalar parse: zero denominator");
        return Rational(num) / Rational(den);
    }
    return Rational(num);
}

} // namespace

QuadScalar QuadScalar::parse(std::string_view text) {
    std::string compact;
    compact.reserve(text.size());
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) compact.push_back(ch);
    if (compact.empty()) throw std::invalid_argument("scalar parse: empty input");

    Cursor c{compact};
    Rational a, b;
    unsigned d = 0;
    bool have_rat = false, have_rad = false;

    for (int term = 0; term < 2; ++term) {
        int sgn = 1;
        if (c.eat('-'))
            sgn = -1;
        else
            c.eat('+');
        Rational coef(1);
        bool radical = false;
        if (c.peek() == 's') { // bare sqrt(d)
            radical = true;
        } else {
            coef = parse_rat(c);
            if (c.eat('*')) radical = true;
        }
        if (radical) {
            for (char ch : {'s', 'q', 'r', 't', '('})
                if (!c.eat(ch)) throw std::invalid_argument("scalar parse: malformed sqrt");
            BigInt rad = parse_digits(c);
            if (!c.eat(')')) throw std::invalid_argument("scalar parse: missing ')'");
            if (have_rad) throw std::invalid_argument("scalar parse: repeated radical term");
            have_rad = true;
            b = sgn < 0 ? -coef : coef;
            d = rad.convert_to<unsigned>();
        } else {
            if (have_rat) throw std::invalid_argument("scalar parse: repeated rational term");
            have_rat = true;
            a = sgn < 0 ? -coef : coef;
        }
        if (c.done()) break;
        if (c.peek() != '+' && c.peek() != '-')
            throw std::invalid_argument("scalar parse: unexpected character");
    }
    if (!c.done()) throw std::invalid_argument("scalar parse: trailing input");
    if (have_rad && !b.is_zero()) return QuadScalar(a, b, d);
    return QuadScalar(a);
}

double QuadScalar::to_double() const {
    double v = a_.convert_to<double>();
    if (!b_.is_zero()) v += b_.convert_to<double>() * std::sqrt(static_cast<double>(d_));
    return v;
}

Ordering scalar_cmp(const Scalar& x, const Scalar& y) {
    int s = (x - y).sign();
    return s < 0 ? Ordering::Less : (s == 0 ? Ordering::Equal : Ordering::Greater);
}

std::string to_string(const Scalar& s) { return s.str(); }

} // namespace refinery
