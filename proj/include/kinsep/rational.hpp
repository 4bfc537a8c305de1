#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kinsep {

// Exact rational scalar. mpq_class keeps values canonical (reduced,
// positive denominator), which the geometric predicates rely on.
using Rational = mpq_class;
using Integer = mpz_class;

inline int sgn(const Rational& q) { return mpq_sgn(q.get_mpq_t()); }

inline Rational rational_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Parses a decimal literal ("1.25", "-3", "10e-2") into an exact rational.
inline Rational parse_decimal(std::string_view text) {
    std::size_t pos = 0;
    auto fail = [&] { throw parse_error("bad decimal literal: " + std::string(text)); };
    if (text.empty()) fail();

    bool negative = false;
    if (text[pos] == '+' || text[pos] == '-') {
        negative = text[pos] == '-';
        ++pos;
    }

    Integer mantissa = 0;
    long frac_digits = 0;
    bool any_digit = false;
    bool seen_dot = false;
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        if (c >= '0' && c <= '9') {
            mantissa = mantissa * 10 + (c - '0');
            if (seen_dot) ++frac_digits;
            any_digit = true;
        } else if (c == '.') {
            if (seen_dot) fail();
            seen_dot = true;
        } else if (c == 'e' || c == 'E') {
            break;
        } else {
            fail();
        }
    }
    if (!any_digit) fail();

    long exponent = 0;
    if (pos < text.size()) {
        ++pos;  // consume 'e'
        bool exp_neg = false;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            exp_neg = text[pos] == '-';
            ++pos;
        }
        if (pos >= text.size()) fail();
        long ev = 0;
        for (; pos < text.size(); ++pos) {
            char c = text[pos];
            if (c < '0' || c > '9') fail();
            ev = ev * 10 + (c - '0');
            if (ev > 1000000) fail();
        }
        exponent = exp_neg ? -ev : ev;
    }

    long net = exponent - frac_digits;
    Integer num = mantissa, den = 1;
    if (net >= 0) {
        Integer scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(net));
        num *= scale;
    } else {
        mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(-net));
    }
    Rational q(num, den);
    q.canonicalize();
    if (negative) q = -q;
    return q;
}

// Parses "a/b", integer, or decimal forms.
inline Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash != std::string_view::npos) {
        std::string s(text);
        Rational q(s);
        q.canonicalize();
        if (sgn(Rational(q.get_den())) == 0) throw parse_error("zero denominator");
        return q;
    }
    return parse_decimal(text);
}

// Fixed-point decimal rendering (round toward zero), deterministic across runs.
inline std::string to_decimal_string(const Rational& q, int frac_digits = 12) {
    Integer num = q.get_num();
    Integer den = q.get_den();
    bool negative = num < 0;
    if (negative) num = -num;

    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(frac_digits));
    Integer shifted = num * scale / den;
    Integer ip = shifted / scale;
    Integer fp = shifted % scale;

    std::string frac = fp.get_str();
    frac.insert(frac.begin(), static_cast<std::size_t>(frac_digits) - frac.size(), '0');
    std::string out = (negative && (ip != 0 || fp != 0) ? "-" : "") + ip.get_str();
    if (frac_digits > 0) out += "." + frac;
    return out;
}

inline double to_double(const Rational& q) { return q.get_d(); }

inline Integer floor_sqrt(const Integer& n) {
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline Integer ceil_sqrt(const Integer& n) {
    Integer r, rem;
    mpz_sqrtrem(r.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t());
    if (rem != 0) r += 1;
    return r;
}

// Rational upper bound on sqrt(q), relative error below 2^-bits.
inline Rational sqrt_upper(const Rational& q, unsigned bits = 50) {
    if (sgn(q) < 0) throw std::domain_error("sqrt of negative rational");
    if (sgn(q) == 0) return Rational(0);
    Integer num = q.get_num();
    Integer den = q.get_den();
    Integer shift;
    mpz_ui_pow_ui(shift.get_mpz_t(), 2, 2 * bits);
    Integer s = ceil_sqrt(num * den * shift);
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, bits);
    Rational r(s, den * scale);
    r.canonicalize();
    return r;
}

// Rational lower bound on sqrt(q).
inline Rational sqrt_lower(const Rational& q, unsigned bits = 50) {
    if (sgn(q) < 0) throw std::domain_error("sqrt of negative rational");
    if (sgn(q) == 0) return Rational(0);
    Integer num = q.get_num();
    Integer den = q.get_den();
    Integer shift;
    mpz_ui_pow_ui(shift.get_mpz_t(), 2, 2 * bits);
    Integer s = floor_sqrt(num * den * shift);
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, bits);
    Rational r(s, den * scale);
    r.canonicalize();
    return r;
}

// 2^-k as a rational, for tolerance ladders.
inline Rational pow2_inv(unsigned k) {
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, k);
    return Rational(Integer(1), den);
}

}  // namespace kinsep
