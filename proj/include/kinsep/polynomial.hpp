#pragma once

#include "kinsep/rational.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace kinsep {

// Univariate polynomial with exact rational coefficients, ascending order.
struct Poly {
    std::vector<Rational> c;

    Poly() = default;
    explicit Poly(std::vector<Rational> coeffs) : c(std::move(coeffs)) { normalize(); }
    static Poly constant(Rational v) { return Poly({std::move(v)}); }
    static Poly x() { return Poly({Rational(0), Rational(1)}); }

    void normalize() {
        while (!c.empty() && sgn(c.back()) == 0) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }

    Rational eval(const Rational& t) const {
        Rational acc(0);
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * t + c[i];
        return acc;
    }
    int sign_at(const Rational& t) const { return sgn(eval(t)); }

    Rational lead() const { return c.empty() ? Rational(0) : c.back(); }
};

inline Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Rational> out(std::max(a.c.size(), b.c.size()), Rational(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) out[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) out[i] += b.c[i];
    return Poly(std::move(out));
}

inline Poly operator-(const Poly& a, const Poly& b) {
    std::vector<Rational> out(std::max(a.c.size(), b.c.size()), Rational(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) out[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) out[i] -= b.c[i];
    return Poly(std::move(out));
}

inline Poly operator-(const Poly& a) {
    Poly out = a;
    for (auto& v : out.c) v = -v;
    return out;
}

inline Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<Rational> out(a.c.size() + b.c.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) out[i + j] += a.c[i] * b.c[j];
    return Poly(std::move(out));
}

inline Poly operator*(const Poly& a, const Rational& s) {
    Poly out = a;
    for (auto& v : out.c) v *= s;
    out.normalize();
    return out;
}

inline Poly derivative(const Poly& p) {
    if (p.c.size() <= 1) return Poly();
    std::vector<Rational> out(p.c.size() - 1);
    for (std::size_t i = 1; i < p.c.size(); ++i) out[i - 1] = p.c[i] * Rational(static_cast<long>(i));
    return Poly(std::move(out));
}

// Exact division with remainder over the rationals.
inline std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    Poly rem = a;
    std::vector<Rational> quot(a.c.size() > b.c.size() ? a.c.size() - b.c.size() + 1 : 1,
                               Rational(0));
    while (!rem.is_zero() && rem.degree() >= b.degree()) {
        std::size_t shift = static_cast<std::size_t>(rem.degree() - b.degree());
        Rational f = rem.lead() / b.lead();
        quot[shift] += f;
        for (std::size_t i = 0; i < b.c.size(); ++i) rem.c[i + shift] -= f * b.c[i];
        rem.normalize();
    }
    return {Poly(std::move(quot)), rem};
}

// Monic gcd; gcd(0, 0) = 0.
inline Poly poly_gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = divrem(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.is_zero()) {
        Rational inv = Rational(1) / a.lead();
        for (auto& v : a.c) v *= inv;
    }
    return a;
}

inline Poly square_free_part(const Poly& p) {
    if (p.degree() <= 1) return p;
    Poly g = poly_gcd(p, derivative(p));
    if (g.degree() <= 0) return p;
    return divrem(p, g).first;
}

// Sturm chain of a squarefree polynomial.
inline std::vector<Poly> sturm_chain(const Poly& p) {
    std::vector<Poly> chain;
    chain.push_back(p);
    Poly d = derivative(p);
    if (!d.is_zero()) chain.push_back(d);
    while (chain.size() >= 2 && !chain.back().is_zero()) {
        Poly r = divrem(chain[chain.size() - 2], chain.back()).second;
        if (r.is_zero()) break;
        chain.push_back(-r);
    }
    return chain;
}

inline int sign_variations(const std::vector<Poly>& chain, const Rational& x) {
    int variations = 0;
    int prev = 0;
    for (const auto& p : chain) {
        int s = p.sign_at(x);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++variations;
        prev = s;
    }
    return variations;
}

// Number of distinct roots in (a, b], a < b required.
inline int count_roots(const std::vector<Poly>& chain, const Rational& a, const Rational& b) {
    return sign_variations(chain, a) - sign_variations(chain, b);
}

// Isolating interval (lo, hi] holding exactly one root of the squarefree
// polynomial used to build the chain. lo < root <= hi.
struct RootInterval {
    Rational lo, hi;
    bool exact = false;  // root == hi exactly
};

// Smallest root of squarefree f in (lo, hi], bisected down to the given
// interval width. Exact rational roots are detected when bisection lands
// on them.
inline std::optional<RootInterval> first_root(const Poly& f, const std::vector<Poly>& chain,
                                              const Rational& lo, const Rational& hi,
                                              const Rational& width) {
    if (f.degree() <= 0) return std::nullopt;
    if (!(lo < hi)) return std::nullopt;
    if (count_roots(chain, lo, hi) == 0) return std::nullopt;
    Rational a = lo, b = hi;
    // Narrow (a, b] down to the leftmost root.
    while (true) {
        int cnt = count_roots(chain, a, b);
        if (cnt == 1) {
            if (f.sign_at(b) == 0) return RootInterval{a, b, true};
            if (b - a <= width) return RootInterval{a, b, false};
        }
        Rational m = (a + b) / 2;
        if (f.sign_at(m) == 0) {
            // count over (a, m] includes m itself; 1 means m is leftmost.
            if (count_roots(chain, a, m) == 1) return RootInterval{a, m, true};
            b = m;
        } else if (count_roots(chain, a, m) > 0) {
            b = m;
        } else {
            a = m;
        }
    }
}

// Does orig have a multiple root inside (lo, hi]? Used to flag grazing
// events (tangential certificate failures).
inline bool multiple_root_in(const Poly& orig, const Rational& lo, const Rational& hi) {
    Poly g = poly_gcd(orig, derivative(orig));
    if (g.degree() < 1) return false;
    Poly gsf = square_free_part(g);
    auto chain = sturm_chain(gsf);
    return count_roots(chain, lo, hi) > 0;
}

// A real algebraic number: the unique root of a squarefree polynomial in
// (lo, hi]. Rational values are stored exactly (lo == hi).
class AlgebraicNumber {
public:
    AlgebraicNumber() : exact_(Rational(0)), is_exact_(true) {}

    static AlgebraicNumber from_rational(Rational v) {
        AlgebraicNumber n;
        n.exact_ = std::move(v);
        n.is_exact_ = true;
        return n;
    }

    static AlgebraicNumber from_root(Poly squarefree, RootInterval iv) {
        if (iv.exact) return from_rational(iv.hi);
        AlgebraicNumber n;
        n.is_exact_ = false;
        n.f_ = std::move(squarefree);
        n.chain_ = sturm_chain(n.f_);
        n.lo_ = iv.lo;
        n.hi_ = iv.hi;
        return n;
    }

    bool is_exact() const { return is_exact_; }
    const Rational& exact_value() const { return exact_; }

    Rational lower() const { return is_exact_ ? exact_ : lo_; }
    Rational upper() const { return is_exact_ ? exact_ : hi_; }
    Rational midpoint() const { return is_exact_ ? exact_ : (lo_ + hi_) / 2; }
    double approx() const { return to_double(midpoint()); }

    void refine() const {
        if (is_exact_) return;
        Rational m = (lo_ + hi_) / 2;
        if (f_.sign_at(m) == 0) {
            exact_ = m;
            is_exact_ = true;
            return;
        }
        if (count_roots(chain_, lo_, m) > 0)
            hi_ = m;
        else
            lo_ = m;
    }

    void refine_below(const Rational& width) const {
        while (!is_exact_ && hi_ - lo_ > width) refine();
    }

    // Sign of g at this number; exact.
    int sign_of(const Poly& g) const {
        if (g.is_zero()) return 0;
        if (is_exact_) return g.sign_at(exact_);
        Poly common = poly_gcd(f_, g);
        if (common.degree() >= 1) {
            auto cchain = sturm_chain(square_free_part(common));
            if (count_roots(cchain, lo_, hi_) > 0) return 0;
        }
        // No shared root here: refine until g is sign-constant on [lo, hi].
        Poly gsf = square_free_part(g);
        auto gchain = sturm_chain(gsf);
        while (true) {
            if (is_exact_) return g.sign_at(exact_);
            int sl = g.sign_at(lo_);
            if (sl != 0 && count_roots(gchain, lo_, hi_) == 0) return sl;
            refine();
        }
    }

    // Total order; refines both operands as needed.
    static int compare(const AlgebraicNumber& a, const AlgebraicNumber& b) {
        if (a.is_exact_ && b.is_exact_)
            return a.exact_ < b.exact_ ? -1 : (a.exact_ > b.exact_ ? 1 : 0);
        if (a.is_exact_) return -compare_to(b, a.exact_);
        if (b.is_exact_) return compare_to(a, b.exact_);
        // Roots live in (lo, hi], so a.hi <= b.lo forces a's root earlier.
        // A shared root can never separate by refinement; detect it once via
        // the gcd (any common root inside the overlap must be both roots).
        bool checked_equality = false;
        while (true) {
            if (a.hi_ <= b.lo_) return -1;
            if (b.hi_ <= a.lo_) return 1;
            if (!checked_equality) {
                checked_equality = true;
                Poly common = poly_gcd(a.f_, b.f_);
                if (common.degree() >= 1) {
                    auto cchain = sturm_chain(square_free_part(common));
                    Rational lo = std::max(a.lo_, b.lo_);
                    Rational hi = std::min(a.hi_, b.hi_);
                    if (lo < hi && count_roots(cchain, lo, hi) > 0) return 0;
                }
            }
            a.refine();
            b.refine();
            if (a.is_exact_ || b.is_exact_) return compare(a, b);
        }
    }

    static int compare_to(const AlgebraicNumber& a, const Rational& v) {
        if (a.is_exact_) return a.exact_ < v ? -1 : (a.exact_ > v ? 1 : 0);
        while (true) {
            if (a.hi_ <= v) {
                if (a.hi_ < v) return -1;
                // root in (lo, hi] with hi == v: root <= v; equality iff f(v) == 0
                return a.f_.sign_at(v) == 0 ? 0 : -1;
            }
            if (v <= a.lo_) return 1;  // root > lo >= v
            // v sits strictly inside (lo, hi); the unique root there is v
            // itself exactly when f vanishes at v.
            if (a.f_.sign_at(v) == 0) return 0;
            a.refine();
        }
    }

private:
    Poly f_;
    std::vector<Poly> chain_;
    mutable Rational lo_, hi_;
    mutable Rational exact_;
    mutable bool is_exact_ = false;
};

inline bool operator<(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    return AlgebraicNumber::compare(a, b) < 0;
}

// Earliest zero of F in (t_now, horizon], isolated exactly; nullopt when F
// keeps its sign. The isolating width defaults to 2^-60 of the horizon.
inline std::optional<AlgebraicNumber> next_root_after(const Poly& f, const Rational& t_now,
                                                      const Rational& horizon,
                                                      std::optional<Rational> width = {}) {
    if (f.is_zero()) return std::nullopt;  // identically degenerate; caller's call
    if (f.degree() == 0) return std::nullopt;
    Poly sf = square_free_part(f);
    if (sf.degree() == 1) {
        Rational root = -sf.c[0] / sf.c[1];
        if (root > t_now && root <= horizon) return AlgebraicNumber::from_rational(root);
        return std::nullopt;
    }
    if (sf.degree() == 2) {
        // Exact rational roots when the discriminant is a perfect square.
        const Rational &a = sf.c[2], &b = sf.c[1], &c = sf.c[0];
        Rational disc = b * b - 4 * a * c;
        if (sgn(disc) < 0) return std::nullopt;
        Integer num = disc.get_num(), den = disc.get_den();
        Integer sn = floor_sqrt(num), sd = floor_sqrt(den);
        if (sn * sn == num && sd * sd == den) {
            Rational sq(sn, sd);
            sq.canonicalize();
            Rational r1 = (-b - sq) / (2 * a);
            Rational r2 = (-b + sq) / (2 * a);
            if (r1 > r2) std::swap(r1, r2);
            for (const Rational& root : {r1, r2})
                if (root > t_now && root <= horizon)
                    return AlgebraicNumber::from_rational(root);
            return std::nullopt;
        }
    }
    auto chain = sturm_chain(sf);
    Rational w = width ? *width : (horizon - t_now) * pow2_inv(60);
    auto iv = first_root(sf, chain, t_now, horizon, w);
    if (!iv) return std::nullopt;
    return AlgebraicNumber::from_root(std::move(sf), *iv);
}

}  // namespace kinsep
