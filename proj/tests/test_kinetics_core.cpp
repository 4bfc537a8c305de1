#include "kinsep/motion.hpp"
#include "kinsep/polynomial.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace kinsep;

namespace {

Poly from_roots(std::initializer_list<Rational> roots) {
    Poly p = Poly::constant(Rational(1));
    for (const auto& r : roots) p = p * Poly({-r, Rational(1)});
    return p;
}

// Sign-scan oracle: first sign change of f on a fine grid after t_now.
Rational sign_scan_first_root(const Poly& f, Rational t_now, Rational hi, int steps) {
    int prev = f.sign_at(t_now);
    for (int i = 1; i <= steps; ++i) {
        Rational t = t_now + (hi - t_now) * Rational(i, steps);
        int s = f.sign_at(t);
        if (s == 0) return t;
        if (prev != 0 && s != prev) return t;  // change inside previous cell
        if (prev == 0) prev = s;
    }
    return hi + 1;  // none found
}

}  // namespace

TEST_CASE("polynomial arithmetic basics") {
    Poly p({Rational(1), Rational(2), Rational(1)});  // 1 + 2t + t^2
    CHECK(p.eval(Rational(3)) == 16);
    Poly d = derivative(p);
    CHECK(d.eval(Rational(3)) == 8);
    auto [q, r] = divrem(p, Poly({Rational(1), Rational(1)}));
    CHECK(r.is_zero());
    CHECK(q.eval(Rational(5)) == 6);
}

TEST_CASE("gcd and square-free part") {
    Poly sq = from_roots({Rational(2), Rational(2), Rational(3)});
    Poly sf = square_free_part(sq);
    CHECK(sf.degree() == 2);
    CHECK(sf.sign_at(Rational(2)) == 0);
    CHECK(sf.sign_at(Rational(3)) == 0);
}

TEST_CASE("next root: linear certificate") {
    Poly f({Rational(3), Rational(-1)});  // 3 - t
    auto r = next_root_after(f, Rational(0), Rational(10));
    REQUIRE(r.has_value());
    CHECK(r->is_exact());
    CHECK(r->exact_value() == 3);
}

TEST_CASE("next root: no real root") {
    Poly f({Rational(1), Rational(0), Rational(1)});  // t^2 + 1
    CHECK_FALSE(next_root_after(f, Rational(0), Rational(100)).has_value());
}

TEST_CASE("next root: cubic after 1.5 matches the sign-scan oracle") {
    Poly f = from_roots({Rational(1), Rational(2), Rational(5)});
    auto r = next_root_after(f, Rational(3, 2), Rational(10));
    REQUIRE(r.has_value());
    CHECK(AlgebraicNumber::compare_to(*r, Rational(2)) == 0);
    Rational scanned = sign_scan_first_root(f, Rational(3, 2), Rational(10), 10000);
    CHECK(rational_abs(scanned - Rational(2)) <= Rational(1, 1000));
}

TEST_CASE("next root excludes a root exactly at t_now") {
    Poly f = from_roots({Rational(1), Rational(4)});
    auto r = next_root_after(f, Rational(1), Rational(10));
    REQUIRE(r.has_value());
    CHECK(AlgebraicNumber::compare_to(*r, Rational(4)) == 0);
}

TEST_CASE("irrational roots are isolated and ordered correctly") {
    Poly f({Rational(-2), Rational(0), Rational(1)});  // t^2 - 2
    auto r = next_root_after(f, Rational(0), Rational(10));
    REQUIRE(r.has_value());
    CHECK_FALSE(r->is_exact());
    CHECK(AlgebraicNumber::compare_to(*r, Rational(141421, 100000)) > 0);
    CHECK(AlgebraicNumber::compare_to(*r, Rational(141422, 100000)) < 0);
    CHECK(r->sign_of(f) == 0);
    Poly g({Rational(-3), Rational(0), Rational(1)});  // t^2 - 3 positive at sqrt2? no: -1
    CHECK(r->sign_of(g) < 0);

    auto r3 = next_root_after(g, Rational(0), Rational(10));
    REQUIRE(r3.has_value());
    CHECK(AlgebraicNumber::compare(*r, *r3) < 0);
    // Same algebraic number from a different polynomial multiple.
    Poly f2 = f * Poly({Rational(5), Rational(1)});
    auto r2 = next_root_after(f2, Rational(0), Rational(10));
    REQUIRE(r2.has_value());
    CHECK(AlgebraicNumber::compare(*r, *r2) == 0);
}

TEST_CASE("multiple root detection flags grazing") {
    Poly f = from_roots({Rational(2), Rational(2)});
    CHECK(multiple_root_in(f, Rational(1), Rational(3)));
    Poly g = from_roots({Rational(2), Rational(3)});
    CHECK_FALSE(multiple_root_in(g, Rational(1), Rational(4)));
}

TEST_CASE("roots never exceed the certificate degree") {
    Poly f = from_roots({Rational(1), Rational(2), Rational(3), Rational(4)});
    int count = 0;
    Rational t(0);
    while (true) {
        auto r = next_root_after(f, t, Rational(100));
        if (!r) break;
        ++count;
        r->refine_below(Rational(1, 1 << 20));
        t = r->upper();
        REQUIRE(count <= f.degree());
    }
    CHECK(count == 4);
}

TEST_CASE("motion classification") {
    auto lin = make_motion({Rational(0), Rational(1)}, {}, {}, Rational(0), Rational(1));
    CHECK(lin.klass == MotionClass::LinearTranslation);

    auto conv = make_motion({Rational(0), Rational(1)}, {Rational(0), Rational(0), Rational(1)},
                            {}, Rational(0), Rational(1));
    CHECK(conv.klass == MotionClass::ConvexTranslation);

    auto rot = make_motion({}, {}, {Rational(0), Rational(1)}, Rational(0), Rational(1));
    CHECK(rot.klass == MotionClass::Rigid);

    auto stat = static_motion(Rational(0), Rational(1));
    CHECK(stat.klass == MotionClass::Static);

    // Cubic wiggle changes curvature sign: general translation.
    auto gen = make_motion({Rational(0), Rational(1)},
                           {Rational(0), Rational(0), Rational(0), Rational(1)}, {}, Rational(-1),
                           Rational(1));
    CHECK(gen.klass == MotionClass::GeneralTranslation);

    CHECK_THROWS_AS(make_motion({}, {}, {}, Rational(1), Rational(1)), empty_horizon_error);
    CHECK_THROWS_AS(make_motion({Rational(0), Rational(0), Rational(0), Rational(0), Rational(0),
                                 Rational(0), Rational(0), Rational(0), Rational(0), Rational(1)},
                                {}, {}, Rational(0), Rational(1)),
                    degree_too_high_error);
}

TEST_CASE("rotation frame is exactly orthonormal") {
    auto rot = make_motion({}, {}, {Rational(0), Rational(1)}, Rational(0), Rational(4));
    // cos^2 + sin^2 == den^2 as polynomials.
    Poly lhs = rot.cos_num * rot.cos_num + rot.sin_num * rot.sin_num;
    Poly rhs = rot.den * rot.den;
    CHECK((lhs - rhs).is_zero());

    // u = 1 is a quarter turn.
    Vec2 p = rot.position_at({Rational(1), Rational(0)}, Rational(1));
    CHECK(p == Vec2{Rational(0), Rational(1)});
}

TEST_CASE("moving point orientation certificate matches pointwise evaluation") {
    auto rot = make_motion({Rational(0), Rational(1)}, {}, {Rational(0), Rational(1)}, Rational(0),
                           Rational(2));
    auto stat = static_motion(Rational(0), Rational(2));
    MovingPoint a = rot.embed({Rational(1), Rational(0)});
    MovingPoint b = rot.embed({Rational(0), Rational(1)});
    MovingPoint c = stat.embed({Rational(5), Rational(7)});
    Poly cert = orientation_poly(a, b, c);
    for (int k = 0; k <= 16; ++k) {
        Rational t(k, 8);
        int expect = orientation(a.at(t), b.at(t), c.at(t));
        CHECK(cert.sign_at(t) == expect);
    }
}
