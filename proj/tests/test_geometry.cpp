#include "kinsep/generators.hpp"
#include "kinsep/polygon.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace kinsep;

namespace {

ConvexPolygon square(Rational lo, Rational hi) {
    return validate_polygon({{lo, lo}, {hi, lo}, {hi, hi}, {lo, hi}});
}

Vec2 rv(int x, int y) { return {Rational(x), Rational(y)}; }

// Independent support-function oracle: max inner product over raw vertices.
Rational support_oracle(const ConvexPolygon& p, const Vec2& dir) {
    Rational best = dot(p.verts[0], dir);
    for (const auto& v : p.verts) best = std::max(best, dot(v, dir));
    return best;
}

}  // namespace

TEST_CASE("parse_decimal handles exact decimal strings") {
    CHECK(parse_decimal("1.25") == Rational(5, 4));
    CHECK(parse_decimal("-0.5") == Rational(-1, 2));
    CHECK(parse_decimal("3") == Rational(3));
    CHECK(parse_decimal("10e-2") == Rational(1, 10));
    CHECK(parse_rational("7/2") == Rational(7, 2));
    CHECK_THROWS_AS(parse_decimal("1.2.3"), parse_error);
}

TEST_CASE("to_decimal_string is stable and exact for terminating values") {
    CHECK(to_decimal_string(Rational(5, 4), 6) == "1.250000");
    CHECK(to_decimal_string(Rational(-1, 3), 6) == "-0.333333");
    CHECK(to_decimal_string(Rational(0), 3) == "0.000");
}

TEST_CASE("sqrt bounds bracket the true root") {
    Rational q(2);
    Rational lo = sqrt_lower(q), hi = sqrt_upper(q);
    CHECK(lo * lo <= q);
    CHECK(hi * hi >= q);
    CHECK(hi - lo < Rational(1, 1000000));
    CHECK(sqrt_upper(Rational(0)) == 0);
}

TEST_CASE("validate_polygon accepts the unit square") {
    auto p = validate_polygon({rv(0, 0), rv(1, 0), rv(1, 1), rv(0, 1)});
    CHECK(p.size() == 4);
    CHECK(polygon_area2(p) == 2);
}

TEST_CASE("validate_polygon removes collinear middle vertices") {
    auto p = validate_polygon({rv(0, 0), rv(1, 0), rv(2, 0), rv(2, 1)});
    CHECK(p.size() == 3);
}

TEST_CASE("validate_polygon reverses clockwise input") {
    auto p = validate_polygon({rv(0, 1), rv(1, 1), rv(1, 0), rv(0, 0)});
    CHECK(polygon_area2(p) == 2);
    CHECK(p.size() == 4);
}

TEST_CASE("validate_polygon rejects self-crossing order") {
    CHECK_THROWS_AS(validate_polygon({rv(0, 0), rv(1, 1), rv(1, 0), rv(0, 1)}),
                    non_convex_error);
}

TEST_CASE("validate_polygon rejects winding sequences") {
    // Pentagram order: every triple turns left but the boundary winds twice.
    auto pent = regular_ngon(5, Rational(1));
    std::vector<Vec2> star{pent.verts[0], pent.verts[2], pent.verts[4], pent.verts[1],
                           pent.verts[3]};
    CHECK_THROWS_AS(validate_polygon(star), non_convex_error);
}

TEST_CASE("validate_polygon handles degenerate inputs") {
    CHECK_THROWS_AS(validate_polygon({}), empty_polygon_error);
    CHECK(validate_polygon({rv(2, 3)}).is_point());
    auto seg = validate_polygon({rv(0, 0), rv(2, 0), rv(1, 0)});
    CHECK(seg.size() == 2);
}

TEST_CASE("minkowski sum of axis-aligned squares") {
    auto s = square(0, 1);
    auto sum = minkowski_sum(s, s);
    CHECK(sum.size() == 4);
    CHECK(support_oracle(sum, rv(1, 0)) == 2);
    CHECK(support_oracle(sum, rv(0, 1)) == 2);
    CHECK(support_oracle(sum, rv(-1, 0)) == 0);
    CHECK(polygon_area2(sum) == 8);
}

TEST_CASE("minkowski sum with a point translates") {
    auto s = square(0, 1);
    ConvexPolygon pt;
    pt.verts = {rv(3, -2)};
    pt.ensure_normal_slots();
    auto sum = minkowski_sum(s, pt);
    REQUIRE(sum.size() == 4);
    CHECK(contains_point(sum, rv(3, -2)));
    CHECK(contains_point(sum, rv(4, -1)));
    CHECK_FALSE(contains_point(sum, rv(0, 0)));
}

TEST_CASE("hexagon plus its negation is centrally symmetric and support-exact") {
    auto hex = regular_ngon(6, Rational(1));
    auto sum = minkowski_sum(hex, negate_polygon(hex));
    CHECK(sum.size() == 6);
    // Support-function oracle over all vertex pairs, 100 random directions.
    std::mt19937_64 rng(7);
    for (int k = 0; k < 100; ++k) {
        Vec2 dir{Rational(static_cast<long>(rng() % 2001) - 1000),
                 Rational(static_cast<long>(rng() % 2001) - 1000)};
        if (dir.is_zero()) continue;
        Rational best = dot(hex.verts[0] - hex.verts[0], dir);
        for (const auto& a : hex.verts)
            for (const auto& b : hex.verts) best = std::max(best, dot(a - b, dir));
        CHECK(support_oracle(sum, dir) == best);
    }
}

TEST_CASE("minkowski sum support additivity property") {
    auto p = random_convex_polygon(17, 11, Rational(3));
    auto q = random_convex_polygon(9, 13, Rational(2), rv(5, 1));
    auto sum = minkowski_sum(p, q);
    std::mt19937_64 rng(17);
    for (int k = 0; k < 100; ++k) {
        Vec2 dir{Rational(static_cast<long>(rng() % 4001) - 2000),
                 Rational(static_cast<long>(rng() % 4001) - 2000)};
        if (dir.is_zero()) continue;
        CHECK(support_oracle(sum, dir) == support_oracle(p, dir) + support_oracle(q, dir));
    }
    // Commutes: identical vertex sets.
    auto sum2 = minkowski_sum(q, p);
    REQUIRE(sum.size() == sum2.size());
    for (const auto& v : sum.verts) {
        bool found = false;
        for (const auto& w : sum2.verts)
            if (v == w) found = true;
        CHECK(found);
    }
}

TEST_CASE("minkowski sum preserves zero-length edges") {
    ConvexPolygon pt;
    pt.verts = {rv(0, 0)};
    pt.extra_normals = {{rv(1, 0), rv(0, 1), rv(-1, 0), rv(0, -1)}};
    auto s = square(0, 1);
    auto sum = minkowski_sum(pt, s);
    CHECK(sum.size() == 4);
    std::size_t zeros = 0;
    for (const auto& zs : sum.extra_normals) zeros += zs.size();
    CHECK(zeros == 0);  // absorbed by the square's parallel edges

    ConvexPolygon diag_pt;
    diag_pt.verts = {rv(0, 0)};
    diag_pt.extra_normals = {{rv(1, 1)}};
    auto sum2 = minkowski_sum(diag_pt, s);
    zeros = 0;
    for (const auto& zs : sum2.extra_normals) zeros += zs.size();
    CHECK(zeros == 1);
}

TEST_CASE("polygon distance for facing unit squares") {
    auto a = square(0, 1);
    auto b = square(0, 1);
    for (auto& v : b.verts) v += rv(3, 0);
    auto r = polygon_distance(a, b);
    CHECK(r.dist_sq == 4);
}

TEST_CASE("polygon distance zero for overlap") {
    auto a = square(0, 2);
    auto b = square(1, 3);
    CHECK(polygon_distance(a, b).dist_sq == 0);
    auto inside = square(0, 10);
    CHECK(polygon_distance(inside, square(4, 5)).dist_sq == 0);
}

TEST_CASE("polygon distance corner-to-corner") {
    auto a = square(0, 1);
    auto tri = validate_polygon({rv(2, 2), rv(3, 2), rv(2, 3)});
    auto r = polygon_distance(a, tri);
    CHECK(r.dist_sq == 2);
    CHECK(polygon_distance(tri, a).dist_sq == 2);
}

TEST_CASE("polygon distance shrinks exactly along the witness direction") {
    auto a = random_convex_polygon(12, 5, Rational(2));
    auto b = random_convex_polygon(10, 6, Rational(2), rv(7, 3));
    auto r = polygon_distance(a, b);
    REQUIRE(sgn(r.dist_sq) > 0);
    Vec2 gap = r.q_point - r.p_point;
    REQUIRE(norm_sq(gap) == r.dist_sq);
    for (Rational s : {Rational(1, 4), Rational(1, 2), Rational(3, 4)}) {
        auto b2 = b;
        for (auto& v : b2.verts) v -= gap * s;
        auto r2 = polygon_distance(a, b2);
        CHECK(r2.dist_sq == (1 - s) * (1 - s) * r.dist_sq);
    }
}

TEST_CASE("offset of unit square by 1 is the side-3 square") {
    auto p = square(0, 1);
    auto off = offset_polygon(p, Rational(1));
    REQUIRE(off.size() == 4);
    CHECK(contains_point(off, rv(-1, -1)));
    CHECK(contains_point(off, rv(2, 2)));
    CHECK(polygon_area2(off) == 18);  // side 3
}

TEST_CASE("offset of a point with compass support directions") {
    ConvexPolygon pt;
    pt.verts = {rv(2, 5)};
    pt.extra_normals = {{rv(1, 0), rv(0, 1), rv(-1, 0), rv(0, -1)}};
    auto off = offset_polygon(pt, Rational(1));
    REQUIRE(off.size() == 4);
    // Every supporting line moves out by exactly 1, giving the side-2 square
    // centered at the point (each edge at distance 1 from the center).
    CHECK(polygon_area2(off) == 8);
    CHECK(contains_point(off, rv(2, 5)));
    CHECK(contains_point(off, rv(3, 6)));
    CHECK_FALSE(contains_point(off, rv(4, 5)));
}

TEST_CASE("offset octagon satisfies the distance sandwich") {
    auto oct = axis_aligned_octagon(Rational(1));
    Rational eps(1, 10);
    auto off = offset_polygon(oct, eps);
    REQUIRE(off.size() == oct.size());
    // theta = 135 degrees; sin(67.5)^2 = (2+sqrt(2))/4.
    Rational sin_half_sq_lo = Rational(2) / 4 + sqrt_lower(Rational(2)) / 4;
    int samples = 0;
    for (std::size_t i = 0; i < off.size(); ++i) {
        Vec2 a = off.verts[i];
        Vec2 b = off.verts[(i + 1) % off.size()];
        for (int k = 0; k < 125; ++k) {
            Rational t(k, 125);
            Vec2 pnt = a + (b - a) * t;
            ConvexPolygon probe;
            probe.verts = {pnt};
            probe.ensure_normal_slots();
            Rational d2 = polygon_distance(probe, oct).dist_sq;
            CHECK(d2 >= eps * eps);
            // Upper bound eps/sin(theta/2), with slack for the conservative
            // rational offset magnitude (relative 2^-50).
            Rational bound = eps * eps / sin_half_sq_lo;
            bound += Rational(1, Integer(1) << 30);
            CHECK(d2 <= bound);
            ++samples;
        }
    }
    CHECK(samples == 1000);
}

TEST_CASE("offset nesting") {
    auto p = random_convex_polygon(20, 21, Rational(2));
    auto p1 = offset_polygon(p, Rational(1, 8));
    auto p2 = offset_polygon(p, Rational(1, 2));
    for (const auto& v : p.verts) CHECK(contains_point(p1, v));
    for (const auto& v : p1.verts) CHECK(contains_point(p2, v));
}

TEST_CASE("bounding rectangle basics") {
    auto s = square(0, 1);
    auto r = bounding_rectangle(s);
    CHECK(polygon_area2(r) == 2);
    auto tri = validate_polygon({rv(0, 0), rv(2, 0), rv(1, 1)});
    auto rt = bounding_rectangle(tri);
    CHECK(support_oracle(rt, rv(1, 0)) == 2);
    CHECK(support_oracle(rt, rv(0, 1)) == 1);
    CHECK(support_oracle(rt, rv(-1, 0)) == 0);
    CHECK(support_oracle(rt, rv(0, -1)) == 0);
}

TEST_CASE("bounding rectangle touches a random 64-gon on all sides") {
    auto p = random_convex_polygon(64, 3, Rational(5));
    auto r = bounding_rectangle(p);
    for (const auto& v : p.verts) CHECK(contains_point(r, v));
    for (const Vec2 dir : {rv(1, 0), rv(0, 1), rv(-1, 0), rv(0, -1)})
        CHECK(support_oracle(r, dir) == support_oracle(p, dir));
}

TEST_CASE("diameter squared") {
    CHECK(diameter_sq(square(0, 1)) == 2);
    ConvexPolygon pt;
    pt.verts = {rv(4, 4)};
    pt.ensure_normal_slots();
    CHECK(diameter_sq(pt) == 0);
    // Even vertex count keeps exact antipodal pairs on the rational circle.
    auto p16 = regular_ngon(16, Rational(1));
    CHECK(diameter_sq(p16) == 4);
}

TEST_CASE("separation stats mu") {
    SeparationStats st;
    st.complexity = 64;
    st.diameter_sq = Rational(4);  // D = 2
    st.observe(Rational(1, 4));    // sigma = 1/2
    CHECK(st.mu() == Catch::Approx(2.0));  // sqrt(D/sigma) = 2
    st.observe(Rational(1, 10000));
    CHECK(st.mu() == Catch::Approx(std::sqrt(200.0)));
    SeparationStats big;
    big.complexity = 3;
    big.diameter_sq = Rational(4);
    big.observe(Rational(1, 10000));
    CHECK(big.mu() == 3.0);  // capped at n
}
