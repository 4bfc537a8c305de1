#pragma once

#include "kinsep/polygon.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

namespace kinsep {

// Exact point on the circle |x - c| = r from the rational parametrization
// u = tan(theta/2). Any rational u lands exactly on the circle.
inline Vec2 rational_circle_point(const Vec2& center, const Rational& radius, const Rational& u) {
    Rational u2 = u * u;
    Rational den = u2 + 1;
    return {center.x + radius * (Rational(1) - u2) / den, center.y + radius * (2 * u) / den};
}

// Snap an angle in (-pi, pi) to a nearby rational u = tan(theta/2) with
// denominator 2^bits. Error stays far below the spacing of any direction
// set used here.
inline Rational snap_tan_half(double theta, unsigned bits = 20) {
    double u = std::tan(theta / 2.0);
    double scale = static_cast<double>(1ULL << bits);
    double scaled = u * scale;
    // Clamp so pathological angles cannot overflow the integer conversion.
    double limit = 9.0e15;
    if (scaled > limit) scaled = limit;
    if (scaled < -limit) scaled = -limit;
    Integer num(static_cast<long>(std::llround(scaled)));
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, bits);
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Regular k-gon on the rational circle: angles snapped, so coordinates are
// exact rationals on the circle of the given radius. Even k keeps exact
// antipodal symmetry (second half is the negation of the first).
inline ConvexPolygon regular_ngon(std::size_t k, const Rational& radius,
                                  const Vec2& center = Vec2{}) {
    std::vector<Vec2> pts;
    pts.reserve(k);
    const double pi = 3.14159265358979323846;
    if (k % 2 == 0) {
        std::size_t half = k / 2;
        std::vector<Vec2> first;
        for (std::size_t j = 0; j < half; ++j) {
            double theta = 2.0 * pi * static_cast<double>(j) / static_cast<double>(k);
            Rational u = snap_tan_half(theta);
            first.push_back(rational_circle_point(Vec2{}, radius, u));
        }
        for (const auto& v : first) pts.push_back(center + v);
        for (const auto& v : first) pts.push_back(center - v);
    } else {
        for (std::size_t j = 0; j < k; ++j) {
            double theta = 2.0 * pi * static_cast<double>(j) / static_cast<double>(k);
            if (theta >= pi) theta -= 2.0 * pi;
            if (theta > pi * 0.9999) theta = pi * 0.9999;
            Rational u = snap_tan_half(theta);
            pts.push_back(center + rational_circle_point(Vec2{}, radius, u));
        }
    }
    return validate_polygon(pts);
}

// Axis-aligned regular octagon (edge normals at the eight compass
// directions), inscribed in the given circle.
inline ConvexPolygon axis_aligned_octagon(const Rational& radius, const Vec2& center = Vec2{}) {
    // Vertices at angles 22.5 + 45k degrees; snapped onto the rational circle.
    std::vector<Vec2> pts;
    const double pi = 3.14159265358979323846;
    std::vector<Vec2> first;
    for (int j = 0; j < 4; ++j) {
        double theta = pi / 8.0 + 2.0 * pi * j / 8.0;
        Rational u = snap_tan_half(theta);
        first.push_back(rational_circle_point(Vec2{}, radius, u));
    }
    // Mirror one snapped vertex through the dihedral symmetries, in CCW
    // order, so all eight edge normals sit exactly on compass directions.
    Vec2 a = first[0];
    pts.push_back(center + Vec2{a.x, a.y});    // 22.5
    pts.push_back(center + Vec2{a.y, a.x});    // 67.5
    pts.push_back(center + Vec2{-a.y, a.x});   // 112.5
    pts.push_back(center + Vec2{-a.x, a.y});   // 157.5
    pts.push_back(center + Vec2{-a.x, -a.y});  // 202.5
    pts.push_back(center + Vec2{-a.y, -a.x});  // 247.5
    pts.push_back(center + Vec2{a.y, -a.x});   // 292.5
    pts.push_back(center + Vec2{a.x, -a.y});   // 337.5
    return validate_polygon(pts);
}

// Random convex polygon: n distinct snapped points on the circle of the
// given diameter, deterministic in the seed. Points on a circle are in
// convex position, so their angular sort is the hull.
inline ConvexPolygon random_convex_polygon(std::size_t n, std::uint64_t seed,
                                           const Rational& diameter,
                                           const Vec2& center = Vec2{}) {
    std::mt19937_64 rng(seed);
    const double pi = 3.14159265358979323846;
    Rational radius = diameter / 2;
    std::set<Rational> us;
    while (us.size() < n) {
        std::uint64_t raw = rng();
        double frac = static_cast<double>(raw >> 11) * (1.0 / 9007199254740992.0);
        double theta = frac * 2.0 * pi - pi;
        if (std::abs(theta) > pi * 0.9999) continue;
        us.insert(snap_tan_half(theta));
    }
    std::vector<Vec2> pts;
    for (const auto& u : us) pts.push_back(rational_circle_point(center, radius, u));
    return validate_polygon(pts);
}

}  // namespace kinsep
