#pragma once

#include "kinsep/rational.hpp"

#include <utility>

namespace kinsep {

struct Vec2 {
    Rational x, y;

    Vec2() : x(0), y(0) {}
    Vec2(Rational xx, Rational yy) : x(std::move(xx)), y(std::move(yy)) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(const Rational& s) const { return {x * s, y * s}; }
    Vec2& operator+=(const Vec2& o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    Vec2& operator-=(const Vec2& o) {
        x -= o.x;
        y -= o.y;
        return *this;
    }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
    bool operator!=(const Vec2& o) const { return !(*this == o); }

    bool is_zero() const { return sgn(x) == 0 && sgn(y) == 0; }
};

inline Rational dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline Rational cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline Rational norm_sq(const Vec2& a) { return dot(a, a); }

// CCW rotation by 90 degrees.
inline Vec2 perp_ccw(const Vec2& a) { return {-a.y, a.x}; }
// CW rotation by 90 degrees; outward normal of a CCW polygon edge.
inline Vec2 perp_cw(const Vec2& a) { return {a.y, -a.x}; }

// Sign of the signed area of triangle (a, b, c): +1 for a left turn.
inline int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
    return sgn(cross(b - a, c - a));
}

// True if the direction lies in [0, pi) measured from the positive x-axis.
inline bool in_upper_halfturn(const Vec2& d) {
    int sy = sgn(d.y);
    return sy > 0 || (sy == 0 && sgn(d.x) > 0);
}

// Total order on nonzero directions around the circle, starting at +x.
// Returns -1 / 0 / +1; 0 means the directions coincide (up to scale).
inline int compare_dirs(const Vec2& a, const Vec2& b) {
    bool ua = in_upper_halfturn(a);
    bool ub = in_upper_halfturn(b);
    if (ua != ub) return ua ? -1 : 1;
    int c = sgn(cross(a, b));
    return c > 0 ? -1 : (c < 0 ? 1 : 0);
}

// Squared distance from p to segment [a, b]; exact.
inline Rational point_segment_dist_sq(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 ab = b - a;
    Rational len2 = norm_sq(ab);
    if (sgn(len2) == 0) return norm_sq(p - a);
    Rational t = dot(p - a, ab);
    if (sgn(t) <= 0) return norm_sq(p - a);
    if (t >= len2) return norm_sq(p - b);
    return norm_sq(p - a) - t * t / len2;
}

// Squared distance from p to the full line through a with direction d (d nonzero).
inline Rational point_line_dist_sq(const Vec2& p, const Vec2& a, const Vec2& d) {
    Rational c = cross(d, p - a);
    return c * c / norm_sq(d);
}

// Closed-segment intersection test, exact.
inline bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    int o1 = orientation(a, b, c);
    int o2 = orientation(a, b, d);
    int o3 = orientation(c, d, a);
    int o4 = orientation(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    auto on_segment = [](const Vec2& p, const Vec2& q, const Vec2& r) {
        return orientation(p, q, r) == 0 && sgn(dot(r - p, r - q)) <= 0;
    };
    return on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) ||
           on_segment(c, d, b);
}

}  // namespace kinsep
