#pragma once

#include "kinsep/polygon.hpp"
#include "kinsep/polynomial.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace kinsep {

class motion_error : public std::runtime_error {
public:
    explicit motion_error(const std::string& msg) : std::runtime_error(msg) {}
};
class degree_too_high_error : public motion_error {
public:
    explicit degree_too_high_error(const std::string& msg) : motion_error(msg) {}
};
class empty_horizon_error : public motion_error {
public:
    empty_horizon_error() : motion_error("empty time horizon") {}
};

enum class MotionClass { Static, LinearTranslation, ConvexTranslation, GeneralTranslation, Rigid };

inline const char* to_string(MotionClass c) {
    switch (c) {
        case MotionClass::Static: return "static";
        case MotionClass::LinearTranslation: return "linear-translation";
        case MotionClass::ConvexTranslation: return "convex-translation";
        case MotionClass::GeneralTranslation: return "general-translation";
        case MotionClass::Rigid: return "rigid";
    }
    return "?";
}

// Moving point in homogeneous form (x/w, y/w) with w > 0 over the horizon.
struct MovingPoint {
    Poly x, y, w;

    Vec2 at(const Rational& t) const {
        Rational wt = w.eval(t);
        return {x.eval(t) / wt, y.eval(t) / wt};
    }
};

// Rigid motion frame: origin path o(t) with rational-polynomial coordinates
// and rotation parameter u(t), giving frame vectors
//   x(t) = ((1-u^2)/(1+u^2), 2u/(1+u^2)),  y(t) = perp(x(t)).
// Every body point X*x + Y*y + o is then a rational function of t with
// positive denominator 1 + u(t)^2.
struct MotionFrame {
    Poly ox, oy;
    Poly u;
    Rational t0, t1;

    Poly den;      // 1 + u^2
    Poly cos_num;  // 1 - u^2
    Poly sin_num;  // 2u
    MotionClass klass = MotionClass::Static;

    int degree() const {
        int d = std::max(std::max(ox.degree(), oy.degree()), 2 * u.degree());
        return std::max(d, 0);
    }

    bool is_translation() const { return u.degree() <= 0; }

    MovingPoint embed(const Vec2& body) const {
        // o*den + R(u)*body, all over den.
        MovingPoint mp;
        mp.w = den;
        mp.x = ox * den + cos_num * body.x - sin_num * body.y;
        mp.y = oy * den + sin_num * body.x + cos_num * body.y;
        return mp;
    }

    Vec2 position_at(const Vec2& body, const Rational& t) const { return embed(body).at(t); }

    // Rotated direction vector (no translation part), exact at rational t.
    Vec2 direction_at(const Vec2& body_dir, const Rational& t) const {
        Rational c = cos_num.eval(t), s = sin_num.eval(t);
        return {c * body_dir.x - s * body_dir.y, s * body_dir.x + c * body_dir.y};
    }

    // Direction numerator as polynomials (denominator den > 0).
    void direction_poly(const Vec2& body_dir, Poly& dx, Poly& dy) const {
        dx = cos_num * Poly::constant(body_dir.x) - sin_num * Poly::constant(body_dir.y);
        dy = sin_num * Poly::constant(body_dir.x) + cos_num * Poly::constant(body_dir.y);
    }
};

inline bool sign_constant_on(const Poly& p, const Rational& t0, const Rational& t1) {
    if (p.is_zero()) return true;
    Poly sf = square_free_part(p);
    auto chain = sturm_chain(sf);
    // Roots strictly inside the horizon flip or touch zero; treat any
    // interior root as "not constant" (conservative for even touches).
    return count_roots(chain, t0, t1) - (sf.sign_at(t1) == 0 ? 1 : 0) == 0;
}

inline MotionClass classify_motion(const Poly& ox, const Poly& oy, const Poly& u,
                                   const Rational& t0, const Rational& t1) {
    if (u.degree() >= 1) return MotionClass::Rigid;
    if (ox.degree() <= 0 && oy.degree() <= 0) return MotionClass::Static;
    if (ox.degree() <= 1 && oy.degree() <= 1) return MotionClass::LinearTranslation;
    Poly dx = derivative(ox), dy = derivative(oy);
    Poly curv = dx * derivative(dy) - dy * derivative(dx);
    if (curv.is_zero()) return MotionClass::ConvexTranslation;  // straight path, any speed
    if (sign_constant_on(curv, t0, t1)) return MotionClass::ConvexTranslation;
    return MotionClass::GeneralTranslation;
}

inline MotionFrame make_motion(std::vector<Rational> ox_coeffs, std::vector<Rational> oy_coeffs,
                               std::vector<Rational> u_coeffs, Rational t0, Rational t1,
                               int max_degree = 8) {
    if (!(t0 < t1)) throw empty_horizon_error();
    MotionFrame f;
    f.ox = Poly(std::move(ox_coeffs));
    f.oy = Poly(std::move(oy_coeffs));
    f.u = Poly(std::move(u_coeffs));
    f.t0 = std::move(t0);
    f.t1 = std::move(t1);
    if (f.degree() > max_degree)
        throw degree_too_high_error("motion degree " + std::to_string(f.degree()) +
                                    " exceeds cap " + std::to_string(max_degree));
    f.den = f.u * f.u + Poly::constant(Rational(1));
    f.cos_num = Poly::constant(Rational(1)) - f.u * f.u;
    f.sin_num = f.u * Rational(2);
    f.klass = classify_motion(f.ox, f.oy, f.u, f.t0, f.t1);
    return f;
}

inline MotionFrame static_motion(const Rational& t0, const Rational& t1) {
    return make_motion({}, {}, {}, t0, t1);
}

// Polygon pose at an exact rational time; zero-length edge normals rotate
// along with the body.
inline ConvexPolygon polygon_at(const MotionFrame& f, const ConvexPolygon& body,
                                const Rational& t) {
    ConvexPolygon out = body;
    for (auto& v : out.verts) v = f.position_at(v, t);
    for (auto& zs : out.extra_normals)
        for (auto& z : zs) z = f.direction_at(z, t);
    return out;
}

// Cross product of the two moving difference vectors (b - a) and (d - c);
// sign matches cross(b(t)-a(t), d(t)-c(t)).
inline Poly cross_diff_poly(const MovingPoint& a, const MovingPoint& b, const MovingPoint& c,
                            const MovingPoint& d) {
    // (b/bw - a/aw) = (b*aw - a*bw) / (aw*bw), positive denominator.
    Poly ux = b.x * a.w - a.x * b.w;
    Poly uy = b.y * a.w - a.y * b.w;
    Poly vx = d.x * c.w - c.x * d.w;
    Poly vy = d.y * c.w - c.y * d.w;
    return ux * vy - uy * vx;
}

// Orientation certificate: sign equals orientation(a(t), b(t), c(t)); the
// implied denominator aw^2*bw*cw stays positive.
inline Poly orientation_poly(const MovingPoint& a, const MovingPoint& b, const MovingPoint& c);

// Dot product sign of (p - a) . (b - a) for moving points.
inline Poly dot_diff_poly(const MovingPoint& p, const MovingPoint& a, const MovingPoint& b) {
    Poly ux = p.x * a.w - a.x * p.w;
    Poly uy = p.y * a.w - a.y * p.w;
    Poly vx = b.x * a.w - a.x * b.w;
    Poly vy = b.y * a.w - a.y * b.w;
    return ux * vx + uy * vy;
}

inline Poly orientation_poly(const MovingPoint& a, const MovingPoint& b, const MovingPoint& c) {
    return cross_diff_poly(a, b, a, c);
}

}  // namespace kinsep
