#pragma once

#include "kinsep/rational.hpp"
#include "kinsep/vec.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace kinsep {

class geometry_error : public std::runtime_error {
public:
    explicit geometry_error(const std::string& msg) : std::runtime_error(msg) {}
};
class non_convex_error : public geometry_error {
public:
    explicit non_convex_error(const std::string& msg) : geometry_error(msg) {}
};
class empty_polygon_error : public geometry_error {
public:
    empty_polygon_error() : geometry_error("empty polygon") {}
};

// Counterclockwise convex polygon with exact rational vertices.
//
// extra_normals[i] holds outward normals of zero-length edges sitting at
// vertex i, sorted CCW inside the vertex's normal cone. Degenerate vertices
// (exactly collinear neighbours) are permitted only when inserted on purpose;
// validate() strips collinear input vertices.
struct ConvexPolygon {
    std::vector<Vec2> verts;
    std::vector<std::vector<Vec2>> extra_normals;
    bool has_degenerate_vertices = false;

    std::size_t size() const { return verts.size(); }
    const Vec2& vertex(std::size_t i) const { return verts[i % verts.size()]; }
    Vec2 edge_vec(std::size_t i) const {
        return verts[(i + 1) % verts.size()] - verts[i % verts.size()];
    }
    // Outward normal of positive-length edge i.
    Vec2 edge_normal(std::size_t i) const { return perp_cw(edge_vec(i)); }

    bool is_point() const { return verts.size() == 1; }

    void ensure_normal_slots() {
        if (extra_normals.size() != verts.size()) extra_normals.resize(verts.size());
    }

    // Number of edges counting zero-length edges.
    std::size_t augmented_edge_count() const {
        std::size_t n = verts.size() >= 2 ? verts.size() : 0;
        for (const auto& zs : extra_normals) n += zs.size();
        return n;
    }
};

// One edge of the augmented cyclic boundary; zero-length edges carry their
// own outward normal and have a == b.
struct AugEdge {
    Vec2 a, b;
    Vec2 normal;      // outward, not normalized
    bool zero = false;
    int src_vertex = -1;  // anchor vertex index for zero-length edges
    int src_edge = -1;    // polygon edge index for positive-length edges
};

inline Vec2 edge_direction(const AugEdge& e) { return perp_ccw(e.normal); }

// Full cyclic edge sequence with zero-length edges interleaved in normal
// order. For a 1-vertex polygon this is just its zero-length edges.
inline std::vector<AugEdge> augmented_edges(const ConvexPolygon& p) {
    std::vector<AugEdge> out;
    std::size_t n = p.verts.size();
    auto zs_at = [&](std::size_t i) -> const std::vector<Vec2>* {
        if (i < p.extra_normals.size()) return &p.extra_normals[i];
        return nullptr;
    };
    if (n == 1) {
        if (const auto* zs = zs_at(0))
            for (const auto& z : *zs)
                out.push_back({p.verts[0], p.verts[0], z, true, 0, -1});
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (const auto* zs = zs_at(i))
            for (const auto& z : *zs)
                out.push_back({p.verts[i], p.verts[i], z, true, static_cast<int>(i), -1});
        AugEdge e;
        e.a = p.verts[i];
        e.b = p.verts[(i + 1) % n];
        e.normal = perp_cw(e.b - e.a);
        e.zero = false;
        e.src_edge = static_cast<int>(i);
        out.push_back(e);
    }
    return out;
}

// validate_polygon: normalizes to CCW, removes exactly-collinear middle
// vertices, rejects non-convex input.
inline ConvexPolygon validate_polygon(std::vector<Vec2> pts) {
    // Drop exact consecutive duplicates (cyclically).
    std::vector<Vec2> v;
    for (const auto& p : pts) {
        if (v.empty() || !(v.back() == p)) v.push_back(p);
    }
    while (v.size() > 1 && v.front() == v.back()) v.pop_back();
    if (v.empty()) throw empty_polygon_error();

    if (v.size() <= 2) {
        ConvexPolygon poly;
        poly.verts = std::move(v);
        poly.ensure_normal_slots();
        return poly;
    }

    // Signed area decides orientation; zero area collapses to a segment.
    Rational area2(0);
    for (std::size_t i = 0; i < v.size(); ++i)
        area2 += cross(v[i], v[(i + 1) % v.size()]);
    if (sgn(area2) < 0) std::reverse(v.begin(), v.end());

    if (sgn(area2) == 0) {
        // All points collinear: keep the two extremes.
        auto cmp = [](const Vec2& a, const Vec2& b) {
            return a.x < b.x || (a.x == b.x && a.y < b.y);
        };
        Vec2 lo = v[0], hi = v[0];
        for (const auto& p : v) {
            if (orientation(v[0], v[1 % v.size()], p) != 0)
                throw non_convex_error("zero-area polygon is not collinear");
            if (cmp(p, lo)) lo = p;
            if (cmp(hi, p)) hi = p;
        }
        ConvexPolygon poly;
        poly.verts = lo == hi ? std::vector<Vec2>{lo} : std::vector<Vec2>{lo, hi};
        poly.ensure_normal_slots();
        return poly;
    }

    // Strip collinear middles; any right turn is a convexity violation.
    std::vector<Vec2> w;
    w.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2& prev = w.empty() ? v[(i + v.size() - 1) % v.size()] : w.back();
        const Vec2& cur = v[i];
        const Vec2& next = v[(i + 1) % v.size()];
        int o = orientation(prev, cur, next);
        if (o < 0) throw non_convex_error("right turn found");
        if (o == 0) continue;  // collinear middle vertex
        w.push_back(cur);
    }
    // The pass above uses stale neighbours near the seam; re-scan until stable.
    bool changed = true;
    while (changed && w.size() > 2) {
        changed = false;
        for (std::size_t i = 0; i < w.size();) {
            const Vec2& prev = w[(i + w.size() - 1) % w.size()];
            const Vec2& cur = w[i];
            const Vec2& next = w[(i + 1) % w.size()];
            int o = orientation(prev, cur, next);
            if (o < 0) throw non_convex_error("right turn found");
            if (o == 0) {
                w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
            } else {
                ++i;
            }
        }
    }
    if (w.size() < 3) throw non_convex_error("degenerate after collinear removal");

    // Edge directions must sweep exactly one full turn (rules out winding
    // sequences whose triples are all left turns, e.g. pentagram order).
    std::size_t wraps = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        Vec2 d0 = w[(i + 1) % w.size()] - w[i];
        Vec2 d1 = w[(i + 2) % w.size()] - w[(i + 1) % w.size()];
        if (compare_dirs(d0, d1) >= 0) ++wraps;
    }
    if (wraps != 1) throw non_convex_error("edge directions wind more than once");

    ConvexPolygon poly;
    poly.verts = std::move(w);
    poly.ensure_normal_slots();
    return poly;
}

inline Rational polygon_area2(const ConvexPolygon& p) {
    Rational a(0);
    std::size_t n = p.verts.size();
    if (n < 3) return a;
    for (std::size_t i = 0; i < n; ++i) a += cross(p.verts[i], p.verts[(i + 1) % n]);
    return a;
}

// Closed point-in-polygon, O(n). Works for point and segment degenerate cases.
inline bool contains_point(const ConvexPolygon& p, const Vec2& q) {
    std::size_t n = p.verts.size();
    if (n == 1) return p.verts[0] == q;
    if (n == 2) return point_segment_dist_sq(q, p.verts[0], p.verts[1]) == 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (orientation(p.verts[i], p.verts[(i + 1) % n], q) < 0) return false;
    }
    return true;
}

// Closed point-in-polygon, O(log n) fan search.
inline bool contains_point_fast(const ConvexPolygon& p, const Vec2& q) {
    std::size_t n = p.verts.size();
    if (n < 3) return contains_point(p, q);
    const Vec2& base = p.verts[0];
    if (orientation(base, p.verts[1], q) < 0) return false;
    if (orientation(base, p.verts[n - 1], q) > 0) return false;
    std::size_t lo = 1, hi = n - 1;
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (orientation(base, p.verts[mid], q) >= 0)
            lo = mid;
        else
            hi = mid;
    }
    return orientation(p.verts[lo], p.verts[hi], q) >= 0;
}

inline bool strictly_inside(const ConvexPolygon& p, const Vec2& q) {
    std::size_t n = p.verts.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        if (orientation(p.verts[i], p.verts[(i + 1) % n], q) <= 0) return false;
    }
    return true;
}

// Index of a vertex maximizing dot(v, dir); the canonical support vertex
// (the last one in CCW order over the maximizing face).
inline std::size_t support_vertex(const ConvexPolygon& p, const Vec2& dir) {
    std::size_t best = 0;
    Rational best_val = dot(p.verts[0], dir);
    for (std::size_t i = 1; i < p.verts.size(); ++i) {
        Rational v = dot(p.verts[i], dir);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    // Prefer the CCW-last vertex of a maximizing edge so that the support
    // feature is reported consistently.
    for (std::size_t k = 0; k < p.verts.size(); ++k) {
        std::size_t j = (best + 1) % p.verts.size();
        if (dot(p.verts[j], dir) == best_val)
            best = j;
        else
            break;
    }
    return best;
}

inline Rational support_value(const ConvexPolygon& p, const Vec2& dir) {
    return dot(p.verts[support_vertex(p, dir)], dir);
}

// Axis-aligned bounding rectangle; degenerates to a segment or point when
// the polygon does.
inline ConvexPolygon bounding_rectangle(const ConvexPolygon& p) {
    Rational xmin = p.verts[0].x, xmax = p.verts[0].x;
    Rational ymin = p.verts[0].y, ymax = p.verts[0].y;
    for (const auto& v : p.verts) {
        xmin = std::min(xmin, v.x);
        xmax = std::max(xmax, v.x);
        ymin = std::min(ymin, v.y);
        ymax = std::max(ymax, v.y);
    }
    std::vector<Vec2> corners{{xmin, ymin}, {xmax, ymin}, {xmax, ymax}, {xmin, ymax}};
    std::vector<Vec2> dedup;
    for (const auto& c : corners)
        if (dedup.empty() || !(dedup.back() == c)) dedup.push_back(c);
    while (dedup.size() > 1 && dedup.front() == dedup.back()) dedup.pop_back();
    ConvexPolygon rect;
    rect.verts = std::move(dedup);
    rect.ensure_normal_slots();
    return rect;
}

// Squared diameter, all vertex pairs.
inline Rational diameter_sq(const ConvexPolygon& p) {
    Rational best(0);
    for (std::size_t i = 0; i < p.verts.size(); ++i)
        for (std::size_t j = i + 1; j < p.verts.size(); ++j)
            best = std::max(best, norm_sq(p.verts[i] - p.verts[j]));
    return best;
}

// Witness features of the closest pair. kind 0: vertex of P vs edge of Q,
// kind 1: vertex of Q vs edge of P, kind 2: vertex-vertex.
struct DistanceWitness {
    int kind = 2;
    std::size_t p_feature = 0;
    std::size_t q_feature = 0;
};

struct DistanceResult {
    Rational dist_sq;
    DistanceWitness witness;
    Vec2 p_point, q_point;  // exact closest points realizing dist_sq
};

// Closest point of segment [a, b] to p, exact.
inline Vec2 closest_point_on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 ab = b - a;
    Rational len2 = norm_sq(ab);
    if (sgn(len2) == 0) return a;
    Rational t = dot(p - a, ab);
    if (sgn(t) <= 0) return a;
    if (t >= len2) return b;
    return a + ab * (t / len2);
}

inline bool polygons_intersect(const ConvexPolygon& p, const ConvexPolygon& q) {
    std::size_t n = p.verts.size(), m = q.verts.size();
    if (n >= 3 && contains_point(p, q.verts[0])) return true;
    if (m >= 3 && contains_point(q, p.verts[0])) return true;
    if (n == 1) return contains_point(q, p.verts[0]);
    if (m == 1) return contains_point(p, q.verts[0]);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t i2 = (i + 1) % n;
        if (n == 2 && i == 1) break;
        for (std::size_t j = 0; j < m; ++j) {
            std::size_t j2 = (j + 1) % m;
            if (m == 2 && j == 1) break;
            if (segments_intersect(p.verts[i], p.verts[i2], q.verts[j], q.verts[j2]))
                return true;
        }
    }
    return false;
}

// Brute-force exact separation: min over all vertex-edge and vertex-vertex
// feature pairs; 0 iff the polygons intersect or touch. This is the oracle
// the kinetic structures are verified against.
inline DistanceResult polygon_distance(const ConvexPolygon& p, const ConvexPolygon& q) {
    if (polygons_intersect(p, q)) return {Rational(0), {}};
    DistanceResult r;
    bool first = true;
    std::size_t n = p.verts.size(), m = q.verts.size();
    auto consider = [&](const Rational& d, DistanceWitness w, const Vec2& pp, const Vec2& qp) {
        if (first || d < r.dist_sq) {
            r.dist_sq = d;
            r.witness = w;
            r.p_point = pp;
            r.q_point = qp;
            first = false;
        }
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (m >= 2) {
            for (std::size_t j = 0; j < m; ++j) {
                if (m == 2 && j == 1) break;
                Vec2 cq = closest_point_on_segment(p.verts[i], q.verts[j], q.verts[(j + 1) % m]);
                consider(norm_sq(p.verts[i] - cq), {0, i, j}, p.verts[i], cq);
            }
        }
        for (std::size_t j = 0; j < m; ++j)
            consider(norm_sq(p.verts[i] - q.verts[j]), {2, i, j}, p.verts[i], q.verts[j]);
    }
    if (n >= 2) {
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t i = 0; i < n; ++i) {
                if (n == 2 && i == 1) break;
                Vec2 cp = closest_point_on_segment(q.verts[j], p.verts[i], p.verts[(i + 1) % n]);
                consider(norm_sq(q.verts[j] - cp), {1, j, i}, cp, q.verts[j]);
            }
    }
    return r;
}

// Minkowski sum by merging augmented edge sequences in direction order.
// Zero-length edges of the inputs survive as zero-length edges of the sum
// unless a positive-length edge shares their normal.
inline ConvexPolygon minkowski_sum(const ConvexPolygon& p, const ConvexPolygon& q) {
    if (p.verts.empty() || q.verts.empty()) throw empty_polygon_error();
    auto is_bare_point = [](const ConvexPolygon& poly) {
        return poly.is_point() && (poly.extra_normals.empty() || poly.extra_normals[0].empty());
    };
    if (is_bare_point(p)) {
        ConvexPolygon out = q;
        for (auto& v : out.verts) v += p.verts[0];
        return out;
    }
    if (is_bare_point(q)) {
        ConvexPolygon out = p;
        for (auto& v : out.verts) v += q.verts[0];
        return out;
    }

    struct Item {
        Vec2 vec;
        Vec2 normal;
        bool zero;
    };
    auto gather = [](const ConvexPolygon& poly, std::vector<Item>& items, Vec2& start) {
        auto edges = augmented_edges(poly);
        if (edges.empty()) {
            start = poly.verts[0];
            return;
        }
        // Rotate so edge directions ascend from the +x axis.
        std::size_t first = 0;
        for (std::size_t i = 1; i < edges.size(); ++i) {
            if (compare_dirs(edge_direction(edges[i]), edge_direction(edges[first])) < 0)
                first = i;
        }
        start = edges[first].a;
        for (std::size_t k = 0; k < edges.size(); ++k) {
            const AugEdge& e = edges[(first + k) % edges.size()];
            items.push_back({e.b - e.a, e.normal, e.zero});
        }
    };

    std::vector<Item> ep, eq;
    Vec2 sp, sq_;
    gather(p, ep, sp);
    gather(q, eq, sq_);

    std::vector<Item> merged;
    std::size_t i = 0, j = 0;
    while (i < ep.size() || j < eq.size()) {
        int take;  // -1: p, +1: q, 0: both
        if (i == ep.size())
            take = 1;
        else if (j == eq.size())
            take = -1;
        else
            take = compare_dirs(perp_ccw(ep[i].normal), perp_ccw(eq[j].normal));
        if (take < 0) {
            merged.push_back(ep[i++]);
        } else if (take > 0) {
            merged.push_back(eq[j++]);
        } else {
            Item combined{ep[i].vec + eq[j].vec, ep[i].normal, ep[i].zero && eq[j].zero};
            merged.push_back(combined);
            ++i;
            ++j;
        }
    }

    ConvexPolygon out;
    Vec2 cur = sp + sq_;
    for (const auto& it : merged) {
        if (it.zero || it.vec.is_zero()) {
            // Zero-length edge of the sum: record its normal at the current vertex.
            if (out.verts.empty() || !(out.verts.back() == cur)) {
                out.verts.push_back(cur);
                out.extra_normals.emplace_back();
            }
            if (out.extra_normals.size() < out.verts.size()) out.ensure_normal_slots();
            out.extra_normals[out.verts.size() - 1].push_back(it.normal);
        } else {
            if (out.verts.empty() || !(out.verts.back() == cur)) {
                out.verts.push_back(cur);
                out.extra_normals.emplace_back();
            }
            cur += it.vec;
        }
    }
    out.ensure_normal_slots();
    // Detect deliberate collinear (degenerate) vertices inherited from inputs.
    std::size_t n = out.verts.size();
    if (n >= 3) {
        for (std::size_t k = 0; k < n && !out.has_degenerate_vertices; ++k) {
            if (orientation(out.verts[(k + n - 1) % n], out.verts[k], out.verts[(k + 1) % n]) == 0)
                out.has_degenerate_vertices = true;
        }
    }
    return out;
}

// Point reflection through the origin; a rotation by pi, so CCW order and
// the in-cone order of zero-length edge normals are both preserved.
inline ConvexPolygon negate_polygon(const ConvexPolygon& p) {
    ConvexPolygon out = p;
    for (auto& v : out.verts) v = -v;
    for (auto& zs : out.extra_normals)
        for (auto& z : zs) z = -z;
    return out;
}

// Outer offset polygon P[eps]: every supporting line moved outward by a
// distance in [eps, eps*(1+2^-50)]. Unit normals are irrational, so the
// offset magnitude uses a rational upper bound of |n|; all downstream
// arithmetic stays exact. Zero-length edges induce positive-length edges,
// collinear runs keep their degenerate vertices.
inline ConvexPolygon offset_polygon(const ConvexPolygon& p, const Rational& eps) {
    if (sgn(eps) <= 0) throw geometry_error("offset requires eps > 0");
    auto edges = augmented_edges(p);
    std::size_t m = edges.size();
    if (m == 0) throw geometry_error("cannot offset a bare point without support directions");

    struct Line {
        Vec2 normal;
        Rational offset;  // line: dot(normal, x) == offset
        Vec2 anchor;
    };
    std::vector<Line> lines(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2& n = edges[i].normal;
        Rational shift = eps * sqrt_upper(norm_sq(n));
        lines[i] = {n, dot(n, edges[i].a) + shift, edges[i].a};
    }

    ConvexPolygon out;
    for (std::size_t i = 0; i < m; ++i) {
        const Line& l0 = lines[i];
        const Line& l1 = lines[(i + 1) % m];
        Vec2 v;
        Rational det = cross(l0.normal, l1.normal);
        if (sgn(det) == 0) {
            // Collinear run: displace the shared vertex along the common normal.
            const Vec2& n = l0.normal;
            Rational t = (l0.offset - dot(n, edges[i].b)) / norm_sq(n);
            v = edges[i].b + n * t;
            out.has_degenerate_vertices = true;
        } else {
            v = {(l0.offset * l1.normal.y - l1.offset * l0.normal.y) / det,
                 (l1.offset * l0.normal.x - l0.offset * l1.normal.x) / det};
        }
        out.verts.push_back(v);
    }
    out.ensure_normal_slots();
    if (out.verts.size() >= 2) {
        // Remove exact duplicates that arise from impossible corner configs.
        std::vector<Vec2> dedup;
        for (const auto& v : out.verts)
            if (dedup.empty() || !(dedup.back() == v)) dedup.push_back(v);
        while (dedup.size() > 1 && dedup.front() == dedup.back()) dedup.pop_back();
        out.verts = std::move(dedup);
        out.ensure_normal_slots();
    }
    return out;
}

// Separation statistics: squared diameter bound, squared minimum observed
// separation, and mu = min(n, sqrt(D/sigma)).
struct SeparationStats {
    Rational diameter_sq{0};
    std::optional<Rational> min_separation_sq;
    std::size_t complexity = 0;  // n

    void observe(const Rational& sep_sq) {
        if (!min_separation_sq || sep_sq < *min_separation_sq) min_separation_sq = sep_sq;
    }

    double mu() const {
        if (!min_separation_sq) return static_cast<double>(complexity);
        if (sgn(*min_separation_sq) == 0) return static_cast<double>(complexity);
        double ratio = to_double(diameter_sq / *min_separation_sq);
        double root = std::sqrt(std::sqrt(ratio));
        return std::min(static_cast<double>(complexity), root);
    }
};

}  // namespace kinsep
