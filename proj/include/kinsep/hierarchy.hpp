#pragma once

#include "kinsep/generators.hpp"
#include "kinsep/polygon.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace kinsep {

class hierarchy_error : public std::runtime_error {
public:
    explicit hierarchy_error(const std::string& msg) : std::runtime_error(msg) {}
};

enum class HierarchyKind { Compass, Dudley };

// Augmented boundary edge of the base polygon.
struct HierEdge {
    Vec2 a, b;     // a == b for zero-length edges
    Vec2 normal;   // outward, exact, not normalized
    bool zero = false;
    int cut_triangle = -1;  // cut that consumed this edge; -1 if it is a
                            // rectangle-contact feature edge
    int rect_line = -1;     // for feature edges: the rectangle side carrying it
};

// A supporting line introduced either by a rectangle side or by a corner cut.
struct CutLine {
    Vec2 anchor;       // point on the line
    Vec2 dir;          // direction (perp of outward normal)
    Vec2 outward;      // outward normal
    int intro_level;   // envelope level at which the line first carries an edge
    int triangle = -1; // creating cut; -1 for rectangle sides
    Vec2 extent_a, extent_b;  // the full envelope edge on this line at intro_level
};

struct BoomerangNode {
    int id = -1;
    int level = 0;
    Vec2 apex;
    std::size_t chain_begin = 0, chain_end = 0;  // [begin, end) into edges
    Vec2 chain_start, chain_stop;                // u_0, u_m
    Rational height_sq;  // squared distance from apex to the chain
    int triangle = -1;
    int parent_triangle = -1;
    int line_start_side = -1;  // carries [apex -> u_0]
    int line_end_side = -1;    // carries [u_m -> apex]
    bool chain_empty() const { return chain_begin >= chain_end; }
};

struct TriangleNode {
    int id = -1;
    int level = 0;
    Vec2 apex;
    Vec2 inner_a, inner_b;  // inner edge endpoints: i1 (chain-start side), i2
    std::size_t bundle_begin = 0, bundle_end = 0;  // consumed collinear edges
    int child_low = -1, child_high = -1;
    int parent_boomerang = -1;
    int cut_line = -1;
    Rational area2;  // twice the signed area, non-negative
};

// One positive-length edge of an envelope, with its line provenance.
struct EnvelopeEdge {
    Vec2 a, b;
    int line = -1;       // cut/rectangle line handle, or
    int base_edge = -1;  // exposed augmented base edge index
};

struct Envelope {
    std::vector<EnvelopeEdge> edges;  // CCW
    ConvexPolygon poly;               // with degenerate vertices and exposed
                                      // zero-length edges preserved
};

struct TileLocation {
    enum Kind { Outside, InsideBase, Tile } kind = Outside;
    int triangle = -1;
    int level = -1;
};

// Triangles are stored clockwise (inner_a, inner_b, apex); closed test.
inline bool triangle_contains_closed(const TriangleNode& t, const Vec2& q) {
    return orientation(t.inner_a, t.inner_b, q) <= 0 && orientation(t.inner_b, t.apex, q) <= 0 &&
           orientation(t.apex, t.inner_a, q) <= 0;
}

// Compass direction table: k near-evenly-spaced exact rational directions,
// exact at multiples of 45 degrees so cardinal and diagonal cuts are crisp.
inline std::vector<Vec2> compass_directions(std::size_t k) {
    std::vector<Vec2> dirs(k);
    const double pi = 3.14159265358979323846;
    for (std::size_t j = 0; j < k; ++j) {
        if (j * 8 % k == 0) {
            static const Vec2 eighth[8] = {
                {Rational(1), Rational(0)},  {Rational(1), Rational(1)},
                {Rational(0), Rational(1)},  {Rational(-1), Rational(1)},
                {Rational(-1), Rational(0)}, {Rational(-1), Rational(-1)},
                {Rational(0), Rational(-1)}, {Rational(1), Rational(-1)}};
            dirs[j] = eighth[j * 8 / k];
            continue;
        }
        double theta = 2.0 * pi * static_cast<double>(j) / static_cast<double>(k);
        if (theta >= pi) theta -= 2.0 * pi;
        Rational u = snap_tan_half(theta);
        Rational u2 = u * u;
        dirs[j] = {Rational(1) - u2, 2 * u};
    }
    for (std::size_t j = 0; j < k; ++j) {
        if (compare_dirs(dirs[j], dirs[(j + 1) % k]) >= 0 && k > 1 && j + 1 < k)
            throw hierarchy_error("compass directions out of order");
    }
    return dirs;
}

class BoomerangHierarchy {
public:
    ConvexPolygon base;        // original polygon
    HierarchyKind kind = HierarchyKind::Compass;
    std::vector<HierEdge> edges;        // augmented boundary, linearized
    std::vector<BoomerangNode> booms;   // roots first (ids 0..3 when present)
    std::vector<TriangleNode> tris;
    std::vector<CutLine> lines;         // 0..3 rectangle sides, then cuts
    std::vector<int> roots;             // boomerang ids, CCW from the NE corner
    ConvexPolygon rectangle;            // P_0
    int depth = 0;                      // envelopes 0..depth, P_depth == augmented P
    Rational diam_sq;
    std::vector<Envelope> envelopes;    // cached per level

    const Envelope& envelope(int level) const {
        int i = std::clamp(level, 0, depth);
        return envelopes[static_cast<std::size_t>(i)];
    }

    ConvexPolygon envelope_of(int level) const {
        if (level < 0) throw hierarchy_error("level out of range");
        return envelope(level).poly;  // past-the-end levels clamp to the base
    }

    std::vector<Rational> level_height_profile() const {
        std::vector<Rational> prof;
        for (const auto& b : booms) {
            if (b.level >= static_cast<int>(prof.size()))
                prof.resize(static_cast<std::size_t>(b.level) + 1, Rational(0));
            prof[static_cast<std::size_t>(b.level)] =
                std::max(prof[static_cast<std::size_t>(b.level)], b.height_sq);
        }
        return prof;  // squared heights
    }

    // Boomerangs with height at least s (s squared), per level and total.
    std::pair<std::vector<std::size_t>, std::size_t> tall_boomerang_count(
        const Rational& s_sq) const {
        std::vector<std::size_t> per_level;
        std::size_t total = 0;
        for (const auto& b : booms) {
            if (b.height_sq >= s_sq && sgn(s_sq) > 0) {
                if (b.level >= static_cast<int>(per_level.size()))
                    per_level.resize(static_cast<std::size_t>(b.level) + 1, 0);
                ++per_level[static_cast<std::size_t>(b.level)];
                ++total;
            }
        }
        return {per_level, total};
    }

    // Tile lookup with ties broken toward the deeper level, then lower id.
    TileLocation locate_point(const Vec2& p) const {
        if (!contains_point(envelopes[0].poly, p)) return {TileLocation::Outside, -1, -1};
        // Deepest closed envelope containing p (containment is nested).
        int lo = 0, hi = depth;
        while (lo < hi) {
            int mid = (lo + hi + 1) / 2;
            if (contains_point(envelopes[static_cast<std::size_t>(mid)].poly, p))
                lo = mid;
            else
                hi = mid - 1;
        }
        if (lo == depth) return {TileLocation::InsideBase, -1, -1};
        for (const auto& t : tris) {
            if (t.level != lo || sgn(t.area2) == 0) continue;
            if (triangle_contains_closed(t, p)) return {TileLocation::Tile, t.id, t.level};
        }
        // p lies on a zero-area sliver boundary; fall back to a full scan,
        // preferring deeper levels then lower ids.
        for (int lvl = depth - 1; lvl >= 0; --lvl) {
            for (const auto& t : tris) {
                if (t.level != lvl) continue;
                if (triangle_contains_closed(t, p)) return {TileLocation::Tile, t.id, t.level};
            }
        }
        return {TileLocation::Outside, -1, -1};
    }

    // Exact tiling identity: area(P0) - area(P) == sum of triangle areas.
    bool tiling_area_identity() const {
        Rational sum(0);
        for (const auto& t : tris) sum += t.area2;
        return polygon_area2(rectangle) - polygon_area2(base) == sum;
    }
};

namespace detail {

struct PendingInsertions {
    // vertex index -> zero-length edge normals (unsorted on input)
    std::map<std::size_t, std::vector<Vec2>> vertex_normals;
    // edge index -> interior split points
    std::map<std::size_t, std::vector<Vec2>> edge_splits;
};

// Builds the augmented linear edge array from the polygon and insertions.
inline std::vector<HierEdge> build_augmented(const ConvexPolygon& p, PendingInsertions ins) {
    std::vector<HierEdge> out;
    std::size_t n = p.verts.size();
    for (std::size_t i = 0; i < n; ++i) {
        // Existing zero-length edges plus inserted ones, sorted by direction.
        std::vector<Vec2> zs;
        if (i < p.extra_normals.size()) zs = p.extra_normals[i];
        if (auto it = ins.vertex_normals.find(i); it != ins.vertex_normals.end())
            for (const auto& v : it->second) zs.push_back(v);
        // Normal cone of vertex i spans (normal(edge i-1), normal(edge i)).
        Vec2 n_in = n >= 2 ? perp_cw(p.verts[i] - p.verts[(i + n - 1) % n]) : Vec2{};
        Vec2 n_out = n >= 2 ? perp_cw(p.verts[(i + 1) % n] - p.verts[i]) : Vec2{};
        // Sort inside the cone starting at n_in; the cone may wrap through
        // direction zero, so absolute circle order is not enough.
        auto cone_key = [&](const Vec2& v) {
            return n >= 2 && compare_dirs(n_in, v) > 0 ? 1 : 0;
        };
        std::sort(zs.begin(), zs.end(), [&](const Vec2& a, const Vec2& b) {
            int ka = cone_key(a), kb = cone_key(b);
            if (ka != kb) return ka < kb;
            return compare_dirs(a, b) < 0;
        });
        zs.erase(std::unique(zs.begin(), zs.end(),
                             [](const Vec2& a, const Vec2& b) { return compare_dirs(a, b) == 0; }),
                 zs.end());
        for (const auto& z : zs) {
            if (n >= 2) {
                // Drop normals that coincide with a real edge; the edge stands in.
                if (compare_dirs(z, n_in) == 0 || compare_dirs(z, n_out) == 0) continue;
            }
            out.push_back({p.verts[i], p.verts[i], z, true, -1, -1});
        }
        if (n == 2 || n >= 3) {
            // Edge i (for a 2-gon both the forward and back edges appear).
            Vec2 a = p.verts[i];
            Vec2 b = p.verts[(i + 1) % n];
            if (n == 1) continue;
            Vec2 nrm = perp_cw(b - a);
            std::vector<Vec2> cuts;
            if (auto it = ins.edge_splits.find(i); it != ins.edge_splits.end()) cuts = it->second;
            std::sort(cuts.begin(), cuts.end(), [&](const Vec2& x, const Vec2& y) {
                return dot(x - a, b - a) < dot(y - a, b - a);
            });
            cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
            Vec2 cur = a;
            for (const auto& c : cuts) {
                if (c == cur || c == b) continue;
                out.push_back({cur, c, nrm, false, -1, -1});
                cur = c;
            }
            out.push_back({cur, b, nrm, false, -1, -1});
        }
    }
    return out;
}

struct BuildContext {
    BoomerangHierarchy* h;
    std::vector<Vec2> compass;  // empty for Dudley
    std::size_t compass_k = 0;
};

// Chooses the cut edge index within [cb, ce). For compass boomerangs with an
// index range wider than one slot, cut at the bisecting compass direction;
// otherwise cut the median edge (lower index on even length).
inline std::size_t choose_cut(const BuildContext& ctx, std::size_t cb, std::size_t ce,
                              std::size_t ia, std::size_t ib) {
    if (!ctx.compass.empty() && ib > ia + 1) {
        std::size_t mid = (ia + ib) / 2;
        const Vec2& d = ctx.compass[mid % ctx.compass_k];
        for (std::size_t i = cb; i < ce; ++i) {
            const Vec2& nrm = ctx.h->edges[i].normal;
            if (sgn(cross(nrm, d)) == 0 && sgn(dot(nrm, d)) > 0) return i;
        }
        // The bisector direction is absent (its support feature fell outside
        // this chain); fall back to the median cut.
    }
    return cb + (ce - cb - 1) / 2;
}

inline Vec2 line_intersection(const Vec2& a0, const Vec2& d0, const Vec2& a1, const Vec2& d1) {
    Rational det = cross(d0, d1);
    // Caller guarantees non-parallel lines.
    Rational t = cross(a1 - a0, d1) / det;
    return a0 + d0 * t;
}

inline Rational chain_height_sq(const BoomerangHierarchy& h, const Vec2& apex, std::size_t cb,
                                std::size_t ce) {
    if (cb >= ce) return Rational(0);
    std::optional<Rational> best;
    for (std::size_t i = cb; i < ce; ++i) {
        const auto& e = h.edges[i];
        Rational d = e.zero ? norm_sq(apex - e.a) : point_segment_dist_sq(apex, e.a, e.b);
        if (!best || d < *best) best = d;
    }
    return *best;
}

// Recursive corner cutting. Returns the boomerang id, or -1 when empty.
inline int build_boomerang(BuildContext& ctx, int level, const Vec2& apex, std::size_t cb,
                           std::size_t ce, const Vec2& u0, const Vec2& um, int line_start,
                           int line_end, int parent_triangle, std::size_t ia, std::size_t ib) {
    BoomerangHierarchy& h = *ctx.h;
    if (cb >= ce) return -1;

    BoomerangNode b;
    b.id = static_cast<int>(h.booms.size());
    b.level = level;
    b.apex = apex;
    b.chain_begin = cb;
    b.chain_end = ce;
    b.chain_start = u0;
    b.chain_stop = um;
    b.height_sq = chain_height_sq(h, apex, cb, ce);
    b.line_start_side = line_start;
    b.line_end_side = line_end;
    b.parent_triangle = parent_triangle;
    h.booms.push_back(b);
    int bid = b.id;

    // Pick the cut edge and expand to the full collinear bundle.
    std::size_t c = choose_cut(ctx, cb, ce, ia, ib);
    const Vec2 cut_normal = h.edges[c].normal;
    const Vec2 cut_anchor = h.edges[c].a;
    const Vec2 cut_dir = perp_ccw(cut_normal);
    auto on_cut_line = [&](std::size_t i) {
        const auto& e = h.edges[i];
        return sgn(cross(e.normal, cut_normal)) == 0 && sgn(dot(e.normal, cut_normal)) > 0 &&
               sgn(cross(cut_dir, e.a - cut_anchor)) == 0;
    };
    std::size_t blo = c, bhi = c;
    while (blo > cb && on_cut_line(blo - 1)) --blo;
    while (bhi + 1 < ce && on_cut_line(bhi + 1)) ++bhi;

    Vec2 bundle_a = h.edges[blo].a;
    Vec2 bundle_b = h.edges[bhi].b;

    // Inner edge endpoints: intersections of the cut line with the apex-edge
    // lines, or the chain endpoints when the bundle touches a chain end.
    Vec2 i1, i2;
    if (blo == cb) {
        i1 = bundle_a;
    } else if (u0 == apex) {
        i1 = u0;
    } else {
        Vec2 side_dir = apex - u0;
        if (sgn(cross(side_dir, cut_dir)) == 0)
            i1 = u0;  // parallel: degenerate sliver
        else
            i1 = line_intersection(u0, side_dir, cut_anchor, cut_dir);
    }
    if (bhi == ce - 1) {
        i2 = bundle_b;
    } else if (um == apex) {
        i2 = um;
    } else {
        Vec2 side_dir = apex - um;
        if (sgn(cross(side_dir, cut_dir)) == 0)
            i2 = um;
        else
            i2 = line_intersection(um, side_dir, cut_anchor, cut_dir);
    }

    TriangleNode t;
    t.id = static_cast<int>(h.tris.size());
    t.level = level;
    t.apex = apex;
    t.inner_a = i1;
    t.inner_b = i2;
    t.bundle_begin = blo;
    t.bundle_end = bhi + 1;
    t.parent_boomerang = bid;
    Rational a2 = cross(i2 - i1, apex - i1);
    t.area2 = sgn(a2) < 0 ? -a2 : a2;
    h.tris.push_back(t);
    int tid = t.id;
    h.booms[static_cast<std::size_t>(bid)].triangle = tid;
    for (std::size_t i = blo; i <= bhi; ++i) h.edges[i].cut_triangle = tid;

    CutLine cl;
    cl.anchor = cut_anchor;
    cl.dir = cut_dir;
    cl.outward = cut_normal;
    cl.intro_level = level + 1;
    cl.triangle = tid;
    cl.extent_a = i1;
    cl.extent_b = i2;
    h.lines.push_back(cl);
    int line_id = static_cast<int>(h.lines.size()) - 1;
    h.tris[static_cast<std::size_t>(tid)].cut_line = line_id;

    // Children index ranges for the compass phase. If the cut was not at the
    // bisector (fallback median), both children keep the parent range so the
    // bisector is retried where it survives.
    std::size_t im = (ia + ib) / 2;
    bool compass_cut = !ctx.compass.empty() && ib > ia + 1 &&
                       sgn(cross(cut_normal, ctx.compass[im % ctx.compass_k])) == 0 &&
                       sgn(dot(cut_normal, ctx.compass[im % ctx.compass_k])) > 0;
    std::size_t ia_low = ia, ib_low = compass_cut ? im : ib;
    std::size_t ia_high = compass_cut ? im : ia, ib_high = ib;
    if (ctx.compass.empty()) {
        ia_low = ib_low = ia_high = ib_high = 0;
    }

    int low = build_boomerang(ctx, level + 1, i1, cb, blo, u0, bundle_a, line_start, line_id,
                              tid, ia_low, ib_low);
    int high = build_boomerang(ctx, level + 1, i2, bhi + 1, ce, bundle_b, um, line_id, line_end,
                               tid, ia_high, ib_high);
    h.tris[static_cast<std::size_t>(tid)].child_low = low;
    h.tris[static_cast<std::size_t>(tid)].child_high = high;
    h.depth = std::max(h.depth, level + 1);
    return bid;
}

// Envelope assembly: walk the structure at a given level, emitting edges.
inline void contour_edges(const BoomerangHierarchy& h, int bid, int level,
                          std::vector<EnvelopeEdge>& out, std::vector<std::pair<Vec2, Vec2>>& zs) {
    if (bid < 0) return;
    const auto& b = h.booms[static_cast<std::size_t>(bid)];
    auto emit = [&](const Vec2& a, const Vec2& bb, int line, int base_edge) {
        if (a == bb) return;
        out.push_back({a, bb, line, base_edge});
    };
    if (b.level >= level || b.triangle < 0) {
        emit(b.chain_start, b.apex, b.line_start_side, -1);
        emit(b.apex, b.chain_stop, b.line_end_side, -1);
        return;
    }
    const auto& t = h.tris[static_cast<std::size_t>(b.triangle)];
    contour_edges(h, t.child_low, level, out, zs);
    for (std::size_t i = t.bundle_begin; i < t.bundle_end; ++i) {
        const auto& e = h.edges[i];
        if (e.zero)
            zs.emplace_back(e.a, e.normal);
        else
            emit(e.a, e.b, -1, static_cast<int>(i));
    }
    contour_edges(h, t.child_high, level, out, zs);
}

}  // namespace detail

namespace detail {

struct RootSpec {
    std::size_t cb, ce;
    Vec2 u0, um, apex;
    int line_start, line_end;
    std::size_t ia, ib;
};

inline void build_common(BoomerangHierarchy& h, BuildContext& ctx) {
    // Rectangle and its side lines (E, N, W, S order).
    h.rectangle = bounding_rectangle(h.base);
    h.diam_sq = diameter_sq(h.base);
    if (h.rectangle.size() < 3) {
        // Degenerate base (point or axis-aligned segment): trivial hierarchy.
        h.depth = 0;
        Envelope env;
        env.poly = h.base;
        h.envelopes = {env};
        return;
    }
    Rational xmin = h.rectangle.verts[0].x, ymin = h.rectangle.verts[0].y;
    Rational xmax = h.rectangle.verts[2].x, ymax = h.rectangle.verts[2].y;
    Vec2 ne{xmax, ymax}, nw{xmin, ymax}, sw{xmin, ymin}, se{xmax, ymin};
    h.lines.push_back({se, {Rational(0), Rational(1)}, {Rational(1), Rational(0)}, 0, -1, se, ne});
    h.lines.push_back({ne, {Rational(-1), Rational(0)}, {Rational(0), Rational(1)}, 0, -1, ne, nw});
    h.lines.push_back({nw, {Rational(0), Rational(-1)}, {Rational(-1), Rational(0)}, 0, -1, nw, sw});
    h.lines.push_back({sw, {Rational(1), Rational(0)}, {Rational(0), Rational(-1)}, 0, -1, sw, se});

    // Mark feature edges (normals exactly at cardinal directions) with their
    // rectangle side; they are never consumed by cuts.
    static const Vec2 cardinals[4] = {{Rational(1), Rational(0)},
                                      {Rational(0), Rational(1)},
                                      {Rational(-1), Rational(0)},
                                      {Rational(0), Rational(-1)}};
    auto cardinal_of = [&](const Vec2& nrm) -> int {
        for (int s = 0; s < 4; ++s)
            if (sgn(cross(nrm, cardinals[s])) == 0 && sgn(dot(nrm, cardinals[s])) > 0) return s;
        return -1;
    };
    for (auto& e : h.edges) e.rect_line = cardinal_of(e.normal);

    // Rotate the edge array so it ascends from just after the east feature:
    // anchor at the angularly smallest normal strictly after E.
    std::size_t m = h.edges.size();
    std::size_t start = m;
    for (std::size_t i = 0; i < m; ++i) {
        if (compare_dirs(cardinals[0], h.edges[i].normal) >= 0) continue;
        if (start == m || compare_dirs(h.edges[i].normal, h.edges[start].normal) < 0) start = i;
    }
    if (start == m) start = 0;  // all normals exactly east: degenerate
    // Keep collinear bundles intact across the seam.
    for (std::size_t guard = 0; guard < m; ++guard) {
        std::size_t prev = (start + m - 1) % m;
        if (compare_dirs(h.edges[prev].normal, h.edges[start].normal) == 0)
            start = prev;
        else
            break;
    }
    std::rotate(h.edges.begin(), h.edges.begin() + static_cast<std::ptrdiff_t>(start),
                h.edges.end());

    // Split into the four root chains by normal sector.
    auto sector_of = [&](const Vec2& nrm) -> int {
        // 0: (E,N), 1: (N,W), 2: (W,S), 3: (S,E); -1 for exact cardinals.
        if (cardinal_of(nrm) >= 0) return -1;
        for (int s = 0; s < 4; ++s) {
            if (compare_dirs(cardinals[s], nrm) < 0 &&
                (s == 3 || compare_dirs(nrm, cardinals[s + 1]) < 0))
                return s;
        }
        return 3;
    };
    std::array<std::size_t, 4> chain_b{m, m, m, m}, chain_e{m, m, m, m};
    for (std::size_t i = 0; i < m; ++i) {
        int s = sector_of(h.edges[i].normal);
        if (s < 0) continue;
        if (chain_b[static_cast<std::size_t>(s)] == m) chain_b[static_cast<std::size_t>(s)] = i;
        chain_e[static_cast<std::size_t>(s)] = i + 1;
    }

    const Vec2 corners[4] = {ne, nw, sw, se};
    std::array<std::size_t, 4> root_ia{};
    if (!ctx.compass.empty()) {
        std::size_t quarter = ctx.compass_k / 4;
        root_ia = {0, quarter, 2 * quarter, 3 * quarter};
    }
    for (int s = 0; s < 4; ++s) {
        std::size_t cb = chain_b[static_cast<std::size_t>(s)];
        std::size_t ce = chain_e[static_cast<std::size_t>(s)];
        int line_start = s;            // side with the sector's start cardinal
        int line_end = (s + 1) % 4;    // side with the end cardinal
        if (cb >= m) {
            h.roots.push_back(-1);
            continue;
        }
        Vec2 u0 = h.edges[cb].a;
        Vec2 um = h.edges[ce - 1].b;
        std::size_t ia = 0, ib = 0;
        if (!ctx.compass.empty()) {
            ia = root_ia[static_cast<std::size_t>(s)];
            ib = ia + ctx.compass_k / 4;
        }
        int bid = detail::build_boomerang(ctx, 0, corners[s], cb, ce, u0, um, line_start,
                                          line_end, -1, ia, ib);
        h.roots.push_back(bid);
    }

    // Cache envelopes for every level: alternate feature runs (exposed at
    // every level) with the root contours.
    h.envelopes.resize(static_cast<std::size_t>(h.depth) + 1);
    for (int lvl = 0; lvl <= h.depth; ++lvl) {
        Envelope env;
        std::vector<std::pair<Vec2, Vec2>> zero_exposed;
        std::size_t idx = 0;
        while (idx < m) {
            int s = sector_of(h.edges[idx].normal);
            if (s >= 0) {
                detail::contour_edges(h, h.roots[static_cast<std::size_t>(s)], lvl, env.edges,
                                      zero_exposed);
                idx = chain_e[static_cast<std::size_t>(s)];
            } else {
                const auto& e = h.edges[idx];
                if (e.zero)
                    zero_exposed.emplace_back(e.a, e.normal);
                else
                    env.edges.push_back({e.a, e.b, -1, static_cast<int>(idx)});
                ++idx;
            }
        }

        // Assemble the polygon: vertices from edge endpoints, then attach
        // exposed zero-length edges whose normals are strictly inside their
        // vertex cone at this level.
        ConvexPolygon poly;
        for (const auto& ee : env.edges) {
            if (poly.verts.empty() || !(poly.verts.back() == ee.a)) poly.verts.push_back(ee.a);
            poly.verts.push_back(ee.b);
        }
        if (poly.verts.size() > 1 && poly.verts.front() == poly.verts.back())
            poly.verts.pop_back();
        poly.ensure_normal_slots();
        std::size_t pn = poly.verts.size();
        for (const auto& [pt, nrm] : zero_exposed) {
            for (std::size_t vi = 0; vi < pn; ++vi) {
                if (!(poly.verts[vi] == pt)) continue;
                Vec2 n_in = perp_cw(poly.verts[vi] - poly.verts[(vi + pn - 1) % pn]);
                Vec2 n_out = perp_cw(poly.verts[(vi + 1) % pn] - poly.verts[vi]);
                bool inside;
                if (compare_dirs(n_in, n_out) < 0)
                    inside = compare_dirs(n_in, nrm) < 0 && compare_dirs(nrm, n_out) < 0;
                else
                    inside = compare_dirs(n_in, nrm) < 0 || compare_dirs(nrm, n_out) < 0;
                if (inside) {
                    poly.extra_normals[vi].push_back(nrm);
                    break;
                }
            }
        }
        for (auto& zsv : poly.extra_normals)
            std::sort(zsv.begin(), zsv.end(),
                      [](const Vec2& a, const Vec2& b) { return compare_dirs(a, b) < 0; });
        std::size_t n3 = poly.verts.size();
        for (std::size_t vi = 0; vi < n3 && !poly.has_degenerate_vertices; ++vi)
            if (orientation(poly.verts[(vi + n3 - 1) % n3], poly.verts[vi],
                            poly.verts[(vi + 1) % n3]) == 0)
                poly.has_degenerate_vertices = true;
        env.poly = std::move(poly);
        h.envelopes[static_cast<std::size_t>(lvl)] = std::move(env);
    }
}

}  // namespace detail

// Compass hierarchy: augment with zero-length edges at the k compass
// directions (k the smallest power of two >= max(4, n)), then cut by
// bisecting compass directions while a boomerang's index range spans more
// than one slot, and by median edges below that.
inline BoomerangHierarchy build_compass(const ConvexPolygon& p) {
    if (p.verts.empty()) throw empty_polygon_error();
    BoomerangHierarchy h;
    h.base = p;
    h.kind = HierarchyKind::Compass;

    std::size_t n = std::max<std::size_t>(p.verts.size(), 4);
    std::size_t k = 1;
    while (k < n) k <<= 1;
    auto dirs = compass_directions(k);

    detail::PendingInsertions ins;
    if (p.verts.size() >= 2) {
        for (std::size_t j = 0; j < k; ++j) {
            // Skip directions matching a real edge normal; that edge stands in.
            bool has_edge = false;
            std::size_t nn = p.verts.size();
            for (std::size_t e = 0; e < nn; ++e) {
                if (nn == 2 && e == 1) break;
                Vec2 nrm = perp_cw(p.verts[(e + 1) % nn] - p.verts[e]);
                if (sgn(cross(nrm, dirs[j])) == 0 && sgn(dot(nrm, dirs[j])) > 0) {
                    has_edge = true;
                    break;
                }
            }
            if (p.verts.size() == 2) {
                Vec2 back = perp_cw(p.verts[0] - p.verts[1]);
                if (sgn(cross(back, dirs[j])) == 0 && sgn(dot(back, dirs[j])) > 0) has_edge = true;
            }
            if (has_edge) continue;
            ins.vertex_normals[support_vertex(p, dirs[j])].push_back(dirs[j]);
        }
    } else {
        for (std::size_t j = 0; j < k; ++j) ins.vertex_normals[0].push_back(dirs[j]);
    }

    h.edges = detail::build_augmented(p, std::move(ins));
    detail::BuildContext ctx{&h, std::move(dirs), k};
    detail::build_common(h, ctx);
    return h;
}

// Dudley hierarchy: project n regularly spaced circle samples (radius twice
// a rational upper bound of the diameter, centered at the bounding-box
// center) onto the polygon; vertex hits insert zero-length edges, edge hits
// insert degenerate vertices. All cuts are median cuts.
inline BoomerangHierarchy build_dudley(const ConvexPolygon& p) {
    if (p.verts.size() < 3) throw hierarchy_error("dudley hierarchy needs n >= 3");
    BoomerangHierarchy h;
    h.base = p;
    h.kind = HierarchyKind::Dudley;

    auto rect = bounding_rectangle(p);
    Vec2 center{(rect.verts[0].x + rect.verts[2].x) / 2, (rect.verts[0].y + rect.verts[2].y) / 2};
    Rational radius = 2 * sqrt_upper(diameter_sq(p));
    std::size_t n = p.verts.size();

    detail::PendingInsertions ins;
    const double pi = 3.14159265358979323846;
    for (std::size_t j = 0; j < n; ++j) {
        double theta = 2.0 * pi * static_cast<double>(j) / static_cast<double>(n);
        if (theta >= pi) theta -= 2.0 * pi;
        if (theta > pi * 0.9999) theta = pi * 0.9999;
        Vec2 x = rational_circle_point(center, radius, snap_tan_half(theta));

        // Exact nearest feature; ties resolve to the first feature scanned.
        Rational best;
        Vec2 best_pt;
        std::size_t best_edge = 0;
        bool first = true;
        for (std::size_t e = 0; e < n; ++e) {
            Vec2 cand = closest_point_on_segment(x, p.verts[e], p.verts[(e + 1) % n]);
            Rational d = norm_sq(x - cand);
            if (first || d < best) {
                best = d;
                best_pt = cand;
                best_edge = e;
                first = false;
            }
        }
        if (best_pt == p.verts[best_edge]) {
            ins.vertex_normals[best_edge].push_back(x - best_pt);
        } else if (best_pt == p.verts[(best_edge + 1) % n]) {
            ins.vertex_normals[(best_edge + 1) % n].push_back(x - best_pt);
        } else {
            ins.edge_splits[best_edge].push_back(best_pt);
        }
    }

    h.edges = detail::build_augmented(p, std::move(ins));
    detail::BuildContext ctx{&h, {}, 0};
    detail::build_common(h, ctx);
    return h;
}

}  // namespace kinsep
