#pragma once

#include "kinsep/hierarchy.hpp"
#include "kinsep/motion.hpp"

#include <list>
#include <map>
#include <stdexcept>
#include <variant>
#include <vector>

namespace kinsep {

class mixed_error : public std::runtime_error {
public:
    explicit mixed_error(const std::string& msg) : std::runtime_error(msg) {}
};
class incompatible_hierarchies_error : public mixed_error {
public:
    incompatible_hierarchies_error() : mixed_error("hierarchies have incompatible kinds") {}
};

// Exact rigid placement: rotation (c, s)/w with c^2 + s^2 = w^2, w > 0.
struct Pose {
    Rational c{1}, s{0}, w{1};
    Vec2 trans;

    Vec2 apply(const Vec2& v) const {
        return {(c * v.x - s * v.y) / w + trans.x, (s * v.x + c * v.y) / w + trans.y};
    }
    Vec2 apply_dir(const Vec2& v) const { return {c * v.x - s * v.y, s * v.x + c * v.y}; }
};

inline Pose pose_at(const MotionFrame& f, const Rational& t) {
    Pose p;
    p.c = f.cos_num.eval(t);
    p.s = f.sin_num.eval(t);
    p.w = f.den.eval(t);
    p.trans = {f.ox.eval(t), f.oy.eval(t)};
    return p;
}

inline ConvexPolygon transform_polygon(const ConvexPolygon& poly, const Pose& pose) {
    ConvexPolygon out = poly;
    for (auto& v : out.verts) v = pose.apply(v);
    for (auto& zs : out.extra_normals)
        for (auto& z : zs) z = pose.apply_dir(z);
    return out;
}

// Cell of the mixed tiling. Corners are stored as body-frame pairs so the
// cell's geometry under any poses is the per-corner sum of placed parts.
struct MixedCell {
    enum class Kind { Triangle, Parallelogram } kind = Kind::Triangle;
    struct Corner {
        Vec2 p_part, q_part;
    };
    int id = -1;
    int src_owner = 0;      // 0: cut in P's hierarchy, 1: in Q's
    int src_triangle = -1;  // triangle id in the owner hierarchy
    int level = 0;
    bool alive = true;
    std::vector<Corner> corners;  // CCW at build pose
    // Parallelogram provenance: the swept chain edge (other polygon's body
    // frame) and the translation direction (cut owner's body frame).
    Vec2 f_dir_body, t_dir_body;
    bool t_is_start_side = false;
};

struct ConfigLocation {
    enum Kind { Outside, InsideSum, Cell } kind = Outside;
    int cell = -1;
};

class MixedHierarchy {
public:
    const BoomerangHierarchy* hp = nullptr;
    const BoomerangHierarchy* hq = nullptr;
    Pose pose_p, pose_q;
    std::vector<MixedCell> cells;
    ConvexPolygon outer;  // rect(P) + rect(Q), placed
    ConvexPolygon inner;  // P + Q, placed
    std::vector<ConvexPolygon> level_sums;  // level j -> env_P(j) + env_Q(j), placed

    Vec2 corner_position(const MixedCell::Corner& c) const {
        return pose_p.apply(c.p_part) + pose_q.apply(c.q_part);
    }

    Rational cell_area2(const MixedCell& cell) const {
        Rational a(0);
        std::size_t n = cell.corners.size();
        for (std::size_t i = 0; i < n; ++i) {
            Vec2 u = corner_position(cell.corners[i]);
            Vec2 v = corner_position(cell.corners[(i + 1) % n]);
            a += cross(u, v);
        }
        return a;
    }

    Rational total_alive_area2() const {
        Rational a(0);
        for (const auto& c : cells)
            if (c.alive) a += cell_area2(c);
        return a;
    }

    bool cell_contains_closed(const MixedCell& cell, const Vec2& pt) const {
        std::size_t n = cell.corners.size();
        for (std::size_t i = 0; i < n; ++i) {
            Vec2 u = corner_position(cell.corners[i]);
            Vec2 v = corner_position(cell.corners[(i + 1) % n]);
            if (orientation(u, v, pt) < 0) return false;
        }
        return true;
    }

    // Area tiling identity at the build pose, exact.
    bool area_identity() const {
        return polygon_area2(outer) - polygon_area2(inner) == total_alive_area2();
    }

    ConfigLocation locate_configuration(const Vec2& c) const {
        if (!contains_point(outer, c)) return {ConfigLocation::Outside, -1};
        if (contains_point(inner, c)) return {ConfigLocation::InsideSum, -1};
        // Deepest level sum still containing c (nested chain).
        int max_level = static_cast<int>(level_sums.size()) - 1;
        int lo = 0, hi = max_level;
        while (lo < hi) {
            int mid = (lo + hi + 1) / 2;
            if (contains_point(level_sums[static_cast<std::size_t>(mid)], c))
                lo = mid;
            else
                hi = mid - 1;
        }
        for (const auto& cell : cells) {
            if (!cell.alive || cell.level != lo) continue;
            if (sgn(cell_area2(cell)) == 0) continue;
            if (cell_contains_closed(cell, c)) return {ConfigLocation::Cell, cell.id};
        }
        for (const auto& cell : cells) {  // boundary slivers
            if (!cell.alive || sgn(cell_area2(cell)) == 0) continue;
            if (cell_contains_closed(cell, c)) return {ConfigLocation::Cell, cell.id};
        }
        return {ConfigLocation::Outside, -1};
    }

    bool point_on_cell_boundary(const MixedCell& cell, const Vec2& pt) const {
        std::size_t n = cell.corners.size();
        for (std::size_t i = 0; i < n; ++i) {
            Vec2 u = corner_position(cell.corners[i]);
            Vec2 v = corner_position(cell.corners[(i + 1) % n]);
            if (point_segment_dist_sq(pt, u, v) == 0) return true;
        }
        return false;
    }

    // Neighbor across the boundary point; Outside / InsideSum when the point
    // sits on the respective global boundary.
    ConfigLocation neighbor_cell(int cell_id, const Vec2& pt) const {
        const auto& cell = cells[static_cast<std::size_t>(cell_id)];
        if (!point_on_cell_boundary(cell, pt)) throw mixed_error("point not on cell boundary");
        for (const auto& other : cells) {
            if (other.id == cell_id || !other.alive || sgn(cell_area2(other)) == 0) continue;
            if (cell_contains_closed(other, pt)) return {ConfigLocation::Cell, other.id};
        }
        if (contains_point(inner, pt)) return {ConfigLocation::InsideSum, -1};
        return {ConfigLocation::Outside, -1};
    }

    std::size_t alive_cell_count() const {
        std::size_t n = 0;
        for (const auto& c : cells)
            if (c.alive) ++n;
        return n;
    }
};

namespace detail {

struct MixPiece {
    int owner = 0;  // 0 P, 1 Q
    Vec2 own_a, own_b;
    Vec2 own_normal;  // owner body frame; defines the direction even for
                      // pieces shortened to zero length
    Vec2 other_off;
    bool is_base = false;
    int base_edge = -1;
};

struct MixBuilder {
    const BoomerangHierarchy* h[2];
    Pose pose[2];
    std::list<MixPiece> boundary;
    using It = std::list<MixPiece>::iterator;
    std::map<std::pair<int, int>, std::pair<It, It>> reg;  // (owner, boom id) -> sides
    MixedHierarchy* out;

    It next(It it) {
        ++it;
        return it == boundary.end() ? boundary.begin() : it;
    }

    Vec2 posed_dir(const MixPiece& p) const {
        return pose[p.owner].apply_dir(perp_ccw(p.own_normal));
    }

    // Relative circular order anchored at `base`: is a before b going CCW
    // starting from base?
    static int rel_compare(const Vec2& base, const Vec2& a, const Vec2& b) {
        int ka = compare_dirs(base, a) > 0 ? 1 : 0;
        int kb = compare_dirs(base, b) > 0 ? 1 : 0;
        if (ka != kb) return ka < kb ? -1 : 1;
        return compare_dirs(a, b);
    }

    void make_cell(MixedCell cell) {
        cell.id = static_cast<int>(out->cells.size());
        // Normalize to CCW at the build pose.
        Rational a(0);
        std::size_t n = cell.corners.size();
        for (std::size_t i = 0; i < n; ++i) {
            Vec2 u = out->corner_position(cell.corners[i]);
            Vec2 v = out->corner_position(cell.corners[(i + 1) % n]);
            a += cross(u, v);
        }
        if (sgn(a) < 0) std::reverse(cell.corners.begin(), cell.corners.end());
        out->cells.push_back(std::move(cell));
    }

    void cut(int owner, int tri_id) {
        const BoomerangHierarchy& H = *h[owner];
        const TriangleNode& t = H.tris[static_cast<std::size_t>(tri_id)];
        const BoomerangNode& b = H.booms[static_cast<std::size_t>(t.parent_boomerang)];
        auto regit = reg.find({owner, b.id});
        if (regit == reg.end()) throw mixed_error("cut before parent registration");
        It p1 = regit->second.first;
        It p2 = regit->second.second;

        const Vec2 apex = b.apex;
        const Vec2 i1 = t.inner_a, i2 = t.inner_b;
        Vec2 t1 = i1 - apex, t2 = i2 - apex;
        Vec2 cut_dir_posed = pose[owner].apply_dir(H.lines[static_cast<std::size_t>(t.cut_line)].dir);
        Vec2 anchor_dir = posed_dir(*p1);

        // Scan the fan between p1 and p2; every piece there belongs to the
        // other polygon and fans around this corner.
        std::vector<MixPiece> left, right;
        Vec2 q_first = p1->other_off;
        std::size_t guard = boundary.size() + 2;
        for (It it = next(p1); it != p2;) {
            if (guard-- == 0) throw mixed_error("fan scan did not terminate");
            MixPiece piece = *it;
            It dead = it;
            it = next(it);
            boundary.erase(dead);
            if (piece.owner == owner) throw mixed_error("own piece inside corner fan");
            if (!(piece.other_off == apex)) throw mixed_error("fan piece offset mismatch");
            // Ties (piece parallel to the cut edge) go right: the owner's new
            // edge precedes equal-slope edges of the other polygon.
            bool to_left = rel_compare(anchor_dir, posed_dir(piece), cut_dir_posed) < 0;
            (to_left ? left : right).push_back(piece);
        }
        Vec2 q_split = q_first;
        for (const auto& piece : left) q_split += piece.own_b - piece.own_a;

        // Cells: swept parallelograms plus the translated triangle copy.
        Vec2 start_line_dir =
            perp_ccw(H.lines[static_cast<std::size_t>(b.line_start_side)].outward);
        Vec2 end_line_dir = perp_ccw(H.lines[static_cast<std::size_t>(b.line_end_side)].outward);
        for (const auto& piece : left) {
            if (piece.own_a == piece.own_b || t1.is_zero()) continue;
            Vec2 d = posed_dir(piece);
            if (sgn(cross(d, pose[owner].apply_dir(start_line_dir))) == 0)
                continue;  // slides along the start-side line, sweeps nothing
            MixedCell cell;
            cell.kind = MixedCell::Kind::Parallelogram;
            cell.src_owner = owner;
            cell.src_triangle = tri_id;
            cell.level = t.level;
            cell.f_dir_body = piece.own_b - piece.own_a;
            cell.t_dir_body = t1;
            cell.t_is_start_side = true;
            auto mk = [&](const Vec2& own_pt, const Vec2& off) {
                return owner == 0 ? MixedCell::Corner{off, own_pt} : MixedCell::Corner{own_pt, off};
            };
            cell.corners = {mk(piece.own_a, apex), mk(piece.own_b, apex), mk(piece.own_b, i1),
                            mk(piece.own_a, i1)};
            make_cell(std::move(cell));
        }
        {
            MixedCell cell;
            cell.kind = MixedCell::Kind::Triangle;
            cell.src_owner = owner;
            cell.src_triangle = tri_id;
            cell.level = t.level;
            auto mk = [&](const Vec2& own_pt) {
                return owner == 0 ? MixedCell::Corner{own_pt, q_split}
                                  : MixedCell::Corner{q_split, own_pt};
            };
            cell.corners = {mk(apex), mk(i1), mk(i2)};
            make_cell(std::move(cell));
        }
        for (const auto& piece : right) {
            if (piece.own_a == piece.own_b || t2.is_zero()) continue;
            Vec2 d = posed_dir(piece);
            if (sgn(cross(d, pose[owner].apply_dir(end_line_dir))) == 0) continue;
            MixedCell cell;
            cell.kind = MixedCell::Kind::Parallelogram;
            cell.src_owner = owner;
            cell.src_triangle = tri_id;
            cell.level = t.level;
            cell.f_dir_body = piece.own_b - piece.own_a;
            cell.t_dir_body = t2;
            cell.t_is_start_side = false;
            auto mk = [&](const Vec2& own_pt, const Vec2& off) {
                return owner == 0 ? MixedCell::Corner{off, own_pt} : MixedCell::Corner{own_pt, off};
            };
            cell.corners = {mk(piece.own_a, apex), mk(piece.own_b, apex), mk(piece.own_b, i2),
                            mk(piece.own_a, i2)};
            make_cell(std::move(cell));
        }

        // Rebuild the boundary between p1 and p2.
        p1->own_b = i1;
        p2->own_a = i2;
        It at = p2;
        auto insert_before = [&](MixPiece piece) { return boundary.insert(at, std::move(piece)); };
        for (auto piece : left) {
            piece.other_off = i1;
            insert_before(std::move(piece));
        }
        const Vec2 cut_normal = H.lines[static_cast<std::size_t>(t.cut_line)].outward;
        It low_end = boundary.end(), high_start = boundary.end();
        if (t.child_low >= 0) {
            MixPiece piece;
            piece.owner = owner;
            piece.own_a = i1;
            piece.own_b = H.edges[t.bundle_begin].a;
            piece.own_normal = cut_normal;
            piece.other_off = q_split;
            low_end = insert_before(std::move(piece));
        }
        for (std::size_t e = t.bundle_begin; e < t.bundle_end; ++e) {
            const auto& he = H.edges[e];
            if (he.zero) continue;
            MixPiece piece;
            piece.owner = owner;
            piece.own_a = he.a;
            piece.own_b = he.b;
            piece.own_normal = he.normal;
            piece.other_off = q_split;
            piece.is_base = true;
            piece.base_edge = static_cast<int>(e);
            insert_before(std::move(piece));
        }
        if (t.child_high >= 0) {
            MixPiece piece;
            piece.owner = owner;
            piece.own_a = H.edges[t.bundle_end - 1].b;
            piece.own_b = i2;
            piece.own_normal = cut_normal;
            piece.other_off = q_split;
            high_start = insert_before(std::move(piece));
        }
        for (auto piece : right) {
            piece.other_off = i2;
            insert_before(std::move(piece));
        }
        if (t.child_low >= 0) reg[{owner, t.child_low}] = {p1, low_end};
        if (t.child_high >= 0) reg[{owner, t.child_high}] = {high_start, p2};
    }
};

}  // namespace detail

// Full materialization of the mixed hierarchy of P + Q at the given poses,
// interleaving corner cuts by boomerang level (P before Q within a level).
inline MixedHierarchy build_mixed(const BoomerangHierarchy& hp, const BoomerangHierarchy& hq,
                                  const Pose& pose_p = Pose{}, const Pose& pose_q = Pose{}) {
    if (hp.kind != hq.kind) throw incompatible_hierarchies_error();
    MixedHierarchy M;
    M.hp = &hp;
    M.hq = &hq;
    M.pose_p = pose_p;
    M.pose_q = pose_q;

    detail::MixBuilder B;
    B.h[0] = &hp;
    B.h[1] = &hq;
    B.pose[0] = pose_p;
    B.pose[1] = pose_q;
    B.out = &M;

    // Initial boundary: the two placed rectangles' sides merged by normal
    // order, P first on ties.
    struct SidePiece {
        int owner;
        int side;
        Vec2 a, b;       // body frame corners (line extent, CCW)
        Vec2 nrm;        // body frame outward normal
        Vec2 posed_nrm;  // placed outward normal
    };
    std::vector<SidePiece> sides;
    for (int owner = 0; owner < 2; ++owner) {
        const auto& H = *B.h[owner];
        if (H.rectangle.size() < 3) throw mixed_error("degenerate rectangle in mixed build");
        for (int s = 0; s < 4; ++s) {
            const auto& L = H.lines[static_cast<std::size_t>(s)];
            SidePiece sp;
            sp.owner = owner;
            sp.side = s;
            sp.a = L.extent_a;
            sp.b = L.extent_b;
            sp.nrm = L.outward;
            sp.posed_nrm = B.pose[owner].apply_dir(L.outward);
            sides.push_back(sp);
        }
    }
    std::sort(sides.begin(), sides.end(), [&](const SidePiece& x, const SidePiece& y) {
        int c = compare_dirs(x.posed_nrm, y.posed_nrm);
        if (c != 0) return c < 0;
        return x.owner < y.owner;
    });
    // Walk: each polygon's current corner starts at its first piece's start.
    Vec2 cur[2];
    bool seen[2] = {false, false};
    for (const auto& sp : sides) {
        if (!seen[sp.owner]) {
            cur[sp.owner] = sp.a;
            seen[sp.owner] = true;
        }
    }
    std::map<std::pair<int, int>, detail::MixBuilder::It> side_pieces;
    for (const auto& sp : sides) {
        detail::MixPiece piece;
        piece.owner = sp.owner;
        piece.own_a = sp.a;
        piece.own_b = sp.b;
        piece.own_normal = sp.nrm;
        piece.other_off = cur[1 - sp.owner];
        auto it = B.boundary.insert(B.boundary.end(), piece);
        side_pieces[{sp.owner, sp.side}] = it;
        cur[sp.owner] = sp.b;
    }
    // Register roots: root s spans rectangle lines s (start) and (s+1)%4 (end).
    for (int owner = 0; owner < 2; ++owner) {
        const auto& H = *B.h[owner];
        for (int s = 0; s < 4; ++s) {
            int bid = H.roots.empty() ? -1 : H.roots[static_cast<std::size_t>(s)];
            if (bid < 0) continue;
            B.reg[{owner, bid}] = {side_pieces[{owner, s}], side_pieces[{owner, (s + 1) % 4}]};
        }
    }

    // Interleave cuts by level, P before Q, then by triangle id.
    struct Op {
        int level, owner, tri;
    };
    std::vector<Op> ops;
    for (int owner = 0; owner < 2; ++owner)
        for (const auto& t : B.h[owner]->tris) ops.push_back({t.level, owner, t.id});
    std::sort(ops.begin(), ops.end(), [](const Op& a, const Op& b) {
        if (a.level != b.level) return a.level < b.level;
        if (a.owner != b.owner) return a.owner < b.owner;
        return a.tri < b.tri;
    });
    for (const auto& op : ops) B.cut(op.owner, op.tri);

    // Cached polygons for location queries.
    M.outer = minkowski_sum(transform_polygon(hp.rectangle, pose_p),
                            transform_polygon(hq.rectangle, pose_q));
    M.inner = minkowski_sum(transform_polygon(hp.base, pose_p),
                            transform_polygon(hq.base, pose_q));
    int max_depth = std::max(hp.depth, hq.depth);
    M.level_sums.reserve(static_cast<std::size_t>(max_depth) + 1);
    for (int j = 0; j <= max_depth; ++j) {
        M.level_sums.push_back(minkowski_sum(transform_polygon(hp.envelope_of(j), pose_p),
                                             transform_polygon(hq.envelope_of(j), pose_q)));
    }
    return M;
}

// Earliest time > t_now at which the two placed edge directions become
// parallel; t_now itself when they already are. Never when no such time.
struct SlopeEvent {
    bool never = true;
    bool immediate = false;
    AlgebraicNumber time;
};

inline SlopeEvent next_slope_event(const MotionFrame& fp, const MotionFrame& fq,
                                   const Vec2& edge_p_dir, const Vec2& edge_q_dir,
                                   const Rational& t_now, const Rational& horizon) {
    Poly dpx, dpy, dqx, dqy;
    fp.direction_poly(edge_p_dir, dpx, dpy);
    fq.direction_poly(edge_q_dir, dqx, dqy);
    Poly f = dpx * dqy - dpy * dqx;
    SlopeEvent ev;
    if (f.is_zero() || f.sign_at(t_now) == 0) {
        ev.never = false;
        ev.immediate = true;
        ev.time = AlgebraicNumber::from_rational(t_now);
        return ev;
    }
    auto root = next_root_after(f, t_now, horizon);
    if (!root) return ev;
    ev.never = false;
    ev.time = *root;
    return ev;
}

}  // namespace kinsep
