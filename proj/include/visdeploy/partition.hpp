#pragma once

// Incremental partition of a polygonal environment with holes into
// star-convex cells, each fully visible from a vantage point at an
// environment vertex.  Cells form a rooted tree; tree vertices are identified
// by tuple ids ordered by depth first, then lexicographically.
//
// Child vantage points are chosen by parity: enumerate the parent cell's
// vertices counterclockwise from its vantage point (for a non-root triangle,
// vantage = 1 and the parent-gap vertex = 3) and take the odd-numbered
// endpoint of the gap edge.  A candidate whose interior overlaps any existing
// cell is discarded and the gap edge becomes a phantom wall.

#include "geometry.hpp"
#include "visibility.hpp"

#include <compare>
#include <map>
#include <set>

namespace visdeploy {

struct Ptvuid {
    std::vector<int> d; // path of child indices from the root; empty = root

    Ptvuid() = default;
    explicit Ptvuid(std::vector<int> digits) : d(std::move(digits)) {}

    std::size_t depth() const { return d.size(); }
    bool is_root() const { return d.empty(); }
    Ptvuid child(int i) const {
        Ptvuid c = *this;
        c.d.push_back(i);
        return c;
    }
    Ptvuid parent() const {
        Ptvuid p = *this;
        if (!p.d.empty()) p.d.pop_back();
        return p;
    }

    // Total order: shallower first, then lexicographic.
    // (1) < (2); (1,3) < (3,2); (3,2) < (1,3,1).
    friend bool operator<(const Ptvuid& a, const Ptvuid& b) {
        if (a.d.size() != b.d.size()) return a.d.size() < b.d.size();
        return a.d < b.d;
    }
    friend bool operator==(const Ptvuid& a, const Ptvuid& b) { return a.d == b.d; }
    friend bool operator!=(const Ptvuid& a, const Ptvuid& b) { return !(a == b); }
    friend bool operator>(const Ptvuid& a, const Ptvuid& b) { return b < a; }

    std::string str() const {
        if (d.empty()) return "()";
        std::string s = "(";
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(d[i]);
        }
        return s + ")";
    }
};

enum class GapLabel { unexplored, parent, child, phantom_wall };

inline const char* to_string(GapLabel l) {
    switch (l) {
        case GapLabel::unexplored: return "unexplored";
        case GapLabel::parent: return "parent";
        case GapLabel::child: return "child";
        case GapLabel::phantom_wall: return "phantom_wall";
    }
    return "?";
}

enum class CellStatus { retracting, contending, permanent };

inline const char* to_string(CellStatus s) {
    switch (s) {
        case CellStatus::retracting: return "retracting";
        case CellStatus::contending: return "contending";
        case CellStatus::permanent: return "permanent";
    }
    return "?";
}

enum class VantageLabel { unlabeled, sparse, nonsparse };

struct CellGap {
    Segment seg;
    int edge = -1;       // polygon edge index
    GapLabel label = GapLabel::unexplored;
    int child_index = 0; // i in (zeta, i): CCW rank among non-parent gap edges
    int leader_uid = -1; // deployment only
};

struct Cell {
    Ptvuid id;
    Vec2 vantage;
    Polygon poly; // CCW, poly.v[0] == vantage
    std::vector<CellGap> gaps;
    int parent_gap = -1; // index into gaps; -1 for the root
    CellStatus status = CellStatus::retracting;
    VantageLabel vlabel = VantageLabel::unlabeled;
    int proxy_uid = -1;              // deployment only
    std::set<Ptvuid> wait_set;       // deployment only
    int revision = 0;                // deployment only: bumped on boundary/wait changes

    const CellGap* find_gap(const Segment& s, double eps = tol::len) const {
        for (auto& g : gaps)
            if (segments_coincide(g.seg, s, eps)) return &g;
        return nullptr;
    }
    CellGap* find_gap(const Segment& s, double eps = tol::len) {
        for (auto& g : gaps)
            if (segments_coincide(g.seg, s, eps)) return &g;
        return nullptr;
    }
    Segment parent_gap_edge() const {
        if (parent_gap < 0) throw std::logic_error("root cell has no parent gap edge");
        return gaps[std::size_t(parent_gap)].seg;
    }
    bool is_triangle() const { return poly.size() == 3; }

    int unexplored_count() const {
        int c = 0;
        for (auto& g : gaps) c += (g.label == GapLabel::unexplored);
        return c;
    }
};

struct PhantomWall {
    Segment seg;
    Ptvuid cell;   // cell whose gap edge was walled off
    int gap_index; // index into that cell's gaps
};

struct PartitionTree {
    std::map<Ptvuid, Cell> cells;
    std::vector<PhantomWall> walls;

    bool has(const Ptvuid& id) const { return cells.count(id) > 0; }
    Cell& at(const Ptvuid& id) { return cells.at(id); }
    const Cell& at(const Ptvuid& id) const { return cells.at(id); }
    std::size_t size() const { return cells.size(); }

    std::vector<Ptvuid> children_of(const Ptvuid& id) const {
        std::vector<Ptvuid> out;
        auto& c = at(id);
        for (auto& g : c.gaps)
            if (g.label == GapLabel::child) out.push_back(id.child(g.child_index));
        return out;
    }
};

// ---------------------------------------------------------------------------
// Vertex enumeration and parity selection.

// Enumeration position (1-based) of every polygon vertex of the cell.
// General cells: counterclockwise from the vantage point.  Non-root triangles:
// vantage = 1 and the parent-gap endpoint = 3, which may flip to clockwise.
inline std::vector<int> parity_enumeration(const Cell& c) {
    std::size_t m = c.poly.size();
    if (m < 3) throw std::invalid_argument("parity_enumeration: degenerate cell");
    if (!almost_equal(c.poly[0], c.vantage))
        throw std::invalid_argument("parity_enumeration: cell ring must start at the vantage");
    std::vector<int> pos(m);
    if (m == 3 && c.parent_gap >= 0) {
        Segment pg = c.parent_gap_edge();
        // The other parent-gap endpoint among ring vertices 1,2.
        int other = -1;
        for (int k = 1; k <= 2; ++k) {
            Vec2 v = c.poly[std::size_t(k)];
            if (!almost_equal(v, c.vantage) &&
                (almost_equal(v, pg.a) || almost_equal(v, pg.b)))
                other = k;
        }
        if (other < 0)
            throw std::invalid_argument("parity_enumeration: vantage not on parent gap edge");
        pos[0] = 1;
        pos[std::size_t(other)] = 3;
        pos[std::size_t(3 - other)] = 2;
    } else {
        for (std::size_t k = 0; k < m; ++k) pos[k] = int(k) + 1;
    }
    return pos;
}

// Odd-enumerated endpoint of the given gap edge: the child vantage point.
inline Vec2 child_vantage_for_gap(const Cell& c, int gap_index) {
    auto pos = parity_enumeration(c);
    const CellGap& g = c.gaps.at(std::size_t(gap_index));
    std::size_t e = std::size_t(g.edge);
    std::size_t m = c.poly.size();
    int p1 = pos[e], p2 = pos[(e + 1) % m];
    bool odd1 = p1 % 2 == 1, odd2 = p2 % 2 == 1;
    if (odd1 == odd2)
        throw std::logic_error("gap edge parity ambiguous (both endpoints " +
                               std::string(odd1 ? "odd" : "even") + ")");
    return odd1 ? c.poly[e] : c.poly[(e + 1) % m];
}

// ---------------------------------------------------------------------------
// Cell construction.

namespace part_detail {

// Rotate the ring so v[0] coincides with the vantage (which must be a vertex).
inline void rotate_to_vantage(Polygon& poly, Vec2 vantage) {
    std::size_t best = poly.size();
    double bestd = tol::on;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        double d = poly[i].dist(vantage);
        if (d <= bestd) {
            bestd = d;
            best = i;
        }
    }
    if (best == poly.size())
        throw std::logic_error("vantage point is not a vertex of the cell polygon");
    std::rotate(poly.v.begin(), poly.v.begin() + long(best), poly.v.end());
    poly.v[0] = vantage;
}

// True when the open segments (a,b) and (c,d) cross at a single interior
// point of both.  Touches within tolerance do not count.
inline bool properly_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    double m_ab = tol::on * std::max((b - a).norm(), 1e-12);
    double m_cd = tol::on * std::max((d - c).norm(), 1e-12);
    double o1 = orient(a, b, c), o2 = orient(a, b, d);
    double o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (std::abs(o1) <= m_ab || std::abs(o2) <= m_ab) return false;
    if (std::abs(o3) <= m_cd || std::abs(o4) <= m_cd) return false;
    return (o1 > 0) != (o2 > 0) && (o3 > 0) != (o4 > 0);
}

// A wall whose segment is a chord of the candidate does not occlude any
// vantage sightline (it can even be radial from the vantage), yet the region
// across it belongs to another branch.  Splitting at the chord and keeping
// the gap side restricts the candidate to its own component of the walled
// environment.
inline Polygon cut_at_wall_chords(Polygon poly, Vec2 gap_ref,
                                  const std::vector<PhantomWall>& walls) {
    for (std::size_t pass = 0; pass <= walls.size(); ++pass) {
        bool cut = false;
        for (auto& w : walls) {
            Vec2 mid = w.seg.midpoint();
            bool interior = poly.contains(mid, tol::on);
            for (std::size_t i = 0; interior && i < poly.size(); ++i) {
                Segment e = poly.edge(i);
                if (on_segment(mid, e.a, e.b, tol::on)) interior = false;
            }
            if (!interior) continue;
            auto endpoint_on_ring = [&](Vec2 p) {
                for (std::size_t i = 0; i < poly.size(); ++i) {
                    Segment e = poly.edge(i);
                    if (almost_equal(poly[i], p, tol::on) || on_segment(p, e.a, e.b, tol::on))
                        return true;
                }
                return false;
            };
            if (!endpoint_on_ring(w.seg.a) || !endpoint_on_ring(w.seg.b)) continue;
            // The wall must be a genuine diagonal of the candidate: a wall
            // that weaves through the ring (e.g. behind a hole shadow) cannot
            // be split at, and the shadow pass handles it instead.
            bool weaves = false;
            for (std::size_t i = 0; !weaves && i < poly.size(); ++i) {
                Segment e = poly.edge(i);
                weaves = properly_cross(w.seg.a, w.seg.b, e.a, e.b);
            }
            if (weaves) continue;
            poly = split_at_chord(poly, w.seg.a, w.seg.b, gap_ref);
            poly.make_ccw();
            cut = true;
            break;
        }
        if (!cut) break;
    }
    return poly;
}

// Delete every ring vertex whose open sightline from the vantage crosses the
// open segment of a phantom wall.  Surviving neighbours reconnect directly;
// no new vertices are introduced, so cell vertices stay environment vertices.
// A reconnection chord must itself stay inside the environment: if the wall
// shadow hides a boundary sliver with no visible vertex, no ring over
// environment vertices can bound the cell there, so fail loudly and let the
// caller treat the gap as conflicted.
inline Polygon truncate_at_walls(const Environment& env, Polygon poly, Vec2 vantage,
                                 const std::vector<PhantomWall>& walls) {
    if (walls.empty()) return poly;
    std::vector<Vec2> kept;
    std::vector<char> gap_before; // a deletion occurred before kept[i]
    kept.reserve(poly.size());
    bool pending = false;
    for (auto& v : poly.v) {
        bool across = false;
        for (auto& w : walls)
            if (properly_cross(vantage, v, w.seg.a, w.seg.b)) {
                across = true;
                break;
            }
        if (across) {
            pending = true;
        } else {
            kept.push_back(v);
            gap_before.push_back(pending);
            pending = false;
        }
    }
    if (kept.size() < 3)
        throw std::runtime_error("cell truncated away entirely by phantom walls");
    if (pending && !gap_before.empty()) gap_before[0] = true;
    for (std::size_t i = 0; i < kept.size(); ++i)
        if (gap_before[i] &&
            !env.contains_segment(kept[(i + kept.size() - 1) % kept.size()], kept[i]))
            throw std::runtime_error(
                "wall truncation cannot close the cell ring inside the environment");
    Polygon out;
    out.v = std::move(kept);
    return out;
}

inline void finalize_gaps(Cell& cell, const Environment& env,
                          const std::vector<PhantomWall>& walls,
                          const Segment* parent_edge) {
    cell.gaps.clear();
    cell.parent_gap = -1;
    auto kinds = classify_edges(cell.poly, env);
    for (std::size_t i = 0; i < cell.poly.size(); ++i) {
        if (kinds[i] != EdgeKind::gap) continue;
        CellGap g;
        g.seg = cell.poly.edge(i);
        g.edge = int(i);
        g.label = GapLabel::unexplored;
        if (parent_edge && segments_coincide(g.seg, *parent_edge)) {
            g.label = GapLabel::parent;
            cell.parent_gap = int(cell.gaps.size());
        } else {
            for (auto& w : walls)
                if (segment_on_segment(g.seg, w.seg) || segments_coincide(g.seg, w.seg)) {
                    g.label = GapLabel::phantom_wall;
                    break;
                }
        }
        cell.gaps.push_back(g);
    }
    if (parent_edge && cell.parent_gap < 0)
        throw std::logic_error("child cell lost its parent gap edge");
    // Child indices: CCW rank among non-parent gap edges, counting from the
    // vantage point (ring order; the ring starts at the vantage).
    int idx = 0;
    for (auto& g : cell.gaps)
        if (g.label != GapLabel::parent) g.child_index = ++idx;
}

} // namespace part_detail

// Root cell: the vertex-limited visibility polygon of an environment vertex.
inline Cell make_root_cell(const Environment& env, std::size_t root_vertex,
                           const std::vector<PhantomWall>& walls = {}) {
    Vec2 p = env.vertex(root_vertex);
    auto vv = vertex_limited_visibility_polygon(p, env);
    Cell cell;
    cell.id = Ptvuid{};
    cell.vantage = p;
    cell.poly = vv.poly;
    part_detail::rotate_to_vantage(cell.poly, p);
    part_detail::finalize_gaps(cell, env, walls, nullptr);
    cell.status = CellStatus::permanent;
    return cell;
}

// CHILD: construct the candidate cell across gap edge `gap_index` of `parent`.
// The candidate is Vver of the child vantage, split at the gap edge keeping
// the far side, then truncated at phantom walls.
inline Cell child_candidate(const Environment& env, const Cell& parent, int gap_index,
                            const std::vector<PhantomWall>& walls) {
    const CellGap& g = parent.gaps.at(std::size_t(gap_index));
    if (g.label == GapLabel::parent)
        throw std::invalid_argument("child_candidate: cannot expand through the parent gap");
    Vec2 p_child = child_vantage_for_gap(parent, gap_index);
    Segment gseg = g.seg;
    Vec2 q = almost_equal(gseg.a, p_child) ? gseg.b : gseg.a;

    auto vv = vertex_limited_visibility_polygon(p_child, env);

    // Reference point just beyond the gap edge, away from the parent's
    // interior (the parent ring is CCW, so its interior is left of the
    // directed gap edge).
    Vec2 ea = parent.poly[std::size_t(g.edge)];
    Vec2 eb = parent.poly[(std::size_t(g.edge) + 1) % parent.poly.size()];
    Vec2 out_n = (eb - ea).perp() * -1.0; // right of the directed edge
    out_n = out_n.normalized();
    Vec2 mid = gseg.midpoint();
    double step = std::max(1e-9, 1e-6 * gseg.length());
    Vec2 ref = mid + out_n * step;
    for (int k = 0; k < 6 && !vv.poly.contains(ref, tol::on); ++k) {
        step *= 0.1;
        ref = mid + out_n * step;
    }

    Cell cell;
    cell.id = parent.id.child(g.child_index);
    cell.vantage = p_child;
    cell.poly = split_at_chord(vv.poly, p_child, q, ref);
    cell.poly.make_ccw();
    cell.poly = part_detail::cut_at_wall_chords(cell.poly, ref, walls);
    cell.poly = part_detail::truncate_at_walls(env, cell.poly, p_child, walls);
    cell.poly.make_ccw();
    part_detail::rotate_to_vantage(cell.poly, p_child);
    part_detail::finalize_gaps(cell, env, walls, &gseg);
    // Every gap edge must be an environment diagonal; a ring chord that cuts
    // through a hole (a window whose far side hides a boundary sliver with no
    // visible vertex) would silently corrupt the tiling.
    for (auto& cg : cell.gaps)
        if (!is_diagonal(cg.seg.a, cg.seg.b, env))
            throw std::runtime_error("candidate gap edge is not an environment diagonal");
    cell.status = CellStatus::retracting;
    return cell;
}

// ---------------------------------------------------------------------------
// Incremental partition (centralized).

struct PartitionResult {
    PartitionTree tree;
    std::size_t root_vertex = 0;
    int conflicts = 0; // discarded candidates
};

// Deterministic policy: expand the smallest PTVUID with an unexplored gap;
// among its gaps, the first counterclockwise from the parent gap edge (for
// the root, from vertex 1).
inline PartitionResult incremental_partition(const Environment& env,
                                             std::size_t root_vertex) {
    if (root_vertex >= env.n())
        throw std::invalid_argument("incremental_partition: root vertex out of range");
    double env_area = env.area();
    PartitionResult res;
    res.root_vertex = root_vertex;
    PartitionTree& tree = res.tree;

    Cell root = make_root_cell(env, root_vertex);
    tree.cells.emplace(root.id, root);

    long guard = long(8 * (env.n() + 2 * env.h()) + 64);
    while (guard-- > 0) {
        // Smallest PTVUID with an unexplored gap.
        Cell* zeta = nullptr;
        for (auto& [id, c] : tree.cells)
            if (c.unexplored_count() > 0) {
                zeta = &c;
                break;
            }
        if (!zeta) break;

        // First unexplored gap counterclockwise from the parent gap edge.
        std::size_t m = zeta->poly.size();
        std::size_t pedge = zeta->parent_gap >= 0
                                ? std::size_t(zeta->gaps[std::size_t(zeta->parent_gap)].edge)
                                : m - 1; // root: rank plain ring order
        int pick = -1;
        std::size_t best_rank = m + 1;
        for (std::size_t gi = 0; gi < zeta->gaps.size(); ++gi) {
            if (zeta->gaps[gi].label != GapLabel::unexplored) continue;
            std::size_t rank = (std::size_t(zeta->gaps[gi].edge) + m - 1 - pedge) % m;
            if (rank < best_rank) {
                best_rank = rank;
                pick = int(gi);
            }
        }
        if (pick < 0) continue;

        // A wall segment registered from the far side also closes this gap:
        // one wall, two faces.  Label without a second registry entry.
        const Segment gseg = zeta->gaps[std::size_t(pick)].seg;
        bool walled = false;
        for (auto& w : tree.walls)
            if (segments_coincide(gseg, w.seg) || segment_on_segment(gseg, w.seg)) {
                walled = true;
                break;
            }
        if (walled) {
            zeta->gaps[std::size_t(pick)].label = GapLabel::phantom_wall;
            continue;
        }

        bool conflict = false;
        Cell cand;
        try {
            cand = child_candidate(env, *zeta, pick, tree.walls);
            for (auto& [id, c] : tree.cells)
                if (!openly_disjoint(cand.poly, c.poly, env_area)) {
                    conflict = true;
                    break;
                }
        } catch (const std::runtime_error&) {
            conflict = true; // candidate degenerate: region already covered
        }
        if (conflict) {
            zeta->gaps[std::size_t(pick)].label = GapLabel::phantom_wall;
            tree.walls.push_back({gseg, zeta->id, pick});
            ++res.conflicts;
        } else {
            zeta->gaps[std::size_t(pick)].label = GapLabel::child;
            cand.status = CellStatus::permanent;
            tree.cells.emplace(cand.id, cand);
        }
    }
    if (guard < 0)
        throw std::runtime_error("incremental_partition failed to terminate");
    return res;
}

// ---------------------------------------------------------------------------
// Sparse vantage labeling (leaves to root) and bounds.

// A vantage point is nonsparse iff its cell is a triangle and exactly one
// child vantage point is labeled sparse; otherwise sparse.
inline void label_vantage_points(PartitionTree& tree) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& [id, c] : tree.cells) {
            if (c.vlabel != VantageLabel::unlabeled) continue;
            bool ready = true;
            int sparse_children = 0;
            for (auto& g : c.gaps) {
                if (g.label == GapLabel::unexplored) { ready = false; break; }
                if (g.label != GapLabel::child) continue;
                auto it = tree.cells.find(id.child(g.child_index));
                if (it == tree.cells.end() ||
                    it->second.vlabel == VantageLabel::unlabeled) {
                    ready = false;
                    break;
                }
                sparse_children += (it->second.vlabel == VantageLabel::sparse);
            }
            if (!ready) continue;
            c.vlabel = (c.is_triangle() && sparse_children == 1) ? VantageLabel::nonsparse
                                                                 : VantageLabel::sparse;
            changed = true;
        }
    }
}

struct BoundsReport {
    std::size_t n = 0, h = 0;
    std::size_t cells = 0;
    std::size_t cells_bound = 0; // n + 2h - 2
    std::size_t walls = 0;       // phantom walls
    std::size_t triangles = 0;   // sum over cells of |V_c| - 2
    std::size_t sparse_locations = 0;
    std::size_t sparse_bound = 0; // floor((n + 2h - 1)/2)
    bool cells_within_bound = false;
    bool sparse_within_bound = false;
    bool walls_equal_h = false;
};

inline BoundsReport count_bounds(const PartitionTree& tree, const Environment& env) {
    BoundsReport r;
    r.n = env.n();
    r.h = env.h();
    r.cells = tree.size();
    r.cells_bound = r.n + 2 * r.h - 2;
    r.walls = tree.walls.size();
    std::vector<Vec2> sparse_pts;
    for (auto& [id, c] : tree.cells) {
        r.triangles += c.poly.size() - 2;
        if (c.vlabel == VantageLabel::sparse) {
            bool dup = false;
            for (auto& p : sparse_pts)
                if (almost_equal(p, c.vantage, tol::len)) dup = true;
            if (!dup) sparse_pts.push_back(c.vantage);
        }
    }
    r.sparse_locations = sparse_pts.size();
    r.sparse_bound = (r.n + 2 * r.h - 1) / 2;
    r.cells_within_bound = r.cells <= r.cells_bound;
    r.sparse_within_bound = r.sparse_locations <= r.sparse_bound;
    r.walls_equal_h = r.walls == r.h;
    return r;
}

} // namespace visdeploy
