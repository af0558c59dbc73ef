#pragma once

// Per-agent state machine for distributed deployment.  Agents run three
// logical threads (communication, navigation, internal state transition),
// emulated here as three sub-steps per simulation tick.  An agent acts only
// on its own state plus snapshots received from visibility neighbours; the
// surrounding simulator decides who is visible and delivers broadcasts.
//
// Leaders hold up to two (vantage point, cell) pairs of the distributed
// partition tree.  A new cell starts retracting, is truncated against
// permanent cells during a first proxy tour, becomes contending, survives a
// shoot-out against other contending cells during a second tour, and becomes
// permanent.  Cells of losing branches are deleted and the parent marks the
// gap as a phantom wall.  Explorers walk the tree depth-first (the cursor is
// just the (current, last) vertex pair) looking for leader or proxy work.

#include "partition.hpp"

#include <deque>
#include <memory>
#include <optional>
#include <tuple>

namespace visdeploy {

enum class AgentMode { lead, proxy, explore };

inline const char* to_string(AgentMode m) {
    switch (m) {
        case AgentMode::lead: return "lead";
        case AgentMode::proxy: return "proxy";
        case AgentMode::explore: return "explore";
    }
    return "?";
}

struct VantageEntry {
    Ptvuid id;
    Vec2 p;
    VantageLabel label = VantageLabel::unlabeled;
};

// A deleted tree vertex, kept (and rebroadcast) forever by every agent that
// witnessed the deletion.  The parent's leader reacts by relabeling its child
// gap as a phantom wall; explorers react by moving back up the tree.
struct DeletionRecord {
    Ptvuid id;
    Segment parent_gap;
    Vec2 vantage; // of the deleted cell; lets agents inside route out
};

// Completed proxy tour.  The cell's leader advances the status exactly once:
// the record is inert unless it matches the cell's current status and proxy.
struct TourRecord {
    Ptvuid id;
    CellStatus from = CellStatus::retracting;
    int proxy_uid = -1;
};

struct SnapshotData {
    int uid = -1;
    AgentMode mode = AgentMode::explore;
    Vec2 position;
    std::vector<VantageEntry> vantage_points;
    std::vector<Cell> cells;
    std::optional<Cell> proxied;
    Ptvuid xi_current, xi_last;
    std::vector<DeletionRecord> deletions;
    std::vector<TourRecord> tours;
};

using SnapshotPtr = std::shared_ptr<const SnapshotData>;

// State-transition events, reported to the simulator for tracing.
struct AgentEvent {
    std::string kind;   // mode | status | move | wall | delete
    std::string detail; // deterministic, human-readable
};

struct AgentState {
    int uid = -1;
    AgentMode mode = AgentMode::explore;
    Vec2 position;
    std::deque<Vec2> route;
    std::vector<VantageEntry> vantage_points;
    std::vector<Cell> cells; // primary first; at most two
    std::optional<Cell> proxied;
    Ptvuid xi_current, xi_last;
    std::map<int, SnapshotPtr> neighbor_data;
    std::vector<DeletionRecord> deletions;
    std::vector<TourRecord> tours;

    long version = 0;            // bumped on any broadcast-relevant change
    long broadcast_version = -1; // version at last emission
    std::set<int> last_visible;

    // Depth-first sweep bookkeeping: once a full cycle of the known tree
    // passes with no opportunity and no unfinished work in sight, park.
    std::set<std::pair<Ptvuid, Ptvuid>> sweep_seen;
    bool sweep_incomplete = false;
    bool parked = false;

    // Pairwise overlap memo keyed by (id, revision) of both cells.
    std::map<std::tuple<Ptvuid, int, Ptvuid, int>, bool> overlap_memo;

    Cell* find_cell(const Ptvuid& id) {
        for (auto& c : cells)
            if (c.id == id) return &c;
        return nullptr;
    }
    const Cell* find_cell(const Ptvuid& id) const {
        for (auto& c : cells)
            if (c.id == id) return &c;
        return nullptr;
    }
    VantageEntry* find_vantage(const Ptvuid& id) {
        for (auto& v : vantage_points)
            if (v.id == id) return &v;
        return nullptr;
    }
    bool at(Vec2 p) const { return position.dist(p) <= tol::pos; }
    bool toured(const Ptvuid& id, CellStatus from) const {
        for (auto& t : tours)
            if (t.id == id && t.from == from) return true;
        return false;
    }
    void touch() { ++version; }
};

struct DeployContext {
    const Environment& env;
    double env_area;
};

namespace deploy_detail {

// ---------------------------------------------------------------------------
// Lookups over own state + neighbour snapshots.  All iterations follow
// deterministic orders (uid-sorted map, then vector order).

// Latest known record of a cell: searches own cells, then neighbours'
// cells and proxied copies, keeping the highest revision.
inline const Cell* known_cell(const AgentState& a, const Ptvuid& id) {
    const Cell* best = a.find_cell(id);
    if (a.proxied && a.proxied->id == id) best = &*a.proxied;
    for (auto& [uid, snap] : a.neighbor_data) {
        for (auto& c : snap->cells)
            if (c.id == id && (!best || c.revision > best->revision)) best = &c;
        if (snap->proxied && snap->proxied->id == id &&
            (!best || snap->proxied->revision > best->revision))
            best = &*snap->proxied;
    }
    return best;
}

inline bool cell_deleted(const AgentState& a, const Ptvuid& id) {
    for (auto& d : a.deletions)
        if (d.id == id) return true;
    for (auto& [uid, snap] : a.neighbor_data)
        for (auto& d : snap->deletions)
            if (d.id == id) return true;
    return false;
}

inline const DeletionRecord* deletion_of(const AgentState& a, const Ptvuid& id) {
    for (auto& d : a.deletions)
        if (d.id == id) return &d;
    for (auto& [uid, snap] : a.neighbor_data)
        for (auto& d : snap->deletions)
            if (d.id == id) return &d;
    return nullptr;
}

inline void record_deletion(AgentState& a, const Ptvuid& id, Segment parent_gap,
                            Vec2 vantage) {
    for (auto& d : a.deletions)
        if (d.id == id) return;
    a.deletions.push_back({id, parent_gap, vantage});
    a.touch();
}

// ---------------------------------------------------------------------------
// Geometry helpers.

inline void bbox_of(const Polygon& p, Vec2& lo, Vec2& hi) {
    lo = hi = p[0];
    for (auto& v : p.v) {
        lo.x = std::min(lo.x, v.x);
        lo.y = std::min(lo.y, v.y);
        hi.x = std::max(hi.x, v.x);
        hi.y = std::max(hi.y, v.y);
    }
}

// Positive-area overlap test with bbox prefilter and a per-agent memo;
// revisions invalidate stale entries because cells only ever shrink.
inline bool in_conflict(AgentState& a, const DeployContext& ctx, const Cell& c1,
                        const Cell& c2) {
    if (c1.id == c2.id) return false;
    Vec2 lo1, hi1, lo2, hi2;
    bbox_of(c1.poly, lo1, hi1);
    bbox_of(c2.poly, lo2, hi2);
    if (lo1.x > hi2.x || lo2.x > hi1.x || lo1.y > hi2.y || lo2.y > hi1.y)
        return false;
    auto key = c1.id < c2.id
                   ? std::make_tuple(c1.id, c1.revision, c2.id, c2.revision)
                   : std::make_tuple(c2.id, c2.revision, c1.id, c1.revision);
    auto it = a.overlap_memo.find(key);
    if (it != a.overlap_memo.end()) return it->second;
    if (a.overlap_memo.size() > 200000) a.overlap_memo.clear();
    bool hit = !openly_disjoint(c1.poly, c2.poly, ctx.env_area);
    a.overlap_memo.emplace(key, hit);
    return hit;
}

// Closed containment of a point / segment in a cell (boundary included).
inline bool point_in_closed_cell(Vec2 p, const Cell& c) {
    return c.poly.contains(p, tol::on);
}

inline bool seg_in_closed_cell(const Segment& s, const Cell& c) {
    return c.poly.contains(s.a, tol::on) && c.poly.contains(s.b, tol::on) &&
           c.poly.contains(s.midpoint(), tol::on);
}

// Boundary-walk proxy tour: from anywhere in the closed cell, go to the
// vantage (a kernel point, so the straight leg stays inside), then follow the
// ring all the way around and back.  Phantom walls block no sightlines, so a
// mid-tour truncation never invalidates the remaining waypoints.
inline std::deque<Vec2> tour_route(const Cell& c) {
    std::deque<Vec2> r;
    for (std::size_t i = 0; i < c.poly.size(); ++i) r.push_back(c.poly[i]);
    r.push_back(c.vantage);
    return r;
}

// Truncate a retracting cell against a permanent cell in branch conflict.
// Every piece of the permanent cell's boundary crossing our interior is one
// of its gap edges (cell interiors avoid the environment boundary), so those
// diagonals are the cut chords.  Returns false when nothing changed; throws
// when the remainder cannot form a valid cell (caller deletes).
inline bool truncate_cell_at(const DeployContext& ctx, Cell& cell, const Cell& perm) {
    std::vector<PhantomWall> cuts;
    for (auto& g : perm.gaps) {
        Vec2 m = g.seg.midpoint();
        bool on_ring = false;
        for (std::size_t i = 0; !on_ring && i < cell.poly.size(); ++i) {
            Segment e = cell.poly.edge(i);
            on_ring = on_segment(m, e.a, e.b, tol::on);
        }
        bool crosses = !on_ring && cell.poly.contains(m, tol::on);
        for (std::size_t i = 0; !crosses && i < cell.poly.size(); ++i) {
            Segment e = cell.poly.edge(i);
            crosses = part_detail::properly_cross(g.seg.a, g.seg.b, e.a, e.b);
        }
        if (crosses) cuts.push_back({g.seg, perm.id, 0});
    }
    if (cuts.empty()) return false;

    Segment pg = cell.parent_gap_edge();
    std::size_t pe = std::size_t(cell.gaps[std::size_t(cell.parent_gap)].edge);
    // Interior reference just inside the parent gap edge: the triangle on the
    // parent gap always survives, so the kept side is the parent-gap side.
    Vec2 ea = cell.poly[pe], eb = cell.poly[(pe + 1) % cell.poly.size()];
    Vec2 in_n = (eb - ea).perp().normalized(); // left of the directed edge
    Vec2 mid = pg.midpoint();
    double step = std::max(1e-9, 1e-6 * pg.length());
    Vec2 ref = mid + in_n * step;
    for (int k = 0; k < 6 && !cell.poly.contains(ref, tol::on); ++k) {
        step *= 0.1;
        ref = mid + in_n * step;
    }

    Polygon poly = part_detail::cut_at_wall_chords(cell.poly, ref, cuts);
    poly = part_detail::truncate_at_walls(ctx.env, poly, cell.vantage, cuts);
    poly.make_ccw();
    part_detail::rotate_to_vantage(poly, cell.vantage);
    cell.poly = poly;
    part_detail::finalize_gaps(cell, ctx.env, {}, &pg);
    for (auto& cg : cell.gaps)
        if (!is_diagonal(cg.seg.a, cg.seg.b, ctx.env))
            throw std::runtime_error("truncated cell gap is not an environment diagonal");
    ++cell.revision;
    return true;
}

// ---------------------------------------------------------------------------
// Depth-first ordering.

// Gap visit order for one agent at one cell: non-parent gaps ranked
// counterclockwise from the parent gap edge, cyclically shifted by the
// agent's UID.  Children meeting at a double vantage point are forced into
// PTVUID order so that every agent visits such pairs identically.
inline std::vector<int> df_gap_order(const Cell& c, int uid) {
    std::size_t m = c.poly.size();
    std::size_t pedge = c.parent_gap >= 0
                            ? std::size_t(c.gaps[std::size_t(c.parent_gap)].edge)
                            : m - 1;
    std::vector<std::pair<std::size_t, int>> ranked;
    for (std::size_t gi = 0; gi < c.gaps.size(); ++gi) {
        if (int(gi) == c.parent_gap) continue;
        std::size_t rank = (std::size_t(c.gaps[gi].edge) + m - 1 - pedge) % m;
        ranked.push_back({rank, int(gi)});
    }
    std::sort(ranked.begin(), ranked.end());
    std::size_t k = ranked.size();
    std::vector<int> order;
    for (std::size_t i = 0; i < k; ++i)
        order.push_back(ranked[(i + std::size_t(uid)) % k].second);
    // Double vantage pairs: keep the smaller child index first.
    bool swapped = true;
    while (swapped) {
        swapped = false;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j) {
                const CellGap& gi = c.gaps[std::size_t(order[i])];
                const CellGap& gj = c.gaps[std::size_t(order[j])];
                Vec2 vi, vj;
                try {
                    vi = child_vantage_for_gap(c, order[i]);
                    vj = child_vantage_for_gap(c, order[j]);
                } catch (const std::exception&) {
                    continue;
                }
                if (almost_equal(vi, vj) && gi.child_index > gj.child_index) {
                    std::swap(order[i], order[j]);
                    swapped = true;
                }
            }
    }
    return order;
}

// Next move of the stackless depth-first walk at `cell`, having arrived from
// `last` (the parent, the cell itself at startup, or a child when
// backtracking).  Returns the gap index to head for, or -1 to move up to the
// parent.  Phantom walls are skipped.
inline int depth_first_next(const Cell& cell, const Ptvuid& last, int uid) {
    auto order = df_gap_order(cell, uid);
    if (order.empty()) return -1;
    std::size_t start = 0;
    bool from_child =
        last.depth() == cell.id.depth() + 1 && last.parent() == cell.id;
    if (from_child) {
        int ci = last.d.back();
        for (std::size_t i = 0; i < order.size(); ++i)
            if (cell.gaps[std::size_t(order[i])].child_index == ci) {
                start = i + 1;
                break;
            }
    }
    for (std::size_t i = start; i < order.size(); ++i) {
        const CellGap& g = cell.gaps[std::size_t(order[i])];
        if (g.label == GapLabel::phantom_wall) continue;
        return order[i];
    }
    return -1;
}

// ---------------------------------------------------------------------------
// Routing.  Legs always run point -> kernel point -> point within one closed
// cell, so they never leave the environment.

inline void route_via(AgentState& a, Vec2 kernel, Vec2 target) {
    a.route.clear();
    if (!a.at(kernel) && kernel.dist(target) > tol::pos) a.route.push_back(kernel);
    a.route.push_back(target);
    a.touch();
}

} // namespace deploy_detail

// ---------------------------------------------------------------------------
// Communication thread: pop one message, merge, broadcast on change.

inline std::optional<SnapshotPtr> comm_step(AgentState& a,
                                            std::deque<SnapshotPtr>& inbox,
                                            const std::set<int>& visible_now) {
    if (!inbox.empty()) {
        SnapshotPtr m = inbox.front();
        inbox.pop_front();
        a.neighbor_data[m->uid] = m;
    }
    bool new_visible = false;
    for (int v : visible_now)
        if (!a.last_visible.count(v)) new_visible = true;
    a.last_visible = visible_now;
    if (a.version != a.broadcast_version || new_visible) {
        auto snap = std::make_shared<SnapshotData>();
        snap->uid = a.uid;
        snap->mode = a.mode;
        snap->position = a.position;
        snap->vantage_points = a.vantage_points;
        snap->cells = a.cells;
        snap->proxied = a.proxied;
        snap->xi_current = a.xi_current;
        snap->xi_last = a.xi_last;
        snap->deletions = a.deletions;
        snap->tours = a.tours;
        a.broadcast_version = a.version;
        return snap;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Navigation thread: head for the route front at full speed, snapping on
// arrival.  While the proxied cell's wait set is nonempty the agent advances
// only as far as the boundary of a blocking cell and parks there: from the
// blocker's closure it always sees the blocker's leader, whose broadcasts
// carry the mirrored wait set needed to break the tie.

inline void nav_step(AgentState& a, double dt, double u_max,
                     std::vector<AgentEvent>& events) {
    if (a.route.empty()) return;
    Vec2 target = a.route.front();
    double d = a.position.dist(target);
    double step = u_max * dt;
    if (a.proxied && !a.proxied->wait_set.empty()) {
        std::vector<const Cell*> blockers;
        for (auto& w : a.proxied->wait_set) {
            const Cell* c = deploy_detail::known_cell(a, w);
            if (c) blockers.push_back(c);
        }
        for (auto* b : blockers)
            if (b->poly.contains(a.position, tol::on)) return; // at the frontier
        if (d <= tol::pos) {
            a.position = target;
            a.route.pop_front();
            events.push_back({"move", ""});
            return;
        }
        Vec2 dir = (target - a.position) * (1.0 / d);
        double avail = std::min(step, d);
        double t_hit = 1.0;
        for (auto* b : blockers)
            for (std::size_t i = 0; i < b->poly.size(); ++i) {
                Segment e = b->poly.edge(i);
                Vec2 r = dir * avail, s = e.b - e.a, w0 = e.a - a.position;
                double den = r.x * s.y - r.y * s.x;
                if (std::abs(den) < 1e-15) continue;
                double t = (w0.x * s.y - w0.y * s.x) / den;
                double u = (w0.x * r.y - w0.y * r.x) / den;
                if (u >= -tol::on && u <= 1 + tol::on && t > 0 && t <= 1)
                    t_hit = std::min(t_hit, t);
            }
        a.position = a.position + dir * (avail * t_hit);
        if (t_hit >= 1.0 && a.position.dist(target) <= tol::pos) {
            a.position = target;
            a.route.pop_front();
            events.push_back({"move", ""});
        }
        return;
    }
    if (d <= step + tol::pos) {
        a.position = target;
        a.route.pop_front();
        events.push_back({"move", ""});
    } else {
        a.position = a.position + (target - a.position) * (step / d);
    }
}

// ---------------------------------------------------------------------------
// Internal state transition subroutines.

namespace deploy_detail {

// Answer a proxy assignment naming this agent.  Explorers answer from their
// staging spot; a stationary leader answers when it stands within the cell
// (double vantage points are cell vertices, so the tour legs stay legal).
// Returns true when the agent switched to proxy mode.
inline bool serve_proxy_assignment(AgentState& a, std::vector<AgentEvent>& events) {
    if (a.proxied || !a.route.empty()) return false;
    for (auto& [uid, snap] : a.neighbor_data) {
        for (auto& c : snap->cells) {
            if (c.proxy_uid != a.uid || c.status == CellStatus::permanent) continue;
            if (cell_deleted(a, c.id) || a.toured(c.id, c.status)) continue;
            const Cell* kc = known_cell(a, c.id);
            if (!kc) kc = &c;
            if (a.mode == AgentMode::lead && !point_in_closed_cell(a.position, *kc))
                continue;
            Vec2 back = a.position;
            a.proxied = *kc;
            a.proxied->status = c.status; // status is owned by the leader
            a.proxied->proxy_uid = a.uid;
            a.mode = AgentMode::proxy;
            a.route = tour_route(*a.proxied);
            if (back.dist(a.proxied->vantage) > tol::pos) a.route.push_back(back);
            a.sweep_seen.clear();
            a.sweep_incomplete = false;
            a.parked = false;
            a.touch();
            events.push_back({"mode", "proxy for " + a.proxied->id.str()});
            return true;
        }
    }
    return false;
}

// ATTEMPT_CELL_CONSTRUCTION: on arrival at an unconstructed vantage point,
// either delete the vertex when its parent gap is already sealed inside a
// surviving cell, or build the initial cell across the parent gap.
inline void attempt_cell_construction(AgentState& a, const DeployContext& ctx,
                                      std::vector<AgentEvent>& events) {
    if (!a.route.empty()) return;
    VantageEntry* pending = nullptr;
    for (auto& ve : a.vantage_points)
        if (!a.find_cell(ve.id) && a.at(ve.p)) {
            pending = &ve;
            break;
        }
    if (!pending) return;
    const Ptvuid xi = pending->id;

    if (xi.is_root()) {
        auto root_idx = ctx.env.vertex_near(pending->p, tol::pos);
        if (!root_idx) throw std::logic_error("root vantage is not an environment vertex");
        Cell root = make_root_cell(ctx.env, *root_idx);
        a.cells.push_back(root);
        a.touch();
        events.push_back({"status", root.id.str() + " none->permanent"});
        return;
    }

    const Cell* parent = known_cell(a, xi.parent());
    if (!parent || cell_deleted(a, xi.parent())) return;
    int gap_index = -1;
    for (std::size_t gi = 0; gi < parent->gaps.size(); ++gi)
        if (parent->gaps[gi].label == GapLabel::child &&
            parent->gaps[gi].child_index == xi.d.back())
            gap_index = int(gi);
    if (gap_index < 0) return;
    const Segment gseg = parent->gaps[std::size_t(gap_index)].seg;

    // Delete the vertex when a non-parent contending or permanent cell
    // already holds the parent gap edge: no unique triangle remains.
    // Permanent cells never change, so stale records are trusted; a
    // contending claim counts only while its holder is in sight.
    bool claimed = false;
    auto check_claim = [&](const Cell& c, bool live) {
        if (claimed || c.id == xi || c.id == xi.parent()) return;
        if (c.status == CellStatus::retracting) return;
        if (c.status == CellStatus::contending && !live) return;
        if (cell_deleted(a, c.id)) return;
        if (seg_in_closed_cell(gseg, c)) claimed = true;
    };
    for (auto& c : a.cells) check_claim(c, true);
    for (auto& [uid, snap] : a.neighbor_data) {
        bool live = a.last_visible.count(uid) > 0;
        for (auto& c : snap->cells) check_claim(c, live);
        if (snap->proxied) check_claim(*snap->proxied, live);
    }

    bool degenerate = false;
    Cell cand;
    if (!claimed) {
        // Defer while a currently-visible leader still has to construct a
        // smaller cell: smaller PTVUIDs build first in contested regions.
        for (auto& [uid, snap] : a.neighbor_data) {
            if (!a.last_visible.count(uid) || snap->mode != AgentMode::lead) continue;
            for (auto& ve : snap->vantage_points) {
                bool built = false;
                for (auto& c : snap->cells) built |= c.id == ve.id;
                if (!built && ve.id < xi && !cell_deleted(a, ve.id)) return;
            }
        }
        try {
            cand = child_candidate(ctx.env, *parent, gap_index, {});
        } catch (const std::runtime_error&) {
            degenerate = true; // region already walled off or covered
        }
    }
    if (claimed || degenerate) {
        record_deletion(a, xi, gseg, pending->p);
        events.push_back({"delete", xi.str()});
        std::erase_if(a.vantage_points, [&](const VantageEntry& v) { return v.id == xi; });
        if (a.cells.empty() && a.vantage_points.empty()) {
            a.mode = AgentMode::explore;
            std::swap(a.xi_last, a.xi_current);
            events.push_back({"mode", "explore"});
        } else if (!a.cells.empty()) {
            route_via(a, a.cells[0].vantage, a.cells[0].vantage);
        }
        a.touch();
        return;
    }

    // A cell with no frontier cannot be in branch conflict.
    bool has_frontier = false;
    for (auto& g : cand.gaps) has_frontier |= g.label == GapLabel::unexplored;
    cand.status = has_frontier ? CellStatus::retracting : CellStatus::permanent;
    a.cells.push_back(cand);
    a.touch();
    events.push_back({"status", cand.id.str() + std::string(" none->") +
                                    to_string(cand.status)});
}

// LEAD: task assignments and reactions to deconfliction events.
inline void lead_step(AgentState& a, const DeployContext& ctx,
                      std::vector<AgentEvent>& events) {
    // --- Task assignments -------------------------------------------------
    // Self-assignment: a lone permanent triangle with one unexplored gap is
    // led onward by its own leader from the child vantage point.  When every
    // agent in sight has settled as a leader with all of its cells built, no
    // proxy tour can ever advance this cell; the child vantage must still be
    // claimed, else the region beyond the gap would stay uncovered forever.
    auto all_settled = [&]() {
        if (a.cells[0].proxy_uid >= 0) return false;
        bool saw_peer = false;
        for (auto& [uid, snap] : a.neighbor_data) {
            if (!a.last_visible.count(uid)) continue;
            if (snap->mode != AgentMode::lead) return false;
            for (auto& ve : snap->vantage_points) {
                bool built = false;
                for (auto& sc : snap->cells) built |= sc.id == ve.id;
                if (!built) return false;
            }
            saw_peer = true;
        }
        return saw_peer;
    };
    if (a.cells.size() == 1 && a.cells[0].is_triangle() &&
        a.cells[0].unexplored_count() == 1 && a.vantage_points.size() == 1 &&
        (a.cells[0].status == CellStatus::permanent || all_settled())) {
        Cell& c = a.cells[0];
        for (std::size_t gi = 0; gi < c.gaps.size(); ++gi)
            if (c.gaps[gi].label == GapLabel::unexplored) {
                Vec2 p = child_vantage_for_gap(c, int(gi));
                c.gaps[gi].label = GapLabel::child;
                c.gaps[gi].leader_uid = a.uid;
                ++c.revision;
                a.vantage_points.push_back({c.id.child(c.gaps[gi].child_index), p,
                                            VantageLabel::unlabeled});
                a.xi_last = c.id;
                a.xi_current = a.vantage_points.back().id;
                route_via(a, c.vantage, p);
                a.touch();
                break;
            }
    } else {
        // Double vantage point: hand the second child to the leader already
        // settled (sparse) at the shared point.
        bool assigned = false;
        for (auto& c : a.cells) {
            if (assigned || c.status != CellStatus::permanent) continue;
            for (std::size_t gi = 0; gi < c.gaps.size() && !assigned; ++gi) {
                if (c.gaps[gi].label != GapLabel::unexplored) continue;
                Vec2 p;
                try {
                    p = child_vantage_for_gap(c, int(gi));
                } catch (const std::exception&) {
                    continue;
                }
                for (std::size_t gj = 0; gj < c.gaps.size() && !assigned; ++gj) {
                    if (gj == gi || c.gaps[gj].label != GapLabel::child) continue;
                    Vec2 q;
                    try {
                        q = child_vantage_for_gap(c, int(gj));
                    } catch (const std::exception&) {
                        continue;
                    }
                    if (!almost_equal(p, q)) continue;
                    if (c.gaps[gj].child_index > c.gaps[gi].child_index) continue;
                    Ptvuid sib = c.id.child(c.gaps[gj].child_index);
                    for (auto& [uid, snap] : a.neighbor_data) {
                        if (snap->mode != AgentMode::lead) continue;
                        bool leads_sib = false, sparse = false;
                        for (auto& sc : snap->cells) leads_sib |= sc.id == sib;
                        for (auto& ve : snap->vantage_points)
                            if (ve.id == sib) sparse = ve.label == VantageLabel::sparse;
                        if (leads_sib && sparse) {
                            c.gaps[gi].label = GapLabel::child;
                            c.gaps[gi].leader_uid = uid;
                            ++c.revision;
                            a.touch();
                            assigned = true;
                            break;
                        }
                    }
                }
            }
        }
        // Explorer -> leader of the next depth-first child.
        if (!assigned)
            for (auto& [uid, snap] : a.neighbor_data) {
                if (assigned || snap->mode != AgentMode::explore) continue;
                if (!a.last_visible.count(uid)) continue;
                Cell* c = a.find_cell(snap->xi_current);
                if (!c || c->status != CellStatus::permanent) continue;
                int gi = depth_first_next(*c, snap->xi_last, uid);
                if (gi < 0 || c->gaps[std::size_t(gi)].label != GapLabel::unexplored)
                    continue;
                Vec2 p;
                try {
                    p = child_vantage_for_gap(*c, gi);
                } catch (const std::exception&) {
                    continue;
                }
                // At a double vantage point only the first of the pair gets a
                // fresh agent, unless the colocated vantage went nonsparse.
                bool blocked = false;
                for (std::size_t gj = 0; gj < c->gaps.size(); ++gj) {
                    if (int(gj) == gi) continue;
                    const CellGap& g2 = c->gaps[gj];
                    if (g2.label != GapLabel::unexplored && g2.label != GapLabel::child)
                        continue;
                    Vec2 q;
                    try {
                        q = child_vantage_for_gap(*c, int(gj));
                    } catch (const std::exception&) {
                        continue;
                    }
                    if (!almost_equal(p, q)) continue;
                    if (g2.label == GapLabel::unexplored) {
                        if (g2.child_index < c->gaps[std::size_t(gi)].child_index)
                            blocked = true;
                    } else {
                        Ptvuid sib = c->id.child(g2.child_index);
                        VantageLabel lab = VantageLabel::unlabeled;
                        for (auto& [u2, s2] : a.neighbor_data)
                            for (auto& ve : s2->vantage_points)
                                if (ve.id == sib) lab = ve.label;
                        for (auto& ve : a.vantage_points)
                            if (ve.id == sib) lab = ve.label;
                        if (lab != VantageLabel::nonsparse) blocked = true;
                    }
                }
                if (blocked) continue;
                c->gaps[std::size_t(gi)].label = GapLabel::child;
                c->gaps[std::size_t(gi)].leader_uid = uid;
                ++c->revision;
                a.touch();
                assigned = true;
            }
    }

    // Proxy assignment: an explorer staged at a non-permanent cell of ours,
    // or a stationary empty-handed leader within the cell, runs the tour.
    for (auto& c : a.cells) {
        if (c.status == CellStatus::permanent || c.proxy_uid >= 0) continue;
        int pick = -1;
        for (auto& [uid, snap] : a.neighbor_data) {
            if (!a.last_visible.count(uid)) continue;
            bool served = false;
            for (auto& t : snap->tours)
                served |= t.id == c.id && t.from == c.status;
            if (served || snap->proxied) continue;
            if (snap->mode == AgentMode::explore && snap->xi_current == c.id)
                pick = uid;
            else if (snap->mode == AgentMode::lead && snap->cells.empty() &&
                     c.status == CellStatus::retracting &&
                     point_in_closed_cell(snap->position, c)) {
                // Only a leader parked at its own unconstructed vantage is
                // sure to still be there when the assignment arrives.
                for (auto& ve : snap->vantage_points)
                    if (snap->position.dist(ve.p) <= tol::pos) pick = uid;
            }
            if (pick >= 0) break;
        }
        if (pick >= 0) {
            c.proxy_uid = pick;
            ++c.revision;
            a.touch();
            break;
        }
    }

    // Insurance: release a proxy claim the assignee will never answer
    // (double-booked by a sibling, or moved on before the message landed).
    for (auto& c : a.cells) {
        if (c.proxy_uid < 0) continue;
        auto it = a.neighbor_data.find(c.proxy_uid);
        if (it == a.neighbor_data.end()) continue;
        const SnapshotData& s = *it->second;
        bool release = false;
        if (s.mode == AgentMode::proxy && s.proxied && !(s.proxied->id == c.id))
            release = true;
        if (s.mode == AgentMode::explore && !(s.xi_current == c.id)) {
            bool served = false;
            for (auto& t : s.tours) served |= t.id == c.id && t.from == c.status;
            release = !served;
        }
        if (release) {
            c.proxy_uid = -1;
            ++c.revision;
            a.touch();
        }
    }

    // Accept leadership of a second cell at a double vantage point.
    for (auto& [uid, snap] : a.neighbor_data) {
        if (uid == a.uid) continue;
        for (auto& sc : snap->cells)
            for (std::size_t gi = 0; gi < sc.gaps.size(); ++gi) {
                const CellGap& g = sc.gaps[gi];
                if (g.label != GapLabel::child || g.leader_uid != a.uid) continue;
                Ptvuid cid = sc.id.child(g.child_index);
                if (a.find_vantage(cid) || cell_deleted(a, cid)) continue;
                Vec2 p;
                try {
                    p = child_vantage_for_gap(sc, int(gi));
                } catch (const std::exception&) {
                    continue;
                }
                if (!a.at(p)) continue; // only the colocated case
                a.vantage_points.push_back({cid, p, VantageLabel::unlabeled});
                a.touch();
            }
    }

    // --- Reactions to deconfliction events --------------------------------
    // Mirror the proxy's truncations and wait set.
    for (auto& c : a.cells) {
        if (c.proxy_uid < 0) continue;
        auto it = a.neighbor_data.find(c.proxy_uid);
        if (it == a.neighbor_data.end() || !it->second->proxied) continue;
        const Cell& pc = *it->second->proxied;
        if (pc.id == c.id && pc.revision > c.revision) {
            CellStatus st = c.status;
            int pu = c.proxy_uid;
            c = pc;
            c.status = st;
            c.proxy_uid = pu;
            a.touch();
        }
    }

    // Delete own contending cell on a lost shoot-out or a proxy's deletion.
    for (std::size_t ci = 0; ci < a.cells.size(); ++ci) {
        Cell& c = a.cells[ci];
        bool dead = cell_deleted(a, c.id);
        if (!dead && c.status == CellStatus::contending) {
            for (auto& [uid, snap] : a.neighbor_data) {
                if (dead) break;
                if (snap->proxied && snap->proxied->status == CellStatus::contending &&
                    snap->proxied->id < c.id && !cell_deleted(a, snap->proxied->id) &&
                    in_conflict(a, ctx, *snap->proxied, c))
                    dead = true;
            }
        }
        if (!dead) continue;
        record_deletion(a, c.id, c.parent_gap_edge(), c.vantage);
        events.push_back({"delete", c.id.str()});
        std::erase_if(a.vantage_points,
                      [&](const VantageEntry& v) { return v.id == c.id; });
        a.cells.erase(a.cells.begin() + long(ci));
        if (a.cells.empty() && a.vantage_points.empty()) {
            a.mode = AgentMode::explore;
            std::swap(a.xi_last, a.xi_current);
            a.touch();
            events.push_back({"mode", "explore"});
            return;
        }
        if (!a.cells.empty()) route_via(a, a.cells[0].vantage, a.cells[0].vantage);
        a.touch();
        return;
    }

    // Phantom wall where a child was deleted.
    for (auto& c : a.cells)
        for (auto& g : c.gaps) {
            if (g.label != GapLabel::child) continue;
            Ptvuid cid = c.id.child(g.child_index);
            if (cell_deleted(a, cid)) {
                g.label = GapLabel::phantom_wall;
                g.leader_uid = -1;
                ++c.revision;
                a.touch();
                events.push_back({"wall", c.id.str() + " gap " +
                                              std::to_string(g.child_index)});
            }
        }

    // Advance status after a completed proxy tour.
    for (auto& c : a.cells) {
        if (c.proxy_uid < 0 || c.status == CellStatus::permanent) continue;
        bool done = false;
        for (auto& [uid, snap] : a.neighbor_data)
            for (auto& t : snap->tours)
                if (t.id == c.id && t.from == c.status && t.proxy_uid == c.proxy_uid)
                    done = true;
        if (!done) continue;
        c.status = c.status == CellStatus::retracting ? CellStatus::contending
                                                      : CellStatus::permanent;
        c.proxy_uid = -1;
        c.wait_set.clear();
        ++c.revision;
        a.touch();
        events.push_back({"status", c.id.str() + std::string(" -> ") +
                                        to_string(c.status)});
    }
}

// PROPAGATE_SPARSE_VANTAGE_POINT_INFORMATION: leaves-to-root labeling, plus
// the cell handoff that frees the leader of a nonsparse triangle.
inline void propagate_sparse_info(AgentState& a, std::vector<AgentEvent>& events) {
    // Label an owned vantage point once the cell is permanent and all its
    // children are labeled (a leaf labels immediately).
    for (auto& ve : a.vantage_points) {
        if (ve.label != VantageLabel::unlabeled) continue;
        Cell* c = a.find_cell(ve.id);
        if (!c || c->status != CellStatus::permanent) continue;
        bool ready = true, sparse_child = false;
        for (auto& g : c->gaps) {
            if (g.label == GapLabel::unexplored) ready = false;
            if (g.label != GapLabel::child) continue;
            Ptvuid cid = c->id.child(g.child_index);
            VantageLabel lab = VantageLabel::unlabeled;
            for (auto& v2 : a.vantage_points)
                if (v2.id == cid) lab = v2.label;
            for (auto& [uid, snap] : a.neighbor_data)
                for (auto& v2 : snap->vantage_points)
                    if (v2.id == cid && v2.label != VantageLabel::unlabeled) lab = v2.label;
            if (lab == VantageLabel::unlabeled) ready = false;
            sparse_child |= lab == VantageLabel::sparse;
        }
        if (!ready) continue;
        ve.label = c->is_triangle() && sparse_child ? VantageLabel::nonsparse
                                                    : VantageLabel::sparse;
        a.touch();
        events.push_back({"status", ve.id.str() + std::string(" vantage ") +
                                        (ve.label == VantageLabel::sparse ? "sparse"
                                                                          : "nonsparse")});
    }

    // Acquire the nonsparse parent of a sparse single cell: the parent is a
    // triangle and this agent stands at one of its vertices, so the whole
    // parent stays covered from here.
    if (a.cells.size() == 1 && a.vantage_points.size() == 1 &&
        a.vantage_points[0].label == VantageLabel::sparse &&
        a.at(a.vantage_points[0].p) && !a.cells[0].id.is_root()) {
        Ptvuid pid = a.cells[0].id.parent();
        for (auto& [uid, snap] : a.neighbor_data) {
            if (snap->mode != AgentMode::lead || !a.last_visible.count(uid)) continue;
            for (auto& ve : snap->vantage_points) {
                if (!(ve.id == pid) || ve.label != VantageLabel::nonsparse) continue;
                const Cell* pc = nullptr;
                for (auto& c : snap->cells)
                    if (c.id == pid) pc = &c;
                if (!pc) continue;
                a.cells.push_back(*pc);
                a.vantage_points.push_back(ve);
                a.touch();
                events.push_back({"status", "acquired " + pid.str()});
                return;
            }
        }
    }

    // Surrender a cell another leader has acquired from below.
    for (auto& [uid, snap] : a.neighbor_data) {
        if (uid == a.uid || snap->mode != AgentMode::lead) continue;
        if (snap->cells.size() < 2 || snap->vantage_points.empty() ||
            snap->vantage_points[0].label != VantageLabel::sparse)
            continue;
        const Cell& acquired = snap->cells[1];
        if (!(acquired.id == snap->cells[0].id.parent())) continue;
        for (std::size_t ci = 0; ci < a.cells.size(); ++ci)
            if (a.cells[ci].id == acquired.id) {
                Ptvuid sid = acquired.id;
                std::erase_if(a.vantage_points,
                              [&](const VantageEntry& v) { return v.id == sid; });
                a.cells.erase(a.cells.begin() + long(ci));
                a.touch();
                events.push_back({"status", "surrendered " + sid.str()});
                if (a.cells.empty() && a.vantage_points.empty()) {
                    a.mode = AgentMode::explore;
                    a.xi_current = sid;
                    a.xi_last = sid.parent();
                    a.sweep_seen.clear();
                    a.sweep_incomplete = false;
                    a.parked = false;
                    events.push_back({"mode", "explore"});
                } else if (!a.cells.empty()) {
                    route_via(a, a.cells[0].vantage, a.cells[0].vantage);
                }
                return;
            }
    }
}

// Shared wait-set update for both proxy tours: wait behind a conflicting
// opposite-status cell under deconfliction unless it is already waiting on
// us and we come first in the PTVUID order.  Uses the freshest copy of each
// candidate (its own proxy's live copy beats the leader's mirror).
inline void update_wait_set(AgentState& a, const DeployContext& ctx, Cell& cp,
                            CellStatus opposite) {
    std::map<Ptvuid, const Cell*> candidates;
    auto offer = [&](const Cell& c) {
        if (c.id == cp.id) return;
        auto [it, fresh] = candidates.emplace(c.id, &c);
        if (!fresh && c.revision > it->second->revision) it->second = &c;
    };
    for (auto& [uid, snap] : a.neighbor_data) {
        for (auto& c : snap->cells) offer(c);
        if (snap->proxied) offer(*snap->proxied);
    }
    for (auto& [id, cptr] : candidates) {
        const Cell& c = *cptr;
        if (c.status != opposite) continue;
        bool conflict = !cell_deleted(a, c.id) && c.proxy_uid >= 0 &&
                        in_conflict(a, ctx, cp, c);
        bool add = conflict && (!c.wait_set.count(cp.id) || c.id < cp.id);
        std::size_t before = cp.wait_set.size();
        if (add)
            cp.wait_set.insert(c.id);
        else
            cp.wait_set.erase(c.id);
        if (cp.wait_set.size() != before) {
            ++cp.revision;
            a.touch();
        }
    }
    for (auto it = cp.wait_set.begin(); it != cp.wait_set.end();) {
        auto f = candidates.find(*it);
        const Cell* c = f == candidates.end() ? nullptr : f->second;
        if (!c || c->status != opposite || c->proxy_uid < 0 ||
            cell_deleted(a, *it)) {
            it = cp.wait_set.erase(it);
            ++cp.revision;
            a.touch();
        } else {
            ++it;
        }
    }
}

// Truncate the proxied cell at every conflicting permanent cell in view.
// A conflict that truncation cannot reduce (no gap edge of the permanent
// cell meets the proxied interior) means the proxied cell lies entirely
// inside the permanent one, so it is deleted.  Returns true if deleted.
inline bool truncate_at_permanent_conflicts(AgentState& a, const DeployContext& ctx,
                                            std::vector<AgentEvent>& events) {
    Cell& cp = *a.proxied;
    for (auto& [uid, snap] : a.neighbor_data) {
        for (auto& c : snap->cells) {
            if (c.status != CellStatus::permanent || cell_deleted(a, c.id)) continue;
            if (c.id == cp.id) continue;
            if (!in_conflict(a, ctx, cp, c)) continue;
            bool covered = false;
            try {
                if (truncate_cell_at(ctx, cp, c)) {
                    a.touch();
                    events.push_back({"status", cp.id.str() + " truncated at " +
                                                    c.id.str()});
                } else {
                    covered = true;
                }
            } catch (const std::runtime_error&) {
                covered = true;
            }
            if (covered) {
                // Nothing left to keep: the region is already covered.
                record_deletion(a, cp.id, cp.parent_gap_edge(), cp.vantage);
                events.push_back({"delete", cp.id.str()});
                Vec2 v = cp.vantage, m = cp.parent_gap_edge().midpoint();
                a.proxied.reset();
                a.mode = AgentMode::explore;
                route_via(a, v, m);
                events.push_back({"mode", "explore"});
                return true;
            }
        }
    }
    return false;
}

// PROXY_RETRACTING_CELL: tour the boundary, truncating the proxied cell at
// conflicting permanent cells and pausing behind conflicting contending
// cells per the PTVUID guard.
inline void proxy_retracting_step(AgentState& a, const DeployContext& ctx,
                                  std::vector<AgentEvent>& events) {
    Cell& cp = *a.proxied;
    if (!a.route.empty()) {
        if (truncate_at_permanent_conflicts(a, ctx, events)) return;
        update_wait_set(a, ctx, cp, CellStatus::contending);
        return;
    }
    // Tour complete.
    a.tours.push_back({cp.id, CellStatus::retracting, a.uid});
    a.proxied.reset();
    a.mode = a.vantage_points.empty() ? AgentMode::explore : AgentMode::lead;
    a.touch();
    events.push_back({"mode", to_string(a.mode)});
}

// PROXY_CONTENDING_CELL: shoot-out with other contending cells; the larger
// PTVUID is deleted.  A phantom wall or deletion coinciding with the parent
// gap edge means the cell lost the race for its own doorway.
inline void proxy_contending_step(AgentState& a, const DeployContext& ctx,
                                  std::vector<AgentEvent>& events) {
    Cell& cp = *a.proxied;
    if (!a.route.empty()) {
        bool dead = cell_deleted(a, cp.id);
        const Segment pg = cp.parent_gap_edge();
        if (!dead)
            for (auto& [uid, snap] : a.neighbor_data) {
                if (dead) break;
                for (auto& c : snap->cells) {
                    if (c.status == CellStatus::contending && c.id < cp.id &&
                        !cell_deleted(a, c.id) && in_conflict(a, ctx, cp, c))
                        dead = true;
                    for (auto& g : c.gaps)
                        if (g.label == GapLabel::phantom_wall &&
                            segments_coincide(g.seg, pg))
                            dead = true;
                    if (dead) break;
                }
            }
        if (!dead)
            for (auto& [uid, snap] : a.neighbor_data)
                for (auto& d : snap->deletions)
                    if (!(d.id == cp.id) && segments_coincide(d.parent_gap, pg))
                        dead = true;
        if (dead) {
            record_deletion(a, cp.id, pg, cp.vantage);
            events.push_back({"delete", cp.id.str()});
            Vec2 v = cp.vantage, m = pg.midpoint();
            a.proxied.reset();
            a.mode = AgentMode::explore;
            route_via(a, v, m);
            events.push_back({"mode", "explore"});
            return;
        }
        update_wait_set(a, ctx, cp, CellStatus::retracting);
        return;
    }
    a.tours.push_back({cp.id, CellStatus::contending, a.uid});
    a.proxied.reset();
    a.mode = a.vantage_points.empty() ? AgentMode::explore : AgentMode::lead;
    a.touch();
    events.push_back({"mode", to_string(a.mode)});
}

// EXPLORE: walk the tree depth-first; become leader or proxy when assigned;
// retreat when the current cell is deleted.
inline void explore_step(AgentState& a, const DeployContext& ctx,
                         std::vector<AgentEvent>& events) {
    (void)ctx;
    // React to the current cell's deletion first.
    if (!a.xi_current.is_root() && cell_deleted(a, a.xi_current)) {
        const DeletionRecord* d = deletion_of(a, a.xi_current);
        std::swap(a.xi_last, a.xi_current);
        a.parked = false;
        a.sweep_seen.clear();
        a.sweep_incomplete = false;
        if (d) route_via(a, d->vantage, d->parent_gap.midpoint());
        a.touch();
        return;
    }

    if (serve_proxy_assignment(a, events)) return;

    if (!a.route.empty()) return;
    const Cell* cur = known_cell(a, a.xi_current);
    if (!cur || cell_deleted(a, cur->id)) return;
    if (cur->status != CellStatus::permanent) {
        a.sweep_incomplete = true;
        return;
    }

    int gi = depth_first_next(*cur, a.xi_last, a.uid);
    if (gi < 0) {
        // Backtrack to the parent.
        if (cur->id.is_root()) {
            a.xi_last = a.xi_current;
            if (!a.parked && !a.sweep_incomplete && !a.sweep_seen.empty()) {
                a.parked = true;
                route_via(a, cur->vantage, cur->vantage);
            }
            return;
        }
        Ptvuid pid = cur->id.parent();
        Vec2 door = cur->parent_gap_edge().midpoint();
        a.xi_last = a.xi_current;
        a.xi_current = pid;
        route_via(a, cur->vantage, door);
        return;
    }
    const CellGap& g = cur->gaps[std::size_t(gi)];
    Ptvuid next = cur->id.child(g.child_index);

    if (g.label == GapLabel::child && g.leader_uid == a.uid && !a.find_vantage(next) &&
        !cell_deleted(a, next)) {
        // Become leader of the child vertex.
        Vec2 p;
        try {
            p = child_vantage_for_gap(*cur, gi);
        } catch (const std::exception&) {
            return;
        }
        a.mode = AgentMode::lead;
        a.vantage_points.push_back({next, p, VantageLabel::unlabeled});
        a.xi_last = a.xi_current;
        a.xi_current = next;
        a.parked = false;
        a.sweep_seen.clear();
        a.sweep_incomplete = false;
        route_via(a, cur->vantage, p);
        events.push_back({"mode", "lead " + next.str()});
        return;
    }
    if (g.label == GapLabel::child && !cell_deleted(a, next)) {
        // Park-or-continue bookkeeping: a full sweep revisiting a known
        // (cell, arrival) pair with nothing incomplete in sight means the
        // whole reachable tree is finished.
        auto key = std::make_pair(next, a.xi_current);
        if (a.sweep_seen.count(key)) {
            if (!a.sweep_incomplete) {
                if (!a.parked) {
                    a.parked = true;
                    route_via(a, cur->vantage, cur->vantage);
                }
                return;
            }
            a.sweep_seen.clear();
            a.sweep_incomplete = false;
        }
        a.sweep_seen.insert(key);
        a.xi_last = a.xi_current;
        a.xi_current = next;
        a.parked = false;
        route_via(a, cur->vantage, g.seg.midpoint());
        return;
    }
    // Unexplored (or just-deleted) gap: stage at it and wait for the leader.
    a.sweep_incomplete = true;
    if (!a.at(g.seg.midpoint())) route_via(a, cur->vantage, g.seg.midpoint());
}

} // namespace deploy_detail

// One internal-state-transition step: dispatch on mode.
inline void state_step(AgentState& a, const DeployContext& ctx,
                       std::vector<AgentEvent>& events) {
    using namespace deploy_detail;
    switch (a.mode) {
        case AgentMode::lead:
            if (serve_proxy_assignment(a, events)) break;
            attempt_cell_construction(a, ctx, events);
            if (a.mode != AgentMode::lead) break;
            lead_step(a, ctx, events);
            if (a.mode != AgentMode::lead) break;
            propagate_sparse_info(a, events);
            break;
        case AgentMode::proxy:
            if (!a.proxied) {
                a.mode = a.vantage_points.empty() ? AgentMode::explore : AgentMode::lead;
                a.touch();
                break;
            }
            if (a.proxied->status == CellStatus::retracting)
                proxy_retracting_step(a, ctx, events);
            else if (a.proxied->status == CellStatus::contending)
                proxy_contending_step(a, ctx, events);
            else {
                a.proxied.reset();
                a.route.clear();
                a.mode = a.vantage_points.empty() ? AgentMode::explore : AgentMode::lead;
                a.touch();
            }
            break;
        case AgentMode::explore:
            explore_step(a, ctx, events);
            break;
    }
}

} // namespace visdeploy
