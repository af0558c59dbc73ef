#pragma once

// Independent verification oracles.  Nothing here calls visibility_polygon,
// incremental_partition, or deployment code; containment and visibility are
// re-derived with different algorithms (winding angle, strict orientation
// tests) so agreement with the main path is meaningful.

#include "geometry.hpp"
#include "partition.hpp"

#include <cstdint>
#include <random>

namespace visdeploy::verify {

// Winding-angle point-in-ring test (boundary handled by the caller).
inline bool winding_inside(const Polygon& ring, Vec2 p) {
    double total = 0;
    for (std::size_t i = 0, n = ring.size(); i < n; ++i) {
        Vec2 a = ring[i] - p, b = ring[(i + 1) % n] - p;
        total += std::atan2(a.cross(b), a.dot(b));
    }
    return std::abs(total) > 3.141592653589793;
}

inline bool point_in_env(Vec2 p, const Environment& env, double eps = tol::on) {
    for (std::size_t i = 0; i < env.outer.size(); ++i) {
        Segment e = env.outer.edge(i);
        if (point_segment_dist(p, e.a, e.b) <= eps) return true;
    }
    for (auto& h : env.holes)
        for (std::size_t i = 0; i < h.size(); ++i) {
            Segment e = h.edge(i);
            if (point_segment_dist(p, e.a, e.b) <= eps) return true;
        }
    if (!winding_inside(env.outer, p)) return false;
    for (auto& h : env.holes)
        if (winding_inside(h, p)) return false;
    return true;
}

// Closed segment containment by direct per-edge tests: a strict proper
// crossing blocks; touches split the segment and the pieces are point-tested.
inline bool segment_visible(Vec2 a, Vec2 b, const Environment& env, double eps = tol::on) {
    if (!point_in_env(a, env, eps) || !point_in_env(b, env, eps)) return false;
    Vec2 r = b - a;
    double rlen = r.norm();
    if (rlen <= eps) return true;

    std::vector<double> touches{0.0, 1.0};
    bool blocked = false;
    env.for_each_edge([&](const Segment& s) {
        if (blocked) return;
        double o1 = orient(a, b, s.a);
        double o2 = orient(a, b, s.b);
        double o3 = orient(s.a, s.b, a);
        double o4 = orient(s.a, s.b, b);
        double g1 = eps * rlen, g2 = eps * s.length();
        if (((o1 > g1 && o2 < -g1) || (o1 < -g1 && o2 > g1)) &&
            ((o3 > g2 && o4 < -g2) || (o3 < -g2 && o4 > g2))) {
            blocked = true; // strict proper crossing
            return;
        }
        // Any contact within eps contributes split points.
        auto consider = [&](Vec2 p) {
            if (point_segment_dist(p, a, b) <= eps) {
                double t = std::clamp((p - a).dot(r) / (rlen * rlen), 0.0, 1.0);
                touches.push_back(t);
            }
        };
        consider(s.a);
        consider(s.b);
        auto hit = line_line(a, b, s.a, s.b);
        if (hit && hit->u >= -eps / std::max(s.length(), eps) &&
            hit->u <= 1 + eps / std::max(s.length(), eps) && hit->t >= 0 && hit->t <= 1)
            touches.push_back(hit->t);
    });
    if (blocked) return false;

    std::sort(touches.begin(), touches.end());
    for (std::size_t i = 0; i + 1 < touches.size(); ++i) {
        if (touches[i + 1] - touches[i] <= eps / rlen) continue;
        Vec2 mid = a + r * (0.5 * (touches[i] + touches[i + 1]));
        if (!point_in_env(mid, env, eps)) return false;
    }
    return true;
}

struct VisibleRegionStats {
    std::size_t samples = 0;    // total draws, uniform over the bounding box
    std::size_t in_env = 0;
    std::size_t visible = 0;
    double bbox_area = 0;
    double area_estimate = 0;   // visible/samples * bbox_area
    double sigma = 0;           // binomial 1-sigma of area_estimate
};

struct SamplePoint {
    Vec2 p;
    bool in_env;
    bool visible;
};

// Monte Carlo visible-region classifier; the per-point ground truth for the
// sweep implementation.
inline VisibleRegionStats brute_force_visible_region(
    Vec2 observer, const Environment& env, std::size_t n_samples, std::uint64_t seed,
    std::vector<SamplePoint>* samples_out = nullptr) {
    Vec2 lo, hi;
    env.bbox(lo, hi);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(lo.x, hi.x), uy(lo.y, hi.y);
    VisibleRegionStats st;
    st.samples = n_samples;
    st.bbox_area = (hi.x - lo.x) * (hi.y - lo.y);
    if (samples_out) samples_out->reserve(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        Vec2 p{ux(rng), uy(rng)};
        bool ie = point_in_env(p, env);
        bool vis = ie && segment_visible(observer, p, env);
        st.in_env += ie;
        st.visible += vis;
        if (samples_out) samples_out->push_back({p, ie, vis});
    }
    double ph = double(st.visible) / double(st.samples);
    st.area_estimate = ph * st.bbox_area;
    st.sigma = st.bbox_area * std::sqrt(std::max(ph * (1 - ph), 1e-12) / double(st.samples));
    return st;
}

// Fraction of the environment visible from at least one of the positions.
inline double coverage_fraction(const std::vector<Vec2>& positions, const Environment& env,
                                std::size_t n_samples, std::uint64_t seed,
                                std::size_t* uncovered_count = nullptr) {
    Vec2 lo, hi;
    env.bbox(lo, hi);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(lo.x, hi.x), uy(lo.y, hi.y);
    std::size_t in_env = 0, covered = 0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        Vec2 p{ux(rng), uy(rng)};
        if (!point_in_env(p, env)) continue;
        ++in_env;
        bool vis = false;
        for (auto& g : positions)
            if (segment_visible(g, p, env)) {
                vis = true;
                break;
            }
        covered += vis;
    }
    if (uncovered_count) *uncovered_count = in_env - covered;
    return in_env == 0 ? 0.0 : double(covered) / double(in_env);
}

// Mutual-visibility graph connectivity over the given positions.
inline bool check_connected(const std::vector<Vec2>& positions, const Environment& env) {
    std::size_t n = positions.size();
    if (n <= 1) return true;
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        std::size_t i = stack.back();
        stack.pop_back();
        for (std::size_t j = 0; j < n; ++j) {
            if (seen[j]) continue;
            if (almost_equal(positions[i], positions[j], tol::pos) ||
                segment_visible(positions[i], positions[j], env)) {
                seen[j] = 1;
                ++reached;
                stack.push_back(j);
            }
        }
    }
    return reached == n;
}

struct ConnectivityReport {
    bool connected = false;
    int components = 0;
};

inline ConnectivityReport connectivity(const std::vector<Vec2>& positions,
                                       const Environment& env) {
    ConnectivityReport r;
    std::size_t n = positions.size();
    if (n == 0) {
        r.connected = true;
        return r;
    }
    std::vector<char> seen(n, 0);
    for (std::size_t start = 0; start < n; ++start) {
        if (seen[start]) continue;
        ++r.components;
        std::vector<std::size_t> stack{start};
        seen[start] = 1;
        while (!stack.empty()) {
            std::size_t i = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < n; ++j) {
                if (seen[j]) continue;
                if (almost_equal(positions[i], positions[j], tol::pos) ||
                    segment_visible(positions[i], positions[j], env)) {
                    seen[j] = 1;
                    stack.push_back(j);
                }
            }
        }
    }
    r.connected = r.components == 1;
    return r;
}

// Segment containment in a single simple ring, same strategy as
// segment_visible: strict crossings block, touches subdivide.
inline bool segment_in_polygon(Vec2 a, Vec2 b, const Polygon& ring, double eps = tol::on) {
    auto point_in = [&](Vec2 p) {
        for (std::size_t i = 0; i < ring.size(); ++i) {
            Segment e = ring.edge(i);
            if (point_segment_dist(p, e.a, e.b) <= eps) return true;
        }
        return winding_inside(ring, p);
    };
    if (!point_in(a) || !point_in(b)) return false;
    Vec2 r = b - a;
    double rlen = r.norm();
    if (rlen <= eps) return true;
    std::vector<double> touches{0.0, 1.0};
    for (std::size_t i = 0; i < ring.size(); ++i) {
        Segment s = ring.edge(i);
        double o1 = orient(a, b, s.a), o2 = orient(a, b, s.b);
        double o3 = orient(s.a, s.b, a), o4 = orient(s.a, s.b, b);
        double g1 = eps * rlen, g2 = eps * s.length();
        if (((o1 > g1 && o2 < -g1) || (o1 < -g1 && o2 > g1)) &&
            ((o3 > g2 && o4 < -g2) || (o3 < -g2 && o4 > g2)))
            return false;
        auto consider = [&](Vec2 p) {
            if (point_segment_dist(p, a, b) <= eps)
                touches.push_back(std::clamp((p - a).dot(r) / (rlen * rlen), 0.0, 1.0));
        };
        consider(s.a);
        consider(s.b);
        auto hit = line_line(a, b, s.a, s.b);
        if (hit && hit->u >= -eps / std::max(s.length(), eps) &&
            hit->u <= 1 + eps / std::max(s.length(), eps) && hit->t >= 0 && hit->t <= 1)
            touches.push_back(hit->t);
    }
    std::sort(touches.begin(), touches.end());
    for (std::size_t i = 0; i + 1 < touches.size(); ++i) {
        if (touches[i + 1] - touches[i] <= eps / rlen) continue;
        Vec2 mid = a + r * (0.5 * (touches[i] + touches[i + 1]));
        if (!point_in(mid)) return false;
    }
    return true;
}

// --------------------------------------------------------------------------
// Structural audit of a partition tree against the environment.  Returns a
// human-readable violation list; empty means the tree passes every check.

inline std::vector<std::string> validate_partition_tree(const PartitionTree& tree,
                                                        const Environment& env) {
    std::vector<std::string> bad;
    auto flag = [&](const std::string& msg) { bad.push_back(msg); };
    double env_area = env.area();

    if (tree.cells.empty()) {
        flag("tree has no cells");
        return bad;
    }
    if (!tree.has(Ptvuid{})) flag("tree has no root cell");

    double union_area = 0;
    for (auto& [id, c] : tree.cells) {
        std::string tag = "cell " + id.str() + ": ";
        if (c.poly.size() < 3) {
            flag(tag + "degenerate boundary");
            continue;
        }
        union_area += std::abs(c.poly.area());
        if (!c.poly.is_simple()) flag(tag + "boundary not simple");

        // Vantage: a cell vertex at an environment vertex.
        if (!env.vertex_near(c.vantage, tol::on))
            flag(tag + "vantage is not an environment vertex");
        bool vantage_on_ring = false;
        for (auto& v : c.poly.v)
            if (almost_equal(v, c.vantage, tol::on)) vantage_on_ring = true;
        if (!vantage_on_ring) flag(tag + "vantage is not a vertex of the cell");

        // Containment in env and star-convexity from the vantage.
        for (std::size_t i = 0; i < c.poly.size(); ++i) {
            Vec2 v = c.poly[i];
            if (!point_in_env(v, env)) {
                flag(tag + "vertex " + std::to_string(i) + " outside environment");
                continue;
            }
            if (!segment_visible(c.poly.edge(i).a, c.poly.edge(i).b, env))
                flag(tag + "edge " + std::to_string(i) + " leaves the environment");
            if (!segment_in_polygon(c.vantage, v, c.poly))
                flag(tag + "vertex " + std::to_string(i) + " not visible from vantage inside cell");
        }

        // Gap edges must be diagonals; exactly one parent gap unless root.
        int parents = 0;
        for (auto& g : c.gaps) {
            if (g.label == GapLabel::parent) ++parents;
            if (!is_diagonal(g.seg.a, g.seg.b, env))
                flag(tag + "gap edge is not an environment diagonal");
        }
        if (id.is_root() && parents != 0) flag(tag + "root cell has a parent gap");
        if (!id.is_root() && parents != 1)
            flag(tag + "expected exactly one parent gap, found " + std::to_string(parents));
        if (c.unexplored_count() > 0) flag(tag + "has unexplored gap edges");

        // Parent linkage: the parent cell must carry a coinciding child gap.
        if (!id.is_root()) {
            auto pit = tree.cells.find(id.parent());
            if (pit == tree.cells.end()) {
                flag(tag + "parent cell missing from tree");
            } else if (c.parent_gap >= 0) {
                const Segment pg = c.gaps[std::size_t(c.parent_gap)].seg;
                const CellGap* match = pit->second.find_gap(pg);
                if (!match || match->label != GapLabel::child ||
                    pit->second.id.child(match->child_index) != id)
                    flag(tag + "parent gap does not coincide with a child gap of " +
                         pit->second.id.str());
            }
        }
    }

    // Pairwise open disjointness and total coverage.
    std::vector<const Cell*> cs;
    for (auto& [id, c] : tree.cells) cs.push_back(&c);
    for (std::size_t i = 0; i < cs.size(); ++i)
        for (std::size_t j = i + 1; j < cs.size(); ++j)
            if (!openly_disjoint(cs[i]->poly, cs[j]->poly, env_area))
                flag("cells " + cs[i]->id.str() + " and " + cs[j]->id.str() +
                     " overlap with positive area");
    if (std::abs(union_area - env_area) > tol::cov * env_area)
        flag("cell areas sum to " + std::to_string(union_area) + ", environment area is " +
             std::to_string(env_area));

    // Theorem bounds.
    std::size_t n = env.n(), h = env.h();
    if (tree.walls.size() != h)
        flag("phantom walls: " + std::to_string(tree.walls.size()) + ", expected exactly " +
             std::to_string(h));
    if (tree.size() > n + 2 * h - 2)
        flag("cell count " + std::to_string(tree.size()) + " exceeds bound " +
             std::to_string(n + 2 * h - 2));
    bool any_labeled = false;
    std::vector<Vec2> sparse_pts;
    for (auto& [id, c] : tree.cells) {
        if (c.vlabel == VantageLabel::unlabeled) continue;
        any_labeled = true;
        if (c.vlabel != VantageLabel::sparse) continue;
        bool dup = false;
        for (auto& p : sparse_pts)
            if (almost_equal(p, c.vantage, tol::len)) dup = true;
        if (!dup) sparse_pts.push_back(c.vantage);
    }
    if (any_labeled && sparse_pts.size() > (n + 2 * h - 1) / 2)
        flag("sparse locations " + std::to_string(sparse_pts.size()) + " exceed bound " +
             std::to_string((n + 2 * h - 1) / 2));
    return bad;
}

} // namespace visdeploy::verify
