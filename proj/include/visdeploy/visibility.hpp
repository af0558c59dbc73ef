#pragma once

// Visibility polygons by angular sweep.  The sweep sorts environment vertices
// by bearing around the observer and, between consecutive event bearings,
// identifies the nearest boundary edge with a midpoint ray; the polygon chain
// is that edge's line cut by the two event rays.  Radial jumps between
// consecutive chain pieces are the viewing windows (gap edges).
//
// The vertex-limited variant keeps only vertices that coincide with
// environment vertices; its gap edges are diagonals of E.

#include "geometry.hpp"

#include <cstdint>

namespace visdeploy {

enum class EdgeKind : std::uint8_t {
    boundary, // lies on the environment boundary
    gap       // open interior lies in int(E)
};

struct VisibilityPolygon {
    Vec2 observer;
    Polygon poly;                    // CCW
    std::vector<EdgeKind> edge_kind; // per poly edge i: (v[i], v[i+1])

    std::vector<Segment> gap_edges() const {
        std::vector<Segment> gs;
        for (std::size_t i = 0; i < poly.size(); ++i)
            if (edge_kind[i] == EdgeKind::gap) gs.push_back(poly.edge(i));
        return gs;
    }
};

namespace vis_detail {

struct RayHit {
    double t = 1e300; // distance along the unit ray
    int edge = -1;    // flat edge index
    Vec2 ea, eb;
};

struct FlatEdges {
    std::vector<Vec2> a, b;
    void build(const Environment& env) {
        env.for_each_edge([&](const Segment& s) {
            a.push_back(s.a);
            b.push_back(s.b);
        });
    }
};

// Nearest non-grazing boundary hit of the ray e + t*d, t > t_min.
inline RayHit nearest_hit(const FlatEdges& E, Vec2 e, Vec2 d, double t_min) {
    RayHit best;
    for (std::size_t i = 0; i < E.a.size(); ++i) {
        Vec2 p = E.a[i], q = E.b[i];
        Vec2 s = q - p;
        double denom = d.cross(s);
        double scale = std::max(1.0, s.norm());
        if (std::abs(denom) <= 1e-13 * scale) continue; // parallel or radial: grazing
        Vec2 pe = p - e;
        double t = pe.cross(s) / denom;
        double u = pe.cross(d) / denom;
        double ueps = 1e-12 / scale;
        if (u < -ueps || u > 1 + ueps) continue;
        if (t <= t_min) continue;
        if (t < best.t) {
            best.t = t;
            best.edge = int(i);
            best.ea = p;
            best.eb = q;
        }
    }
    return best;
}

inline double wrap_angle(double a) {
    constexpr double twopi = 6.283185307179586476925286766559;
    a = std::fmod(a, twopi);
    if (a < 0) a += twopi;
    return a;
}

} // namespace vis_detail

// Visibility polygon of an observer in E.  The observer may be in the
// interior, at a boundary vertex, or on an edge interior; outside E is an
// error.
inline VisibilityPolygon visibility_polygon(Vec2 e, const Environment& env,
                                            double eps = tol::on) {
    using namespace vis_detail;
    constexpr double twopi = 6.283185307179586476925286766559;

    if (!env.contains(e, eps))
        throw std::invalid_argument("visibility_polygon: observer outside environment");

    FlatEdges E;
    E.build(env);

    // Angular domain of interior directions at e.
    bool on_bdy = false;
    double a_start = 0, a_span = twopi;
    if (auto vi = env.vertex_near(e, eps)) {
        on_bdy = true;
        auto ref = env.vertex_ref(*vi);
        const Polygon& ring = env.ring(ref.ring);
        std::size_t m = ring.size();
        Vec2 at = ring[ref.idx];
        Vec2 prev = ring[(ref.idx + m - 1) % m];
        Vec2 next = ring[(ref.idx + 1) % m];
        e = at; // snap
        // Interior of E is to the left of every directed ring edge (outer CCW,
        // holes CW), so interior directions run CCW from (e->next) to (e->prev).
        a_start = std::atan2((next - at).y, (next - at).x);
        a_span = wrap_angle(std::atan2((prev - at).y, (prev - at).x) - a_start);
        if (a_span <= 1e-12) a_span = twopi; // degenerate needle; fall back
    } else {
        // On an edge interior?
        int found = -1;
        for (std::size_t i = 0; i < E.a.size(); ++i)
            if (on_segment(e, E.a[i], E.b[i], eps)) {
                found = int(i);
                break;
            }
        if (found >= 0) {
            on_bdy = true;
            Vec2 d = E.b[std::size_t(found)] - E.a[std::size_t(found)];
            a_start = std::atan2(d.y, d.x); // interior is left of the edge
            a_span = 3.141592653589793238462643383279;
        }
    }

    // Event bearings relative to a_start.
    std::vector<double> evs;
    evs.push_back(0);
    evs.push_back(a_span);
    for (std::size_t gi = 0, N = env.n(); gi < N; ++gi) {
        Vec2 v = env.vertex(gi);
        if (almost_equal(v, e, eps)) continue;
        double rel = wrap_angle(std::atan2((v - e).y, (v - e).x) - a_start);
        if (!on_bdy) {
            evs.push_back(rel);
        } else if (rel <= a_span + 1e-12) {
            evs.push_back(std::min(rel, a_span));
        }
    }
    std::sort(evs.begin(), evs.end());
    evs.erase(std::unique(evs.begin(), evs.end(),
                          [](double x, double y) { return std::abs(x - y) < 1e-12; }),
              evs.end());

    // Chain construction.
    Polygon chain;
    auto push = [&](Vec2 p) {
        if (chain.v.empty() || !almost_equal(chain.v.back(), p, tol::len)) chain.v.push_back(p);
    };
    auto ray_dir = [&](double rel) {
        return Vec2{std::cos(a_start + rel), std::sin(a_start + rel)};
    };
    double t_min = on_bdy ? 10 * eps : 0.0;

    std::size_t k = evs.size();
    std::size_t nspan = on_bdy ? k - 1 : k; // wrap for interior observers
    for (std::size_t i = 0; i < nspan; ++i) {
        double a1 = evs[i];
        double a2 = (i + 1 < k) ? evs[i + 1] : evs[0] + twopi;
        if (a2 - a1 <= 1e-12) continue;
        Vec2 dm = ray_dir(0.5 * (a1 + a2));
        RayHit hit = nearest_hit(E, e, dm, t_min);
        if (hit.edge < 0) continue; // should not happen in a valid environment
        for (double a : {a1, a2}) {
            Vec2 d = ray_dir(a);
            auto cut = line_line(e, e + d, hit.ea, hit.eb);
            if (cut && cut->t > t_min)
                push(e + d * cut->t);
            else {
                // Event ray parallel to the hit edge's line: closest endpoint.
                Vec2 cand = hit.ea.dist(e) < hit.eb.dist(e) ? hit.ea : hit.eb;
                push(cand);
            }
        }
    }
    if (on_bdy) {
        // Observer itself is a polygon vertex; chain spans the interior cone.
        Polygon out;
        out.v.push_back(e);
        for (auto& p : chain.v)
            if (!almost_equal(p, e, tol::len)) out.v.push_back(p);
        chain = out;
    } else {
        while (chain.size() >= 2 && almost_equal(chain.v.front(), chain.v.back(), tol::len))
            chain.v.pop_back();
    }

    // Insert environment vertices lying in edge interiors (windows through
    // collinear vertices, closure pieces of boundary observers).
    Polygon refined;
    std::size_t cn = chain.size();
    for (std::size_t i = 0; i < cn; ++i) {
        Vec2 a = chain[i], b = chain[(i + 1) % cn];
        refined.v.push_back(a);
        std::vector<std::pair<double, Vec2>> ins;
        for (std::size_t gi = 0, N = env.n(); gi < N; ++gi) {
            Vec2 v = env.vertex(gi);
            if (almost_equal(v, a, tol::len) || almost_equal(v, b, tol::len)) continue;
            if (on_segment(v, a, b, eps)) {
                double t = (v - a).dot(b - a) / std::max((b - a).norm2(), 1e-30);
                ins.emplace_back(t, v);
            }
        }
        std::sort(ins.begin(), ins.end(),
                  [](auto& x, auto& y) { return x.first < y.first; });
        for (auto& [t, v] : ins) refined.v.push_back(v);
    }

    VisibilityPolygon out;
    out.observer = e;
    out.poly = refined;
    out.poly.make_ccw();
    out.edge_kind.resize(out.poly.size());
    for (std::size_t i = 0; i < out.poly.size(); ++i) {
        Vec2 mid = out.poly.edge(i).midpoint();
        out.edge_kind[i] = env.on_boundary(mid, eps) ? EdgeKind::boundary : EdgeKind::gap;
    }
    return out;
}

// Vertex-limited visibility polygon: every vertex of V(e) that does not
// coincide with an environment vertex is deleted (the polygon closes up along
// the chords, a sequence of kernel-preserving truncations).  When the observer
// is itself an environment vertex it is kept.
inline VisibilityPolygon vertex_limited_visibility_polygon(Vec2 e, const Environment& env,
                                                           double eps = tol::on) {
    VisibilityPolygon full = visibility_polygon(e, env, eps);
    VisibilityPolygon out;
    out.observer = full.observer;
    for (auto& p : full.poly.v) {
        if (auto gi = env.vertex_near(p, eps)) {
            Vec2 snapped = env.vertex(*gi);
            if (out.poly.v.empty() || !almost_equal(out.poly.v.back(), snapped, tol::len))
                out.poly.v.push_back(snapped);
        }
    }
    while (out.poly.size() >= 2 &&
           almost_equal(out.poly.v.front(), out.poly.v.back(), tol::len))
        out.poly.v.pop_back();
    if (out.poly.size() < 3)
        throw std::runtime_error("vertex-limited visibility polygon is degenerate");
    out.poly.make_ccw();
    out.edge_kind.resize(out.poly.size());
    for (std::size_t i = 0; i < out.poly.size(); ++i) {
        Vec2 mid = out.poly.edge(i).midpoint();
        out.edge_kind[i] = env.on_boundary(mid, eps) ? EdgeKind::boundary : EdgeKind::gap;
    }
    return out;
}

// Recompute per-edge kinds of an arbitrary cell polygon against env.
inline std::vector<EdgeKind> classify_edges(const Polygon& poly, const Environment& env,
                                            double eps = tol::on) {
    std::vector<EdgeKind> kinds(poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i)
        kinds[i] = env.on_boundary(poly.edge(i).midpoint(), eps) ? EdgeKind::boundary
                                                                 : EdgeKind::gap;
    return kinds;
}

} // namespace visdeploy
