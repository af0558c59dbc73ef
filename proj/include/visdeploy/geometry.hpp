#pragma once

// Planar geometry kernel: points, segments, simple polygons, and polygonal
// environments with holes.  All predicates are epsilon-tolerant; containment
// is closed (boundary points and grazing contact count as inside / visible).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace visdeploy {

namespace tol {
// Pinned tolerances.  eps_area is relative to the environment area.
inline constexpr double len = 1e-9;       // point/segment coincidence
inline constexpr double on = 1e-9;        // on-boundary tests
inline constexpr double area_rel = 1e-12; // open-disjointness overlap
inline constexpr double cov = 1e-6;       // relative coverage/area agreement
inline constexpr double pos = 1e-6;       // waypoint arrival snap
} // namespace tol

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }

    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
    double dist(Vec2 o) const { return (*this - o).norm(); }
    Vec2 normalized() const {
        double n = norm();
        return n > 0 ? Vec2{x / n, y / n} : Vec2{0, 0};
    }
    Vec2 perp() const { return {-y, x}; } // rotate +90 degrees
};

inline bool almost_equal(Vec2 a, Vec2 b, double eps = tol::len) {
    return a.dist(b) <= eps;
}

// Twice the signed area of triangle (a,b,c); >0 when c is left of a->b.
inline double orient(Vec2 a, Vec2 b, Vec2 c) {
    return (b - a).cross(c - a);
}

inline double point_segment_dist(Vec2 p, Vec2 a, Vec2 b) {
    Vec2 d = b - a;
    double l2 = d.norm2();
    if (l2 <= 0) return p.dist(a);
    double t = std::clamp((p - a).dot(d) / l2, 0.0, 1.0);
    return p.dist(a + d * t);
}

inline bool on_segment(Vec2 p, Vec2 a, Vec2 b, double eps = tol::on) {
    return point_segment_dist(p, a, b) <= eps;
}

struct Segment {
    Vec2 a, b;
    Segment() = default;
    Segment(Vec2 a_, Vec2 b_) : a(a_), b(b_) {}
    double length() const { return a.dist(b); }
    Vec2 midpoint() const { return (a + b) * 0.5; }
};

// Endpoint-set equality, orientation-insensitive.
inline bool segments_coincide(const Segment& s, const Segment& t, double eps = tol::len) {
    return (almost_equal(s.a, t.a, eps) && almost_equal(s.b, t.b, eps)) ||
           (almost_equal(s.a, t.b, eps) && almost_equal(s.b, t.a, eps));
}

// Segment [s.a, s.b] lies on segment t (within eps), not necessarily spanning it.
inline bool segment_on_segment(const Segment& s, const Segment& t, double eps = tol::on) {
    return on_segment(s.a, t.a, t.b, eps) && on_segment(s.b, t.a, t.b, eps);
}

// Parameters of the intersection of lines a+t(b-a) and c+u(d-c), if not parallel.
struct LineHit {
    double t, u;
};
inline std::optional<LineHit> line_line(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    Vec2 r = b - a, s = d - c;
    double denom = r.cross(s);
    double scale = std::max({std::abs(r.x), std::abs(r.y), std::abs(s.x), std::abs(s.y), 1.0});
    if (std::abs(denom) <= 1e-14 * scale * scale) return std::nullopt;
    Vec2 ca = c - a;
    return LineHit{ca.cross(s) / denom, ca.cross(r) / denom};
}

struct Polygon {
    std::vector<Vec2> v;

    Polygon() = default;
    explicit Polygon(std::vector<Vec2> pts) : v(std::move(pts)) {}

    std::size_t size() const { return v.size(); }
    Vec2& operator[](std::size_t i) { return v[i]; }
    const Vec2& operator[](std::size_t i) const { return v[i]; }
    Segment edge(std::size_t i) const { return {v[i], v[(i + 1) % v.size()]}; }

    double signed_area() const {
        double s = 0;
        for (std::size_t i = 0, n = v.size(); i < n; ++i)
            s += v[i].cross(v[(i + 1) % n]);
        return 0.5 * s;
    }
    double area() const { return std::abs(signed_area()); }
    bool is_ccw() const { return signed_area() > 0; }
    void make_ccw() {
        if (!is_ccw()) std::reverse(v.begin(), v.end());
    }
    void make_cw() {
        if (is_ccw()) std::reverse(v.begin(), v.end());
    }

    double perimeter() const {
        double s = 0;
        for (std::size_t i = 0; i < v.size(); ++i) s += edge(i).length();
        return s;
    }

    Vec2 centroid() const {
        Vec2 c{0, 0};
        double a = 0;
        for (std::size_t i = 0, n = v.size(); i < n; ++i) {
            double w = v[i].cross(v[(i + 1) % n]);
            c += (v[i] + v[(i + 1) % n]) * w;
            a += w;
        }
        if (std::abs(a) < 1e-30) return v.empty() ? Vec2{} : v[0];
        return c / (3.0 * a);
    }

    void bbox(Vec2& lo, Vec2& hi) const {
        lo = {1e300, 1e300};
        hi = {-1e300, -1e300};
        for (auto& p : v) {
            lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y);
            hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y);
        }
    }

    bool on_boundary(Vec2 p, double eps = tol::on) const {
        for (std::size_t i = 0; i < v.size(); ++i)
            if (on_segment(p, v[i], v[(i + 1) % v.size()], eps)) return true;
        return false;
    }

    // Raw crossing-number parity; undefined for points within eps of the
    // boundary, so callers go through contains().
    bool inside_raw(Vec2 p) const {
        bool in = false;
        for (std::size_t i = 0, n = v.size(); i < n; ++i) {
            Vec2 a = v[i], b = v[(i + 1) % n];
            if ((a.y > p.y) != (b.y > p.y)) {
                double xint = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if (p.x < xint) in = !in;
            }
        }
        return in;
    }

    // Closed containment.
    bool contains(Vec2 p, double eps = tol::on) const {
        if (on_boundary(p, eps)) return true;
        return inside_raw(p);
    }

    // Closed containment of a whole segment: split [a,b] at every boundary
    // crossing and test the midpoint of each piece.
    bool contains_segment(Vec2 a, Vec2 b, double eps = tol::on) const;

    // p is in the kernel iff every boundary point is visible from p within the
    // polygon; for polygons it suffices to see every vertex.
    bool kernel_contains(Vec2 p, double eps = tol::on) const {
        if (!contains(p, eps)) return false;
        for (auto& w : v)
            if (!contains_segment(p, w, eps)) return false;
        return true;
    }

    // Self-intersection test, O(n^2).  Shared endpoints of adjacent edges are
    // fine; any other contact within eps is not.
    bool is_simple(double eps = tol::len) const;
};

namespace detail {

// Collect parameters t in [0,1] where [a,b] meets segment [c,d] (crossing or
// touching, incl. collinear overlap endpoints).  Appends to ts.
inline void collect_crossings(Vec2 a, Vec2 b, Vec2 c, Vec2 d, double eps,
                              std::vector<double>& ts) {
    Vec2 r = b - a;
    double rlen = r.norm();
    if (rlen <= eps) return;
    auto hit = line_line(a, b, c, d);
    if (hit) {
        double ulen = (d - c).norm();
        double tu_eps = ulen > 0 ? eps / ulen : 0;
        double tt_eps = eps / rlen;
        if (hit->u >= -tu_eps && hit->u <= 1 + tu_eps &&
            hit->t >= -tt_eps && hit->t <= 1 + tt_eps)
            ts.push_back(std::clamp(hit->t, 0.0, 1.0));
        return;
    }
    // Parallel.  If collinear, the overlap endpoints are events.
    if (point_segment_dist(c, a, b) <= eps || point_segment_dist(d, a, b) <= eps ||
        point_segment_dist(a, c, d) <= eps) {
        for (Vec2 p : {c, d}) {
            double t = (p - a).dot(r) / (rlen * rlen);
            if (t >= 0 && t <= 1 && point_segment_dist(p, a, b) <= eps)
                ts.push_back(t);
        }
    }
}

} // namespace detail

inline bool Polygon::contains_segment(Vec2 a, Vec2 b, double eps) const {
    if (!contains(a, eps) || !contains(b, eps)) return false;
    if (almost_equal(a, b, eps)) return true;
    std::vector<double> ts{0.0, 1.0};
    for (std::size_t i = 0; i < v.size(); ++i)
        detail::collect_crossings(a, b, v[i], v[(i + 1) % v.size()], eps, ts);
    std::sort(ts.begin(), ts.end());
    double seg_eps = eps / std::max(a.dist(b), eps);
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        if (ts[i + 1] - ts[i] <= seg_eps) continue;
        Vec2 mid = a + (b - a) * (0.5 * (ts[i] + ts[i + 1]));
        if (!contains(mid, eps)) return false;
    }
    return true;
}

inline bool Polygon::is_simple(double eps) const {
    std::size_t n = v.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        if (almost_equal(v[i], v[(i + 1) % n], eps)) return false; // degenerate edge
        for (std::size_t j = i + 1; j < n; ++j) {
            bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            Segment e1 = edge(i), e2 = edge(j);
            auto hit = line_line(e1.a, e1.b, e2.a, e2.b);
            if (hit) {
                double m1 = eps / std::max(e1.length(), eps);
                double m2 = eps / std::max(e2.length(), eps);
                bool meets = hit->t >= -m1 && hit->t <= 1 + m1 &&
                             hit->u >= -m2 && hit->u <= 1 + m2;
                if (!meets) continue;
                if (adjacent) {
                    // Only the shared endpoint may touch.
                    bool at_shared =
                        (j == i + 1 && std::abs(hit->t - 1) <= m1 && std::abs(hit->u) <= m2) ||
                        (i == 0 && j == n - 1 && std::abs(hit->t) <= m1 && std::abs(hit->u - 1) <= m2);
                    if (!at_shared) return false;
                } else {
                    return false;
                }
            } else {
                // Parallel: forbid any collinear overlap beyond a shared endpoint.
                int touches = 0;
                for (Vec2 p : {e2.a, e2.b})
                    if (on_segment(p, e1.a, e1.b, eps)) ++touches;
                for (Vec2 p : {e1.a, e1.b})
                    if (on_segment(p, e2.a, e2.b, eps)) ++touches;
                if (adjacent ? touches > 2 : touches > 0) return false;
            }
        }
    }
    return true;
}

// Environment: one outer boundary (CCW) plus disjoint holes (CW), all inside
// the outer polygon.  E is the closed region; hole interiors are outside E.
struct Environment {
    Polygon outer;
    std::vector<Polygon> holes;

    std::size_t n() const {
        std::size_t c = outer.size();
        for (auto& h : holes) c += h.size();
        return c;
    }
    std::size_t h() const { return holes.size(); }

    double area() const {
        double a = outer.area();
        for (auto& hh : holes) a -= hh.area();
        return a;
    }

    // Global vertex indexing: outer first, then holes in order.
    Vec2 vertex(std::size_t gi) const {
        if (gi < outer.size()) return outer[gi];
        gi -= outer.size();
        for (auto& hh : holes) {
            if (gi < hh.size()) return hh[gi];
            gi -= hh.size();
        }
        throw std::out_of_range("environment vertex index");
    }

    // ring = -1 for outer, else hole index.
    struct VertexRef {
        int ring;
        std::size_t idx;
    };
    VertexRef vertex_ref(std::size_t gi) const {
        if (gi < outer.size()) return {-1, gi};
        gi -= outer.size();
        for (std::size_t k = 0; k < holes.size(); ++k) {
            if (gi < holes[k].size()) return {int(k), gi};
            gi -= holes[k].size();
        }
        throw std::out_of_range("environment vertex index");
    }

    const Polygon& ring(int r) const { return r < 0 ? outer : holes[std::size_t(r)]; }

    template <class F>
    void for_each_edge(F&& f) const {
        for (std::size_t i = 0; i < outer.size(); ++i) f(outer.edge(i));
        for (auto& hh : holes)
            for (std::size_t i = 0; i < hh.size(); ++i) f(hh.edge(i));
    }

    std::vector<Segment> edges() const {
        std::vector<Segment> es;
        es.reserve(n());
        for_each_edge([&](const Segment& s) { es.push_back(s); });
        return es;
    }

    bool on_boundary(Vec2 p, double eps = tol::on) const {
        if (outer.on_boundary(p, eps)) return true;
        for (auto& hh : holes)
            if (hh.on_boundary(p, eps)) return true;
        return false;
    }

    bool contains(Vec2 p, double eps = tol::on) const {
        if (on_boundary(p, eps)) return true;
        if (!outer.inside_raw(p)) return false;
        for (auto& hh : holes)
            if (hh.inside_raw(p)) return false;
        return true;
    }

    // Closed containment of [a,b] in E; this is the visibility test.
    bool contains_segment(Vec2 a, Vec2 b, double eps = tol::on) const {
        if (!contains(a, eps) || !contains(b, eps)) return false;
        if (almost_equal(a, b, eps)) return true;
        std::vector<double> ts{0.0, 1.0};
        for_each_edge([&](const Segment& s) {
            detail::collect_crossings(a, b, s.a, s.b, eps, ts);
        });
        std::sort(ts.begin(), ts.end());
        double seg_eps = eps / std::max(a.dist(b), eps);
        for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
            if (ts[i + 1] - ts[i] <= seg_eps) continue;
            Vec2 mid = a + (b - a) * (0.5 * (ts[i] + ts[i + 1]));
            if (!contains(mid, eps)) return false;
        }
        return true;
    }

    // Nearest environment vertex within eps, if any (collinear-coincidence
    // ambiguities resolve to the nearest).
    std::optional<std::size_t> vertex_near(Vec2 p, double eps = tol::on) const {
        std::optional<std::size_t> best;
        double bestd = eps;
        for (std::size_t gi = 0, N = n(); gi < N; ++gi) {
            double d = vertex(gi).dist(p);
            if (d <= bestd) {
                bestd = d;
                best = gi;
            }
        }
        return best;
    }

    void bbox(Vec2& lo, Vec2& hi) const { outer.bbox(lo, hi); }

    // Structural validation; returns human-readable problems (empty if valid).
    std::vector<std::string> validate(double eps = tol::len) const {
        std::vector<std::string> bad;
        if (outer.size() < 3) bad.push_back("outer boundary has fewer than 3 vertices");
        else if (!outer.is_simple(eps)) bad.push_back("outer boundary self-intersects");
        for (std::size_t k = 0; k < holes.size(); ++k) {
            auto& hh = holes[k];
            std::string tag = "hole " + std::to_string(k);
            if (hh.size() < 3) { bad.push_back(tag + " has fewer than 3 vertices"); continue; }
            if (!hh.is_simple(eps)) { bad.push_back(tag + " self-intersects"); continue; }
            for (auto& p : hh.v)
                if (!outer.contains(p, eps) || outer.on_boundary(p, eps)) {
                    bad.push_back(tag + " is not strictly inside the outer boundary");
                    break;
                }
            for (std::size_t i = 0; i < hh.size(); ++i) {
                Segment e = hh.edge(i);
                for (std::size_t j = 0; j < outer.size(); ++j) {
                    Segment o = outer.edge(j);
                    auto hit = line_line(e.a, e.b, o.a, o.b);
                    if (hit && hit->t > 0 && hit->t < 1 && hit->u > 0 && hit->u < 1)
                        bad.push_back(tag + " crosses the outer boundary");
                }
            }
        }
        for (std::size_t k = 0; k < holes.size(); ++k)
            for (std::size_t m = k + 1; m < holes.size(); ++m) {
                bool overlap = false;
                for (auto& p : holes[m].v)
                    if (holes[k].contains(p, eps)) overlap = true;
                for (auto& p : holes[k].v)
                    if (holes[m].contains(p, eps)) overlap = true;
                // Crossing rectangles can overlap with no vertex of either
                // inside the other; test edge pairs as well.
                for (std::size_t i = 0; !overlap && i < holes[k].size(); ++i) {
                    Segment e = holes[k].edge(i);
                    for (std::size_t j = 0; !overlap && j < holes[m].size(); ++j) {
                        Segment f = holes[m].edge(j);
                        auto hit = line_line(e.a, e.b, f.a, f.b);
                        if (hit && hit->t > 0 && hit->t < 1 && hit->u > 0 && hit->u < 1)
                            overlap = true;
                    }
                }
                if (overlap)
                    bad.push_back("holes " + std::to_string(k) + " and " + std::to_string(m) +
                                  " are not disjoint");
            }
        return bad;
    }

    // Canonical orientations: outer CCW, holes CW.
    void normalize() {
        outer.make_ccw();
        for (auto& hh : holes) hh.make_cw();
    }
};

// Visibility between two points of E (closed: grazing contact counts).
inline bool is_visible(Vec2 a, Vec2 b, const Environment& env, double eps = tol::on) {
    return env.contains_segment(a, b, eps);
}

// Diagonal of the environment: both endpoints are env vertices and the open
// segment lies strictly in the interior (touches no boundary point).
inline bool is_diagonal(Vec2 a, Vec2 b, const Environment& env, double eps = tol::on) {
    if (a.dist(b) <= eps) return false;
    if (!env.vertex_near(a, eps) || !env.vertex_near(b, eps)) return false;
    if (!env.contains_segment(a, b, eps)) return false;
    // Any env vertex strictly inside ]a,b[ is a boundary point of the open segment.
    for (std::size_t i = 0; i < env.n(); ++i) {
        Vec2 v = env.vertex(i);
        if (almost_equal(v, a, eps) || almost_equal(v, b, eps)) continue;
        if (on_segment(v, a, b, eps)) return false;
    }
    // Collinear overlap with a boundary edge puts a whole piece of ]a,b[ on the boundary.
    bool clean = true;
    env.for_each_edge([&](const Segment& e) {
        if (!clean) return;
        Vec2 m = (a + b) * 0.5;
        if (segment_on_segment(Segment{a, m}, e, eps) ||
            segment_on_segment(Segment{m, b}, e, eps))
            clean = false;
        double da = point_segment_dist(a, e.a, e.b);
        double db = point_segment_dist(b, e.a, e.b);
        if (da <= eps && db <= eps) clean = false; // [a,b] runs along this edge
    });
    return clean;
}

// Fan triangulation of a star-convex cell from a kernel vertex.  The vantage
// must be a vertex of the cell; output has |vertices| - 2 triangles tiling it.
inline std::vector<std::array<Vec2, 3>> fan_triangulate(const Polygon& cell, Vec2 vantage) {
    std::size_t m = cell.size();
    std::size_t v0 = m;
    for (std::size_t i = 0; i < m; ++i)
        if (almost_equal(cell[i], vantage, tol::len)) { v0 = i; break; }
    if (v0 == m)
        throw std::invalid_argument("fan_triangulate: vantage is not a cell vertex");
    std::vector<std::array<Vec2, 3>> tris;
    tris.reserve(m - 2);
    for (std::size_t k = 1; k + 1 < m; ++k)
        tris.push_back({cell[v0], cell[(v0 + k) % m], cell[(v0 + k + 1) % m]});
    return tris;
}

// Shortest path between two points of a simple polygon via the visibility
// graph over {a, b} + polygon vertices.  Returns the waypoint polyline
// (including both endpoints); bends only at the region's reflex vertices.
inline std::vector<Vec2> local_shortest_path(Vec2 a, Vec2 b, const Polygon& region,
                                             double eps = tol::on) {
    if (!region.contains(a, eps) || !region.contains(b, eps))
        throw std::invalid_argument("local_shortest_path: endpoint outside region");
    if (region.contains_segment(a, b, eps)) return {a, b};
    std::vector<Vec2> nodes{a, b};
    for (auto& v : region.v) nodes.push_back(v);
    std::size_t n = nodes.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> w(n, std::vector<double>(n, inf));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (region.contains_segment(nodes[i], nodes[j], eps))
                w[i][j] = w[j][i] = nodes[i].dist(nodes[j]);
    // Dijkstra from node 0 (a) to node 1 (b); graphs are tiny.
    std::vector<double> dist(n, inf);
    std::vector<int> prev(n, -1);
    std::vector<bool> done(n, false);
    dist[0] = 0;
    for (std::size_t it = 0; it < n; ++it) {
        std::size_t u = n;
        double best = inf;
        for (std::size_t i = 0; i < n; ++i)
            if (!done[i] && dist[i] < best) { best = dist[i]; u = i; }
        if (u == n) break;
        done[u] = true;
        if (u == 1) break;
        for (std::size_t v = 0; v < n; ++v)
            if (!done[v] && w[u][v] < inf && dist[u] + w[u][v] < dist[v]) {
                dist[v] = dist[u] + w[u][v];
                prev[v] = int(u);
            }
    }
    if (dist[1] == inf)
        throw std::runtime_error("local_shortest_path: endpoints not connected in region");
    std::vector<Vec2> path;
    for (int at = 1; at != -1; at = prev[std::size_t(at)]) path.push_back(nodes[std::size_t(at)]);
    std::reverse(path.begin(), path.end());
    return path;
}

// ---------------------------------------------------------------------------
// Polygon surgery used by the partition: chord splits and half-plane cuts.

// Split poly along the chord [a,b] (both on the boundary; vertices are
// inserted if needed) and return the piece containing keep_ref.
Polygon split_at_chord(const Polygon& poly, Vec2 a, Vec2 b, Vec2 keep_ref,
                       double eps = tol::on);

// Spec-shaped half-plane truncation: part of poly on keep_ref's side of the
// line through cut, clipped at that line (Sutherland-Hodgman).
Polygon truncate_at_segment(const Polygon& poly, const Segment& cut, Vec2 keep_ref);

// Area of intersection of two simple polygons (ear-clip each, then clip
// triangle pairs).  Exact up to floating error; no shared-topology pitfalls.
double overlap_area(const Polygon& p, const Polygon& q);

// Interiors disjoint up to the pinned area tolerance (relative to env_area).
inline bool openly_disjoint(const Polygon& p, const Polygon& q, double env_area) {
    return overlap_area(p, q) <= tol::area_rel * env_area;
}

std::vector<std::array<Vec2, 3>> ear_clip(const Polygon& poly);

// ---------------------------------------------------------------------------
// implementation

namespace detail {

inline int insert_point_on_boundary(Polygon& poly, Vec2 p, double eps) {
    // Returns index of p in poly.v, inserting it on its edge if absent.
    for (std::size_t i = 0; i < poly.size(); ++i)
        if (almost_equal(poly[i], p, eps)) return int(i);
    for (std::size_t i = 0; i < poly.size(); ++i) {
        Segment e = poly.edge(i);
        if (on_segment(p, e.a, e.b, eps)) {
            poly.v.insert(poly.v.begin() + long(i) + 1, p);
            return int(i + 1);
        }
    }
    return -1;
}

} // namespace detail

inline Polygon split_at_chord(const Polygon& poly_in, Vec2 a, Vec2 b, Vec2 keep_ref,
                              double eps) {
    Polygon poly = poly_in;
    int ia = detail::insert_point_on_boundary(poly, a, eps);
    if (ia < 0) throw std::invalid_argument("split_at_chord: first endpoint not on boundary");
    int ib = detail::insert_point_on_boundary(poly, b, eps);
    if (ib < 0) throw std::invalid_argument("split_at_chord: second endpoint not on boundary");
    // Re-locate a in case b's insertion shifted it.
    ia = -1;
    for (std::size_t i = 0; i < poly.size(); ++i)
        if (almost_equal(poly[i], a, eps)) { ia = int(i); break; }
    std::size_t n = poly.size();
    auto walk = [&](std::size_t from, std::size_t to) {
        Polygon piece;
        for (std::size_t i = from; ; i = (i + 1) % n) {
            piece.v.push_back(poly[i]);
            if (i == to) break;
        }
        return piece;
    };
    Polygon p1 = walk(std::size_t(ia), std::size_t(ib)); // a..b + chord b->a
    Polygon p2 = walk(std::size_t(ib), std::size_t(ia)); // b..a + chord a->b
    if (p1.size() < 3) return p2;
    if (p2.size() < 3) return p1;
    bool in1 = p1.contains(keep_ref, eps);
    bool in2 = p2.contains(keep_ref, eps);
    if (in1 && in2) return p1.area() >= p2.area() ? p1 : p2; // ref on the chord: ambiguous
    if (in1) return p1;
    if (in2) return p2;
    throw std::invalid_argument("split_at_chord: reference point in neither piece");
}

inline Polygon truncate_at_segment(const Polygon& poly, const Segment& cut, Vec2 keep_ref) {
    Vec2 d = cut.b - cut.a;
    double side_ref = d.cross(keep_ref - cut.a);
    double keep_sign = side_ref >= 0 ? 1.0 : -1.0;
    Polygon out;
    std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 cur = poly[i], nxt = poly[(i + 1) % n];
        double sc = keep_sign * d.cross(cur - cut.a);
        double sn = keep_sign * d.cross(nxt - cut.a);
        bool cin = sc >= -tol::len, nin = sn >= -tol::len;
        if (cin) out.v.push_back(cur);
        if (cin != nin) {
            double t = sc / (sc - sn);
            out.v.push_back(cur + (nxt - cur) * t);
        }
    }
    // Drop near-duplicate consecutive vertices.
    Polygon clean;
    for (auto& p : out.v) {
        if (clean.v.empty() || !almost_equal(clean.v.back(), p, tol::len)) clean.v.push_back(p);
    }
    while (clean.size() >= 2 && almost_equal(clean.v.front(), clean.v.back(), tol::len))
        clean.v.pop_back();
    return clean;
}

inline std::vector<std::array<Vec2, 3>> ear_clip(const Polygon& poly_in) {
    Polygon poly = poly_in;
    poly.make_ccw();
    std::vector<std::array<Vec2, 3>> tris;
    std::vector<Vec2>& v = poly.v;
    int guard = int(v.size()) * int(v.size()) + 16;
    while (v.size() > 3 && guard-- > 0) {
        bool clipped = false;
        std::size_t n = v.size();
        for (std::size_t i = 0; i < n; ++i) {
            Vec2 a = v[(i + n - 1) % n], b = v[i], c = v[(i + 1) % n];
            if (orient(a, b, c) <= 1e-15) continue; // reflex or degenerate corner
            bool ear = true;
            for (std::size_t j = 0; j < n && ear; ++j) {
                if (j == (i + n - 1) % n || j == i || j == (i + 1) % n) continue;
                Vec2 p = v[j];
                if (orient(a, b, p) >= -1e-15 && orient(b, c, p) >= -1e-15 &&
                    orient(c, a, p) >= -1e-15)
                    ear = false;
            }
            if (ear) {
                tris.push_back({a, b, c});
                v.erase(v.begin() + long(i));
                clipped = true;
                break;
            }
        }
        if (!clipped) break; // numerically stuck; emit what we have
    }
    if (v.size() == 3) tris.push_back({v[0], v[1], v[2]});
    return tris;
}

namespace detail {

// Convex clip of triangle t against triangle u, returns area of overlap.
inline double tri_tri_overlap(const std::array<Vec2, 3>& t, const std::array<Vec2, 3>& u) {
    std::vector<Vec2> cur(t.begin(), t.end());
    double su = orient(u[0], u[1], u[2]);
    if (std::abs(su) < 1e-30) return 0;
    double sgn = su > 0 ? 1.0 : -1.0;
    for (int k = 0; k < 3 && !cur.empty(); ++k) {
        Vec2 a = u[std::size_t(k)], b = u[std::size_t((k + 1) % 3)];
        std::vector<Vec2> next;
        std::size_t n = cur.size();
        for (std::size_t i = 0; i < n; ++i) {
            Vec2 p = cur[i], q = cur[(i + 1) % n];
            double sp = sgn * orient(a, b, p);
            double sq = sgn * orient(a, b, q);
            bool pin = sp >= 0, qin = sq >= 0;
            if (pin) next.push_back(p);
            if (pin != qin) next.push_back(p + (q - p) * (sp / (sp - sq)));
        }
        cur.swap(next);
    }
    if (cur.size() < 3) return 0;
    double s = 0;
    for (std::size_t i = 0; i < cur.size(); ++i)
        s += cur[i].cross(cur[(i + 1) % cur.size()]);
    return std::abs(0.5 * s);
}

} // namespace detail

inline double overlap_area(const Polygon& p, const Polygon& q) {
    if (p.size() < 3 || q.size() < 3) return 0;
    Vec2 plo, phi, qlo, qhi;
    p.bbox(plo, phi);
    q.bbox(qlo, qhi);
    if (phi.x < qlo.x || qhi.x < plo.x || phi.y < qlo.y || qhi.y < plo.y) return 0;
    auto tp = ear_clip(p);
    auto tq = ear_clip(q);
    double total = 0;
    for (auto& a : tp)
        for (auto& b : tq) total += detail::tri_tri_overlap(a, b);
    return total;
}

} // namespace visdeploy
