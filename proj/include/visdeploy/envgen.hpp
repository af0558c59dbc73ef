#pragma once

// Deterministic environment generators: two logarithmic-spiral corridor
// families that realize the partition's worst cases, and a seeded random
// family for sampling tests.
//
// Both corridor families rely on the same occlusion principle: walking a
// curved corridor of width w·r whose walls are sampled every delta radians,
// the chord sag (1-cos(delta/2))·r of the near wall hides everything more
// than two wall vertices ahead.  Every visibility cell is then spanned by a
// handful of consecutive wall vertices, which keeps the partition's cells
// small and its vantage chain dense.

#include "geometry.hpp"
#include "visibility.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace visdeploy::envgen {

namespace detail {

// Shared corridor proportions.  The growth rate keeps successive turns of
// the spiral from touching; width and step are matched so that the sag/width
// ratio stays in the occluding regime at every scale.
constexpr double kStep = 3.141592653589793 / 6; // 30 degrees
constexpr double kWidth = 0.07;
constexpr double kGrowth = 1.3;

inline double spiral_radius(double theta) {
    return std::pow(kGrowth, theta / (2 * 3.141592653589793));
}

inline Vec2 polar(double theta, double r) {
    return Vec2(std::cos(theta), std::sin(theta)) * r;
}

// Partition precondition: from every environment vertex, each viewing window
// of the vertex-limited visibility polygon must be an environment diagonal.
// A window whose far side hides a boundary sliver with no visible vertex
// cannot be bounded by a ring over environment vertices, so cells built from
// that vantage would cut through the boundary.
inline bool windows_are_clean(const Environment& env) {
    for (std::size_t i = 0; i < env.n(); ++i) {
        try {
            auto vv = vertex_limited_visibility_polygon(env.vertex(i), env);
            for (std::size_t e = 0; e < vv.poly.size(); ++e)
                if (vv.edge_kind[e] == EdgeKind::gap) {
                    Segment s = vv.poly.edge(e);
                    if (!is_diagonal(s.a, s.b, env)) return false;
                }
        } catch (const std::runtime_error&) {
            return false;
        }
    }
    return true;
}

} // namespace detail

// Spiral corridor without holes.  Outer wall vertices sit at angles i*step,
// inner wall vertices are staggered at (i+0.5)*step; the ring is the outer
// wall followed by the inner wall reversed.  Rooting the partition at
// vertex 0 (the outer end of the entrance) makes every cell a triangle, so
// the cell count reaches n + 2h - 2 and the sparse-location count reaches
// floor((n + 2h - 1)/2) simultaneously.
inline Environment comb_no_holes(int teeth) {
    using namespace detail;
    if (teeth < 1) throw std::invalid_argument("comb_no_holes: teeth must be >= 1");
    int m = 2 * teeth; // corridor steps; n = 2m + 2
    std::vector<Vec2> outer, inner;
    for (int i = 0; i <= m; ++i) {
        double to = i * kStep, ti = (i + 0.5) * kStep;
        outer.push_back(polar(to, spiral_radius(to) * (1.0 + kWidth)));
        inner.push_back(polar(ti, spiral_radius(ti)));
    }
    Environment env;
    env.outer.v = std::move(outer);
    for (int i = m; i >= 0; --i) env.outer.v.push_back(inner[i]);
    env.normalize();
    return env;
}

// Spiral corridor with one thin arc-band hole ("slit") per tooth.  Each slit
// splits the corridor into an upper and a lower passage that rejoin past the
// slit's far tip, so the partition grows one branch conflict — and therefore
// exactly one phantom wall — per hole.
//
// The slit geometry is tuned so that the branch, merge, and both passage
// chains tile into triangles and quadrilaterals with no vertex count above
// four, and so that the leaves-to-root labeling alternates perfectly: the
// sparse-location count attains floor((n + 2h - 1)/2) for every teeth count.
// Two details carry that tuning:
//   - a small bump vertex on the inner wall below each slit lengthens the
//     lower passage's cell chain by one, which flips the passage head's
//     label off the branch cell's sparse corner;
//   - the outer slit face carries four vertices to the inner face's three,
//     which keeps the per-tooth vertex count even so the bound's floor
//     advances by the same amount for every tooth.
inline Environment comb_with_holes(int teeth) {
    using namespace detail;
    if (teeth < 1) throw std::invalid_argument("comb_with_holes: teeth must be >= 1");
    const double hi = 1.0 + 0.45 * kWidth; // outer slit face height
    const double lo = 1.0 + 0.30 * kWidth; // inner slit face height
    const double bump = 1.008;             // inner-wall bump below each slit
    const int period = 4;                  // corridor steps per tooth
    double end = (teeth * period + 1) * kStep;

    Environment env;
    for (double th = 0; th < end + 1e-9; th += kStep)
        env.outer.v.push_back(polar(th, spiral_radius(th) * (1.0 + kWidth)));
    std::vector<std::pair<double, double>> inner; // angle, radial factor
    for (double th = end - kStep / 2; th > 0; th -= kStep)
        inner.push_back({th, 1.0});
    for (int k = 0; k < teeth; ++k) {
        double z0 = (k * period + 2) * kStep;
        inner.push_back({z0 + kStep, bump});
    }
    std::sort(inner.begin(), inner.end(),
              [](auto& a, auto& b) { return a.first > b.first; });
    for (auto& [th, f] : inner) env.outer.v.push_back(polar(th, spiral_radius(th) * f));

    for (int k = 0; k < teeth; ++k) {
        double z0 = (k * period + 2) * kStep;
        const double above[] = {z0 + kStep / 4, z0 + kStep / 2, z0 + kStep,
                                z0 + 5 * kStep / 4};
        const double below[] = {z0 + kStep / 4, z0 + 3 * kStep / 4, z0 + 5 * kStep / 4};
        Polygon hole;
        for (double th : above) hole.v.push_back(polar(th, spiral_radius(th) * hi));
        for (int i = 2; i >= 0; --i)
            hole.v.push_back(polar(below[i], spiral_radius(below[i]) * lo));
        env.holes.push_back(std::move(hole));
    }
    env.normalize();
    return env;
}

// Seeded random environment: a jittered radial star with `h` small rotated
// rectangular holes placed by rejection sampling.  Vertex count is exactly
// n_target (star ring n_target - 4h, four per hole); output is a pure
// function of the arguments.
inline Environment random_env(int n_target, int h, std::uint32_t seed) {
    if (h < 0 || n_target < 3 + 4 * h)
        throw std::invalid_argument("random_env: need n_target >= 3 + 4h");
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    int ring = n_target - 4 * h;
    const double two_pi = 2 * 3.141592653589793;
    for (int build = 0; build < 64; ++build) {
        Environment env;
        for (int i = 0; i < ring; ++i) {
            // Jitter below half a slot keeps the angles strictly increasing, so
            // the star ring can never self-intersect.
            double th = two_pi * (i + 0.45 * unit(rng)) / ring;
            double r = 0.55 + 0.45 * unit(rng);
            env.outer.v.push_back(detail::polar(th, r));
        }
        env.normalize();
        if (!detail::windows_are_clean(env)) continue;

        bool ok = true;
        for (int k = 0; k < h && ok; ++k) {
            double scale = 0.06;
            for (int attempt = 0;; ++attempt) {
                if (attempt > 0 && attempt % 200 == 0) scale *= 0.7;
                double cx = -1 + 2 * unit(rng), cy = -1 + 2 * unit(rng);
                double a = scale * (0.5 + unit(rng)), b = scale * (0.5 + unit(rng));
                double rot = two_pi * unit(rng);
                Vec2 u(std::cos(rot), std::sin(rot)), v(-u.y, u.x);
                Polygon hole;
                Vec2 c(cx, cy);
                hole.v = {c + u * a + v * b, c - u * a + v * b,
                          c - u * a - v * b, c + u * a - v * b};
                env.holes.push_back(hole);
                env.normalize();
                if (env.validate().empty() && detail::windows_are_clean(env)) break;
                env.holes.pop_back();
                if (attempt > 5000) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) return env;
    }
    throw std::runtime_error("random_env: could not generate a clean environment");
}

} // namespace visdeploy::envgen
