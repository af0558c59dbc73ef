#include <catch2/catch_amalgamated.hpp>

#include "visdeploy/geometry.hpp"
#include "visdeploy/verify.hpp"

using namespace visdeploy;

namespace {

Environment unit_square() {
    Environment env;
    env.outer.v = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    return env;
}

// Square with a centered square hole.
Environment square_with_hole() {
    Environment env;
    env.outer.v = {{0, 0}, {4, 0}, {4, 4}, {0, 4}};
    Polygon hole;
    hole.v = {{1.5, 1.5}, {1.5, 2.5}, {2.5, 2.5}, {2.5, 1.5}}; // CW
    env.holes.push_back(hole);
    return env;
}

// Nonconvex: L-shaped room.
Environment l_room() {
    Environment env;
    env.outer.v = {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
    return env;
}

} // namespace

TEST_CASE("orientation and segment predicates") {
    CHECK(orient({0, 0}, {1, 0}, {0, 1}) > 0);
    CHECK(orient({0, 0}, {0, 1}, {1, 0}) < 0);
    CHECK(orient({0, 0}, {1, 1}, {2, 2}) == Catch::Approx(0.0).margin(1e-15));

    CHECK(on_segment({0.5, 0}, {0, 0}, {1, 0}));
    CHECK(on_segment({1, 0}, {0, 0}, {1, 0}));
    CHECK_FALSE(on_segment({0.5, 0.01}, {0, 0}, {1, 0}));

    CHECK(segments_coincide({{0, 0}, {1, 0}}, {{1, 0}, {0, 0}}));
    CHECK_FALSE(segments_coincide({{0, 0}, {1, 0}}, {{0, 0}, {0.9, 0}}));
}

TEST_CASE("polygon area, orientation, perimeter") {
    Polygon sq;
    sq.v = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(sq.signed_area() == Catch::Approx(1.0));
    CHECK(sq.is_ccw());
    CHECK(sq.perimeter() == Catch::Approx(4.0));
    sq.make_cw();
    CHECK(sq.signed_area() == Catch::Approx(-1.0));

    Polygon tri;
    tri.v = {{0, 0}, {2, 0}, {0, 2}};
    CHECK(tri.area() == Catch::Approx(2.0));
}

TEST_CASE("polygon containment is closed") {
    Polygon sq;
    sq.v = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(sq.contains({0.5, 0.5}));
    CHECK(sq.contains({0, 0}));       // corner
    CHECK(sq.contains({0.5, 0}));     // edge
    CHECK(sq.contains({0.5, 1e-12})); // just inside with tolerance
    CHECK_FALSE(sq.contains({1.5, 0.5}));
    CHECK_FALSE(sq.contains({0.5, -0.1}));
}

TEST_CASE("polygon simplicity") {
    Polygon good;
    good.v = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(good.is_simple());

    Polygon bowtie;
    bowtie.v = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
    CHECK_FALSE(bowtie.is_simple());

    Polygon dup;
    dup.v = {{0, 0}, {1, 0}, {1, 0}, {0, 1}};
    CHECK_FALSE(dup.is_simple());
}

TEST_CASE("environment validation") {
    auto env = square_with_hole();
    CHECK(env.validate().empty());
    CHECK(env.n() == 8);
    CHECK(env.h() == 1);
    CHECK(env.area() == Catch::Approx(15.0));

    SECTION("hole outside the outer boundary is rejected") {
        Environment bad = env;
        for (auto& p : bad.holes[0].v) p.x += 10;
        CHECK_FALSE(bad.validate().empty());
    }
    SECTION("overlapping holes are rejected") {
        Environment bad = env;
        Polygon h2 = bad.holes[0];
        for (auto& p : h2.v) p.x += 0.3;
        bad.holes.push_back(h2);
        CHECK_FALSE(bad.validate().empty());
    }
    SECTION("global vertex indexing is outer-first") {
        CHECK(almost_equal(env.vertex(0), {0, 0}));
        CHECK(almost_equal(env.vertex(4), {1.5, 1.5}));
    }
}

TEST_CASE("visibility in a convex room is unrestricted") {
    auto env = unit_square();
    CHECK(is_visible({0.1, 0.1}, {0.9, 0.9}, env));
    CHECK(is_visible({0, 0}, {1, 1}, env));
    CHECK(is_visible({0, 0}, {1, 0}, env)); // along the boundary
}

TEST_CASE("holes block visibility; grazing does not") {
    auto env = square_with_hole();
    CHECK_FALSE(is_visible({0.5, 2}, {3.5, 2}, env));  // straight through the hole
    CHECK(is_visible({0.5, 0.5}, {3.5, 0.5}, env));    // below the hole
    // Grazing along the hole's bottom edge counts as visible.
    CHECK(is_visible({0.5, 1.5}, {3.5, 1.5}, env));
    // Touching a hole corner on the way past.
    CHECK(is_visible({0.5, 0.5}, {2.5, 1.5}, env));
}

TEST_CASE("visibility around a reflex corner") {
    auto env = l_room();
    CHECK_FALSE(is_visible({1.8, 0.8}, {0.2, 1.8}, env)); // blocked by corner (1,1)
    CHECK(is_visible({0.2, 0.2}, {0.2, 1.8}, env));
    CHECK(is_visible({1.8, 0.2}, {0.2, 0.2}, env));
    // Through the corner exactly: [1.5,0.5]-[0.5,1.5] passes through (1,1).
    CHECK(is_visible({1.5, 0.5}, {0.5, 1.5}, env));
}

TEST_CASE("main-path visibility agrees with the oracle on random pairs") {
    auto env = square_with_hole();
    std::mt19937_64 rng(20260823);
    std::uniform_real_distribution<double> u(0.0, 4.0);
    std::size_t checked = 0, disagreements = 0;
    for (int i = 0; i < 4000; ++i) {
        Vec2 a{u(rng), u(rng)}, b{u(rng), u(rng)};
        if (!env.contains(a) || !env.contains(b)) continue;
        ++checked;
        bool main_path = is_visible(a, b, env);
        bool oracle = verify::segment_visible(a, b, env);
        disagreements += (main_path != oracle);
    }
    CHECK(checked > 2000);
    CHECK(disagreements == 0);
}

TEST_CASE("oracle point containment matches main path") {
    auto env = square_with_hole();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.5, 4.5);
    for (int i = 0; i < 5000; ++i) {
        Vec2 p{u(rng), u(rng)};
        CHECK(env.contains(p) == verify::point_in_env(p, env));
    }
}

TEST_CASE("split_at_chord keeps the requested side") {
    Polygon sq;
    sq.v = {{0, 0}, {2, 0}, {2, 2}, {0, 2}};
    // Vertical chord through the middle.
    Polygon left = split_at_chord(sq, {1, 0}, {1, 2}, {0.2, 1});
    CHECK(left.area() == Catch::Approx(2.0));
    CHECK(left.contains({0.5, 1}));
    CHECK_FALSE(left.contains({1.5, 1}));

    Polygon right = split_at_chord(sq, {1, 0}, {1, 2}, {1.8, 1});
    CHECK(right.area() == Catch::Approx(2.0));

    // Chord from an existing vertex to an edge midpoint.
    Polygon piece = split_at_chord(sq, {0, 0}, {2, 1}, {1.8, 0.2});
    CHECK(piece.area() == Catch::Approx(1.0)); // triangle (0,0),(2,0),(2,1)
}

TEST_CASE("truncate_at_segment clips to the half plane") {
    Polygon sq;
    sq.v = {{0, 0}, {2, 0}, {2, 2}, {0, 2}};
    Polygon lower = truncate_at_segment(sq, {{0, 1}, {2, 1}}, {1, 0.2});
    CHECK(lower.area() == Catch::Approx(2.0));
    CHECK(lower.contains({1, 0.5}));
    CHECK_FALSE(lower.contains({1, 1.5}));
}

TEST_CASE("ear clip and overlap area") {
    Polygon sq;
    sq.v = {{0, 0}, {2, 0}, {2, 2}, {0, 2}};
    auto tris = ear_clip(sq);
    double total = 0;
    for (auto& t : tris) total += std::abs(orient(t[0], t[1], t[2])) * 0.5;
    CHECK(total == Catch::Approx(4.0));

    Polygon lshape;
    lshape.v = {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
    auto lt = ear_clip(lshape);
    double lta = 0;
    for (auto& t : lt) lta += std::abs(orient(t[0], t[1], t[2])) * 0.5;
    CHECK(lta == Catch::Approx(3.0));

    Polygon shifted = sq;
    for (auto& p : shifted.v) p += Vec2{1, 1};
    CHECK(overlap_area(sq, shifted) == Catch::Approx(1.0));

    // Sharing only an edge: zero-area overlap.
    Polygon beside = sq;
    for (auto& p : beside.v) p += Vec2{2, 0};
    CHECK(overlap_area(sq, beside) == Catch::Approx(0.0).margin(1e-12));
    CHECK(openly_disjoint(sq, beside, 16.0));
    CHECK_FALSE(openly_disjoint(sq, shifted, 16.0));
}

TEST_CASE("kernel membership") {
    Polygon lshape;
    lshape.v = {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
    CHECK(lshape.kernel_contains({0.5, 0.5}));
    CHECK_FALSE(lshape.kernel_contains({1.8, 0.5})); // cannot see the top arm
    CHECK(lshape.kernel_contains({1, 1}));           // the reflex corner itself
}
