#include <catch2/catch_amalgamated.hpp>

#include "visdeploy/envgen.hpp"
#include "visdeploy/partition.hpp"
#include "visdeploy/verify.hpp"

using namespace visdeploy;
using namespace visdeploy::envgen;

namespace {

PartitionResult partition_of(const Environment& env) {
    auto res = incremental_partition(env, 0);
    label_vantage_points(res.tree);
    return res;
}

} // namespace

TEST_CASE("comb_no_holes hits the cell-count ceiling") {
    for (int teeth : {1, 3}) {
        Environment env = comb_no_holes(teeth);
        CAPTURE(teeth);
        REQUIRE(env.validate().empty());
        REQUIRE(env.h() == 0);
        auto res = partition_of(env);
        auto rep = count_bounds(res.tree, env);
        // Every cell a triangle: the tiling identity sum(|V_c|-2) = n-2
        // forces cells == n-2 exactly.
        CHECK(rep.cells == rep.cells_bound);
        CHECK(rep.walls == 0);
        CHECK(verify::validate_partition_tree(res.tree, env).empty());
    }
}

TEST_CASE("comb_with_holes hits the sparse-vantage ceiling") {
    for (int teeth : {1, 4}) {
        Environment env = comb_with_holes(teeth);
        CAPTURE(teeth);
        REQUIRE(env.validate().empty());
        REQUIRE(env.h() == static_cast<std::size_t>(teeth));
        auto res = partition_of(env);
        auto rep = count_bounds(res.tree, env);
        CHECK(rep.sparse_locations == rep.sparse_bound);
        CHECK(rep.walls == env.h());
        CHECK(verify::validate_partition_tree(res.tree, env).empty());
    }
}

TEST_CASE("random_env degenerate request yields a triangle") {
    Environment env = random_env(3, 0, 11);
    CHECK(env.n() == 3);
    CHECK(env.h() == 0);
    CHECK(env.validate().empty());
}

TEST_CASE("random_env is deterministic per seed") {
    Environment a = random_env(24, 2, 77);
    Environment b = random_env(24, 2, 77);
    REQUIRE(a.n() == b.n());
    REQUIRE(a.h() == b.h());
    for (std::size_t i = 0; i < a.outer.size(); ++i) {
        CHECK(a.outer.v[i].x == b.outer.v[i].x);
        CHECK(a.outer.v[i].y == b.outer.v[i].y);
    }
    for (std::size_t k = 0; k < a.holes.size(); ++k)
        for (std::size_t i = 0; i < a.holes[k].size(); ++i) {
            CHECK(a.holes[k].v[i].x == b.holes[k].v[i].x);
            CHECK(a.holes[k].v[i].y == b.holes[k].v[i].y);
        }

    Environment c = random_env(24, 2, 78);
    bool differs = c.n() != a.n();
    for (std::size_t i = 0; !differs && i < std::min(a.outer.size(), c.outer.size()); ++i)
        differs = a.outer.v[i].x != c.outer.v[i].x || a.outer.v[i].y != c.outer.v[i].y;
    CHECK(differs);
}

TEST_CASE("random environments are valid and partition cleanly") {
    for (int h = 0; h <= 2; ++h) {
        for (std::uint32_t seed = 0; seed < 30; ++seed) {
            int n_target = 14 + static_cast<int>(seed % 17);
            Environment env = random_env(n_target, h, 1000u * h + seed);
            CAPTURE(h, seed, n_target);
            REQUIRE(env.validate().empty());
            REQUIRE(env.h() == static_cast<std::size_t>(h));
            auto res = partition_of(env);
            auto rep = count_bounds(res.tree, env);
            CHECK(rep.walls == env.h());
            CHECK(rep.cells_within_bound);
            CHECK(rep.sparse_within_bound);
            CHECK(verify::validate_partition_tree(res.tree, env).empty());
        }
    }
}
