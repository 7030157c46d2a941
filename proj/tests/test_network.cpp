#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "talopt/errors.hpp"
#include "talopt/network.hpp"
#include "test_instances.hpp"

#include <cmath>
#include <numbers>
#include <set>

using namespace talopt;

namespace {

NetworkConfig grid_config(int rows, int cols) {
    NetworkConfig cfg;
    cfg.num_cells = rows * cols;
    cfg.grid_rows = rows;
    cfg.grid_cols = cols;
    cfg.num_lists = 1;
    cfg.list_size = 1;
    return cfg;
}

} // namespace

TEST_CASE("config validation catches bad fields") {
    NetworkConfig cfg = testinst::tiny_config();
    CHECK_NOTHROW(cfg.validate());

    NetworkConfig bad = cfg;
    bad.list_size = 5; // more than num_cells
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = cfg;
    bad.grid_cols = 3;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = cfg;
    bad.max_offdiag = 1; // below list_size*(list_size-1) = 2
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = cfg;
    bad.users_per_cell = {1.0, 2.0}; // wrong length
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = cfg;
    bad.speed_min_mps = 5.0;
    bad.speed_max_mps = 4.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("1x2 grid: the two cells are mutually adjacent") {
    const auto adj = build_topology(grid_config(1, 2));
    CHECK(adj.at(0, 1));
    CHECK(adj.at(1, 0));
    CHECK_FALSE(adj.at(0, 0));
    CHECK_FALSE(adj.at(1, 1));
    CHECK(adj.degree(0) == 1);
    CHECK(adj.degree(1) == 1);
}

TEST_CASE("2x2 grid matches the hand-enumerated offset-hex neighbors") {
    // cells 0 1 / 2 3, odd row shifted right: pairs
    // (0,1) (0,2) (1,2) (1,3) (2,3); only (0,3) non-adjacent
    const auto adj = build_topology(grid_config(2, 2));
    const std::set<std::pair<int, int>> expected = {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}};
    for (int k = 0; k < 4; ++k) {
        CHECK_FALSE(adj.at(k, k));
        CHECK(adj.degree(k) >= 2);
        for (int n = k + 1; n < 4; ++n) {
            const bool want = expected.count({k, n}) > 0;
            CHECK(adj.at(k, n) == want);
            CHECK(adj.at(n, k) == want);
        }
    }
}

TEST_CASE("5x6 grid: interior cells have exactly six neighbors") {
    const auto adj = build_topology(grid_config(5, 6));
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 6; ++c) {
            const int cell = r * 6 + c;
            const bool interior = r > 0 && r < 4 && c > 0 && c < 5;
            if (interior)
                CHECK(adj.degree(cell) == 6);
            else
                CHECK(adj.degree(cell) < 6);
            CHECK_FALSE(adj.at(cell, cell));
            for (int other = 0; other < 30; ++other)
                CHECK(adj.at(cell, other) == adj.at(other, cell));
        }
}

TEST_CASE("topology rejects a grid that does not match the cell count") {
    NetworkConfig cfg = grid_config(2, 2);
    cfg.num_cells = 5;
    CHECK_THROWS_AS(build_topology(cfg), ConfigError);
}

TEST_CASE("crossing rate: zero speed, hand value, linearity") {
    NetworkConfig cfg = testinst::tiny_config();
    CHECK(crossing_rate(cfg, 0.0, 0) == 0.0);

    // UE=100, radius 500 m, v=4 m/s -> about 0.5881 crossings per second
    const double rate = crossing_rate(cfg, 4.0, 0);
    CHECK(rate == doctest::Approx(0.5881).epsilon(1e-3));
    const double area = 1.5 * std::sqrt(3.0) * 500.0 * 500.0;
    CHECK(rate == doctest::Approx(100.0 / area * 3000.0 * 4.0 / std::numbers::pi).epsilon(1e-12));

    CHECK(crossing_rate(cfg, 8.0, 0) == doctest::Approx(2.0 * rate).epsilon(1e-12));
    NetworkConfig denser = cfg;
    denser.default_users = 200.0;
    CHECK(crossing_rate(denser, 4.0, 0) == doctest::Approx(2.0 * rate).epsilon(1e-12));

    CHECK_THROWS_AS(crossing_rate(cfg, -1.0, 0), ConfigError);
}

TEST_CASE("mobility: zero speed gives an all-zero matrix") {
    NetworkConfig cfg = grid_config(2, 2);
    const auto adj = build_topology(cfg);
    const auto model = build_mobility(cfg, 0.0, adj);
    for (double r : model.rates)
        CHECK(r == 0.0);
}

TEST_CASE("mobility: per-neighbor rate at an interior cell of the 5x6 grid") {
    NetworkConfig cfg = grid_config(5, 6);
    const auto adj = build_topology(cfg);
    const auto model = build_mobility(cfg, 4.0, adj);

    int interior = -1;
    for (int k = 0; k < 30 && interior < 0; ++k)
        if (adj.degree(k) == 6)
            interior = k;
    REQUIRE(interior >= 0);

    // crossing rate 0.5881 split over 100 UEs and 6 neighbors
    for (int n = 0; n < 30; ++n) {
        if (adj.at(interior, n))
            CHECK(model.rate(interior, n) == doctest::Approx(9.80e-4).epsilon(2e-3));
        else
            CHECK(model.rate(interior, n) == 0.0);
    }
}

TEST_CASE("mobility: row sums stay at or below one at the top speed") {
    NetworkConfig cfg = grid_config(5, 6);
    const auto adj = build_topology(cfg);
    const auto model = build_mobility(cfg, 33.0, adj);
    for (int k = 0; k < 30; ++k) {
        double row = 0.0;
        for (int n = 0; n < 30; ++n) {
            CHECK(model.rate(k, n) >= 0.0);
            row += model.rate(k, n);
        }
        CHECK(row <= 1.0 + 1e-12);
    }
}

TEST_CASE("mobility: support is symmetric and rates scale linearly with speed") {
    NetworkConfig cfg = grid_config(2, 3);
    cfg.num_lists = 1;
    cfg.list_size = 2;
    const auto adj = build_topology(cfg);
    const auto slow = build_mobility(cfg, 4.0, adj);
    const auto fast = build_mobility(cfg, 8.0, adj);
    for (int k = 0; k < 6; ++k)
        for (int n = 0; n < 6; ++n) {
            CHECK((slow.rate(k, n) > 0.0) == (slow.rate(n, k) > 0.0));
            CHECK(fast.rate(k, n) == doctest::Approx(2.0 * slow.rate(k, n)).epsilon(1e-12));
            CHECK(slow.rate(k, k) == 0.0);
        }

    // deterministic: same inputs, same matrix
    const auto again = build_mobility(cfg, 4.0, adj);
    CHECK(again.rates == slow.rates);
}

TEST_CASE("mobility: isolated cell with nonzero speed is a config error") {
    NetworkConfig cfg = grid_config(1, 1);
    const auto adj = build_topology(cfg);
    CHECK_THROWS_AS(build_mobility(cfg, 4.0, adj), ConfigError);
    CHECK_NOTHROW(build_mobility(cfg, 0.0, adj));
}

TEST_CASE("mobility: speed outside the configured domain is rejected") {
    NetworkConfig cfg = grid_config(2, 2);
    cfg.speed_max_mps = 10.0;
    const auto adj = build_topology(cfg);
    CHECK_THROWS_AS(build_mobility(cfg, 11.0, adj), ConfigError);
}
