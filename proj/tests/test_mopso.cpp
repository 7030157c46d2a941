#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "talopt/mopso.hpp"
#include "talopt/rng.hpp"
#include "test_instances.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

using namespace talopt;

namespace {

ArchiveEntry entry(double j1, double j2) {
    return {{}, {j1, j2}};
}

// independent naive average-linkage clustering: recompute the mean pairwise
// distance between every cluster pair from scratch at each merge
std::vector<std::vector<std::size_t>> naive_average_linkage(
    const std::vector<ObjectivePair>& points, std::size_t target) {
    double min1 = points[0].j1, max1 = points[0].j1;
    double min2 = points[0].j2, max2 = points[0].j2;
    for (const auto& p : points) {
        min1 = std::min(min1, p.j1);
        max1 = std::max(max1, p.j1);
        min2 = std::min(min2, p.j2);
        max2 = std::max(max2, p.j2);
    }
    const double inv1 = max1 > min1 ? 1.0 / (max1 - min1) : 0.0;
    const double inv2 = max2 > min2 ? 1.0 / (max2 - min2) : 0.0;
    auto point_dist = [&](std::size_t a, std::size_t b) {
        const double dx = (points[a].j1 - points[b].j1) * inv1;
        const double dy = (points[a].j2 - points[b].j2) * inv2;
        return std::sqrt(dx * dx + dy * dy);
    };
    std::vector<std::vector<std::size_t>> clusters(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        clusters[i] = {i};
    while (clusters.size() > target) {
        std::size_t best_a = 0, best_b = 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < clusters.size(); ++a)
            for (std::size_t b = a + 1; b < clusters.size(); ++b) {
                double sum = 0.0;
                for (std::size_t p : clusters[a])
                    for (std::size_t q : clusters[b])
                        sum += point_dist(p, q);
                const double linkage =
                    sum / (static_cast<double>(clusters[a].size()) * clusters[b].size());
                if (linkage < best) {
                    best = linkage;
                    best_a = a;
                    best_b = b;
                }
            }
        clusters[best_a].insert(clusters[best_a].end(), clusters[best_b].begin(),
                                clusters[best_b].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(best_b));
    }
    return clusters;
}

std::vector<ObjectivePair> random_front(std::mt19937_64& rng, std::size_t size) {
    // a strictly decreasing staircase is mutually non-dominated
    std::uniform_real_distribution<double> step(0.1, 2.0);
    std::vector<ObjectivePair> front(size);
    double x = step(rng);
    double y = static_cast<double>(size) * 2.5;
    for (auto& p : front) {
        p = {x, y};
        x += step(rng);
        y -= step(rng);
    }
    return front;
}

} // namespace

TEST_CASE("dominance on boundary pairs") {
    CHECK(dominates({1, 1}, {2, 2}));
    CHECK_FALSE(dominates({1, 2}, {2, 1}));
    CHECK_FALSE(dominates({2, 1}, {1, 2}));
    CHECK_FALSE(dominates({1, 1}, {1, 1}));
    CHECK(dominates({1, 1}, {1, 2}));
}

TEST_CASE("dominance is irreflexive, antisymmetric and transitive") {
    auto rng = make_rng_stream(3, 0);
    std::uniform_int_distribution<int> coord(0, 4); // small range forces ties
    for (int trial = 0; trial < 2000; ++trial) {
        const ObjectivePair a{double(coord(rng)), double(coord(rng))};
        const ObjectivePair b{double(coord(rng)), double(coord(rng))};
        const ObjectivePair c{double(coord(rng)), double(coord(rng))};
        CHECK_FALSE(dominates(a, a));
        if (dominates(a, b))
            CHECK_FALSE(dominates(b, a));
        if (dominates(a, b) && dominates(b, c))
            CHECK(dominates(a, c));
    }
}

TEST_CASE("velocity bound follows the interval count") {
    MopsoParams params;
    params.position_min = 0.0;
    params.position_max = 1.0;
    params.num_intervals = 5;
    CHECK(params.velocity_limit() == doctest::Approx(0.2));
    params.num_intervals = 1;
    CHECK(params.velocity_limit() == doctest::Approx(1.0));
    params.position_max = 0.0;
    CHECK(params.velocity_limit() == 0.0);
}

TEST_CASE("velocity step: substitution, consensus and clamping") {
    // alpha=1, k1=k2=2, r1=r2=0.5: the two pulls cancel
    CHECK(velocity_step(0.0, 0.5, 0.7, 0.3, 1.0, 2.0, 2.0, 0.5, 0.5, 10.0) ==
          doctest::Approx(0.0));
    // stationary at consensus
    CHECK(velocity_step(0.0, 0.4, 0.4, 0.4, 0.8, 2.0, 2.0, 0.9, 0.1, 10.0) == 0.0);
    // any inputs stay inside the bound
    auto rng = make_rng_stream(17, 0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const double v = velocity_step(unit(rng), unit(rng), unit(rng), unit(rng), unit(rng),
                                       2.0, 2.0, unit(rng), unit(rng), 0.2);
        CHECK(std::abs(v) <= 0.2);
    }
}

TEST_CASE("position step adds the velocity and saturates at the bounds") {
    CHECK(position_step(0.5, 0.1, 0.0, 1.0) == doctest::Approx(0.6));
    CHECK(position_step(0.95, 0.2, 0.0, 1.0) == 1.0);
    CHECK(position_step(0.05, -0.2, 0.0, 1.0) == 0.0);
    CHECK(position_step(0.3, 0.0, 0.0, 1.0) == 0.3);
}

TEST_CASE("inertia decays geometrically") {
    CHECK(update_inertia(1.0) == doctest::Approx(0.99));
    CHECK(update_inertia(update_inertia(1.0)) == doctest::Approx(0.9801));
    double inertia = 1.0;
    for (int t = 2; t <= 50; ++t) {
        inertia = update_inertia(inertia);
        CHECK(inertia == doctest::Approx(std::pow(0.99, t - 1)).epsilon(1e-12));
        CHECK(inertia > 0.0);
    }
}

TEST_CASE("archive insertion keeps only mutually non-dominated entries") {
    ParetoArchive archive(10);
    CHECK(archive.insert(entry(2, 2)));
    CHECK(archive.insert(entry(1, 1))); // dominates and evicts (2,2)
    REQUIRE(archive.size() == 1);
    CHECK(archive.entries()[0].objectives.j1 == 1);

    ParetoArchive pair(10);
    pair.insert(entry(1, 2));
    CHECK(pair.insert(entry(2, 1)));
    CHECK(pair.size() == 2);
    CHECK_FALSE(pair.insert(entry(3, 3))); // dominated, rejected
    CHECK(pair.size() == 2);
    CHECK_FALSE(pair.insert(entry(1, 2))); // exact duplicate, rejected
    CHECK(pair.size() == 2);
}

TEST_CASE("cluster_reduce merges the near pair and keeps the far point") {
    const std::vector<ObjectivePair> points = {{0, 0}, {0.01, 0.01}, {1, 1}};
    const auto kept = cluster_reduce(points, 2);
    CHECK(kept == std::vector<std::size_t>{0, 2});
    CHECK(cluster_reduce(points, 3) == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("cluster_reduce leaves small sets alone") {
    const std::vector<ObjectivePair> points = {{1, 5}, {2, 4}};
    CHECK(cluster_reduce(points, 5) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("cluster_reduce matches a brute-force clustering oracle") {
    auto rng = make_rng_stream(23, 0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::uniform_int_distribution<std::size_t> size_dist(2, 6);
        const std::size_t size = size_dist(rng);
        std::uniform_int_distribution<std::size_t> target_dist(1, size);
        const std::size_t target = target_dist(rng);
        std::vector<ObjectivePair> points(size);
        for (auto& p : points)
            p = {unit(rng), unit(rng)};

        auto clusters = naive_average_linkage(points, target);
        // reference representatives, with the same extreme-point override
        std::size_t ext1 = 0, ext2 = 0;
        for (std::size_t i = 1; i < size; ++i) {
            if (points[i].j1 < points[ext1].j1)
                ext1 = i;
            if (points[i].j2 < points[ext2].j2)
                ext2 = i;
        }
        double min1 = points[0].j1, max1 = points[0].j1;
        double min2 = points[0].j2, max2 = points[0].j2;
        for (const auto& p : points) {
            min1 = std::min(min1, p.j1);
            max1 = std::max(max1, p.j1);
            min2 = std::min(min2, p.j2);
            max2 = std::max(max2, p.j2);
        }
        const double inv1 = max1 > min1 ? 1.0 / (max1 - min1) : 0.0;
        const double inv2 = max2 > min2 ? 1.0 / (max2 - min2) : 0.0;
        std::set<std::size_t> expected;
        for (auto& cluster : clusters) {
            std::sort(cluster.begin(), cluster.end());
            if (std::count(cluster.begin(), cluster.end(), ext1)) {
                expected.insert(ext1);
                continue;
            }
            if (std::count(cluster.begin(), cluster.end(), ext2)) {
                expected.insert(ext2);
                continue;
            }
            double cx = 0.0, cy = 0.0;
            for (std::size_t i : cluster) {
                cx += (points[i].j1 - min1) * inv1;
                cy += (points[i].j2 - min2) * inv2;
            }
            cx /= static_cast<double>(cluster.size());
            cy /= static_cast<double>(cluster.size());
            std::size_t rep = cluster.front();
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i : cluster) {
                const double dx = (points[i].j1 - min1) * inv1 - cx;
                const double dy = (points[i].j2 - min2) * inv2 - cy;
                if (dx * dx + dy * dy < best) {
                    best = dx * dx + dy * dy;
                    rep = i;
                }
            }
            expected.insert(rep);
        }
        const auto kept = cluster_reduce(points, target);
        CHECK(std::set<std::size_t>(kept.begin(), kept.end()) == expected);
    }
}

TEST_CASE("cluster_reduce preserves the extreme points of a front") {
    auto rng = make_rng_stream(29, 0);
    for (int trial = 0; trial < 300; ++trial) {
        std::uniform_int_distribution<std::size_t> size_dist(3, 20);
        const std::size_t size = size_dist(rng);
        const auto front = random_front(rng, size);
        std::uniform_int_distribution<std::size_t> target_dist(2, size);
        const std::size_t target = target_dist(rng);
        const auto kept = cluster_reduce(front, target);
        CHECK(kept.size() == std::min(target, size));

        std::size_t ext1 = 0, ext2 = 0;
        for (std::size_t i = 1; i < size; ++i) {
            if (front[i].j1 < front[ext1].j1)
                ext1 = i;
            if (front[i].j2 < front[ext2].j2)
                ext2 = i;
        }
        CHECK(std::count(kept.begin(), kept.end(), ext1) == 1);
        CHECK(std::count(kept.begin(), kept.end(), ext2) == 1);
    }
}

TEST_CASE("guide selection returns the closest normalized pair") {
    // singleton local matching a global member exactly
    const auto [l0, g0] = select_guides({{0, 1}}, {{0, 1}, {5, 5}});
    CHECK(l0 == 0);
    CHECK(g0 == 0);

    // normalized distances pick (1,0) over (0,1) against (0.9,0.1)
    const auto [l1, g1] = select_guides({{0, 1}, {1, 0}}, {{0.9, 0.1}});
    CHECK(l1 == 1);
    CHECK(g1 == 0);

    const auto [l2, g2] = select_guides({{3, 4}}, {{7, 2}});
    CHECK(l2 == 0);
    CHECK(g2 == 0);

    CHECK_THROWS(select_guides({}, {{1, 1}}));
}

TEST_CASE("fuzzy membership over the three-point front") {
    const std::vector<ObjectivePair> front = {{2, 10}, {4, 4}, {10, 2}};
    const auto mu = fuzzy_membership(front);
    CHECK(mu[0][0] == doctest::Approx(1.0));
    CHECK(mu[1][0] == doctest::Approx(0.75));
    CHECK(mu[2][0] == doctest::Approx(0.0));
    CHECK(mu[0][1] == doctest::Approx(0.0));
    CHECK(mu[1][1] == doctest::Approx(0.75));
    CHECK(mu[2][1] == doctest::Approx(1.0));

    const auto single = fuzzy_membership({{3, 7}});
    CHECK(single[0][0] == 1.0);
    CHECK(single[0][1] == 1.0);

    CHECK_THROWS(fuzzy_membership({}));
}

TEST_CASE("membership grades always land in [0,1]") {
    auto rng = make_rng_stream(31, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto front = random_front(rng, 8);
        for (const auto& row : fuzzy_membership(front)) {
            CHECK(row[0] >= 0.0);
            CHECK(row[0] <= 1.0);
            CHECK(row[1] >= 0.0);
            CHECK(row[1] <= 1.0);
        }
    }
}

TEST_CASE("best compromise picks the balanced middle point") {
    const std::vector<ObjectivePair> front = {{2, 10}, {4, 4}, {10, 2}};
    CHECK(best_compromise(front) == 1);
    CHECK(best_compromise({{3, 7}}) == 0);

    // scaling both objectives by a positive constant keeps the choice
    std::vector<ObjectivePair> scaled = front;
    for (auto& p : scaled) {
        p.j1 *= 7.25;
        p.j2 *= 7.25;
    }
    CHECK(best_compromise(scaled) == 1);
}

TEST_CASE("a single-iteration run returns the non-dominated initial subset") {
    const auto cfg = testinst::tiny_config();
    const auto adj = build_topology(cfg);
    const auto mobility = build_mobility(cfg, 4.0, adj);
    const Evaluator evaluator(cfg, mobility);

    MopsoParams params;
    params.population = 12;
    params.iterations = 1;
    params.seed = 5;

    std::vector<ObjectivePair> initial;
    const auto result = run_mopso(evaluator, params, [&](const IterationView& view) {
        if (view.iteration != 1)
            return;
        for (int i = 0; i < view.population; ++i) {
            const auto row = view.positions.subspan(
                static_cast<std::size_t>(i) * view.num_params, view.num_params);
            initial.push_back(evaluator.evaluate(row));
        }
    });

    // non-dominated scan of the captured initial population
    std::vector<ObjectivePair> expected;
    for (const auto& candidate : initial) {
        bool dominated = false;
        for (const auto& other : initial)
            if (dominates(other, candidate))
                dominated = true;
        if (!dominated) {
            const bool duplicate =
                std::any_of(expected.begin(), expected.end(), [&](const ObjectivePair& p) {
                    return p.j1 == candidate.j1 && p.j2 == candidate.j2;
                });
            if (!duplicate)
                expected.push_back(candidate);
        }
    }
    REQUIRE(expected.size() <= 10); // fits the default capacity: no truncation
    CHECK(result.front.size() == expected.size());
    for (const auto& entry : result.front)
        CHECK(std::any_of(expected.begin(), expected.end(), [&](const ObjectivePair& p) {
            return p.j1 == entry.objectives.j1 && p.j2 == entry.objectives.j2;
        }));
    CHECK(result.history.size() == 1);
}

TEST_CASE("fixed seed reproduces the run bit for bit") {
    const auto cfg = testinst::tiny_config();
    const auto adj = build_topology(cfg);
    const auto mobility = build_mobility(cfg, 4.0, adj);
    const Evaluator evaluator(cfg, mobility);

    MopsoParams params;
    params.population = 20;
    params.iterations = 15;
    params.seed = 42;

    const auto first = run_mopso(evaluator, params);
    const auto second = run_mopso(evaluator, params);
    REQUIRE(first.front.size() == second.front.size());
    CHECK(first.compromise_index == second.compromise_index);
    for (std::size_t i = 0; i < first.front.size(); ++i) {
        CHECK(first.front[i].objectives.j1 == second.front[i].objectives.j1);
        CHECK(first.front[i].objectives.j2 == second.front[i].objectives.j2);
        CHECK(first.front[i].position == second.front[i].position);
    }
    REQUIRE(first.history.size() == second.history.size());
    for (std::size_t t = 0; t < first.history.size(); ++t) {
        CHECK(first.history[t].min_j1 == second.history[t].min_j1);
        CHECK(first.history[t].min_j2 == second.history[t].min_j2);
    }
}

TEST_CASE("zero weights and zero inertia freeze the swarm after one step") {
    const auto cfg = testinst::tiny_config();
    const auto adj = build_topology(cfg);
    const auto mobility = build_mobility(cfg, 4.0, adj);
    const Evaluator evaluator(cfg, mobility);

    MopsoParams params;
    params.population = 8;
    params.iterations = 5;
    params.seed = 9;
    params.cognitive_weight = 0.0;
    params.social_weight = 0.0;
    params.initial_inertia = 0.0;

    std::vector<std::vector<double>> position_snapshots;
    run_mopso(evaluator, params, [&](const IterationView& view) {
        position_snapshots.emplace_back(view.positions.begin(), view.positions.end());
        if (view.iteration >= 2)
            for (double v : view.velocities)
                CHECK(v == 0.0);
    });
    // positions identical from iteration 2 on
    for (std::size_t t = 2; t < position_snapshots.size(); ++t)
        CHECK(position_snapshots[t] == position_snapshots[1]);
}

TEST_CASE("swarm invariants hold at every iteration") {
    const auto cfg = testinst::tiny_config();
    const auto adj = build_topology(cfg);
    const auto mobility = build_mobility(cfg, 4.0, adj);
    const Evaluator evaluator(cfg, mobility);

    MopsoParams params;
    params.population = 25;
    params.iterations = 30;
    params.seed = 13;

    const double vlim = params.velocity_limit();
    double prev_min_j1 = std::numeric_limits<double>::infinity();
    double prev_min_j2 = std::numeric_limits<double>::infinity();
    run_mopso(evaluator, params, [&](const IterationView& view) {
        for (double x : view.positions) {
            CHECK(x >= params.position_min);
            CHECK(x <= params.position_max);
        }
        for (double v : view.velocities)
            CHECK(std::abs(v) <= vlim + 1e-15);
        CHECK(view.inertia ==
              doctest::Approx(std::pow(0.99, view.iteration - 1)).epsilon(1e-12));

        for (const auto& local : view.local_archives) {
            CHECK(local.size() >= 1);
            CHECK(local.size() <= 5);
            const auto objs = local.objectives();
            for (std::size_t a = 0; a < objs.size(); ++a)
                for (std::size_t b = 0; b < objs.size(); ++b)
                    if (a != b)
                        CHECK_FALSE(dominates(objs[a], objs[b]));
        }

        const auto global = view.global_archive.objectives();
        CHECK(global.size() >= 1);
        CHECK(global.size() <= 10);
        double min_j1 = std::numeric_limits<double>::infinity();
        double min_j2 = min_j1;
        for (std::size_t a = 0; a < global.size(); ++a) {
            min_j1 = std::min(min_j1, global[a].j1);
            min_j2 = std::min(min_j2, global[a].j2);
            for (std::size_t b = 0; b < global.size(); ++b)
                if (a != b)
                    CHECK_FALSE(dominates(global[a], global[b]));
        }
        CHECK(min_j1 <= prev_min_j1 + 1e-15);
        CHECK(min_j2 <= prev_min_j2 + 1e-15);
        prev_min_j1 = min_j1;
        prev_min_j2 = min_j2;
    });
}

TEST_CASE("the reported compromise maximizes an independent recomputation") {
    const auto cfg = testinst::tiny_config();
    const auto adj = build_topology(cfg);
    const auto mobility = build_mobility(cfg, 4.0, adj);

    MopsoParams params;
    params.population = 30;
    params.iterations = 25;
    params.seed = 21;
    const auto result = run_mopso(cfg, mobility, params);

    // recompute the fuzzy scores from scratch
    std::vector<ObjectivePair> front;
    for (const auto& entry : result.front)
        front.push_back(entry.objectives);
    double min1 = front[0].j1, max1 = front[0].j1, min2 = front[0].j2, max2 = front[0].j2;
    for (const auto& p : front) {
        min1 = std::min(min1, p.j1);
        max1 = std::max(max1, p.j1);
        min2 = std::min(min2, p.j2);
        max2 = std::max(max2, p.j2);
    }
    std::vector<double> score(front.size(), 0.0);
    for (std::size_t m = 0; m < front.size(); ++m) {
        const double mu1 = max1 > min1 ? (max1 - front[m].j1) / (max1 - min1) : 1.0;
        const double mu2 = max2 > min2 ? (max2 - front[m].j2) / (max2 - min2) : 1.0;
        score[m] = mu1 + mu2;
    }
    const double best = *std::max_element(score.begin(), score.end());
    CHECK(score[result.compromise_index] == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("history records match the archive contents") {
    const auto cfg = testinst::tiny_config();
    const auto adj = build_topology(cfg);
    const auto mobility = build_mobility(cfg, 4.0, adj);

    MopsoParams params;
    params.population = 10;
    params.iterations = 8;
    params.seed = 2;
    const auto result = run_mopso(cfg, mobility, params);
    REQUIRE(result.history.size() == 8);
    for (std::size_t t = 0; t < result.history.size(); ++t) {
        const auto& stats = result.history[t];
        CHECK(stats.iteration == static_cast<int>(t) + 1);
        CHECK(stats.archive_size == stats.archive_objectives.size());
        double min1 = std::numeric_limits<double>::infinity(), min2 = min1;
        for (const auto& p : stats.archive_objectives) {
            min1 = std::min(min1, p.j1);
            min2 = std::min(min2, p.j2);
        }
        CHECK(stats.min_j1 == min1);
        CHECK(stats.min_j2 == min2);
    }
}
