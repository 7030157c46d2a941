#include "talopt/mopso.hpp"
#include "talopt/errors.hpp"
#include "talopt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <omp.h>

namespace talopt {

double MopsoParams::velocity_limit() const {
    return (position_max - position_min) / num_intervals;
}

void MopsoParams::validate() const {
    if (population < 2)
        throw ConfigError("population: must be >= 2");
    if (iterations < 1)
        throw ConfigError("iterations: must be >= 1");
    if (num_intervals < 1)
        throw ConfigError("num_intervals: must be >= 1");
    if (cognitive_weight < 0.0 || social_weight < 0.0)
        throw ConfigError("cognitive_weight/social_weight: must be >= 0");
    if (local_capacity < 1 || global_capacity < 1)
        throw ConfigError("local_capacity/global_capacity: must be >= 1");
    if (initial_inertia < 0.0)
        throw ConfigError("initial_inertia: must be >= 0");
    if (inertia_decay <= 0.0 || inertia_decay > 1.0)
        throw ConfigError("inertia_decay: must be in (0, 1]");
    if (position_min > position_max)
        throw ConfigError("position_min/position_max: need min <= max");
    if (threads < 0)
        throw ConfigError("threads: must be >= 0");
}

bool dominates(const ObjectivePair& a, const ObjectivePair& b) {
    return a.j1 <= b.j1 && a.j2 <= b.j2 && (a.j1 < b.j1 || a.j2 < b.j2);
}

namespace {

struct NormScale {
    double min1, min2, inv_range1, inv_range2;

    static NormScale over(const std::vector<ObjectivePair>& points) {
        double min1 = std::numeric_limits<double>::infinity();
        double max1 = -min1, min2 = min1, max2 = -min1;
        for (const auto& p : points) {
            min1 = std::min(min1, p.j1);
            max1 = std::max(max1, p.j1);
            min2 = std::min(min2, p.j2);
            max2 = std::max(max2, p.j2);
        }
        const double r1 = max1 - min1;
        const double r2 = max2 - min2;
        return {min1, min2, r1 > 0.0 ? 1.0 / r1 : 0.0, r2 > 0.0 ? 1.0 / r2 : 0.0};
    }

    double x(const ObjectivePair& p) const { return (p.j1 - min1) * inv_range1; }
    double y(const ObjectivePair& p) const { return (p.j2 - min2) * inv_range2; }
};

std::size_t argmin_j1(const std::vector<ObjectivePair>& points) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].j1 < points[best].j1)
            best = i;
    return best;
}

std::size_t argmin_j2(const std::vector<ObjectivePair>& points) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].j2 < points[best].j2)
            best = i;
    return best;
}

} // namespace

std::vector<std::size_t> cluster_reduce(const std::vector<ObjectivePair>& points,
                                        std::size_t target_size) {
    const std::size_t m = points.size();
    if (target_size < 1)
        throw std::invalid_argument("cluster_reduce: target_size must be >= 1");
    if (m <= target_size) {
        std::vector<std::size_t> all(m);
        std::iota(all.begin(), all.end(), std::size_t{0});
        return all;
    }

    const NormScale scale = NormScale::over(points);
    std::vector<double> px(m), py(m);
    for (std::size_t i = 0; i < m; ++i) {
        px[i] = scale.x(points[i]);
        py[i] = scale.y(points[i]);
    }

    // average-linkage agglomeration with Lance-Williams distance updates
    std::vector<std::vector<std::size_t>> clusters(m);
    for (std::size_t i = 0; i < m; ++i)
        clusters[i] = {i};
    std::vector<std::vector<double>> dist(m, std::vector<double>(m, 0.0));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b) {
            const double dx = px[a] - px[b];
            const double dy = py[a] - py[b];
            dist[a][b] = dist[b][a] = std::sqrt(dx * dx + dy * dy);
        }

    while (clusters.size() > target_size) {
        std::size_t best_a = 0, best_b = 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < clusters.size(); ++a)
            for (std::size_t b = a + 1; b < clusters.size(); ++b)
                if (dist[a][b] < best) {
                    best = dist[a][b];
                    best_a = a;
                    best_b = b;
                }
        const double wa = static_cast<double>(clusters[best_a].size());
        const double wb = static_cast<double>(clusters[best_b].size());
        for (std::size_t c = 0; c < clusters.size(); ++c) {
            if (c == best_a || c == best_b)
                continue;
            dist[best_a][c] = dist[c][best_a] =
                (wa * dist[best_a][c] + wb * dist[best_b][c]) / (wa + wb);
        }
        clusters[best_a].insert(clusters[best_a].end(), clusters[best_b].begin(),
                                clusters[best_b].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(best_b));
        dist.erase(dist.begin() + static_cast<std::ptrdiff_t>(best_b));
        for (auto& row : dist)
            row.erase(row.begin() + static_cast<std::ptrdiff_t>(best_b));
    }

    const std::size_t extreme1 = argmin_j1(points);
    const std::size_t extreme2 = argmin_j2(points);
    std::vector<std::size_t> kept;
    kept.reserve(target_size);
    for (auto& cluster : clusters) {
        std::sort(cluster.begin(), cluster.end());
        const bool has_extreme1 =
            std::find(cluster.begin(), cluster.end(), extreme1) != cluster.end();
        const bool has_extreme2 =
            std::find(cluster.begin(), cluster.end(), extreme2) != cluster.end();
        if (has_extreme1) {
            kept.push_back(extreme1);
            continue;
        }
        if (has_extreme2) {
            kept.push_back(extreme2);
            continue;
        }
        double cx = 0.0, cy = 0.0;
        for (std::size_t i : cluster) {
            cx += px[i];
            cy += py[i];
        }
        cx /= static_cast<double>(cluster.size());
        cy /= static_cast<double>(cluster.size());
        std::size_t representative = cluster.front();
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i : cluster) {
            const double dx = px[i] - cx;
            const double dy = py[i] - cy;
            const double d = dx * dx + dy * dy;
            if (d < best) {
                best = d;
                representative = i;
            }
        }
        kept.push_back(representative);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

bool ParetoArchive::would_accept(const ObjectivePair& objectives) const {
    for (const auto& existing : entries_) {
        if (dominates(existing.objectives, objectives))
            return false;
        if (existing.objectives.j1 == objectives.j1 &&
            existing.objectives.j2 == objectives.j2)
            return false; // objective point already represented
    }
    return true;
}

bool ParetoArchive::insert(ArchiveEntry entry) {
    if (!would_accept(entry.objectives))
        return false;
    std::erase_if(entries_, [&](const ArchiveEntry& existing) {
        return dominates(entry.objectives, existing.objectives);
    });
    entries_.push_back(std::move(entry));
    return true;
}

void ParetoArchive::enforce_capacity() {
    if (entries_.size() <= capacity_)
        return;
    const auto kept = cluster_reduce(objectives(), capacity_);
    std::vector<ArchiveEntry> next;
    next.reserve(kept.size());
    for (std::size_t i : kept)
        next.push_back(std::move(entries_[i]));
    entries_ = std::move(next);
}

std::vector<ObjectivePair> ParetoArchive::objectives() const {
    std::vector<ObjectivePair> out;
    out.reserve(entries_.size());
    for (const auto& entry : entries_)
        out.push_back(entry.objectives);
    return out;
}

std::pair<std::size_t, std::size_t> select_guides(const std::vector<ObjectivePair>& local,
                                                  const std::vector<ObjectivePair>& global) {
    if (local.empty() || global.empty())
        throw std::logic_error("select_guides: archives must be non-empty");
    std::vector<ObjectivePair> combined = local;
    combined.insert(combined.end(), global.begin(), global.end());
    const NormScale scale = NormScale::over(combined);

    std::size_t best_local = 0, best_global = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < local.size(); ++a) {
        const double ax = scale.x(local[a]);
        const double ay = scale.y(local[a]);
        for (std::size_t b = 0; b < global.size(); ++b) {
            const double dx = ax - scale.x(global[b]);
            const double dy = ay - scale.y(global[b]);
            const double d = dx * dx + dy * dy;
            if (d < best) {
                best = d;
                best_local = a;
                best_global = b;
            }
        }
    }
    return {best_local, best_global};
}

std::vector<std::array<double, 2>> fuzzy_membership(const std::vector<ObjectivePair>& front) {
    if (front.empty())
        throw std::invalid_argument("fuzzy_membership: empty front");
    double min1 = front[0].j1, max1 = front[0].j1;
    double min2 = front[0].j2, max2 = front[0].j2;
    for (const auto& p : front) {
        min1 = std::min(min1, p.j1);
        max1 = std::max(max1, p.j1);
        min2 = std::min(min2, p.j2);
        max2 = std::max(max2, p.j2);
    }
    auto grade = [](double value, double lo, double hi) {
        if (hi <= lo)
            return 1.0; // flat objective
        if (value <= lo)
            return 1.0;
        if (value >= hi)
            return 0.0;
        return (hi - value) / (hi - lo);
    };
    std::vector<std::array<double, 2>> membership(front.size());
    for (std::size_t m = 0; m < front.size(); ++m)
        membership[m] = {grade(front[m].j1, min1, max1), grade(front[m].j2, min2, max2)};
    return membership;
}

std::size_t best_compromise(const std::vector<ObjectivePair>& front) {
    const auto membership = fuzzy_membership(front);
    double total = 0.0;
    for (const auto& row : membership)
        total += row[0] + row[1];
    if (total <= 0.0)
        throw std::logic_error("best_compromise: degenerate membership sum");
    std::size_t best = 0;
    double best_score = -1.0;
    for (std::size_t m = 0; m < membership.size(); ++m) {
        const double score = (membership[m][0] + membership[m][1]) / total;
        if (score > best_score) {
            best_score = score;
            best = m;
        }
    }
    return best;
}

double velocity_step(double v_prev, double x, double x_local, double x_global,
                     double inertia, double cognitive, double social,
                     double r1, double r2, double v_limit) {
    const double v = inertia * v_prev + cognitive * r1 * (x_local - x) +
                     social * r2 * (x_global - x);
    return std::clamp(v, -v_limit, v_limit);
}

double position_step(double x_prev, double v, double x_min, double x_max) {
    return std::clamp(x_prev + v, x_min, x_max);
}

double update_inertia(double inertia_prev, double decay) {
    return decay * inertia_prev;
}

namespace {

IterationStats snapshot(int iteration, const ParetoArchive& global) {
    IterationStats stats;
    stats.iteration = iteration;
    stats.archive_objectives = global.objectives();
    stats.archive_size = stats.archive_objectives.size();
    stats.min_j1 = std::numeric_limits<double>::infinity();
    stats.min_j2 = std::numeric_limits<double>::infinity();
    for (const auto& p : stats.archive_objectives) {
        stats.min_j1 = std::min(stats.min_j1, p.j1);
        stats.min_j2 = std::min(stats.min_j2, p.j2);
    }
    return stats;
}

} // namespace

MopsoResult run_mopso(const Evaluator& evaluator, const MopsoParams& params,
                      const IterationObserver& observer) {
    params.validate();
    if (params.position_min < 0.0 || params.position_max > 1.0)
        throw ConfigError("position_min/position_max: the relaxed encoding "
                          "needs bounds within [0, 1]");
    const NetworkConfig& cfg = evaluator.config();
    cfg.validate();

    const int pop = params.population;
    const int dim = cfg.num_params();
    const double vlim = params.velocity_limit();
    const int threads = params.threads > 0 ? params.threads : omp_get_max_threads();

    std::vector<double> positions(static_cast<std::size_t>(pop) * dim);
    std::vector<double> velocities(static_cast<std::size_t>(pop) * dim);
    std::vector<double> guide_local(static_cast<std::size_t>(pop) * dim);
    std::vector<double> guide_global(static_cast<std::size_t>(pop) * dim);
    std::vector<ObjectivePair> objectives(pop);
    std::vector<ParetoArchive> locals(pop, ParetoArchive(params.local_capacity));
    ParetoArchive global(params.global_capacity);

    std::vector<std::mt19937_64> rng;
    rng.reserve(pop);
    for (int i = 0; i < pop; ++i)
        rng.push_back(make_rng_stream(params.seed, static_cast<std::uint64_t>(i)));

    // guides are re-selected after each global update; entries picked from
    // iteration t-1 drive the update at t
    auto update_guides = [&]() {
        const auto global_objectives = global.objectives();
#pragma omp parallel for num_threads(threads) schedule(static)
        for (int i = 0; i < pop; ++i) {
            const auto [li, gi] = select_guides(locals[i].objectives(), global_objectives);
            const auto& local_pos = locals[i].entries()[li].position;
            const auto& global_pos = global.entries()[gi].position;
            std::copy(local_pos.begin(), local_pos.end(),
                      guide_local.begin() + static_cast<std::size_t>(i) * dim);
            std::copy(global_pos.begin(), global_pos.end(),
                      guide_global.begin() + static_cast<std::size_t>(i) * dim);
        }
    };

    MopsoResult result;
    result.history.reserve(params.iterations);

    // initialization: uniform random positions and velocities, one-entry
    // local archives, global archive from a non-dominated scan
#pragma omp parallel for num_threads(threads) schedule(static)
    for (int i = 0; i < pop; ++i) {
        auto& gen = rng[i];
        std::uniform_real_distribution<double> position_dist(params.position_min,
                                                             params.position_max);
        std::uniform_real_distribution<double> velocity_dist(-vlim, vlim);
        double* x = positions.data() + static_cast<std::size_t>(i) * dim;
        double* v = velocities.data() + static_cast<std::size_t>(i) * dim;
        for (int j = 0; j < dim; ++j)
            x[j] = position_dist(gen);
        for (int j = 0; j < dim; ++j)
            v[j] = velocity_dist(gen);
        objectives[i] = evaluator.evaluate(std::span<const double>(x, dim));
        locals[i].insert({std::vector<double>(x, x + dim), objectives[i]});
    }
    for (int i = 0; i < pop; ++i) {
        const double* x = positions.data() + static_cast<std::size_t>(i) * dim;
        global.insert({std::vector<double>(x, x + dim), objectives[i]});
    }
    global.enforce_capacity();
    update_guides();

    double inertia = params.initial_inertia;
    result.history.push_back(snapshot(1, global));
    if (observer)
        observer({1, inertia, pop, dim, positions, velocities, locals, global});

    for (int t = 2; t <= params.iterations; ++t) {
        inertia = update_inertia(inertia, params.inertia_decay);

#pragma omp parallel for num_threads(threads) schedule(static)
        for (int i = 0; i < pop; ++i) {
            auto& gen = rng[i];
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            double* x = positions.data() + static_cast<std::size_t>(i) * dim;
            double* v = velocities.data() + static_cast<std::size_t>(i) * dim;
            const double* gl = guide_local.data() + static_cast<std::size_t>(i) * dim;
            const double* gg = guide_global.data() + static_cast<std::size_t>(i) * dim;
            for (int j = 0; j < dim; ++j) {
                const double r1 = unit(gen);
                const double r2 = unit(gen);
                v[j] = velocity_step(v[j], x[j], gl[j], gg[j], inertia,
                                     params.cognitive_weight, params.social_weight,
                                     r1, r2, vlim);
                x[j] = position_step(x[j], v[j], params.position_min, params.position_max);
            }
            objectives[i] = evaluator.evaluate(std::span<const double>(x, dim));
            locals[i].insert({std::vector<double>(x, x + dim), objectives[i]});
            locals[i].enforce_capacity();
        }

        // single-writer merge of every particle's local set, in index order;
        // the cheap pre-check skips the position copy for rejected entries
        for (int i = 0; i < pop; ++i)
            for (const auto& entry : locals[i].entries())
                if (global.would_accept(entry.objectives))
                    global.insert(entry);
        global.enforce_capacity();
        update_guides();

        result.history.push_back(snapshot(t, global));
        if (observer)
            observer({t, inertia, pop, dim, positions, velocities, locals, global});
    }

    result.front = global.entries();
    result.compromise_index = best_compromise(global.objectives());
    return result;
}

MopsoResult run_mopso(const NetworkConfig& cfg, const MobilityModel& mobility,
                      const MopsoParams& params, const IterationObserver& observer) {
    const Evaluator evaluator(cfg, mobility);
    return run_mopso(evaluator, params, observer);
}

} // namespace talopt
