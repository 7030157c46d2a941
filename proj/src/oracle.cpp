#include "talopt/oracle.hpp"
#include "talopt/errors.hpp"
#include "talopt/mopso.hpp"
#include "talopt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include <omp.h>

namespace talopt {

namespace {

constexpr std::uint64_t kCountCap = std::numeric_limits<std::uint64_t>::max() / 4;

// Pascal triangle with saturation; enumeration sizes that matter fit easily.
class BinomialTable {
public:
    explicit BinomialTable(int max_n) : max_n_(max_n), table_((max_n + 1) * (max_n + 1), 0) {
        for (int n = 0; n <= max_n; ++n) {
            at(n, 0) = 1;
            for (int k = 1; k <= n; ++k) {
                const std::uint64_t a = at(n - 1, k - 1);
                const std::uint64_t b = k <= n - 1 ? at(n - 1, k) : 0;
                at(n, k) = (a >= kCountCap || b >= kCountCap || a + b >= kCountCap)
                               ? kCountCap
                               : a + b;
            }
        }
    }

    std::uint64_t operator()(int n, int k) const {
        if (k < 0 || n < 0 || k > n)
            return 0;
        return table_[static_cast<std::size_t>(n) * (max_n_ + 1) + k];
    }

private:
    std::uint64_t& at(int n, int k) {
        return table_[static_cast<std::size_t>(n) * (max_n_ + 1) + k];
    }
    int max_n_;
    std::vector<std::uint64_t> table_;
};

// rank -> lexicographic k-subset of [0, n)
void unrank_combination(const BinomialTable& binom, std::uint64_t rank, int n, int k,
                        int* out) {
    int next = 0;
    for (int i = 0; i < k; ++i) {
        for (int c = next;; ++c) {
            const std::uint64_t with_c = binom(n - 1 - c, k - 1 - i);
            if (rank < with_c) {
                out[i] = c;
                next = c + 1;
                break;
            }
            rank -= with_c;
        }
    }
}

// rank -> lexicographic composition of total into parts nonnegative ints
void unrank_composition(const BinomialTable& binom, std::uint64_t rank, int total,
                        int parts, int* out) {
    for (int i = 0; i < parts - 1; ++i) {
        int head = 0;
        for (;; ++head) {
            const std::uint64_t with_head = binom(total - head + parts - i - 2, parts - i - 2);
            if (rank < with_head)
                break;
            rank -= with_head;
        }
        out[i] = head;
        total -= head;
    }
    out[parts - 1] = total;
}

struct GridShape {
    int grid_steps = 0;               // usage denominator
    std::uint64_t memberships = 0;    // combinations per list
    std::uint64_t compositions = 0;   // usage splits per list
    std::uint64_t per_list = 0;
    std::uint64_t total = 0;
};

int sigma_grid_steps(double sigma_step) {
    if (sigma_step <= 0.0 || sigma_step > 1.0)
        throw ConfigError("sigma_step: must be in (0, 1]");
    const double steps = 1.0 / sigma_step;
    const int rounded = static_cast<int>(std::llround(steps));
    if (std::abs(steps - rounded) > 1e-9)
        throw ConfigError("sigma_step: 1/step must be an integer");
    return rounded;
}

GridShape grid_shape(const NetworkConfig& cfg, double sigma_step, std::uint64_t budget,
                     const BinomialTable& binom) {
    GridShape shape;
    shape.grid_steps = sigma_grid_steps(sigma_step);

    shape.memberships = binom(cfg.num_cells, cfg.list_size);
    shape.compositions = binom(shape.grid_steps + cfg.list_size - 1, cfg.list_size - 1);
    const long double estimate =
        std::pow(static_cast<long double>(shape.memberships) *
                     static_cast<long double>(shape.compositions),
                 static_cast<long double>(cfg.num_lists));
    if (shape.memberships >= kCountCap || shape.compositions >= kCountCap ||
        estimate > static_cast<long double>(budget)) {
        char size_text[64];
        std::snprintf(size_text, sizeof(size_text), "%.3Lg", estimate);
        throw BudgetError("enumeration of about " + std::string(size_text) +
                          " candidates exceeds the budget of " + std::to_string(budget));
    }
    shape.per_list = shape.memberships * shape.compositions;
    shape.total = 1;
    for (int l = 0; l < cfg.num_lists; ++l)
        shape.total *= shape.per_list;
    return shape;
}

// writes the joint candidate at the given enumeration index into a reusable
// solution; index digits run list 0 first
void fill_candidate(const NetworkConfig& cfg, const GridShape& shape,
                    const BinomialTable& binom, std::uint64_t index,
                    std::vector<int>& member_scratch, std::vector<int>& split_scratch,
                    AssignmentSolution& sol) {
    const int n = cfg.num_cells;
    const int size = cfg.list_size;
    for (int l = cfg.num_lists - 1; l >= 0; --l) {
        const std::uint64_t digit = index % shape.per_list;
        index /= shape.per_list;
        const std::uint64_t member_rank = digit / shape.compositions;
        const std::uint64_t split_rank = digit % shape.compositions;
        unrank_combination(binom, member_rank, n, size, member_scratch.data());
        unrank_composition(binom, split_rank, shape.grid_steps, size, split_scratch.data());

        auto& list = sol.lists[l];
        std::fill(list.members.begin(), list.members.end(), 0);
        double* usage_row = sol.usage.data() + static_cast<std::size_t>(l) * n;
        std::fill(usage_row, usage_row + n, 0.0);
        list.member_cells.assign(member_scratch.begin(), member_scratch.end());
        for (int i = 0; i < size; ++i) {
            list.members[member_scratch[i]] = 1;
            usage_row[member_scratch[i]] =
                static_cast<double>(split_scratch[i]) / shape.grid_steps;
        }
    }
}

AssignmentSolution blank_solution(const NetworkConfig& cfg) {
    AssignmentSolution sol;
    sol.num_cells = cfg.num_cells;
    sol.lists.resize(cfg.num_lists);
    for (auto& list : sol.lists)
        list.members.assign(cfg.num_cells, 0);
    sol.usage.assign(static_cast<std::size_t>(cfg.num_lists) * cfg.num_cells, 0.0);
    sol.mme_flags.assign(cfg.num_lists, 1);
    return sol;
}

struct IndexedPoint {
    std::uint64_t index;
    ObjectivePair objectives;
};

// dominance insert that keeps the first-seen candidate for duplicate
// objective points
void front_insert(std::vector<IndexedPoint>& front, const IndexedPoint& candidate) {
    for (const auto& p : front) {
        if (dominates(p.objectives, candidate.objectives))
            return;
        if (p.objectives.j1 == candidate.objectives.j1 &&
            p.objectives.j2 == candidate.objectives.j2)
            return;
    }
    std::erase_if(front, [&](const IndexedPoint& p) {
        return dominates(candidate.objectives, p.objectives);
    });
    front.push_back(candidate);
}

} // namespace

OracleResult true_pareto_front(const NetworkConfig& cfg, const MobilityModel& mobility,
                               double sigma_step, std::uint64_t budget) {
    cfg.validate();
    const BinomialTable binom(cfg.num_cells + sigma_grid_steps(sigma_step) + 2);
    const GridShape shape = grid_shape(cfg, sigma_step, budget, binom);
    const Evaluator evaluator(cfg, mobility);

    // fixed chunking keeps the merge order independent of the thread count
    const std::uint64_t chunk_count = std::min<std::uint64_t>(64, shape.total);
    const std::uint64_t chunk_base = shape.total / chunk_count;
    const std::uint64_t chunk_rem = shape.total % chunk_count;
    std::vector<std::vector<IndexedPoint>> chunk_fronts(chunk_count);

#pragma omp parallel for schedule(dynamic)
    for (int chunk = 0; chunk < static_cast<int>(chunk_count); ++chunk) {
        const auto c = static_cast<std::uint64_t>(chunk);
        const std::uint64_t lo = c * chunk_base + std::min(c, chunk_rem);
        const std::uint64_t hi = lo + chunk_base + (c < chunk_rem ? 1 : 0);
        auto scratch = blank_solution(cfg);
        std::vector<int> member_scratch(cfg.list_size);
        std::vector<int> split_scratch(cfg.list_size);
        auto& local_front = chunk_fronts[chunk];
        for (std::uint64_t index = lo; index < hi; ++index) {
            fill_candidate(cfg, shape, binom, index, member_scratch, split_scratch, scratch);
            front_insert(local_front, {index, evaluator.evaluate(scratch)});
        }
    }

    std::vector<IndexedPoint> merged;
    for (const auto& chunk_front : chunk_fronts)
        for (const auto& p : chunk_front)
            front_insert(merged, p);
    std::sort(merged.begin(), merged.end(), [](const IndexedPoint& a, const IndexedPoint& b) {
        return a.objectives.j1 < b.objectives.j1;
    });

    OracleResult result;
    result.sigma_step = sigma_step;
    result.enumerated = shape.total;
    result.front.reserve(merged.size());
    std::vector<int> member_scratch(cfg.list_size);
    std::vector<int> split_scratch(cfg.list_size);
    double max1 = 0.0, max2 = 0.0;
    for (const auto& p : merged) {
        auto sol = blank_solution(cfg);
        fill_candidate(cfg, shape, binom, p.index, member_scratch, split_scratch, sol);
        result.front.push_back({std::move(sol), p.objectives});
        max1 = std::max(max1, p.objectives.j1);
        max2 = std::max(max2, p.objectives.j2);
    }
    result.reference = {1.1 * max1, 1.1 * max2};
    std::vector<ObjectivePair> objectives;
    objectives.reserve(result.front.size());
    for (const auto& p : result.front)
        objectives.push_back(p.objectives);
    result.hypervolume = hypervolume(objectives, result.reference);
    return result;
}

BaselineResult weighted_sum_baseline(const NetworkConfig& cfg, const MobilityModel& mobility,
                                     double weight, double sigma_step, std::uint64_t budget,
                                     std::uint64_t seed) {
    cfg.validate();
    if (weight < 0.0 || weight > 1.0)
        throw ConfigError("weight: must be in [0, 1]");
    const Evaluator evaluator(cfg, mobility);

    const BinomialTable binom(cfg.num_cells + sigma_grid_steps(sigma_step) + 2);
    bool exhaustive = true;
    GridShape shape;
    try {
        shape = grid_shape(cfg, sigma_step, budget, binom);
    } catch (const BudgetError&) {
        exhaustive = false;
    }

    BaselineResult result;
    if (exhaustive) {
        result.method = "exhaustive";
        auto scratch = blank_solution(cfg);
        std::vector<int> member_scratch(cfg.list_size);
        std::vector<int> split_scratch(cfg.list_size);

        // pass 1: objective extremes over the grid
        double min1 = std::numeric_limits<double>::infinity(), max1 = -min1;
        double min2 = min1, max2 = -min1;
        for (std::uint64_t index = 0; index < shape.total; ++index) {
            fill_candidate(cfg, shape, binom, index, member_scratch, split_scratch, scratch);
            const ObjectivePair objectives = evaluator.evaluate(scratch);
            min1 = std::min(min1, objectives.j1);
            max1 = std::max(max1, objectives.j1);
            min2 = std::min(min2, objectives.j2);
            max2 = std::max(max2, objectives.j2);
        }
        const double inv1 = max1 > min1 ? 1.0 / (max1 - min1) : 0.0;
        const double inv2 = max2 > min2 ? 1.0 / (max2 - min2) : 0.0;

        // pass 2: first index minimizing the normalized weighted sum
        std::uint64_t best_index = 0;
        ObjectivePair best_objectives{};
        double best_score = std::numeric_limits<double>::infinity();
        for (std::uint64_t index = 0; index < shape.total; ++index) {
            fill_candidate(cfg, shape, binom, index, member_scratch, split_scratch, scratch);
            const ObjectivePair objectives = evaluator.evaluate(scratch);
            const double score = weight * (objectives.j1 - min1) * inv1 +
                                 (1.0 - weight) * (objectives.j2 - min2) * inv2;
            if (score < best_score) {
                best_score = score;
                best_index = index;
                best_objectives = objectives;
            }
        }
        auto sol = blank_solution(cfg);
        fill_candidate(cfg, shape, binom, best_index, member_scratch, split_scratch, sol);
        result.objectives = best_objectives;
        result.solution = std::move(sol);
        return result;
    }

    // fallback: seeded random search plus single-entry usage perturbations,
    // normalized over the extremes seen along the way
    result.used_fallback = true;
    result.method = "hill_climb";
    auto rng = make_rng_stream(seed, 0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int dim = cfg.num_params();

    std::vector<std::vector<double>> samples;
    std::vector<ObjectivePair> sample_objs;
    const int restarts = 64;
    for (int r = 0; r < restarts; ++r) {
        std::vector<double> x(dim);
        for (double& v : x)
            v = unit(rng);
        samples.push_back(std::move(x));
        sample_objs.push_back(evaluator.evaluate(samples.back()));
    }
    double min1 = std::numeric_limits<double>::infinity(), max1 = -min1;
    double min2 = min1, max2 = -min1;
    auto widen = [&](const ObjectivePair& p) {
        min1 = std::min(min1, p.j1);
        max1 = std::max(max1, p.j1);
        min2 = std::min(min2, p.j2);
        max2 = std::max(max2, p.j2);
    };
    for (const auto& p : sample_objs)
        widen(p);
    auto score = [&](const ObjectivePair& p) {
        const double inv1 = max1 > min1 ? 1.0 / (max1 - min1) : 0.0;
        const double inv2 = max2 > min2 ? 1.0 / (max2 - min2) : 0.0;
        return weight * (p.j1 - min1) * inv1 + (1.0 - weight) * (p.j2 - min2) * inv2;
    };

    std::size_t best = 0;
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (score(sample_objs[i]) < score(sample_objs[best]))
            best = i;
    std::vector<double> current = samples[best];
    ObjectivePair current_obj = sample_objs[best];

    std::uniform_int_distribution<int> pick(0, dim - 1);
    const int steps = 4000;
    for (int s = 0; s < steps; ++s) {
        std::vector<double> candidate = current;
        candidate[pick(rng)] = unit(rng);
        const ObjectivePair obj = evaluator.evaluate(candidate);
        widen(obj);
        if (score(obj) < score(current_obj)) {
            current = std::move(candidate);
            current_obj = obj;
        }
    }
    result.solution = decode(current, cfg);
    result.objectives = current_obj;
    return result;
}

double hypervolume(const std::vector<ObjectivePair>& front, const ObjectivePair& reference) {
    if (front.empty())
        return 0.0;
    for (const auto& p : front)
        if (p.j1 > reference.j1 || p.j2 > reference.j2)
            throw std::invalid_argument("hypervolume: point outside the reference box");

    std::vector<ObjectivePair> points = front;
    std::sort(points.begin(), points.end(), [](const ObjectivePair& a, const ObjectivePair& b) {
        return a.j1 < b.j1 || (a.j1 == b.j1 && a.j2 < b.j2);
    });
    // keep the staircase: strictly improving j2 when scanning by ascending j1
    std::vector<ObjectivePair> staircase;
    for (const auto& p : points)
        if (staircase.empty() || p.j2 < staircase.back().j2)
            staircase.push_back(p);

    double volume = 0.0;
    for (std::size_t i = 0; i < staircase.size(); ++i) {
        const double next_j1 = i + 1 < staircase.size() ? staircase[i + 1].j1 : reference.j1;
        volume += (next_j1 - staircase[i].j1) * (reference.j2 - staircase[i].j2);
    }
    return volume;
}

} // namespace talopt
