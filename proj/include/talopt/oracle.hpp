#pragma once

#include "talopt/assignment.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace talopt {

struct FrontPoint {
    AssignmentSolution solution;
    ObjectivePair objectives;
};

/// Exact non-dominated set over the full membership x usage-grid search
/// space of a tiny instance, plus its hypervolume.
struct OracleResult {
    std::vector<FrontPoint> front; // sorted by ascending j1
    double hypervolume = 0.0;
    ObjectivePair reference{}; // 1.1 * front maxima
    double sigma_step = 0.0;
    std::uint64_t enumerated = 0;
};

/// Enumerates every membership combination and every usage split on a
/// simplex grid with the given step (1/step must be an integer). Refuses
/// with a size estimate when the full product exceeds the budget.
OracleResult true_pareto_front(const NetworkConfig& cfg, const MobilityModel& mobility,
                               double sigma_step = 0.1,
                               std::uint64_t budget = 10'000'000);

struct BaselineResult {
    AssignmentSolution solution;
    ObjectivePair objectives{};
    bool used_fallback = false;
    std::string method; // "exhaustive" or "hill_climb"
};

/// Minimizes weight * J1 + (1 - weight) * J2, both min-max normalized over
/// the sampled extremes. Tiny instances get the exhaustive grid; anything
/// over budget falls back to a seeded hill climb and says so in the result.
BaselineResult weighted_sum_baseline(const NetworkConfig& cfg, const MobilityModel& mobility,
                                     double weight, double sigma_step = 0.1,
                                     std::uint64_t budget = 10'000'000,
                                     std::uint64_t seed = 1);

/// Exact two-objective hypervolume: sort on j1 and sum rectangles against
/// the reference point. Dominated input points contribute nothing; a point
/// outside the reference box is an error.
double hypervolume(const std::vector<ObjectivePair>& front, const ObjectivePair& reference);

} // namespace talopt
