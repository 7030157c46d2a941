#pragma once

#include "talopt/assignment.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace talopt {

struct MopsoParams {
    int population = 200;
    int iterations = 100;
    int num_intervals = 5;         // velocity bound divisor
    double cognitive_weight = 2.0; // pull toward the particle's own best
    double social_weight = 2.0;    // pull toward the swarm best
    int local_capacity = 5;
    int global_capacity = 10;
    double initial_inertia = 1.0;
    double inertia_decay = 0.99;
    double position_min = 0.0;
    double position_max = 1.0;
    std::uint64_t seed = 1;
    int threads = 0; // 0 = OpenMP default, 1 = serial

    /// Per-parameter velocity bound: (max - min) / num_intervals.
    double velocity_limit() const;
    void validate() const;
};

/// Minimization dominance: no worse in both objectives, strictly better in
/// at least one.
bool dominates(const ObjectivePair& a, const ObjectivePair& b);

struct ArchiveEntry {
    std::vector<double> position;
    ObjectivePair objectives;
};

/// Clustering-based truncation: average-linkage agglomerative clustering in
/// min-max normalized objective space down to target_size clusters, each
/// represented by its centroid-nearest member. Clusters holding the current
/// min-J1 or min-J2 point keep that point instead, so archive extremes
/// survive truncation. Returns the kept indices in ascending order.
std::vector<std::size_t> cluster_reduce(const std::vector<ObjectivePair>& points,
                                        std::size_t target_size);

/// Bounded set of mutually non-dominated entries. insert() applies the
/// dominance rules only; callers run enforce_capacity() at the end of each
/// insert batch, which is when truncation is due.
class ParetoArchive {
public:
    explicit ParetoArchive(std::size_t capacity) : capacity_(capacity) {}

    /// Adds the candidate unless an entry dominates it or ties it exactly;
    /// entries dominated by the candidate are removed. Returns whether the
    /// candidate was added.
    bool insert(ArchiveEntry entry);
    /// True when insert() would take a candidate with these objectives.
    bool would_accept(const ObjectivePair& objectives) const;
    void enforce_capacity();

    const std::vector<ArchiveEntry>& entries() const { return entries_; }
    std::vector<ObjectivePair> objectives() const;
    std::size_t size() const { return entries_.size(); }
    std::size_t capacity() const { return capacity_; }

private:
    std::size_t capacity_;
    std::vector<ArchiveEntry> entries_;
};

/// Minimum-distance pair between a local and a global archive, measured in
/// objective space min-max normalized over the union of both sets. Returns
/// (local index, global index); ties keep the first pair in scan order.
std::pair<std::size_t, std::size_t> select_guides(const std::vector<ObjectivePair>& local,
                                                  const std::vector<ObjectivePair>& global);

/// Per-point, per-objective fuzzy satisfaction over a front: 1 at the
/// objective's minimum, 0 at its maximum, linear in between. A flat
/// objective (min == max) counts as fully satisfied.
std::vector<std::array<double, 2>> fuzzy_membership(const std::vector<ObjectivePair>& front);

/// Index of the front member with the largest normalized membership sum;
/// ties go to the lowest index.
std::size_t best_compromise(const std::vector<ObjectivePair>& front);

/// One component of the velocity update, clamped to [-v_limit, v_limit].
double velocity_step(double v_prev, double x, double x_local, double x_global,
                     double inertia, double cognitive, double social,
                     double r1, double r2, double v_limit);

/// One component of the position update, clamped to [x_min, x_max].
double position_step(double x_prev, double v, double x_min, double x_max);

double update_inertia(double inertia_prev, double decay = 0.99);

struct IterationStats {
    int iteration = 0;
    double min_j1 = 0.0;
    double min_j2 = 0.0;
    std::size_t archive_size = 0;
    std::vector<ObjectivePair> archive_objectives;
};

struct MopsoResult {
    std::vector<ArchiveEntry> front; // final global archive
    std::size_t compromise_index = 0;
    std::vector<IterationStats> history;
};

/// Snapshot handed to the iteration observer; spans are valid only during
/// the callback.
struct IterationView {
    int iteration;
    double inertia;
    int population;
    int num_params;
    std::span<const double> positions;  // population x num_params
    std::span<const double> velocities; // population x num_params
    const std::vector<ParetoArchive>& local_archives;
    const ParetoArchive& global_archive;
};
using IterationObserver = std::function<void(const IterationView&)>;

/// Runs the full swarm: random initialization, velocity/position updates
/// with per-particle RNG streams, per-particle local archives, a single
/// global archive merged once per iteration, and guide selection by nearest
/// normalized objective-space pair. Particle updates and evaluations run in
/// OpenMP parallel; results are identical for any thread count.
MopsoResult run_mopso(const Evaluator& evaluator, const MopsoParams& params,
                      const IterationObserver& observer = {});

MopsoResult run_mopso(const NetworkConfig& cfg, const MobilityModel& mobility,
                      const MopsoParams& params, const IterationObserver& observer = {});

} // namespace talopt
