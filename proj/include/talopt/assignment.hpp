#pragma once

#include "talopt/network.hpp"

#include <span>
#include <string>
#include <vector>

namespace talopt {

/// (J1, J2) evaluation of one candidate: total TAU + paging signaling cost
/// and total inter-list handover cost. Both minimized.
struct ObjectivePair {
    double j1 = 0.0;
    double j2 = 0.0;
};

/// One tracking area list as a boolean membership over all cells.
struct TalMembership {
    std::vector<std::uint8_t> members; // size num_cells
    std::vector<int> member_cells;     // sorted indices of the set entries
};

/// Decoded candidate: list memberships plus masked, normalized usage
/// fractions. The expanded pairwise assignment of a list is the outer
/// product of its membership vector with itself, so it is symmetric by
/// construction.
struct AssignmentSolution {
    int num_cells = 0;
    std::vector<TalMembership> lists;
    std::vector<double> usage;           // num_lists x num_cells, row-major
    std::vector<std::uint8_t> mme_flags; // one flag per list; 1 under the
                                         // centralized one-to-one scheme

    double usage_at(int list, int cell) const {
        return usage[static_cast<std::size_t>(list) * num_cells + cell];
    }
    bool in_list(int list, int cell) const {
        return lists[static_cast<std::size_t>(list)].members[cell] != 0;
    }
    /// Expanded pairwise assignment: both cells belong to the list.
    bool assigned_pair(int list, int k, int n) const {
        return in_list(list, k) && in_list(list, n);
    }
};

/// Builds a solution from explicit per-list member cells and their usage
/// fractions (taken verbatim, not normalized). Used by the enumeration
/// oracle and by tests that need hand-crafted candidates.
AssignmentSolution make_solution(const NetworkConfig& cfg,
                                 const std::vector<std::vector<int>>& member_cells,
                                 const std::vector<std::vector<double>>& member_usage);

/// Decodes a flat particle position of length 2*L*N with entries in [0,1].
/// Per list, the list_size largest entries of the first block become the
/// members (ties break toward the lower cell index); the second block is
/// masked by membership and normalized to sum to 1 over the members. If
/// every masked entry is zero the usage falls back to uniform.
AssignmentSolution decode(std::span<const double> position, const NetworkConfig& cfg);

struct ConstraintCheck {
    std::string name;
    int list = -1; // -1: applies to the whole solution
    bool passed = true;
    double violation = 0.0;
};

struct ViolationReport {
    std::vector<ConstraintCheck> checks;
    bool all_passed() const;
    double max_violation() const;
};

/// Diagnostic pass over every constraint of the assignment model. Decode
/// output always comes back clean; hand-built solutions may not.
ViolationReport check_constraints(const AssignmentSolution& sol, const NetworkConfig& cfg);

// Reference transcriptions of the cost model, one cell at a time. These are
// the ground truth the optimized evaluation kernel is tested against.
double tau_cost(const AssignmentSolution& sol, const MobilityModel& mobility,
                const NetworkConfig& cfg, int cell);
double paging_cost(const AssignmentSolution& sol, const NetworkConfig& cfg, int cell);
double handover_cost(const AssignmentSolution& sol, const MobilityModel& mobility,
                     const NetworkConfig& cfg, int cell);

/// J1: sum over cells of TAU plus paging cost.
double total_signaling_cost(const AssignmentSolution& sol, const MobilityModel& mobility,
                            const NetworkConfig& cfg);
/// J2: sum over cells of inter-list handover cost.
double total_handover_cost(const AssignmentSolution& sol, const MobilityModel& mobility,
                           const NetworkConfig& cfg);

/// Network-average per-UE battery drain in milliwatts, at 10 mW per
/// triggered tracking area update.
double power_consumption_mw(const AssignmentSolution& sol, const MobilityModel& mobility,
                            const NetworkConfig& cfg);

/// Evaluation kernel with precomputed neighbor lists over the nonzero
/// transition rates. Pure and immutable after construction; safe to share
/// across any number of concurrent evaluations. Holds references to the
/// config and mobility model, which must outlive it.
class Evaluator {
public:
    Evaluator(const NetworkConfig& cfg, const MobilityModel& mobility);

    ObjectivePair evaluate(std::span<const double> position) const;
    ObjectivePair evaluate(const AssignmentSolution& sol) const;
    double power_mw(const AssignmentSolution& sol) const;

    const NetworkConfig& config() const { return *cfg_; }
    const MobilityModel& mobility() const { return *mobility_; }

private:
    const NetworkConfig* cfg_;
    const MobilityModel* mobility_;
    std::vector<int> neighbor_offsets_; // CSR over nonzero rates
    std::vector<int> neighbor_cells_;
    std::vector<double> neighbor_rates_;
    std::vector<double> users_;
    double total_users_ = 0.0;
};

/// Serial reference for the batch kernel, kept for tests and benchmarks.
/// positions holds num_candidates rows of cfg.num_params() entries each.
void evaluate_batch_serial(const Evaluator& evaluator, std::span<const double> positions,
                           int num_candidates, std::span<ObjectivePair> out);

/// OpenMP batch evaluation. Runs the identical per-candidate arithmetic as
/// the serial path, so results match it bit for bit. threads <= 0 uses the
/// OpenMP default.
void evaluate_batch_parallel(const Evaluator& evaluator, std::span<const double> positions,
                             int num_candidates, std::span<ObjectivePair> out,
                             int threads = 0);

} // namespace talopt
