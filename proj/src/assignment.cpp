#include "talopt/assignment.hpp"
#include "talopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <omp.h>

namespace talopt {

AssignmentSolution make_solution(const NetworkConfig& cfg,
                                 const std::vector<std::vector<int>>& member_cells,
                                 const std::vector<std::vector<double>>& member_usage) {
    const int n = cfg.num_cells;
    const auto lists = member_cells.size();
    AssignmentSolution sol;
    sol.num_cells = n;
    sol.lists.resize(lists);
    sol.usage.assign(lists * static_cast<std::size_t>(n), 0.0);
    sol.mme_flags.assign(lists, 1);
    for (std::size_t l = 0; l < lists; ++l) {
        auto& list = sol.lists[l];
        list.members.assign(n, 0);
        list.member_cells = member_cells[l];
        std::sort(list.member_cells.begin(), list.member_cells.end());
        for (std::size_t i = 0; i < member_cells[l].size(); ++i) {
            const int cell = member_cells[l][i];
            list.members[cell] = 1;
            sol.usage[l * n + cell] = member_usage[l][i];
        }
    }
    return sol;
}

AssignmentSolution decode(std::span<const double> position, const NetworkConfig& cfg) {
    const int n = cfg.num_cells;
    const int lists = cfg.num_lists;
    const int size = cfg.list_size;
    const auto expected = static_cast<std::size_t>(cfg.num_params());
    if (position.size() != expected)
        throw EncodingError("position: expected " + std::to_string(expected) +
                            " entries, got " + std::to_string(position.size()));

    AssignmentSolution sol;
    sol.num_cells = n;
    sol.lists.resize(lists);
    sol.usage.assign(static_cast<std::size_t>(lists) * n, 0.0);
    sol.mme_flags.assign(lists, 1);

    std::vector<int> order(n);
    for (int l = 0; l < lists; ++l) {
        const double* membership_block = position.data() + static_cast<std::size_t>(l) * n;
        const double* usage_block =
            position.data() + static_cast<std::size_t>(lists) * n + static_cast<std::size_t>(l) * n;

        // stable sort on descending value keeps the lower cell index first
        // among ties
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return membership_block[a] > membership_block[b];
        });

        auto& list = sol.lists[l];
        list.members.assign(n, 0);
        list.member_cells.assign(order.begin(), order.begin() + size);
        std::sort(list.member_cells.begin(), list.member_cells.end());
        for (int cell : list.member_cells)
            list.members[cell] = 1;

        double sum = 0.0;
        for (int cell : list.member_cells)
            sum += usage_block[cell];
        double* usage_row = sol.usage.data() + static_cast<std::size_t>(l) * n;
        if (sum > 0.0) {
            for (int cell : list.member_cells)
                usage_row[cell] = usage_block[cell] / sum;
        } else {
            for (int cell : list.member_cells)
                usage_row[cell] = 1.0 / size;
        }
    }
    return sol;
}

bool ViolationReport::all_passed() const {
    for (const auto& check : checks)
        if (!check.passed)
            return false;
    return true;
}

double ViolationReport::max_violation() const {
    double worst = 0.0;
    for (const auto& check : checks)
        worst = std::max(worst, check.violation);
    return worst;
}

ViolationReport check_constraints(const AssignmentSolution& sol, const NetworkConfig& cfg) {
    ViolationReport report;
    const int n = cfg.num_cells;
    const int mx = cfg.resolved_max_offdiag();
    for (std::size_t l = 0; l < sol.lists.size(); ++l) {
        const auto& list = sol.lists[l];
        const int count = static_cast<int>(list.member_cells.size());
        const int li = static_cast<int>(l);

        report.checks.push_back({"list_size", li, count == cfg.list_size,
                                 std::abs(static_cast<double>(count - cfg.list_size))});

        // off-diagonal ones of the expanded assignment: count*(count-1)
        const double offdiag = static_cast<double>(count) * (count - 1);
        report.checks.push_back({"max_offdiag", li, offdiag <= mx,
                                 std::max(0.0, offdiag - mx)});

        // expanded assignment is an outer product, symmetric by construction
        report.checks.push_back({"symmetry", li, true, 0.0});

        double masked = 0.0;
        double member_sum = 0.0;
        double bounds_excess = 0.0;
        for (int cell = 0; cell < n; ++cell) {
            const double value = sol.usage_at(li, cell);
            if (list.members[cell])
                member_sum += value;
            else
                masked += std::abs(value);
            if (value < 0.0)
                bounds_excess += -value;
            else if (value > 1.0)
                bounds_excess += value - 1.0;
        }
        report.checks.push_back({"usage_masking", li, masked == 0.0, masked});

        // the MME-load equality; vacuous for an empty list
        const double deficit = count > 0 ? std::abs(member_sum - 1.0) : 0.0;
        const bool normalized = deficit <= 1e-9;
        report.checks.push_back(
            {"usage_normalization", li, normalized, normalized ? 0.0 : deficit});

        report.checks.push_back({"usage_bounds", li, bounds_excess == 0.0, bounds_excess});

        const bool flag_ok = sol.mme_flags[l] <= 1;
        report.checks.push_back({"mme_binary", li, flag_ok, flag_ok ? 0.0 : 1.0});
    }
    return report;
}

double tau_cost(const AssignmentSolution& sol, const MobilityModel& mobility,
                const NetworkConfig& cfg, int cell) {
    const int n = cfg.num_cells;
    const int lists = static_cast<int>(sol.lists.size());
    double inner = 0.0;
    for (int other = 0; other < n; ++other) {
        if (other == cell)
            continue;
        double per_list = 0.0;
        for (int l = 0; l < lists; ++l) {
            const double owned = sol.mme_flags[l] ? 1.0 : 0.0;
            const double outside = sol.assigned_pair(l, cell, other) ? 0.0 : 1.0;
            per_list += cfg.relocation_cost_unit * owned * sol.usage_at(l, cell) * outside;
        }
        inner += mobility.rate(cell, other) * per_list;
    }
    return cfg.users(cell) * cfg.tau_cost_unit * inner;
}

double paging_cost(const AssignmentSolution& sol, const NetworkConfig& cfg, int cell) {
    const int n = cfg.num_cells;
    const int lists = static_cast<int>(sol.lists.size());
    double own = 0.0;
    for (int l = 0; l < lists; ++l)
        own += cfg.users(cell) * sol.usage_at(l, cell);
    double co_members = 0.0;
    for (int l = 0; l < lists; ++l)
        for (int other = 0; other < n; ++other) {
            if (other == cell || !sol.assigned_pair(l, cell, other))
                continue;
            co_members += cfg.users(other) * sol.usage_at(l, other);
        }
    return cfg.paging_rate * cfg.paging_cost_unit * (own + co_members);
}

double handover_cost(const AssignmentSolution& sol, const MobilityModel& mobility,
                     const NetworkConfig& cfg, int cell) {
    const int n = cfg.num_cells;
    const int lists = static_cast<int>(sol.lists.size());
    double total = 0.0;
    for (int l = 0; l < lists; ++l)
        for (int other = 0; other < n; ++other) {
            if (other == cell || sol.assigned_pair(l, cell, other))
                continue;
            total += cfg.users(cell) * mobility.rate(cell, other);
        }
    return total;
}

double total_signaling_cost(const AssignmentSolution& sol, const MobilityModel& mobility,
                            const NetworkConfig& cfg) {
    double total = 0.0;
    for (int cell = 0; cell < cfg.num_cells; ++cell)
        total += tau_cost(sol, mobility, cfg, cell) + paging_cost(sol, cfg, cell);
    return total;
}

double total_handover_cost(const AssignmentSolution& sol, const MobilityModel& mobility,
                           const NetworkConfig& cfg) {
    double total = 0.0;
    for (int cell = 0; cell < cfg.num_cells; ++cell)
        total += handover_cost(sol, mobility, cfg, cell);
    return total;
}

double power_consumption_mw(const AssignmentSolution& sol, const MobilityModel& mobility,
                            const NetworkConfig& cfg) {
    const int n = cfg.num_cells;
    const int lists = static_cast<int>(sol.lists.size());
    double event_rate = 0.0;
    double total_users = 0.0;
    for (int cell = 0; cell < n; ++cell) {
        total_users += cfg.users(cell);
        for (int other = 0; other < n; ++other) {
            if (other == cell)
                continue;
            double per_list = 0.0;
            for (int l = 0; l < lists; ++l) {
                if (!sol.mme_flags[l] || sol.assigned_pair(l, cell, other))
                    continue;
                per_list += sol.usage_at(l, cell);
            }
            event_rate += cfg.users(cell) * mobility.rate(cell, other) * per_list;
        }
    }
    if (total_users <= 0.0)
        return 0.0;
    return 10.0 * event_rate / total_users;
}

Evaluator::Evaluator(const NetworkConfig& cfg, const MobilityModel& mobility)
    : cfg_(&cfg), mobility_(&mobility) {
    if (mobility.num_cells != cfg.num_cells)
        throw ConfigError("mobility: size does not match num_cells");
    const int n = cfg.num_cells;
    neighbor_offsets_.assign(n + 1, 0);
    users_.resize(n);
    for (int k = 0; k < n; ++k) {
        users_[k] = cfg.users(k);
        total_users_ += users_[k];
        neighbor_offsets_[k] = static_cast<int>(neighbor_cells_.size());
        for (int m = 0; m < n; ++m) {
            const double rate = mobility.rate(k, m);
            if (m != k && rate != 0.0) {
                neighbor_cells_.push_back(m);
                neighbor_rates_.push_back(rate);
            }
        }
    }
    neighbor_offsets_[n] = static_cast<int>(neighbor_cells_.size());
}

ObjectivePair Evaluator::evaluate(std::span<const double> position) const {
    return evaluate(decode(position, *cfg_));
}

ObjectivePair Evaluator::evaluate(const AssignmentSolution& sol) const {
    const NetworkConfig& cfg = *cfg_;
    const int n = cfg.num_cells;
    const int lists = static_cast<int>(sol.lists.size());

    // per-list usage-weighted UE mass, shared by every member's paging term
    std::vector<double> list_mass(lists, 0.0);
    for (int l = 0; l < lists; ++l) {
        double mass = 0.0;
        for (int cell : sol.lists[l].member_cells)
            mass += users_[cell] * sol.usage_at(l, cell);
        list_mass[l] = mass;
    }

    const double paging_scale = cfg.paging_rate * cfg.paging_cost_unit;
    const double tau_scale = cfg.tau_cost_unit * cfg.relocation_cost_unit;
    double j1 = 0.0;
    double j2 = 0.0;
    for (int k = 0; k < n; ++k) {
        double paging = 0.0;
        for (int l = 0; l < lists; ++l)
            if (sol.in_list(l, k))
                paging += list_mass[l];

        double tau_inner = 0.0;
        double handover_inner = 0.0;
        for (int idx = neighbor_offsets_[k]; idx < neighbor_offsets_[k + 1]; ++idx) {
            const int m = neighbor_cells_[idx];
            double tau_terms = 0.0;
            double handover_terms = 0.0;
            for (int l = 0; l < lists; ++l) {
                if (sol.assigned_pair(l, k, m))
                    continue;
                handover_terms += 1.0;
                if (sol.mme_flags[l])
                    tau_terms += sol.usage_at(l, k);
            }
            tau_inner += neighbor_rates_[idx] * tau_terms;
            handover_inner += neighbor_rates_[idx] * handover_terms;
        }
        j1 += paging_scale * paging + users_[k] * tau_scale * tau_inner;
        j2 += users_[k] * handover_inner;
    }
    return {j1, j2};
}

double Evaluator::power_mw(const AssignmentSolution& sol) const {
    const int n = cfg_->num_cells;
    const int lists = static_cast<int>(sol.lists.size());
    double event_rate = 0.0;
    for (int k = 0; k < n; ++k) {
        double inner = 0.0;
        for (int idx = neighbor_offsets_[k]; idx < neighbor_offsets_[k + 1]; ++idx) {
            const int m = neighbor_cells_[idx];
            double terms = 0.0;
            for (int l = 0; l < lists; ++l) {
                if (!sol.mme_flags[l] || sol.assigned_pair(l, k, m))
                    continue;
                terms += sol.usage_at(l, k);
            }
            inner += neighbor_rates_[idx] * terms;
        }
        event_rate += users_[k] * inner;
    }
    if (total_users_ <= 0.0)
        return 0.0;
    return 10.0 * event_rate / total_users_;
}

void evaluate_batch_serial(const Evaluator& evaluator, std::span<const double> positions,
                           int num_candidates, std::span<ObjectivePair> out) {
    const int dim = evaluator.config().num_params();
    for (int i = 0; i < num_candidates; ++i)
        out[i] = evaluator.evaluate(positions.subspan(static_cast<std::size_t>(i) * dim, dim));
}

void evaluate_batch_parallel(const Evaluator& evaluator, std::span<const double> positions,
                             int num_candidates, std::span<ObjectivePair> out, int threads) {
    const int dim = evaluator.config().num_params();
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for num_threads(nthreads) schedule(static)
    for (int i = 0; i < num_candidates; ++i)
        out[i] = evaluator.evaluate(positions.subspan(static_cast<std::size_t>(i) * dim, dim));
}

} // namespace talopt
