#pragma once

// Shared fixtures: the 4-cell instance used throughout the suites, with the
// hand-set transition rates 1->2 = 1->3 = 0.1 (1-based) and everything else
// zero.

#include "talopt/assignment.hpp"
#include "talopt/network.hpp"

namespace testinst {

inline talopt::NetworkConfig tiny_config() {
    talopt::NetworkConfig cfg;
    cfg.num_cells = 4;
    cfg.num_lists = 1;
    cfg.list_size = 2;
    cfg.grid_rows = 2;
    cfg.grid_cols = 2;
    cfg.default_users = 100.0;
    cfg.paging_rate = 0.05;
    cfg.cell_radius_m = 500.0;
    return cfg;
}

inline talopt::MobilityModel tiny_hand_mobility() {
    const auto cfg = tiny_config();
    talopt::MobilityModel mobility;
    mobility.num_cells = cfg.num_cells;
    mobility.adjacency = talopt::build_topology(cfg);
    mobility.rates.assign(16, 0.0);
    mobility.rates[0 * 4 + 1] = 0.1;
    mobility.rates[0 * 4 + 2] = 0.1;
    return mobility;
}

// members {1,3} (1-based) with usage (0.4, 0, 0.6, 0)
inline talopt::AssignmentSolution tiny_solution() {
    return talopt::make_solution(tiny_config(), {{0, 2}}, {{0.4, 0.6}});
}

} // namespace testinst
