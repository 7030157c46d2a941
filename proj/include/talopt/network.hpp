#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace talopt {

/// Cell grid, UE population and cost constants shared by both objectives.
struct NetworkConfig {
    int num_cells = 30;
    int num_lists = 10;
    int list_size = 16;   // cells per tracking area list
    int max_offdiag = -1; // cap on off-diagonal assignment pairs; -1 = list_size*(list_size-1)
    std::vector<double> users_per_cell; // per-cell UE counts; empty = uniform default_users
    double default_users = 100.0;
    double paging_rate = 0.05;         // paging arrivals per UE per unit time
    double cell_radius_m = 500.0;      // hexagon side length
    double speed_min_mps = 0.0;        // admissible UE speed domain
    double speed_max_mps = 33.0;
    double tau_cost_unit = 1.0;        // cost of one tracking area update
    double relocation_cost_unit = 1.0; // MME relocation cost per handover
    double paging_cost_unit = 1.0;     // paging cost per UE
    int grid_rows = 5;
    int grid_cols = 6;

    double users(int cell) const;
    int resolved_max_offdiag() const;
    double hex_area_m2() const;
    int num_params() const { return 2 * num_lists * num_cells; }

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Symmetric boolean adjacency over the offset-row hexagonal grid.
struct Adjacency {
    int num_cells = 0;
    std::vector<std::uint8_t> cells; // row-major num_cells x num_cells

    bool at(int k, int n) const {
        return cells[static_cast<std::size_t>(k) * num_cells + n] != 0;
    }
    int degree(int k) const;
};

/// Per-UE transition rates between cells; zero outside the adjacency support.
struct MobilityModel {
    int num_cells = 0;
    std::vector<double> rates; // row-major num_cells x num_cells
    Adjacency adjacency;

    double rate(int k, int n) const {
        return rates[static_cast<std::size_t>(k) * num_cells + n];
    }
};

/// Offset-row ("pointy-top") hex packing: odd rows shifted half a cell right.
/// Interior cells end up with exactly six neighbors, boundary cells fewer.
Adjacency build_topology(const NetworkConfig& cfg);

/// Fluid-flow boundary crossing rate of one cell at the given UE speed:
/// density * perimeter * speed / pi, with hexagonal perimeter 6 * radius.
double crossing_rate(const NetworkConfig& cfg, double speed_mps, int cell = 0);

/// Converts each cell's aggregate outflow into a per-UE rate split uniformly
/// over its actual neighbors. Rows are capped so they never sum above 1.
MobilityModel build_mobility(const NetworkConfig& cfg, double speed_mps,
                             const Adjacency& adjacency);

} // namespace talopt
