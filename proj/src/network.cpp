#include "talopt/network.hpp"
#include "talopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace talopt {

double NetworkConfig::users(int cell) const {
    if (users_per_cell.empty())
        return default_users;
    return users_per_cell[static_cast<std::size_t>(cell)];
}

int NetworkConfig::resolved_max_offdiag() const {
    return max_offdiag < 0 ? list_size * (list_size - 1) : max_offdiag;
}

double NetworkConfig::hex_area_m2() const {
    return 1.5 * std::sqrt(3.0) * cell_radius_m * cell_radius_m;
}

void NetworkConfig::validate() const {
    if (num_cells < 1)
        throw ConfigError("num_cells: must be >= 1");
    if (num_lists < 1)
        throw ConfigError("num_lists: must be >= 1");
    if (list_size < 1 || list_size > num_cells)
        throw ConfigError("list_size: must satisfy 1 <= list_size <= num_cells");
    if (grid_rows < 1 || grid_cols < 1 || grid_rows * grid_cols != num_cells)
        throw ConfigError("grid_rows/grid_cols: product must equal num_cells");
    if (resolved_max_offdiag() < list_size * (list_size - 1))
        throw ConfigError("max_offdiag: must be >= list_size*(list_size-1); "
                          "smaller values make full lists infeasible");
    if (!users_per_cell.empty() &&
        static_cast<int>(users_per_cell.size()) != num_cells)
        throw ConfigError("users_per_cell: needs one entry per cell");
    for (double u : users_per_cell)
        if (u < 0.0)
            throw ConfigError("users_per_cell: entries must be >= 0");
    if (default_users < 0.0)
        throw ConfigError("default_users: must be >= 0");
    if (paging_rate < 0.0)
        throw ConfigError("paging_rate: must be >= 0");
    if (cell_radius_m <= 0.0)
        throw ConfigError("cell_radius_m: must be > 0");
    if (speed_min_mps < 0.0 || speed_min_mps > speed_max_mps)
        throw ConfigError("speed_min_mps/speed_max_mps: need 0 <= min <= max");
    if (tau_cost_unit < 0.0 || relocation_cost_unit < 0.0 || paging_cost_unit < 0.0)
        throw ConfigError("cost units: must be >= 0");
}

int Adjacency::degree(int k) const {
    const auto* row = cells.data() + static_cast<std::size_t>(k) * num_cells;
    int deg = 0;
    for (int n = 0; n < num_cells; ++n)
        deg += row[n] != 0;
    return deg;
}

Adjacency build_topology(const NetworkConfig& cfg) {
    const int rows = cfg.grid_rows;
    const int cols = cfg.grid_cols;
    const int n = cfg.num_cells;
    if (rows < 1 || cols < 1 || rows * cols != n)
        throw ConfigError("grid_rows/grid_cols: layout does not match num_cells");

    Adjacency adj;
    adj.num_cells = n;
    adj.cells.assign(static_cast<std::size_t>(n) * n, 0);
    auto link = [&](int a, int b) {
        adj.cells[static_cast<std::size_t>(a) * n + b] = 1;
        adj.cells[static_cast<std::size_t>(b) * n + a] = 1;
    };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const int cell = r * cols + c;
            if (c + 1 < cols)
                link(cell, cell + 1);
            if (r + 1 < rows) {
                link(cell, cell + cols);
                // second below-row neighbor shifts left on even rows and
                // right on odd rows
                const int shifted = (r % 2 == 0) ? c - 1 : c + 1;
                if (shifted >= 0 && shifted < cols)
                    link(cell, (r + 1) * cols + shifted);
            }
        }
    }
    return adj;
}

double crossing_rate(const NetworkConfig& cfg, double speed_mps, int cell) {
    if (speed_mps < 0.0)
        throw ConfigError("speed: must be >= 0");
    const double density = cfg.users(cell) / cfg.hex_area_m2();
    const double perimeter = 6.0 * cfg.cell_radius_m;
    return density * perimeter * speed_mps / std::numbers::pi;
}

MobilityModel build_mobility(const NetworkConfig& cfg, double speed_mps,
                             const Adjacency& adjacency) {
    if (adjacency.num_cells != cfg.num_cells)
        throw ConfigError("adjacency: size does not match num_cells");
    if (speed_mps < cfg.speed_min_mps || speed_mps > cfg.speed_max_mps)
        throw ConfigError("speed: outside the configured speed range");

    const int n = cfg.num_cells;
    MobilityModel model;
    model.num_cells = n;
    model.adjacency = adjacency;
    model.rates.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int k = 0; k < n; ++k) {
        const int deg = adjacency.degree(k);
        if (deg == 0) {
            if (speed_mps > 0.0)
                throw ConfigError("topology: cell " + std::to_string(k) +
                                  " is isolated but speed is nonzero");
            continue;
        }
        const double ue = cfg.users(k);
        if (ue <= 0.0)
            continue; // empty cell has no outflow
        const double per_ue_outflow = crossing_rate(cfg, speed_mps, k) / ue;
        const double per_neighbor = std::min(1.0 / deg, per_ue_outflow / deg);
        for (int m = 0; m < n; ++m)
            if (adjacency.at(k, m))
                model.rates[static_cast<std::size_t>(k) * n + m] = per_neighbor;
    }
    return model;
}

} // namespace talopt
