// Benchmark comparing the serial reference evaluation path against the
// OpenMP kernels, plus a short end-to-end swarm run at both settings.
//
// Build target: talopt-bench. Not part of the test suite.

#include "talopt/experiment.hpp"
#include "talopt/mopso.hpp"
#include "talopt/rng.hpp"

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include <omp.h>

using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

} // namespace

int main() {
    talopt::NetworkConfig cfg; // desk-scale defaults: 30 cells, 10 lists of 16
    const auto adjacency = talopt::build_topology(cfg);
    const auto mobility = talopt::build_mobility(cfg, 16.0, adjacency);
    const talopt::Evaluator evaluator(cfg, mobility);
    const int dim = cfg.num_params();
    const int threads = omp_get_max_threads();

    std::printf("batch objective evaluation, %d parameters per candidate, %d threads\n",
                dim, threads);
    std::printf("%10s %12s %12s %9s %8s\n", "batch", "serial [s]", "openmp [s]", "speedup",
                "match");

    for (const int batch : {200, 1000, 4000}) {
        std::vector<double> positions(static_cast<std::size_t>(batch) * dim);
        auto rng = talopt::make_rng_stream(7, static_cast<std::uint64_t>(batch));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (double& x : positions)
            x = unit(rng);

        std::vector<talopt::ObjectivePair> serial_out(batch);
        std::vector<talopt::ObjectivePair> parallel_out(batch);

        auto t0 = Clock::now();
        talopt::evaluate_batch_serial(evaluator, positions, batch, serial_out);
        const double serial_s = seconds_since(t0);

        t0 = Clock::now();
        talopt::evaluate_batch_parallel(evaluator, positions, batch, parallel_out);
        const double parallel_s = seconds_since(t0);

        bool match = true;
        for (int i = 0; i < batch; ++i)
            match = match && serial_out[i].j1 == parallel_out[i].j1 &&
                    serial_out[i].j2 == parallel_out[i].j2;

        std::printf("%10d %12.4f %12.4f %8.2fx %8s\n", batch, serial_s, parallel_s,
                    serial_s / parallel_s, match ? "exact" : "MISMATCH");
    }

    std::printf("\nfull swarm run, population 400, 40 iterations\n");
    talopt::MopsoParams params;
    params.population = 400;
    params.iterations = 40;
    params.seed = 11;

    params.threads = 1;
    auto t0 = Clock::now();
    const auto serial_run = talopt::run_mopso(evaluator, params);
    const double serial_s = seconds_since(t0);

    params.threads = threads;
    t0 = Clock::now();
    const auto parallel_run = talopt::run_mopso(evaluator, params);
    const double parallel_s = seconds_since(t0);

    bool identical = serial_run.front.size() == parallel_run.front.size();
    for (std::size_t i = 0; identical && i < serial_run.front.size(); ++i)
        identical = serial_run.front[i].objectives.j1 == parallel_run.front[i].objectives.j1 &&
                    serial_run.front[i].objectives.j2 == parallel_run.front[i].objectives.j2;

    std::printf("%10s %12.4f %12.4f %8.2fx %8s\n", "swarm", serial_s, parallel_s,
                serial_s / parallel_s, identical ? "exact" : "MISMATCH");
    return 0;
}
