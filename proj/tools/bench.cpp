// Compares the serial reference experiment runner against the OpenMP one on
// the same workload and verifies their reports are byte-identical.

#include <cstdio>

#include "mskel/experiment.hpp"
#include "mskel/generators.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

int main(int argc, char** argv) {
    std::uint32_t p = 800, q = 800, k = 12, reps = 12;
    double prob = 0.012;
    if (argc > 1 && std::string_view(argv[1]) == "--quick") {
        p = q = 200;
        k = 8;
        reps = 6;
        prob = 0.02;
    }

    const mskel::BipartiteGraph g = mskel::gen_random_bipartite(p, q, prob, 424242);
    mskel::ExperimentConfig config;
    config.k = k;
    config.repetitions = reps;
    config.master_seed = mskel::kDefaultSeed;
    config.policy = mskel::Policy::Canonical;

    std::printf("graph: %u+%u vertices, %zu edges; k=%u, reps=%u\n", p, q, g.edge_count(),
                k, reps);

    {  // warmup so the first timed run is not penalized
        mskel::ExperimentConfig warm = config;
        warm.repetitions = 1;
        mskel::run_experiment_serial(g, warm);
    }

    const mskel::ExperimentReport serial = mskel::run_experiment_serial(g, config);
    std::printf("serial reference: %8.3f s  (mean ratio %s)\n", serial.wall_seconds,
                serial.mean_ratio.to_decimal(6).c_str());

    int max_threads = 1;
#ifdef _OPENMP
    max_threads = omp_get_max_threads();
#endif
    for (int threads = 1; threads <= max_threads; threads *= 2) {
        const mskel::ExperimentReport parallel = mskel::run_experiment(g, config, threads);
        const bool identical = mskel::report_csv(parallel) == mskel::report_csv(serial);
        std::printf("openmp %2d thread%s: %8.3f s  speedup %5.2fx  csv %s\n", threads,
                    threads == 1 ? " " : "s", parallel.wall_seconds,
                    serial.wall_seconds / parallel.wall_seconds,
                    identical ? "identical" : "DIFFERS");
        if (!identical) return 1;
    }
    return 0;
}
