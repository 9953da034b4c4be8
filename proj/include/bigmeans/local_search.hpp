#pragma once

#include <vector>

#include "bigmeans/core.hpp"
#include "bigmeans/init.hpp"

namespace bigmeans {

struct SearchConfig {
    std::uint64_t max_iterations = 300;
    // Stop when (f_prev - f_cur)/f_prev drops below this; 0 disables the
    // tolerance stop (the unchanged-assignments stop still applies).
    double rel_tolerance = 1e-4;
    std::uint64_t seed = kDefaultSeed;
};

// Result of one clustering run. objective always matches the returned
// centroids and assignment on the data the run was given. objective_history
// holds the objective after the initial assignment and after every update
// round, so history.front() is the start cost and history.back() == objective.
// counter carries this run's own counts; wall-clock fields are filled by the
// composed drivers (kmeans, big_means), not by lloyd.
struct ClusteringOutcome {
    Centroids centroids;
    Assignment assignment;
    double objective = 0.0;
    std::vector<double> objective_history;
    EvalCounter counter;
};

// Alternates nearest-centroid assignment and centroid recomputation starting
// from start. Stops at unchanged assignments (checked first), then at the
// relative-tolerance test, then at max_iterations update rounds. Clusters
// that empty out are marked degenerate and stay that way for the rest of the
// run; repairing them is the caller's business. When accumulate is non-null
// the run's distance-eval and iteration counts are added to it.
ClusteringOutcome lloyd(const Dataset& data, Centroids start, const SearchConfig& cfg,
                        EvalCounter* accumulate = nullptr);

// Initialization (per init.method, seeded by init.seed) followed by lloyd.
// cpu_init covers the initialization stage, cpu_full the local search.
// Throws ConfigError when m < k.
ClusteringOutcome kmeans(const Dataset& data, std::size_t k, const InitConfig& init,
                         const SearchConfig& search);

}  // namespace bigmeans
