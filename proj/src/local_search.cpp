#include "bigmeans/local_search.hpp"

#include <chrono>
#include <utility>

namespace bigmeans {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

ClusteringOutcome lloyd(const Dataset& data, Centroids start, const SearchConfig& cfg,
                        EvalCounter* accumulate) {
    if (cfg.max_iterations < 1) {
        throw ConfigError("lloyd: max_iterations must be at least 1");
    }
    if (cfg.rel_tolerance < 0.0) {
        throw ConfigError("lloyd: rel_tolerance must be nonnegative");
    }

    ClusteringOutcome out;
    auto [labels, dists] = assign_nearest(data, start, &out.counter);
    double f = block_sum(dists);
    out.objective_history.push_back(f);
    out.centroids = std::move(start);
    out.assignment = std::move(labels);

    while (out.counter.iterations < cfg.max_iterations) {
        Centroids next = update_centroids(data, out.assignment, out.centroids.k());
        auto [new_labels, new_dists] = assign_nearest(data, next, &out.counter);
        const double f_new = block_sum(new_dists);
        ++out.counter.iterations;
        out.objective_history.push_back(f_new);

        const bool unchanged = new_labels == out.assignment;
        out.centroids = std::move(next);
        out.assignment = std::move(new_labels);
        if (unchanged) {
            break;
        }
        if (f <= 0.0) {
            break;  // already optimal; the relative test is undefined
        }
        if (cfg.rel_tolerance > 0.0 && (f - f_new) / f < cfg.rel_tolerance) {
            break;
        }
        f = f_new;
    }

    out.objective = out.objective_history.back();
    if (accumulate != nullptr) {
        accumulate->distance_evals += out.counter.distance_evals;
        accumulate->iterations += out.counter.iterations;
    }
    return out;
}

ClusteringOutcome kmeans(const Dataset& data, std::size_t k, const InitConfig& init,
                         const SearchConfig& search) {
    if (k < 1) {
        throw ConfigError("kmeans: k must be at least 1");
    }
    if (data.m() < k) {
        throw ConfigError("kmeans: dataset has fewer points than clusters");
    }

    Rng rng(init.seed);
    EvalCounter init_counter;
    const auto t_init = std::chrono::steady_clock::now();
    Centroids start = [&] {
        switch (init.method) {
            case InitMethod::forgy:
                return forgy_init(data, k, rng, &init_counter);
            case InitMethod::kmeans_pp:
                return kmeanspp_fill(data, Centroids::all_degenerate(k, data.n()), init, rng,
                                     &init_counter);
            case InitMethod::kmeans_parallel:
                return kmeans_parallel_init(data, k, init, rng, &init_counter);
        }
        throw ConfigError("kmeans: unknown initialization method");
    }();
    const double cpu_init = seconds_since(t_init);

    const auto t_search = std::chrono::steady_clock::now();
    ClusteringOutcome out = lloyd(data, std::move(start), search);
    out.counter.cpu_init = cpu_init;
    out.counter.cpu_full = seconds_since(t_search);
    out.counter.distance_evals += init_counter.distance_evals;
    return out;
}

}  // namespace bigmeans
