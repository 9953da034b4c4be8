#pragma once

#include "bigmeans/core.hpp"

namespace bigmeans {

enum class InitMethod { forgy, kmeans_pp, kmeans_parallel };

enum class RoundsRule {
    fixed,    // use InitConfig::rounds_r as given
    log_phi,  // r = max(1, floor(ln of the cost after the first center))
};

struct InitConfig {
    InitMethod method = InitMethod::kmeans_pp;
    // Greedy pool size for each k-means++ step; the candidate giving the
    // lowest resulting objective is kept.
    int candidates_per_step = 3;
    // Oversampling factor l; 0 means the 2*k default.
    int oversampling_l = 0;
    int rounds_r = 5;
    RoundsRule rounds_rule = RoundsRule::fixed;
    std::uint64_t seed = kDefaultSeed;
};

// k distinct rows drawn uniformly without replacement (partial Fisher-Yates).
// Throws ConfigError when m < k.
Centroids forgy_init(const Dataset& data, std::size_t k, Rng& rng,
                     EvalCounter* counter = nullptr);
Centroids forgy_init(const Dataset& data, std::size_t k, std::uint64_t seed,
                     EvalCounter* counter = nullptr);

// Fills every degenerate row of cent by greedy k-means++ sampling over the
// pool: candidates are drawn with probability proportional to the squared
// distance to the nearest chosen center, and the candidate minimizing the
// resulting objective on the pool is kept. Non-degenerate rows are never
// touched. If every row is degenerate the first center is a uniformly random
// pool point. When all candidate weights are zero (every point coincides with
// a chosen center) sampling falls back to uniform choice among pool points.
Centroids kmeanspp_fill(const Dataset& pool, Centroids cent, const InitConfig& cfg, Rng& rng,
                        EvalCounter* counter = nullptr);
Centroids kmeanspp_fill(const Dataset& pool, Centroids cent, const InitConfig& cfg,
                        std::uint64_t seed, EvalCounter* counter = nullptr);

// Oversampling initialization: one uniform center, r rounds adding each point
// independently with probability min(1, l*D^2(x)/phi), then reduction of the
// weighted candidate set to k centers by weighted greedy k-means++ (weights =
// number of points nearest each candidate). A candidate set smaller than k is
// topped up with uniformly drawn additional distinct rows. Throws ConfigError
// when m < k.
Centroids kmeans_parallel_init(const Dataset& data, std::size_t k, const InitConfig& cfg,
                               Rng& rng, EvalCounter* counter = nullptr);
Centroids kmeans_parallel_init(const Dataset& data, std::size_t k, const InitConfig& cfg,
                               std::uint64_t seed, EvalCounter* counter = nullptr);

}  // namespace bigmeans
