#pragma once

#include <optional>

#include "bigmeans/core.hpp"

namespace bigmeans {
namespace oracle {

// Enumeration budget: the number of set partitions examined by exact_mssc may
// not exceed this.
inline constexpr std::uint64_t kPartitionGuard = 1000000;

struct ExactResult {
    // Optimum over partitions into at most k nonempty groups. Allowing fewer
    // groups mirrors the possibility of degenerate clusters; for distinct
    // points the two optima coincide.
    double objective = 0.0;
    Assignment assignment;
    std::size_t groups_used = 0;
    // Optimum restricted to exactly k nonempty groups; absent when m < k.
    std::optional<double> objective_exactly_k;
};

// Exhaustively enumerates every partition of the m points into <= k nonempty
// groups (restricted growth strings) and scores each with group-mean centers.
// Throws ConfigError when the partition count would exceed kPartitionGuard.
ExactResult exact_mssc(const Dataset& data, std::size_t k);

// Closed-form 1-means objective: total squared distance to the dataset mean.
double exact_one_means(const Dataset& data);

}  // namespace oracle
}  // namespace bigmeans
