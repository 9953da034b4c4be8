#include "bigmeans/oracle.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace bigmeans {
namespace oracle {

namespace {

// Number of partitions of m elements into at most k nonempty groups,
// saturating at the guard. Stirling second-kind recurrence.
std::uint64_t partition_count(std::size_t m, std::size_t k) {
    std::vector<std::uint64_t> prev(k + 1, 0), cur(k + 1, 0);
    prev[0] = 1;  // S(0,0) = 1
    for (std::size_t i = 1; i <= m; ++i) {
        cur[0] = 0;
        for (std::size_t j = 1; j <= std::min(i, k); ++j) {
            std::uint64_t v = prev[j - 1] + static_cast<std::uint64_t>(j) * prev[j];
            cur[j] = std::min<std::uint64_t>(v, kPartitionGuard + 1);
        }
        for (std::size_t j = std::min(i, k) + 1; j <= k; ++j) {
            cur[j] = 0;
        }
        std::swap(prev, cur);
    }
    std::uint64_t total = 0;
    for (std::size_t j = 1; j <= k; ++j) {
        total += prev[j];
        if (total > kPartitionGuard) {
            return kPartitionGuard + 1;
        }
    }
    return total;
}

double partition_objective(const Dataset& data, const std::vector<std::int32_t>& groups,
                           std::size_t group_count, std::vector<double>& means,
                           std::vector<std::uint64_t>& counts) {
    const std::size_t n = data.n();
    std::fill(means.begin(), means.begin() + group_count * n, 0.0);
    std::fill(counts.begin(), counts.begin() + group_count, 0);
    for (std::size_t i = 0; i < data.m(); ++i) {
        const auto g = static_cast<std::size_t>(groups[i]);
        const auto row = data.row(i);
        for (std::size_t d = 0; d < n; ++d) {
            means[g * n + d] += row[d];
        }
        ++counts[g];
    }
    for (std::size_t g = 0; g < group_count; ++g) {
        const double inv = 1.0 / static_cast<double>(counts[g]);
        for (std::size_t d = 0; d < n; ++d) {
            means[g * n + d] *= inv;
        }
    }
    double total = 0.0;
    for (std::size_t i = 0; i < data.m(); ++i) {
        const auto g = static_cast<std::size_t>(groups[i]);
        const auto row = data.row(i);
        double sum = 0.0;
        for (std::size_t d = 0; d < n; ++d) {
            const double diff = row[d] - means[g * n + d];
            sum += diff * diff;
        }
        total += sum;
    }
    return total;
}

}  // namespace

ExactResult exact_mssc(const Dataset& data, std::size_t k) {
    const std::size_t m = data.m();
    if (k < 1) {
        throw ConfigError("exact_mssc: k must be at least 1");
    }
    if (partition_count(m, k) > kPartitionGuard) {
        throw ConfigError("exact_mssc: partition count exceeds the enumeration guard");
    }

    // Restricted growth string: groups[0] = 0, groups[i] <= max(prefix) + 1,
    // capped at k - 1. Each string is one partition into <= k groups.
    std::vector<std::int32_t> groups(m, 0);
    std::vector<std::int32_t> prefix_max(m, 0);
    std::vector<double> means(k * data.n());
    std::vector<std::uint64_t> counts(k);

    ExactResult best;
    best.objective = std::numeric_limits<double>::infinity();
    double best_exact_k = std::numeric_limits<double>::infinity();
    bool saw_exact_k = false;

    for (;;) {
        const auto group_count = static_cast<std::size_t>(prefix_max[m - 1]) + 1;
        const double obj = partition_objective(data, groups, group_count, means, counts);
        if (obj < best.objective) {
            best.objective = obj;
            best.assignment.labels = groups;
            best.groups_used = group_count;
        }
        if (group_count == k && obj < best_exact_k) {
            best_exact_k = obj;
            saw_exact_k = true;
        }

        // Odometer step over restricted growth strings.
        std::size_t i = m - 1;
        for (;;) {
            if (i == 0) {
                if (saw_exact_k) {
                    best.objective_exactly_k = best_exact_k;
                }
                return best;
            }
            const std::int32_t cap =
                std::min<std::int32_t>(prefix_max[i - 1] + 1, static_cast<std::int32_t>(k) - 1);
            if (groups[i] < cap) {
                ++groups[i];
                prefix_max[i] = std::max(prefix_max[i - 1], groups[i]);
                for (std::size_t t = i + 1; t < m; ++t) {
                    groups[t] = 0;
                    prefix_max[t] = prefix_max[i];
                }
                break;
            }
            --i;
        }
    }
}

double exact_one_means(const Dataset& data) {
    const std::size_t n = data.n();
    std::vector<double> mean(n, 0.0);
    for (std::size_t i = 0; i < data.m(); ++i) {
        const auto row = data.row(i);
        for (std::size_t d = 0; d < n; ++d) {
            mean[d] += row[d];
        }
    }
    for (std::size_t d = 0; d < n; ++d) {
        mean[d] /= static_cast<double>(data.m());
    }
    double total = 0.0;
    for (std::size_t i = 0; i < data.m(); ++i) {
        const auto row = data.row(i);
        double sum = 0.0;
        for (std::size_t d = 0; d < n; ++d) {
            const double diff = row[d] - mean[d];
            sum += diff * diff;
        }
        total += sum;
    }
    return total;
}

}  // namespace oracle
}  // namespace bigmeans
