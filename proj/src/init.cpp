#include "bigmeans/init.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bigmeans/threading.hpp"

namespace bigmeans {

namespace {

std::size_t blocks_for(std::size_t m) {
    return (m + kReductionBlock - 1) / kReductionBlock;
}

// out[i] = squared distance from point i to row. One eval per point.
void distances_to_row(const Dataset& data, std::span<const double> row, std::vector<double>& out,
                      EvalCounter* counter) {
    const std::size_t m = data.m();
    const std::size_t n = data.n();
    const double* points = data.values().data();
    const double* c = row.data();
    const auto blocks = static_cast<std::int64_t>(blocks_for(m));
#pragma omp parallel for schedule(static) num_threads(static_cast<int>(worker_count()))
    for (std::int64_t b = 0; b < blocks; ++b) {
        const std::size_t begin = static_cast<std::size_t>(b) * kReductionBlock;
        const std::size_t end = std::min(begin + kReductionBlock, m);
        for (std::size_t i = begin; i < end; ++i) {
            const double* x = points + i * n;
            double sum = 0.0;
            for (std::size_t d = 0; d < n; ++d) {
                const double diff = x[d] - c[d];
                sum += diff * diff;
            }
            out[i] = sum;
        }
    }
    if (counter != nullptr) {
        counter->distance_evals += m;
    }
}

// dist2[i] = min(dist2[i], squared distance to row).
void lower_to_row(const Dataset& data, std::span<const double> row, std::vector<double>& dist2,
                  EvalCounter* counter) {
    const std::size_t m = data.m();
    const std::size_t n = data.n();
    const double* points = data.values().data();
    const double* c = row.data();
    const auto blocks = static_cast<std::int64_t>(blocks_for(m));
#pragma omp parallel for schedule(static) num_threads(static_cast<int>(worker_count()))
    for (std::int64_t b = 0; b < blocks; ++b) {
        const std::size_t begin = static_cast<std::size_t>(b) * kReductionBlock;
        const std::size_t end = std::min(begin + kReductionBlock, m);
        for (std::size_t i = begin; i < end; ++i) {
            const double* x = points + i * n;
            double sum = 0.0;
            for (std::size_t d = 0; d < n; ++d) {
                const double diff = x[d] - c[d];
                sum += diff * diff;
            }
            dist2[i] = std::min(dist2[i], sum);
        }
    }
    if (counter != nullptr) {
        counter->distance_evals += m;
    }
}

// Index of the weight interval containing u, via prefix sums.
std::size_t pick_by_mass(const std::vector<double>& cumulative, double u) {
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) {
        --it;
    }
    return static_cast<std::size_t>(it - cumulative.begin());
}

void prefix_sums(const std::vector<double>& values, std::vector<double>& cumulative) {
    cumulative.resize(values.size());
    double running = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        running += values[i];
        cumulative[i] = running;
    }
}

}  // namespace

Centroids forgy_init(const Dataset& data, std::size_t k, Rng& rng, EvalCounter* counter) {
    (void)counter;  // selection needs no distance evaluations
    const std::size_t m = data.m();
    if (k < 1) {
        throw ConfigError("forgy_init: k must be at least 1");
    }
    if (m < k) {
        throw ConfigError("forgy_init: dataset has fewer points than clusters");
    }
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    // Partial Fisher-Yates: the first k slots are a uniform k-subset.
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, m - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    std::vector<double> rows;
    rows.reserve(k * data.n());
    for (std::size_t i = 0; i < k; ++i) {
        const auto row = data.row(idx[i]);
        rows.insert(rows.end(), row.begin(), row.end());
    }
    return Centroids::from_rows(std::move(rows), k, data.n());
}

Centroids forgy_init(const Dataset& data, std::size_t k, std::uint64_t seed,
                     EvalCounter* counter) {
    Rng rng(seed);
    return forgy_init(data, k, rng, counter);
}

Centroids kmeanspp_fill(const Dataset& pool, Centroids cent, const InitConfig& cfg, Rng& rng,
                        EvalCounter* counter) {
    const std::size_t m = pool.m();
    if (pool.n() != cent.n()) {
        throw ConfigError("kmeanspp_fill: pool and centroid widths differ");
    }
    if (cfg.candidates_per_step < 1) {
        throw ConfigError("kmeanspp_fill: candidates_per_step must be at least 1");
    }

    std::vector<std::size_t> degenerate_rows;
    for (std::size_t j = 0; j < cent.k(); ++j) {
        if (cent.degenerate(j)) {
            degenerate_rows.push_back(j);
        }
    }
    if (degenerate_rows.empty()) {
        return cent;
    }

    std::vector<double> dist2(m, std::numeric_limits<double>::infinity());
    if (cent.active_count() == 0) {
        std::uniform_int_distribution<std::size_t> pick(0, m - 1);
        const std::size_t first = pick(rng);
        const std::size_t slot = degenerate_rows.front();
        cent.set_row(slot, pool.row(first));
        degenerate_rows.erase(degenerate_rows.begin());
        distances_to_row(pool, cent.row(slot), dist2, counter);
    } else {
        bool first_row = true;
        for (std::size_t j = 0; j < cent.k(); ++j) {
            if (cent.degenerate(j)) {
                continue;
            }
            if (first_row) {
                distances_to_row(pool, cent.row(j), dist2, counter);
                first_row = false;
            } else {
                lower_to_row(pool, cent.row(j), dist2, counter);
            }
        }
    }

    const auto candidates = static_cast<std::size_t>(cfg.candidates_per_step);
    std::vector<double> cumulative;
    std::vector<double> trial(m);
    std::vector<double> best_trial(m);

    for (std::size_t slot : degenerate_rows) {
        prefix_sums(dist2, cumulative);
        const double total = cumulative.back();
        if (total <= 0.0) {
            // Every pool point coincides with a chosen center; uniform choice
            // keeps the operation total instead of failing.
            std::uniform_int_distribution<std::size_t> pick(0, m - 1);
            cent.set_row(slot, pool.row(pick(rng)));
            continue;
        }
        double best_potential = std::numeric_limits<double>::infinity();
        std::size_t best_index = 0;
        for (std::size_t c = 0; c < candidates; ++c) {
            std::uniform_real_distribution<double> draw(0.0, total);
            const std::size_t index = pick_by_mass(cumulative, draw(rng));
            distances_to_row(pool, pool.row(index), trial, counter);
            for (std::size_t i = 0; i < m; ++i) {
                trial[i] = std::min(trial[i], dist2[i]);
            }
            const double potential = block_sum(trial);
            if (potential < best_potential) {
                best_potential = potential;
                best_index = index;
                std::swap(trial, best_trial);
            }
        }
        cent.set_row(slot, pool.row(best_index));
        std::swap(dist2, best_trial);
    }
    return cent;
}

Centroids kmeanspp_fill(const Dataset& pool, Centroids cent, const InitConfig& cfg,
                        std::uint64_t seed, EvalCounter* counter) {
    Rng rng(seed);
    return kmeanspp_fill(pool, std::move(cent), cfg, rng, counter);
}

Centroids kmeans_parallel_init(const Dataset& data, std::size_t k, const InitConfig& cfg,
                               Rng& rng, EvalCounter* counter) {
    const std::size_t m = data.m();
    const std::size_t n = data.n();
    if (k < 1) {
        throw ConfigError("kmeans_parallel_init: k must be at least 1");
    }
    if (m < k) {
        throw ConfigError("kmeans_parallel_init: dataset has fewer points than clusters");
    }

    std::uniform_int_distribution<std::size_t> pick_point(0, m - 1);
    const std::size_t first = pick_point(rng);
    if (k == 1) {
        std::vector<double> row(data.row(first).begin(), data.row(first).end());
        return Centroids::from_rows(std::move(row), 1, n);
    }

    const double l = cfg.oversampling_l > 0 ? static_cast<double>(cfg.oversampling_l)
                                            : 2.0 * static_cast<double>(k);

    std::vector<std::size_t> cand_index{first};
    std::vector<double> dist2(m);
    distances_to_row(data, data.row(first), dist2, counter);

    int rounds = cfg.rounds_r;
    if (cfg.rounds_rule == RoundsRule::log_phi) {
        const double phi1 = block_sum(dist2);
        rounds = phi1 > 1.0 ? std::max(1, static_cast<int>(std::floor(std::log(phi1)))) : 1;
    }
    if (rounds < 1) {
        throw ConfigError("kmeans_parallel_init: rounds_r must be at least 1");
    }

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int round = 0; round < rounds; ++round) {
        const double phi = block_sum(dist2);
        if (phi <= 0.0) {
            break;
        }
        // One draw per point per round, consumed in index order, so the
        // stream position is a function of (m, rounds) alone.
        std::vector<std::size_t> fresh;
        for (std::size_t i = 0; i < m; ++i) {
            const double u = unit(rng);
            const double p = std::min(1.0, l * dist2[i] / phi);
            if (u < p) {
                fresh.push_back(i);
            }
        }
        for (std::size_t i : fresh) {
            cand_index.push_back(i);
            lower_to_row(data, data.row(i), dist2, counter);
        }
    }

    // Too few candidates: top up with uniformly drawn additional distinct rows.
    if (cand_index.size() < k) {
        std::vector<std::uint8_t> used(m, 0);
        for (std::size_t i : cand_index) {
            used[i] = 1;
        }
        while (cand_index.size() < k) {
            const std::size_t i = pick_point(rng);
            if (!used[i]) {
                used[i] = 1;
                cand_index.push_back(i);
            }
        }
    }

    const Dataset cand = data.gather(cand_index);
    const std::size_t c_count = cand.m();

    // Weight each candidate by the number of points it is nearest to.
    std::vector<double> cand_rows(cand.values());
    const Centroids cand_cent = Centroids::from_rows(std::move(cand_rows), c_count, n);
    auto [cand_labels, cand_dists] = assign_nearest(data, cand_cent, counter);
    (void)cand_dists;
    std::vector<double> weight(c_count, 0.0);
    for (std::int32_t label : cand_labels.labels) {
        weight[static_cast<std::size_t>(label)] += 1.0;
    }

    // Reduce to k centers: weighted greedy k-means++ over the candidate set.
    std::vector<double> wcum;
    prefix_sums(weight, wcum);
    std::uniform_real_distribution<double> wdraw(0.0, wcum.back());
    std::size_t chosen_first = pick_by_mass(wcum, wdraw(rng));

    std::vector<std::size_t> chosen{chosen_first};
    std::vector<double> cdist2(c_count);
    distances_to_row(cand, cand.row(chosen_first), cdist2, counter);

    const auto candidates = static_cast<std::size_t>(std::max(1, cfg.candidates_per_step));
    std::vector<double> mass(c_count);
    std::vector<double> cum;
    std::vector<double> trial(c_count);
    std::vector<double> best_trial(c_count);
    while (chosen.size() < k) {
        for (std::size_t q = 0; q < c_count; ++q) {
            mass[q] = weight[q] * cdist2[q];
        }
        prefix_sums(mass, cum);
        const double total = cum.back();
        if (total <= 0.0) {
            std::uniform_int_distribution<std::size_t> pick(0, c_count - 1);
            chosen.push_back(pick(rng));
            continue;
        }
        double best_potential = std::numeric_limits<double>::infinity();
        std::size_t best_index = 0;
        for (std::size_t c = 0; c < candidates; ++c) {
            std::uniform_real_distribution<double> draw(0.0, total);
            const std::size_t index = pick_by_mass(cum, draw(rng));
            distances_to_row(cand, cand.row(index), trial, counter);
            double potential = 0.0;
            for (std::size_t q = 0; q < c_count; ++q) {
                trial[q] = std::min(trial[q], cdist2[q]);
                potential += weight[q] * trial[q];
            }
            if (potential < best_potential) {
                best_potential = potential;
                best_index = index;
                std::swap(trial, best_trial);
            }
        }
        chosen.push_back(best_index);
        std::swap(cdist2, best_trial);
    }

    std::vector<double> rows;
    rows.reserve(k * n);
    for (std::size_t q : chosen) {
        const auto row = cand.row(q);
        rows.insert(rows.end(), row.begin(), row.end());
    }
    return Centroids::from_rows(std::move(rows), k, n);
}

Centroids kmeans_parallel_init(const Dataset& data, std::size_t k, const InitConfig& cfg,
                               std::uint64_t seed, EvalCounter* counter) {
    Rng rng(seed);
    return kmeans_parallel_init(data, k, cfg, rng, counter);
}

}  // namespace bigmeans
