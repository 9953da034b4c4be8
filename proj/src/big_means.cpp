#include "bigmeans/big_means.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>

namespace bigmeans {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void validate(const Dataset& data, const BigMeansConfig& cfg) {
    if (cfg.k < 1) {
        throw ConfigError("big_means: k must be at least 1");
    }
    if (cfg.chunk_size < cfg.k) {
        throw ConfigError("big_means: chunk_size must be at least k");
    }
    if (cfg.chunk_size > data.m()) {
        throw ConfigError("big_means: chunk_size exceeds the dataset size");
    }
    if (!cfg.max_cpu_seconds.has_value() && !cfg.max_chunks.has_value()) {
        throw ConfigError("big_means: no stop condition; set max_cpu_seconds or max_chunks");
    }
    if (cfg.max_cpu_seconds.has_value() && *cfg.max_cpu_seconds < 0.0) {
        throw ConfigError("big_means: max_cpu_seconds must be nonnegative");
    }
    if (cfg.max_chunks.has_value() && *cfg.max_chunks < 1) {
        throw ConfigError("big_means: max_chunks must be at least 1");
    }
}

}  // namespace

std::vector<std::size_t> sample_chunk(const Dataset& data, std::size_t s, Rng& rng) {
    const std::size_t m = data.m();
    if (s < 1 || s > m) {
        throw ConfigError("sample_chunk: chunk size must be in [1, m]");
    }
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), 0);
    if (s == m) {
        return idx;  // the unique m-subset; no draws
    }
    for (std::size_t i = 0; i < s; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, m - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(s);
    std::sort(idx.begin(), idx.end());
    return idx;
}

std::pair<ClusteringOutcome, BigMeansTrace> big_means(const Dataset& data,
                                                      const BigMeansConfig& cfg) {
    validate(data, cfg);

    Rng rng(cfg.seed);
    Centroids incumbent = Centroids::all_degenerate(cfg.k, data.n());
    double f_opt = std::numeric_limits<double>::infinity();
    std::uint64_t total_iterations = 0;
    EvalCounter counter;
    BigMeansTrace trace;

    const auto t_loop = std::chrono::steady_clock::now();
    for (std::uint64_t chunk = 0;; ++chunk) {
        if (cfg.max_chunks.has_value() && chunk >= *cfg.max_chunks) {
            break;
        }
        if (chunk > 0 && cfg.max_cpu_seconds.has_value() &&
            seconds_since(t_loop) >= *cfg.max_cpu_seconds) {
            break;
        }

        const std::vector<std::size_t> idx = sample_chunk(data, cfg.chunk_size, rng);
        const Dataset portion = data.gather(idx);

        Centroids start = incumbent;
        const std::size_t repaired = start.degenerate_count();
        start = kmeanspp_fill(portion, std::move(start), cfg.init, rng, &counter);

        ClusteringOutcome trained = lloyd(portion, std::move(start), cfg.search, &counter);
        total_iterations += trained.counter.iterations;

        const bool accepted = trained.objective < f_opt;
        if (accepted) {
            f_opt = trained.objective;
            incumbent = std::move(trained.centroids);
        }
        trace.records.push_back({chunk, trained.objective, f_opt, accepted, repaired});
    }
    counter.cpu_init = seconds_since(t_loop);
    counter.iterations = total_iterations;

    ClusteringOutcome out;
    out.centroids = std::move(incumbent);
    out.counter = counter;
    if (cfg.final_assignment) {
        const auto t_full = std::chrono::steady_clock::now();
        auto [labels, dists] = assign_nearest(data, out.centroids, &out.counter);
        out.objective = block_sum(dists);
        out.assignment = std::move(labels);
        out.counter.cpu_full = seconds_since(t_full);
    } else {
        out.objective = f_opt;
    }
    return {std::move(out), std::move(trace)};
}

std::size_t choose_chunk_size_hint(const Dataset& data, std::size_t k,
                                   const ChunkHintConfig& cfg) {
    const std::size_t m = data.m();
    if (k < 1 || m < k) {
        throw ConfigError("choose_chunk_size_hint: need at least k points");
    }
    if (cfg.chunks_per_candidate < 1 || cfg.runs_per_candidate < 1) {
        throw ConfigError("choose_chunk_size_hint: probe budget must be positive");
    }

    std::vector<std::size_t> ladder = cfg.ladder;
    if (ladder.empty()) {
        for (std::size_t div = 64; div >= 1; div /= 2) {
            ladder.push_back(std::max(k, m / div));
        }
    }
    for (std::size_t& s : ladder) {
        s = std::clamp(s, k, m);
    }
    std::sort(ladder.begin(), ladder.end());
    ladder.erase(std::unique(ladder.begin(), ladder.end()), ladder.end());

    double best_mean = std::numeric_limits<double>::infinity();
    std::size_t best_s = ladder.front();
    for (std::size_t s : ladder) {
        double sum = 0.0;
        for (std::uint64_t run = 0; run < cfg.runs_per_candidate; ++run) {
            BigMeansConfig probe;
            probe.k = k;
            probe.chunk_size = s;
            probe.max_chunks = cfg.chunks_per_candidate;
            probe.search = cfg.search;
            probe.init = cfg.init;
            probe.seed = cfg.seed + run;
            probe.final_assignment = true;
            sum += big_means(data, probe).first.objective;
        }
        const double mean = sum / static_cast<double>(cfg.runs_per_candidate);
        // Strict improvement over the ascending ladder: ties keep the
        // smallest size.
        if (mean < best_mean) {
            best_mean = mean;
            best_s = s;
        }
    }
    return best_s;
}

}  // namespace bigmeans
