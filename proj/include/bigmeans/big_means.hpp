#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "bigmeans/local_search.hpp"

namespace bigmeans {

struct BigMeansConfig {
    std::size_t k = 0;
    std::size_t chunk_size = 0;  // s: points per chunk, k <= s <= m
    // Budgets; at least one must be set. The time budget covers the chunk loop
    // only (the final full-dataset pass is accounted separately), and at least
    // one chunk is always processed.
    std::optional<double> max_cpu_seconds;
    std::optional<std::uint64_t> max_chunks;
    SearchConfig search;
    InitConfig init;
    // The driver owns a single RNG stream seeded from here, consumed in
    // program order (chunk sampling, then degenerate-row repair, per chunk);
    // init.seed is not used inside the driver.
    std::uint64_t seed = kDefaultSeed;
    bool final_assignment = true;
};

struct ChunkRecord {
    std::uint64_t chunk_index = 0;
    double candidate_objective = 0.0;  // f of the chunk-trained centroids on its chunk
    double incumbent_objective = 0.0;  // f_opt after this chunk's accept/reject
    bool accepted = false;
    std::size_t degenerate_repaired = 0;
};

struct BigMeansTrace {
    std::vector<ChunkRecord> records;

    std::uint64_t chunks() const { return records.size(); }
};

// s distinct indices drawn uniformly without replacement, returned in
// ascending order (chunk rows keep the dataset's relative order). s == m is
// the whole index range and consumes no draws: the size-m subset is unique,
// which keeps the driver's stream aligned with the plain kmeans path.
std::vector<std::size_t> sample_chunk(const Dataset& data, std::size_t s, Rng& rng);

// The chunk-sampling heuristic: start from an all-degenerate incumbent with
// f_opt = +inf; per chunk, repair degenerate incumbent rows by k-means++ over
// the chunk, run lloyd on the chunk, and keep the result iff its chunk
// objective beats f_opt. Afterwards (final_assignment) every dataset point is
// assigned to its nearest centroid and the reported objective is the
// full-data cost; otherwise the incumbent's chunk objective is reported and
// the assignment is left empty. cpu_init is the chunk-loop wall time,
// cpu_full the final pass.
std::pair<ClusteringOutcome, BigMeansTrace> big_means(const Dataset& data,
                                                      const BigMeansConfig& cfg);

struct ChunkHintConfig {
    // Candidate chunk sizes; empty means the geometric ladder
    // m/64, m/32, ..., m/2, m clamped to [k, m].
    std::vector<std::size_t> ladder;
    std::uint64_t chunks_per_candidate = 3;
    std::uint64_t runs_per_candidate = 3;
    SearchConfig search;
    InitConfig init;
    std::uint64_t seed = kDefaultSeed;
};

// Probes each candidate size with a few short runs and returns the size with
// the best mean final objective; ties go to the smallest size. Advisory only.
std::size_t choose_chunk_size_hint(const Dataset& data, std::size_t k,
                                   const ChunkHintConfig& cfg);

}  // namespace bigmeans
