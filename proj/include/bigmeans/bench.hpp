#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bigmeans/big_means.hpp"
#include "bigmeans/io.hpp"
#include "bigmeans/metrics.hpp"

namespace bigmeans {
namespace bench {

enum class AlgorithmId { big_means, forgy, kmeans_pp, kmeans_parallel };

AlgorithmId parse_algorithm(const std::string& name);
std::string algorithm_name(AlgorithmId id);

struct PlanDataset {
    std::string name;
    io::DatasetSpec spec;
    std::size_t chunk_size = 0;  // big_means only
    std::optional<double> max_cpu_seconds;
    std::optional<std::uint64_t> max_chunks;
    std::map<std::size_t, double> f_best;  // absent k: recomputed as the run minimum
};

struct ExperimentPlan {
    std::vector<PlanDataset> datasets;
    std::vector<AlgorithmId> algorithms;
    std::vector<std::size_t> k_values;
    std::uint64_t n_exec = 1;
    std::uint64_t base_seed = kDefaultSeed;
    // Per-run seeds are base_seed + run index; with vary_seeds false every run
    // reuses base_seed (degenerate determinism checks).
    bool vary_seeds = true;
    SearchConfig search;
    InitConfig init;
    // Opt-in concurrent cell execution; objective columns stay deterministic
    // but timing columns become unreliable and are flagged as such.
    bool parallel_cells = false;
};

struct RunRecord {
    std::uint64_t seed = 0;
    double objective = 0.0;
    double e_pct = 0.0;
    double cpu_init = 0.0;
    double cpu_full = 0.0;
    std::uint64_t n_d = 0;
    std::uint64_t iterations = 0;
    std::uint64_t n_s = 0;  // chunks processed (big_means only)
};

struct CellResult {
    std::string algorithm;
    std::string dataset;
    std::size_t k = 0;
    std::vector<RunRecord> runs;
    bool failed = false;
    std::string error;
};

struct BenchResult {
    std::vector<metrics::RunSummary> summaries;
    metrics::ScoreTable scores;
    std::vector<CellResult> cells;
    bool any_failed = false;
    bool timing_reliable = true;
    // Cells excluded from an algorithm's per-dataset mean because they failed.
    std::map<std::string, std::uint64_t> excluded_cells;  // key: algorithm/dataset
};

// Parses a plan document; dataset entries give either inline spec fields
// (path/format/...) or a registry reference ("registry" path plus the entry
// name). Relative paths resolve against base_dir.
ExperimentPlan parse_plan(const std::string& json_text, const std::string& base_dir);
ExperimentPlan load_plan(const std::string& path);

// Executes every (dataset, algorithm, k) cell n_exec times, summarizes
// relative errors and timings, and scores algorithms against each other.
// A cell that throws is recorded as failed; its algorithm scores 0 on that
// dataset when nothing else of it survived there.
BenchResult run_plan(const ExperimentPlan& plan);

std::string result_to_csv(const BenchResult& result);
std::string result_to_json(const BenchResult& result, const ExperimentPlan& plan);

}  // namespace bench
}  // namespace bigmeans
