// Command-line surface for the clustering toolkit. Subcommands: cluster one
// dataset, run a benchmark plan, normalize a dataset, or probe for a chunk
// size. Stdout carries machine-parsable results only; diagnostics go to
// stderr. Exit codes: 0 success, 1 runtime failure, 2 configuration error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bigmeans/bench.hpp"
#include "bigmeans/big_means.hpp"
#include "bigmeans/io.hpp"
#include "bigmeans/local_search.hpp"
#include "bigmeans/threading.hpp"

namespace {

using nlohmann::json;

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

std::uint64_t resolve_seed(const std::string& text) {
    if (text == "random") {
        std::random_device device;
        return (static_cast<std::uint64_t>(device()) << 32) ^ device();
    }
    try {
        std::size_t used = 0;
        const std::uint64_t value = std::stoull(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return value;
    } catch (const std::exception&) {
        throw bigmeans::ConfigError("--seed must be an unsigned integer or 'random'");
    }
}

unsigned resolve_threads(unsigned flag_value) {
    if (flag_value > 0) {
        return flag_value;
    }
    if (const char* env = std::getenv("BIGMEANS_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) {
            return static_cast<unsigned>(v);
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

struct ClusterOptions {
    std::string input;
    std::string format = "csv";
    std::size_t k = 0;
    std::string algo = "big-means";
    std::size_t chunk_size = 0;
    double max_seconds = 0.0;
    bool max_seconds_set = false;
    std::uint64_t max_chunks = 0;
    bool max_chunks_set = false;
    std::string seed_text = std::to_string(bigmeans::kDefaultSeed);
    double tol = 1e-4;
    std::uint64_t max_iters = 300;
    int candidates = 3;
    int oversampling = 0;
    int rounds = 5;
    bool normalize = false;
    bool has_header = false;
    std::vector<std::size_t> columns;
    bool no_final_assignment = false;
    std::string out_centroids;
    std::string out_labels;
    std::string out_json;
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw bigmeans::StateError("cannot open '" + path + "' for writing");
    }
    out << content;
    if (!out) {
        throw bigmeans::StateError("failed writing '" + path + "'");
    }
}

std::string centroids_csv(const bigmeans::Centroids& cent) {
    std::string out;
    char buf[64];
    for (std::size_t j = 0; j < cent.k(); ++j) {
        const auto row = cent.row(j);
        for (std::size_t d = 0; d < cent.n(); ++d) {
            std::snprintf(buf, sizeof(buf), "%.17g", row[d]);
            if (d > 0) {
                out += ',';
            }
            out += buf;
        }
        out += '\n';
    }
    return out;
}

std::string labels_csv(const bigmeans::Assignment& asg) {
    std::string out;
    for (std::int32_t label : asg.labels) {
        out += std::to_string(label);
        out += '\n';
    }
    return out;
}

int run_cluster(const ClusterOptions& opt, unsigned threads) {
    const std::uint64_t seed = resolve_seed(opt.seed_text);

    bigmeans::io::DatasetSpec spec;
    spec.path = opt.input;
    spec.format = bigmeans::io::parse_format(opt.format);
    spec.has_header = opt.has_header;
    spec.normalize = opt.normalize;
    if (!opt.columns.empty()) {
        spec.columns = opt.columns;
    }
    const bigmeans::Dataset data = bigmeans::io::load(spec);

    bigmeans::SearchConfig search;
    search.max_iterations = opt.max_iters;
    search.rel_tolerance = opt.tol;
    search.seed = seed;

    bigmeans::InitConfig init;
    init.candidates_per_step = opt.candidates;
    init.oversampling_l = opt.oversampling;
    init.rounds_r = opt.rounds;
    init.seed = seed;

    bigmeans::ClusteringOutcome outcome;
    std::uint64_t n_s = 0;
    if (opt.algo == "big-means") {
        bigmeans::BigMeansConfig cfg;
        cfg.k = opt.k;
        cfg.chunk_size = opt.chunk_size;
        if (opt.max_seconds_set) {
            cfg.max_cpu_seconds = opt.max_seconds;
        }
        if (opt.max_chunks_set) {
            cfg.max_chunks = opt.max_chunks;
        }
        cfg.search = search;
        cfg.init = init;
        cfg.seed = seed;
        cfg.final_assignment = !opt.no_final_assignment;
        if (cfg.chunk_size == 0) {
            throw bigmeans::ConfigError("--chunk-size is required for big-means");
        }
        auto [out, trace] = bigmeans::big_means(data, cfg);
        outcome = std::move(out);
        n_s = trace.chunks();
    } else {
        if (opt.algo == "forgy") {
            init.method = bigmeans::InitMethod::forgy;
        } else if (opt.algo == "kmeans-pp") {
            init.method = bigmeans::InitMethod::kmeans_pp;
        } else if (opt.algo == "kmeans-par") {
            init.method = bigmeans::InitMethod::kmeans_parallel;
        } else {
            throw bigmeans::ConfigError(
                "--algo must be one of big-means, forgy, kmeans-pp, kmeans-par");
        }
        outcome = bigmeans::kmeans(data, opt.k, init, search);
    }

    if (!opt.out_centroids.empty()) {
        write_file(opt.out_centroids, centroids_csv(outcome.centroids));
    }
    if (!opt.out_labels.empty()) {
        write_file(opt.out_labels, labels_csv(outcome.assignment));
    }
    if (!opt.out_json.empty()) {
        json report;
        report["config"] = {{"input", opt.input},
                            {"format", opt.format},
                            {"k", opt.k},
                            {"algo", opt.algo},
                            {"chunk_size", opt.chunk_size},
                            {"max_seconds",
                             opt.max_seconds_set ? json(opt.max_seconds) : json(nullptr)},
                            {"max_chunks",
                             opt.max_chunks_set ? json(opt.max_chunks) : json(nullptr)},
                            {"seed", seed},
                            {"tol", opt.tol},
                            {"max_iters", opt.max_iters},
                            {"candidates", opt.candidates},
                            {"oversampling", opt.oversampling},
                            {"rounds", opt.rounds},
                            {"normalize", opt.normalize},
                            {"has_header", opt.has_header},
                            {"columns", opt.columns},
                            {"final_assignment", !opt.no_final_assignment},
                            {"threads", threads},
                            {"out_centroids", opt.out_centroids},
                            {"out_labels", opt.out_labels}};
        report["result"] = {{"objective", outcome.objective},
                            {"iterations", outcome.counter.iterations},
                            {"n_d", outcome.counter.distance_evals},
                            {"cpu_init", outcome.counter.cpu_init},
                            {"cpu_full", outcome.counter.cpu_full},
                            {"n_s", n_s},
                            {"seed", seed}};
        write_file(opt.out_json, report.dump(2) + "\n");
    }

    std::printf("%.17g\n", outcome.objective);
    return 0;
}

int run_bench(const std::string& plan_path, const std::string& out_csv,
              const std::string& out_json_path) {
    const bigmeans::bench::ExperimentPlan plan = bigmeans::bench::load_plan(plan_path);
    const bigmeans::bench::BenchResult result = bigmeans::bench::run_plan(plan);
    if (!out_csv.empty()) {
        write_file(out_csv, bigmeans::bench::result_to_csv(result));
    }
    if (!out_json_path.empty()) {
        write_file(out_json_path, bigmeans::bench::result_to_json(result, plan));
    }
    std::fputs(bigmeans::metrics::score_table_to_csv(result.scores).c_str(), stdout);
    if (result.any_failed) {
        for (const auto& cell : result.cells) {
            if (cell.failed) {
                std::fprintf(stderr, "cell %s/%s/k=%zu failed: %s\n", cell.algorithm.c_str(),
                             cell.dataset.c_str(), cell.k, cell.error.c_str());
            }
        }
        return kExitRuntime;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimum sum-of-squares clustering toolkit"};
    app.require_subcommand(1);

    unsigned threads_flag = 0;
    app.add_option("--threads", threads_flag,
                   "Worker threads for parallel kernels (default: BIGMEANS_THREADS or hardware)");

    ClusterOptions copt;
    CLI::App* cluster = app.add_subcommand("cluster", "Cluster one dataset");
    cluster->add_option("--input", copt.input, "Dataset file")->required();
    cluster->add_option("--format", copt.format, "csv | whitespace | tsplib")->required();
    cluster->add_option("--k", copt.k, "Number of clusters")->required();
    cluster->add_option("--algo", copt.algo, "big-means | forgy | kmeans-pp | kmeans-par");
    cluster->add_option("--chunk-size", copt.chunk_size, "Chunk size s (big-means)");
    CLI::Option* max_seconds_opt =
        cluster->add_option("--max-seconds", copt.max_seconds, "Chunk-loop time budget");
    CLI::Option* max_chunks_opt =
        cluster->add_option("--max-chunks", copt.max_chunks, "Chunk-count budget");
    cluster->add_option("--seed", copt.seed_text, "Unsigned integer or 'random'");
    cluster->add_option("--tol", copt.tol, "Relative tolerance stop");
    cluster->add_option("--max-iters", copt.max_iters, "Local search iterations cap");
    cluster->add_option("--candidates", copt.candidates, "k-means++ candidates per step");
    cluster->add_option("--oversampling", copt.oversampling, "Oversampling factor l (0 = 2k)");
    cluster->add_option("--rounds", copt.rounds, "Oversampling rounds r");
    cluster->add_flag("--normalize", copt.normalize, "Min-max normalize after loading");
    cluster->add_flag("--has-header", copt.has_header, "Skip the first line");
    cluster->add_option("--columns", copt.columns, "0-based feature columns to keep")
        ->delimiter(',');
    cluster->add_flag("--no-final-assignment", copt.no_final_assignment,
                      "Skip the final full-dataset assignment (big-means)");
    cluster->add_option("--out-centroids", copt.out_centroids, "Write centroids CSV here");
    cluster->add_option("--out-labels", copt.out_labels, "Write labels CSV here");
    cluster->add_option("--out-json", copt.out_json, "Write the JSON report here");

    std::string plan_path;
    std::string bench_csv;
    std::string bench_json;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Run a benchmark plan");
    bench_cmd->add_option("--plan", plan_path, "Plan JSON file")->required();
    bench_cmd->add_option("--out-csv", bench_csv, "Write summary CSV here");
    bench_cmd->add_option("--out-json", bench_json, "Write the full JSON results here");

    std::string norm_input;
    std::string norm_format = "csv";
    std::string norm_output;
    bool norm_header = false;
    std::vector<std::size_t> norm_columns;
    CLI::App* normalize_cmd =
        app.add_subcommand("normalize", "Min-max normalize a dataset to CSV");
    normalize_cmd->add_option("--input", norm_input, "Dataset file")->required();
    normalize_cmd->add_option("--format", norm_format, "csv | whitespace | tsplib")->required();
    normalize_cmd->add_option("--output", norm_output, "Output CSV path")->required();
    normalize_cmd->add_flag("--has-header", norm_header, "Skip the first line");
    normalize_cmd->add_option("--columns", norm_columns, "0-based feature columns to keep")
        ->delimiter(',');

    std::string hint_input;
    std::string hint_format = "csv";
    std::size_t hint_k = 0;
    std::vector<std::size_t> hint_ladder;
    std::uint64_t hint_probe_chunks = 3;
    std::uint64_t hint_probe_runs = 3;
    std::string hint_seed_text = std::to_string(bigmeans::kDefaultSeed);
    bool hint_header = false;
    CLI::App* hint_cmd =
        app.add_subcommand("hint-chunk-size", "Probe candidate chunk sizes and print the best");
    hint_cmd->add_option("--input", hint_input, "Dataset file")->required();
    hint_cmd->add_option("--format", hint_format, "csv | whitespace | tsplib")->required();
    hint_cmd->add_option("--k", hint_k, "Number of clusters")->required();
    hint_cmd->add_option("--ladder", hint_ladder, "Candidate chunk sizes")->delimiter(',');
    hint_cmd->add_option("--probe-chunks", hint_probe_chunks, "Chunks per probe run");
    hint_cmd->add_option("--probe-runs", hint_probe_runs, "Runs per candidate size");
    hint_cmd->add_option("--seed", hint_seed_text, "Unsigned integer or 'random'");
    hint_cmd->add_flag("--has-header", hint_header, "Skip the first line");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);  // --help and friends
        }
        std::fprintf(stderr, "%s\n", e.what());
        return kExitConfig;
    }

    try {
        const unsigned threads = resolve_threads(threads_flag);
        bigmeans::set_worker_count(threads);

        if (cluster->parsed()) {
            copt.max_seconds_set = max_seconds_opt->count() > 0;
            copt.max_chunks_set = max_chunks_opt->count() > 0;
            return run_cluster(copt, threads);
        }
        if (bench_cmd->parsed()) {
            return run_bench(plan_path, bench_csv, bench_json);
        }
        if (normalize_cmd->parsed()) {
            bigmeans::io::DatasetSpec spec;
            spec.path = norm_input;
            spec.format = bigmeans::io::parse_format(norm_format);
            spec.has_header = norm_header;
            if (!norm_columns.empty()) {
                spec.columns = norm_columns;
            }
            const bigmeans::Dataset data = bigmeans::io::load(spec);
            bigmeans::io::save_csv(bigmeans::io::min_max_normalize(data), norm_output);
            return 0;
        }
        if (hint_cmd->parsed()) {
            bigmeans::io::DatasetSpec spec;
            spec.path = hint_input;
            spec.format = bigmeans::io::parse_format(hint_format);
            spec.has_header = hint_header;
            const bigmeans::Dataset data = bigmeans::io::load(spec);
            bigmeans::ChunkHintConfig cfg;
            cfg.ladder.assign(hint_ladder.begin(), hint_ladder.end());
            cfg.chunks_per_candidate = hint_probe_chunks;
            cfg.runs_per_candidate = hint_probe_runs;
            cfg.seed = resolve_seed(hint_seed_text);
            std::printf("%zu\n", bigmeans::choose_chunk_size_hint(data, hint_k, cfg));
            return 0;
        }
        return kExitConfig;
    } catch (const bigmeans::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
}
