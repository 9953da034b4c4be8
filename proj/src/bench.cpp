#include "bigmeans/bench.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace bigmeans {
namespace bench {

namespace {

using nlohmann::json;

struct LoadedDataset {
    const PlanDataset* plan = nullptr;
    std::optional<Dataset> data;
    std::string load_error;
};

CellResult execute_cell(const Dataset& data, const PlanDataset& ds, AlgorithmId alg,
                        std::size_t k, const ExperimentPlan& plan) {
    CellResult cell;
    cell.algorithm = algorithm_name(alg);
    cell.dataset = ds.name;
    cell.k = k;
    try {
        for (std::uint64_t run = 0; run < plan.n_exec; ++run) {
            const std::uint64_t seed = plan.vary_seeds ? plan.base_seed + run : plan.base_seed;
            RunRecord record;
            record.seed = seed;
            if (alg == AlgorithmId::big_means) {
                BigMeansConfig cfg;
                cfg.k = k;
                cfg.chunk_size = ds.chunk_size;
                cfg.max_cpu_seconds = ds.max_cpu_seconds;
                cfg.max_chunks = ds.max_chunks;
                cfg.search = plan.search;
                cfg.init = plan.init;
                cfg.seed = seed;
                auto [outcome, trace] = big_means(data, cfg);
                record.objective = outcome.objective;
                record.cpu_init = outcome.counter.cpu_init;
                record.cpu_full = outcome.counter.cpu_full;
                record.n_d = outcome.counter.distance_evals;
                record.iterations = outcome.counter.iterations;
                record.n_s = trace.chunks();
            } else {
                InitConfig init = plan.init;
                init.seed = seed;
                switch (alg) {
                    case AlgorithmId::forgy:
                        init.method = InitMethod::forgy;
                        break;
                    case AlgorithmId::kmeans_pp:
                        init.method = InitMethod::kmeans_pp;
                        break;
                    case AlgorithmId::kmeans_parallel:
                        init.method = InitMethod::kmeans_parallel;
                        break;
                    default:
                        break;
                }
                SearchConfig search = plan.search;
                search.seed = seed;
                const ClusteringOutcome outcome = kmeans(data, k, init, search);
                record.objective = outcome.objective;
                record.cpu_init = outcome.counter.cpu_init;
                record.cpu_full = outcome.counter.cpu_full;
                record.n_d = outcome.counter.distance_evals;
                record.iterations = outcome.counter.iterations;
                record.n_s = 0;
            }
            cell.runs.push_back(record);
        }
    } catch (const std::exception& e) {
        cell.failed = true;
        cell.error = e.what();
        cell.runs.clear();
    }
    return cell;
}

double mean_of(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

}  // namespace

AlgorithmId parse_algorithm(const std::string& name) {
    if (name == "big_means") {
        return AlgorithmId::big_means;
    }
    if (name == "forgy") {
        return AlgorithmId::forgy;
    }
    if (name == "kmeans_pp") {
        return AlgorithmId::kmeans_pp;
    }
    if (name == "kmeans_parallel") {
        return AlgorithmId::kmeans_parallel;
    }
    throw ConfigError("unknown algorithm id '" + name + "'");
}

std::string algorithm_name(AlgorithmId id) {
    switch (id) {
        case AlgorithmId::big_means:
            return "big_means";
        case AlgorithmId::forgy:
            return "forgy";
        case AlgorithmId::kmeans_pp:
            return "kmeans_pp";
        case AlgorithmId::kmeans_parallel:
            return "kmeans_parallel";
    }
    return "unknown";
}

ExperimentPlan parse_plan(const std::string& json_text, const std::string& base_dir) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("plan is not valid JSON: ") + e.what(), 1, 1);
    }

    ExperimentPlan plan;
    plan.n_exec = doc.value("n_exec", 1u);
    plan.base_seed = doc.value("base_seed", kDefaultSeed);
    plan.vary_seeds = doc.value("vary_seeds", true);
    plan.parallel_cells = doc.value("parallel_cells", false);
    if (plan.n_exec < 1) {
        throw ConfigError("plan: n_exec must be at least 1");
    }

    if (!doc.contains("k_values") || !doc["k_values"].is_array() || doc["k_values"].empty()) {
        throw ConfigError("plan: k_values must be a nonempty array");
    }
    for (const auto& k : doc["k_values"]) {
        plan.k_values.push_back(k.get<std::size_t>());
    }

    if (!doc.contains("algorithms") || !doc["algorithms"].is_array() ||
        doc["algorithms"].empty()) {
        throw ConfigError("plan: algorithms must be a nonempty array");
    }
    for (const auto& a : doc["algorithms"]) {
        plan.algorithms.push_back(parse_algorithm(a.get<std::string>()));
    }

    if (doc.contains("search")) {
        const json& s = doc["search"];
        plan.search.max_iterations = s.value("max_iterations", plan.search.max_iterations);
        plan.search.rel_tolerance = s.value("rel_tolerance", plan.search.rel_tolerance);
    }
    if (doc.contains("init")) {
        const json& s = doc["init"];
        plan.init.candidates_per_step = s.value("candidates_per_step", plan.init.candidates_per_step);
        plan.init.oversampling_l = s.value("oversampling_l", plan.init.oversampling_l);
        plan.init.rounds_r = s.value("rounds_r", plan.init.rounds_r);
        const std::string rule = s.value("rounds_rule", std::string("fixed"));
        if (rule == "fixed") {
            plan.init.rounds_rule = RoundsRule::fixed;
        } else if (rule == "log_phi") {
            plan.init.rounds_rule = RoundsRule::log_phi;
        } else {
            throw ConfigError("plan: rounds_rule must be 'fixed' or 'log_phi'");
        }
    }

    if (!doc.contains("datasets") || !doc["datasets"].is_array() || doc["datasets"].empty()) {
        throw ConfigError("plan: datasets must be a nonempty array");
    }
    const std::filesystem::path base(base_dir);
    for (const auto& d : doc["datasets"]) {
        PlanDataset ds;
        ds.name = d.at("name").get<std::string>();
        if (d.contains("registry")) {
            std::filesystem::path reg_path = d["registry"].get<std::string>();
            if (!reg_path.is_absolute()) {
                reg_path = base / reg_path;
            }
            const auto registry = io::load_registry(reg_path.string());
            const auto it = registry.find(ds.name);
            if (it == registry.end()) {
                throw ConfigError("plan: dataset '" + ds.name + "' not present in registry");
            }
            ds.spec = it->second.spec;
            ds.f_best = it->second.f_best;
        } else {
            std::filesystem::path p = d.at("path").get<std::string>();
            ds.spec.path = (p.is_absolute() ? p : base / p).string();
            ds.spec.format = io::parse_format(d.at("format").get<std::string>());
            ds.spec.has_header = d.value("has_header", false);
            ds.spec.normalize = d.value("normalize", false);
            if (d.contains("columns")) {
                ds.spec.columns = d["columns"].get<std::vector<std::size_t>>();
            }
        }
        ds.chunk_size = d.value("chunk_size", 0u);
        if (d.contains("max_cpu_seconds")) {
            ds.max_cpu_seconds = d["max_cpu_seconds"].get<double>();
        }
        if (d.contains("max_chunks")) {
            ds.max_chunks = d["max_chunks"].get<std::uint64_t>();
        }
        if (d.contains("f_best")) {
            for (const auto& [k_str, v] : d["f_best"].items()) {
                ds.f_best[static_cast<std::size_t>(std::stoull(k_str))] = v.get<double>();
            }
        }
        plan.datasets.push_back(std::move(ds));
    }

    const bool has_big_means =
        std::find(plan.algorithms.begin(), plan.algorithms.end(), AlgorithmId::big_means) !=
        plan.algorithms.end();
    if (has_big_means) {
        for (const PlanDataset& ds : plan.datasets) {
            if (ds.chunk_size < 1) {
                throw ConfigError("plan: dataset '" + ds.name +
                                  "' needs chunk_size for big_means");
            }
            if (!ds.max_cpu_seconds.has_value() && !ds.max_chunks.has_value()) {
                throw ConfigError("plan: dataset '" + ds.name +
                                  "' needs max_cpu_seconds or max_chunks for big_means");
            }
        }
    }
    return plan;
}

ExperimentPlan load_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw StateError("cannot open plan '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_plan(text.str(), std::filesystem::path(path).parent_path().string());
}

BenchResult run_plan(const ExperimentPlan& plan) {
    if (plan.datasets.empty() || plan.algorithms.empty() || plan.k_values.empty() ||
        plan.n_exec < 1) {
        throw ConfigError("run_plan: incomplete plan");
    }

    BenchResult result;
    result.timing_reliable = !plan.parallel_cells;

    std::vector<LoadedDataset> loaded(plan.datasets.size());
    for (std::size_t i = 0; i < plan.datasets.size(); ++i) {
        loaded[i].plan = &plan.datasets[i];
        try {
            loaded[i].data = io::load(plan.datasets[i].spec);
        } catch (const std::exception& e) {
            loaded[i].load_error = e.what();
        }
    }

    // Cells in a fixed order: dataset, then algorithm, then k.
    struct CellKey {
        std::size_t dataset_index;
        AlgorithmId alg;
        std::size_t k;
    };
    std::vector<CellKey> keys;
    for (std::size_t d = 0; d < plan.datasets.size(); ++d) {
        for (AlgorithmId alg : plan.algorithms) {
            for (std::size_t k : plan.k_values) {
                keys.push_back({d, alg, k});
            }
        }
    }

    auto run_cell = [&](const CellKey& key) -> CellResult {
        const LoadedDataset& ld = loaded[key.dataset_index];
        if (!ld.data.has_value()) {
            CellResult cell;
            cell.algorithm = algorithm_name(key.alg);
            cell.dataset = ld.plan->name;
            cell.k = key.k;
            cell.failed = true;
            cell.error = ld.load_error;
            return cell;
        }
        return execute_cell(*ld.data, *ld.plan, key.alg, key.k, plan);
    };

    if (plan.parallel_cells) {
        std::vector<std::future<CellResult>> futures;
        futures.reserve(keys.size());
        for (const CellKey& key : keys) {
            futures.push_back(std::async(std::launch::async, run_cell, key));
        }
        for (auto& f : futures) {
            result.cells.push_back(f.get());
        }
    } else {
        for (const CellKey& key : keys) {
            result.cells.push_back(run_cell(key));
        }
    }

    for (const CellResult& cell : result.cells) {
        result.any_failed = result.any_failed || cell.failed;
    }

    // Best-known objective per (dataset, k): plan value, else run minimum.
    std::map<std::pair<std::string, std::size_t>, double> f_best;
    for (const CellResult& cell : result.cells) {
        if (cell.failed) {
            continue;
        }
        const auto key = std::make_pair(cell.dataset, cell.k);
        for (const RunRecord& run : cell.runs) {
            const auto it = f_best.find(key);
            if (it == f_best.end() || run.objective < it->second) {
                f_best[key] = run.objective;
            }
        }
    }
    for (const PlanDataset& ds : plan.datasets) {
        for (const auto& [k, v] : ds.f_best) {
            f_best[{ds.name, k}] = v;
        }
    }

    for (CellResult& cell : result.cells) {
        if (cell.failed) {
            continue;
        }
        const double best = f_best.at({cell.dataset, cell.k});
        metrics::RunSummary s;
        s.algorithm = cell.algorithm;
        s.dataset = cell.dataset;
        s.k = cell.k;
        s.n_exec = cell.runs.size();
        s.f_best_used = best;
        std::vector<double> e;
        std::vector<double> cpu;
        double nd_sum = 0.0;
        for (RunRecord& run : cell.runs) {
            run.e_pct = metrics::relative_error(run.objective, best);
            e.push_back(run.e_pct);
            cpu.push_back(run.cpu_init + run.cpu_full);
            nd_sum += static_cast<double>(run.n_d);
        }
        s.e_min = *std::min_element(e.begin(), e.end());
        s.e_max = *std::max_element(e.begin(), e.end());
        s.e_mean = mean_of(e);
        s.cpu_min = *std::min_element(cpu.begin(), cpu.end());
        s.cpu_max = *std::max_element(cpu.begin(), cpu.end());
        s.cpu_mean = mean_of(cpu);
        s.nd_mean = nd_sum / static_cast<double>(cell.runs.size());
        result.summaries.push_back(std::move(s));
    }

    // Dataset-level metric values: mean over k of e_mean and cpu_mean, failed
    // cells excluded (and counted); an algorithm with nothing left on a
    // dataset scores 0 there.
    struct DatasetValues {
        std::vector<double> e;
        std::vector<double> cpu;
    };
    std::map<std::pair<std::string, std::string>, DatasetValues> values;  // (dataset, alg)
    for (const CellResult& cell : result.cells) {
        const auto key = std::make_pair(cell.dataset, cell.algorithm);
        if (cell.failed) {
            result.excluded_cells[cell.algorithm + "/" + cell.dataset] += 1;
            continue;
        }
        const metrics::RunSummary* summary = nullptr;
        for (const metrics::RunSummary& s : result.summaries) {
            if (s.algorithm == cell.algorithm && s.dataset == cell.dataset && s.k == cell.k) {
                summary = &s;
                break;
            }
        }
        values[key].e.push_back(summary->e_mean);
        values[key].cpu.push_back(summary->cpu_mean);
    }

    std::vector<metrics::ScoreEntry> entries;
    for (const PlanDataset& ds : plan.datasets) {
        std::vector<double> e_values;
        std::vector<double> cpu_values;
        std::vector<std::pair<std::string, const DatasetValues*>> present;
        for (AlgorithmId alg : plan.algorithms) {
            const auto it = values.find({ds.name, algorithm_name(alg)});
            if (it != values.end() && !it->second.e.empty()) {
                present.push_back({algorithm_name(alg), &it->second});
                e_values.push_back(mean_of(it->second.e));
                cpu_values.push_back(mean_of(it->second.cpu));
            }
        }
        for (AlgorithmId alg : plan.algorithms) {
            metrics::ScoreEntry entry;
            entry.algorithm = algorithm_name(alg);
            entry.dataset = ds.name;
            const auto it = values.find({ds.name, entry.algorithm});
            if (it == values.end() || it->second.e.empty()) {
                entry.accuracy = 0.0;  // failed the whole dataset
                entry.cpu = 0.0;
            } else {
                entry.accuracy = metrics::score(mean_of(it->second.e), e_values);
                entry.cpu = metrics::score(mean_of(it->second.cpu), cpu_values);
            }
            entries.push_back(std::move(entry));
        }
    }
    result.scores = metrics::aggregate_scores(entries);
    return result;
}

std::string result_to_csv(const BenchResult& result) {
    return metrics::summaries_to_csv(result.summaries, result.scores);
}

std::string result_to_json(const BenchResult& result, const ExperimentPlan& plan) {
    json doc;
    doc["metadata"]["timing_reliable"] = result.timing_reliable;
    doc["metadata"]["any_failed"] = result.any_failed;
    doc["metadata"]["n_exec"] = plan.n_exec;
    doc["metadata"]["base_seed"] = plan.base_seed;
    for (const auto& [key, count] : result.excluded_cells) {
        doc["metadata"]["excluded_cells"][key] = count;
    }

    doc["summaries"] = json::array();
    for (const metrics::RunSummary& s : result.summaries) {
        doc["summaries"].push_back({{"algorithm", s.algorithm},
                                    {"dataset", s.dataset},
                                    {"k", s.k},
                                    {"n_exec", s.n_exec},
                                    {"e_min", s.e_min},
                                    {"e_mean", s.e_mean},
                                    {"e_max", s.e_max},
                                    {"cpu_min", s.cpu_min},
                                    {"cpu_mean", s.cpu_mean},
                                    {"cpu_max", s.cpu_max},
                                    {"nd_mean", s.nd_mean},
                                    {"f_best_used", s.f_best_used}});
    }

    doc["cells"] = json::array();
    for (const CellResult& cell : result.cells) {
        json c{{"algorithm", cell.algorithm},
               {"dataset", cell.dataset},
               {"k", cell.k},
               {"failed", cell.failed}};
        if (cell.failed) {
            c["error"] = cell.error;
        }
        c["runs"] = json::array();
        for (const RunRecord& run : cell.runs) {
            c["runs"].push_back({{"seed", run.seed},
                                 {"objective", run.objective},
                                 {"e_pct", run.e_pct},
                                 {"cpu_init", run.cpu_init},
                                 {"cpu_full", run.cpu_full},
                                 {"n_d", run.n_d},
                                 {"iterations", run.iterations},
                                 {"n_s", run.n_s}});
        }
        doc["cells"].push_back(std::move(c));
    }

    doc["scores"] = json::array();
    for (const std::string& alg : result.scores.algorithms) {
        doc["scores"].push_back(
            {{"algorithm", alg},
             {"sum_score_accuracy", result.scores.sum_accuracy.at(alg)},
             {"sum_score_cpu", result.scores.sum_cpu.at(alg)},
             {"sum_mean_score", result.scores.sum_mean.at(alg)},
             {"efficiency_accuracy_pct", result.scores.efficiency_accuracy_pct.at(alg)},
             {"efficiency_cpu_pct", result.scores.efficiency_cpu_pct.at(alg)}});
    }
    return doc.dump(2) + "\n";
}

}  // namespace bench
}  // namespace bigmeans
