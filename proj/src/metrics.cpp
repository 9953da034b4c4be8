#include "bigmeans/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

namespace bigmeans {
namespace metrics {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

double relative_error(double f_bar, double f_best) {
    if (!(f_best > 0.0)) {
        throw ConfigError("relative_error: f_best must be positive");
    }
    return (f_bar - f_best) / f_best * 100.0;
}

double score(double value, const std::vector<double>& all_values) {
    if (all_values.empty()) {
        throw ConfigError("score: value list is empty");
    }
    if (std::find(all_values.begin(), all_values.end(), value) == all_values.end()) {
        throw ConfigError("score: value is not in the list");
    }
    const auto [lo, hi] = std::minmax_element(all_values.begin(), all_values.end());
    if (*lo == *hi) {
        return 1.0;  // every algorithm tied at best
    }
    return 1.0 - (value - *lo) / (*hi - *lo);
}

ScoreTable aggregate_scores(const std::vector<ScoreEntry>& entries) {
    if (entries.empty()) {
        throw ConfigError("aggregate_scores: no entries");
    }

    ScoreTable table;
    table.entries = entries;
    std::set<std::pair<std::string, std::string>> seen;
    for (const ScoreEntry& e : entries) {
        if (e.accuracy < 0.0 || e.accuracy > 1.0 || e.cpu < 0.0 || e.cpu > 1.0) {
            throw ConfigError("aggregate_scores: scores must lie in [0,1]");
        }
        if (!seen.insert({e.algorithm, e.dataset}).second) {
            throw ConfigError("aggregate_scores: duplicate (algorithm, dataset) entry");
        }
        if (std::find(table.algorithms.begin(), table.algorithms.end(), e.algorithm) ==
            table.algorithms.end()) {
            table.algorithms.push_back(e.algorithm);
        }
        if (std::find(table.datasets.begin(), table.datasets.end(), e.dataset) ==
            table.datasets.end()) {
            table.datasets.push_back(e.dataset);
        }
    }
    for (const std::string& alg : table.algorithms) {
        for (const std::string& ds : table.datasets) {
            if (!seen.count({alg, ds})) {
                throw ConfigError("aggregate_scores: missing entry for algorithm '" + alg +
                                  "' on dataset '" + ds + "'");
            }
        }
    }

    table.max_possible = table.datasets.size();
    for (const std::string& alg : table.algorithms) {
        table.sum_accuracy[alg] = 0.0;
        table.sum_cpu[alg] = 0.0;
        table.sum_mean[alg] = 0.0;
    }
    // Fixed accumulation order: entry order as given.
    for (const ScoreEntry& e : entries) {
        table.sum_accuracy[e.algorithm] += e.accuracy;
        table.sum_cpu[e.algorithm] += e.cpu;
        table.sum_mean[e.algorithm] += 0.5 * (e.accuracy + e.cpu);
    }
    const double denom = static_cast<double>(table.max_possible);
    for (const std::string& alg : table.algorithms) {
        table.efficiency_accuracy_pct[alg] = table.sum_accuracy[alg] / denom * 100.0;
        table.efficiency_cpu_pct[alg] = table.sum_cpu[alg] / denom * 100.0;
    }
    return table;
}

std::string summaries_to_csv(const std::vector<RunSummary>& summaries, const ScoreTable& scores) {
    std::ostringstream out;
    out << "algorithm,dataset,k,e_min,e_mean,e_max,cpu_min,cpu_mean,cpu_max,n_d,"
           "score_accuracy,score_cpu\n";
    for (const RunSummary& s : summaries) {
        double score_accuracy = 0.0;
        double score_cpu = 0.0;
        for (const ScoreEntry& e : scores.entries) {
            if (e.algorithm == s.algorithm && e.dataset == s.dataset) {
                score_accuracy = e.accuracy;
                score_cpu = e.cpu;
                break;
            }
        }
        out << s.algorithm << ',' << s.dataset << ',' << s.k << ',' << fmt(s.e_min) << ','
            << fmt(s.e_mean) << ',' << fmt(s.e_max) << ',' << fmt(s.cpu_min) << ','
            << fmt(s.cpu_mean) << ',' << fmt(s.cpu_max) << ',' << fmt(s.nd_mean) << ','
            << fmt(score_accuracy) << ',' << fmt(score_cpu) << '\n';
    }
    return out.str();
}

std::string score_table_to_csv(const ScoreTable& scores) {
    std::ostringstream out;
    out << "algorithm,sum_score_accuracy,sum_score_cpu,sum_mean_score,"
           "efficiency_accuracy_pct,efficiency_cpu_pct\n";
    for (const std::string& alg : scores.algorithms) {
        out << alg << ',' << fmt(scores.sum_accuracy.at(alg)) << ','
            << fmt(scores.sum_cpu.at(alg)) << ',' << fmt(scores.sum_mean.at(alg)) << ','
            << fmt(scores.efficiency_accuracy_pct.at(alg)) << ','
            << fmt(scores.efficiency_cpu_pct.at(alg)) << '\n';
    }
    return out.str();
}

}  // namespace metrics
}  // namespace bigmeans
