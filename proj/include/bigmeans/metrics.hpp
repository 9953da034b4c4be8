#pragma once

#include <map>
#include <string>
#include <vector>

#include "bigmeans/common.hpp"

namespace bigmeans {
namespace metrics {

// Per-(algorithm, dataset, k) statistics over n_exec runs. e_* are relative
// errors in percent against f_best_used; cpu_* are seconds per run
// (initialization stage plus full stage).
struct RunSummary {
    std::string algorithm;
    std::string dataset;
    std::size_t k = 0;
    std::uint64_t n_exec = 0;
    double e_min = 0.0;
    double e_mean = 0.0;
    double e_max = 0.0;
    double cpu_min = 0.0;
    double cpu_mean = 0.0;
    double cpu_max = 0.0;
    double nd_mean = 0.0;
    double f_best_used = 0.0;
};

// Min-max normalized scores per algorithm and dataset, one per metric, with
// the cross-dataset aggregates. Scores live in [0,1]; 1 is best.
struct ScoreEntry {
    std::string algorithm;
    std::string dataset;
    double accuracy = 0.0;
    double cpu = 0.0;
};

struct ScoreTable {
    std::vector<std::string> algorithms;  // first-appearance order
    std::vector<std::string> datasets;
    std::vector<ScoreEntry> entries;
    std::map<std::string, double> sum_accuracy;       // S(A, accuracy)
    std::map<std::string, double> sum_cpu;            // S(A, cpu)
    std::map<std::string, double> sum_mean;           // M(A) = sum of per-dataset means
    std::map<std::string, double> efficiency_accuracy_pct;  // sum / dataset count * 100
    std::map<std::string, double> efficiency_cpu_pct;
    std::size_t max_possible = 0;  // dataset count; the per-metric maximum sum
};

// E_A = (f_bar - f_best)/f_best * 100. Negative when f_bar beats f_best.
// Throws ConfigError unless f_best > 0.
double relative_error(double f_bar, double f_best);

// Min-max normalized rank of value within all_values: 1 at the minimum, 0 at
// the maximum, linear in between; all 1 when every value ties. Throws
// ConfigError when the list is empty or value is not an element of it.
double score(double value, const std::vector<double>& all_values);

// Sums the per-dataset scores per algorithm and metric, the per-dataset mean
// of the two metrics, and the grand mean sum; every algorithm must cover the
// same dataset set (failed datasets are entered as explicit zeros upstream).
ScoreTable aggregate_scores(const std::vector<ScoreEntry>& entries);

// Stable-column CSV for summary rows; per-dataset scores are looked up from
// the table and repeated on each of the dataset's rows.
std::string summaries_to_csv(const std::vector<RunSummary>& summaries, const ScoreTable& scores);

std::string score_table_to_csv(const ScoreTable& scores);

}  // namespace metrics
}  // namespace bigmeans
