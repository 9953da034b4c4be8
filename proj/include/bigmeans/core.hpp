#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bigmeans/common.hpp"

namespace bigmeans {

// Immutable m-by-n row-major matrix of feature vectors. Every entry is finite;
// construction rejects NaN/Inf. Rows never change once built, so a Dataset may
// be shared read-only across threads and algorithm instances.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<double> values, std::size_t m, std::size_t n);

    std::size_t m() const { return m_; }
    std::size_t n() const { return n_; }

    std::span<const double> row(std::size_t i) const {
        return {points_.data() + i * n_, n_};
    }
    double value(std::size_t i, std::size_t j) const { return points_[i * n_ + j]; }
    const std::vector<double>& values() const { return points_; }

    // New dataset holding the listed rows, in the listed order.
    Dataset gather(const std::vector<std::size_t>& rows) const;

private:
    std::vector<double> points_;
    std::size_t m_ = 0;
    std::size_t n_ = 0;
};

// k-by-n center matrix plus a per-row degeneracy mask. A degenerate row stands
// for an uninitialized or emptied cluster; it never participates in distance
// computations or the objective.
class Centroids {
public:
    Centroids() = default;

    // k rows, all degenerate (the Big-means starting state).
    static Centroids all_degenerate(std::size_t k, std::size_t n);
    // Non-degenerate centroids from explicit row data.
    static Centroids from_rows(std::vector<double> values, std::size_t k, std::size_t n);

    std::size_t k() const { return k_; }
    std::size_t n() const { return n_; }

    std::span<const double> row(std::size_t j) const {
        return {centers_.data() + j * n_, n_};
    }
    void set_row(std::size_t j, std::span<const double> values);

    bool degenerate(std::size_t j) const { return degenerate_[j] != 0; }
    void mark_degenerate(std::size_t j) { degenerate_[j] = 1; }
    std::size_t degenerate_count() const;
    std::size_t active_count() const { return k_ - degenerate_count(); }

    const std::vector<double>& values() const { return centers_; }
    const std::vector<std::uint8_t>& mask() const { return degenerate_; }

    bool operator==(const Centroids& other) const = default;

private:
    std::vector<double> centers_;
    std::vector<std::uint8_t> degenerate_;
    std::size_t k_ = 0;
    std::size_t n_ = 0;
};

// Length-m vector of cluster indices; the index form of the 0/1 assignment
// weights (one 1 per row). Labels always reference non-degenerate centroids.
struct Assignment {
    std::vector<std::int32_t> labels;

    std::size_t size() const { return labels.size(); }
    bool operator==(const Assignment& other) const = default;
};

// Cost accounting shared by all algorithms. distance_evals counts every
// point-to-center squared-distance computation exactly once; iterations counts
// Lloyd update rounds; the cpu split separates the initialization/chunk stage
// from the final full-dataset stage.
struct EvalCounter {
    std::uint64_t distance_evals = 0;
    std::uint64_t iterations = 0;
    double cpu_init = 0.0;
    double cpu_full = 0.0;

    void merge(const EvalCounter& other) {
        distance_evals += other.distance_evals;
        iterations += other.iterations;
        cpu_init += other.cpu_init;
        cpu_full += other.cpu_full;
    }
};

// Squared Euclidean distance, computed term-by-term. The naive form is kept
// deliberately: the norm-expansion shortcut cancels catastrophically on
// wide-range data. Throws ConfigError on length mismatch.
double squared_distance(std::span<const double> a, std::span<const double> b);

// Nearest non-degenerate centroid per point; ties go to the lowest index.
// Returns the labels and the per-point minimum squared distances. Adds
// m * active_count to counter->distance_evals when counter is non-null.
// Throws StateError if every centroid is degenerate.
std::pair<Assignment, std::vector<double>> assign_nearest(const Dataset& data,
                                                          const Centroids& cent,
                                                          EvalCounter* counter = nullptr);

// Sum over points of the squared distance to the nearest centroid, i.e. the
// clustering objective for fixed centers. Accumulated in fixed block order.
double objective(const Dataset& data, const Centroids& cent, EvalCounter* counter = nullptr);

// Fixed-order sum of per-point values (block partials merged in block index
// order); the reduction all deterministic objective totals go through.
double block_sum(const std::vector<double>& values);

// Per-cluster mean of assigned points; clusters with no members come back
// degenerate. Partial sums are per-block and merged in block order.
Centroids update_centroids(const Dataset& data, const Assignment& asg, std::size_t k);

}  // namespace bigmeans
