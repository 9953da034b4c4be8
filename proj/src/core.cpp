#include "bigmeans/core.hpp"

#include <cmath>
#include <cstring>
#include <limits>

#include "bigmeans/threading.hpp"

namespace bigmeans {

namespace {

std::size_t block_count(std::size_t m) {
    return (m + kReductionBlock - 1) / kReductionBlock;
}

}  // namespace

Dataset::Dataset(std::vector<double> values, std::size_t m, std::size_t n)
    : points_(std::move(values)), m_(m), n_(n) {
    if (m_ < 1 || n_ < 1) {
        throw ConfigError("dataset must have at least one row and one column");
    }
    if (points_.size() != m_ * n_) {
        throw ConfigError("dataset buffer size does not match m*n");
    }
    for (double v : points_) {
        if (!std::isfinite(v)) {
            throw ConfigError("dataset contains a non-finite value");
        }
    }
}

Dataset Dataset::gather(const std::vector<std::size_t>& rows) const {
    std::vector<double> out;
    out.reserve(rows.size() * n_);
    for (std::size_t i : rows) {
        if (i >= m_) {
            throw ConfigError("gather index out of range");
        }
        out.insert(out.end(), points_.begin() + i * n_, points_.begin() + (i + 1) * n_);
    }
    return Dataset(std::move(out), rows.size(), n_);
}

Centroids Centroids::all_degenerate(std::size_t k, std::size_t n) {
    if (k < 1 || n < 1) {
        throw ConfigError("centroids must have at least one row and one column");
    }
    Centroids c;
    c.centers_.assign(k * n, 0.0);
    c.degenerate_.assign(k, 1);
    c.k_ = k;
    c.n_ = n;
    return c;
}

Centroids Centroids::from_rows(std::vector<double> values, std::size_t k, std::size_t n) {
    if (k < 1 || n < 1) {
        throw ConfigError("centroids must have at least one row and one column");
    }
    if (values.size() != k * n) {
        throw ConfigError("centroid buffer size does not match k*n");
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw ConfigError("non-degenerate centroid rows must be finite");
        }
    }
    Centroids c;
    c.centers_ = std::move(values);
    c.degenerate_.assign(k, 0);
    c.k_ = k;
    c.n_ = n;
    return c;
}

void Centroids::set_row(std::size_t j, std::span<const double> values) {
    if (j >= k_ || values.size() != n_) {
        throw ConfigError("centroid row assignment out of range");
    }
    std::memcpy(centers_.data() + j * n_, values.data(), n_ * sizeof(double));
    degenerate_[j] = 0;
}

std::size_t Centroids::degenerate_count() const {
    std::size_t d = 0;
    for (std::uint8_t f : degenerate_) {
        d += f;
    }
    return d;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw ConfigError("squared_distance: vector lengths differ");
    }
    double sum = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const double diff = a[d] - b[d];
        sum += diff * diff;
    }
    return sum;
}

std::pair<Assignment, std::vector<double>> assign_nearest(const Dataset& data,
                                                          const Centroids& cent,
                                                          EvalCounter* counter) {
    const std::size_t m = data.m();
    const std::size_t n = data.n();
    const std::size_t k = cent.k();
    if (n != cent.n()) {
        throw ConfigError("assign_nearest: dataset and centroid widths differ");
    }
    const std::size_t active = cent.active_count();
    if (active == 0) {
        throw StateError("assign_nearest: every centroid is degenerate");
    }

    Assignment asg;
    asg.labels.assign(m, -1);
    std::vector<double> dists(m, 0.0);

    const double* points = data.values().data();
    const double* centers = cent.values().data();
    const std::vector<std::uint8_t>& mask = cent.mask();
    const std::int64_t blocks = static_cast<std::int64_t>(block_count(m));

#pragma omp parallel for schedule(static) num_threads(static_cast<int>(worker_count()))
    for (std::int64_t b = 0; b < blocks; ++b) {
        const std::size_t begin = static_cast<std::size_t>(b) * kReductionBlock;
        const std::size_t end = std::min(begin + kReductionBlock, m);
        for (std::size_t i = begin; i < end; ++i) {
            const double* x = points + i * n;
            double best = std::numeric_limits<double>::infinity();
            std::int32_t best_j = -1;
            for (std::size_t j = 0; j < k; ++j) {
                if (mask[j]) {
                    continue;
                }
                const double* c = centers + j * n;
                double sum = 0.0;
                for (std::size_t d = 0; d < n; ++d) {
                    const double diff = x[d] - c[d];
                    sum += diff * diff;
                }
                if (sum < best) {
                    best = sum;
                    best_j = static_cast<std::int32_t>(j);
                }
            }
            asg.labels[i] = best_j;
            dists[i] = best;
        }
    }

    if (counter != nullptr) {
        counter->distance_evals += static_cast<std::uint64_t>(m) * active;
    }
    return {std::move(asg), std::move(dists)};
}

double block_sum(const std::vector<double>& values) {
    const std::size_t m = values.size();
    double total = 0.0;
    for (std::size_t begin = 0; begin < m; begin += kReductionBlock) {
        const std::size_t end = std::min(begin + kReductionBlock, m);
        double partial = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            partial += values[i];
        }
        total += partial;
    }
    return total;
}

double objective(const Dataset& data, const Centroids& cent, EvalCounter* counter) {
    auto [asg, dists] = assign_nearest(data, cent, counter);
    (void)asg;
    return block_sum(dists);
}

Centroids update_centroids(const Dataset& data, const Assignment& asg, std::size_t k) {
    const std::size_t m = data.m();
    const std::size_t n = data.n();
    if (asg.size() != m) {
        throw ConfigError("update_centroids: assignment length does not match dataset");
    }
    for (std::int32_t label : asg.labels) {
        if (label < 0 || static_cast<std::size_t>(label) >= k) {
            throw ConfigError("update_centroids: label out of range");
        }
    }

    const std::size_t blocks = block_count(m);
    std::vector<double> partial_sums(blocks * k * n, 0.0);
    std::vector<std::uint64_t> partial_counts(blocks * k, 0);
    const double* points = data.values().data();

#pragma omp parallel for schedule(static) num_threads(static_cast<int>(worker_count()))
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
        const std::size_t begin = static_cast<std::size_t>(b) * kReductionBlock;
        const std::size_t end = std::min(begin + kReductionBlock, m);
        double* sums = partial_sums.data() + static_cast<std::size_t>(b) * k * n;
        std::uint64_t* counts = partial_counts.data() + static_cast<std::size_t>(b) * k;
        for (std::size_t i = begin; i < end; ++i) {
            const auto j = static_cast<std::size_t>(asg.labels[i]);
            const double* x = points + i * n;
            double* row = sums + j * n;
            for (std::size_t d = 0; d < n; ++d) {
                row[d] += x[d];
            }
            ++counts[j];
        }
    }

    // Merge in block index order so the result is independent of scheduling.
    std::vector<double> sums(k * n, 0.0);
    std::vector<std::uint64_t> counts(k, 0);
    for (std::size_t b = 0; b < blocks; ++b) {
        const double* ps = partial_sums.data() + b * k * n;
        const std::uint64_t* pc = partial_counts.data() + b * k;
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t d = 0; d < n; ++d) {
                sums[j * n + d] += ps[j * n + d];
            }
            counts[j] += pc[j];
        }
    }

    Centroids out = Centroids::all_degenerate(k, n);
    std::vector<double> row(n);
    for (std::size_t j = 0; j < k; ++j) {
        if (counts[j] == 0) {
            continue;
        }
        const double inv = 1.0 / static_cast<double>(counts[j]);
        for (std::size_t d = 0; d < n; ++d) {
            row[d] = sums[j * n + d] * inv;
        }
        out.set_row(j, row);
    }
    return out;
}

}  // namespace bigmeans
