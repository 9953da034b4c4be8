#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstring>
#include <random>
#include <set>
#include <vector>

#include "bigmeans/big_means.hpp"
#include "bigmeans/threading.hpp"

using namespace bigmeans;

namespace {

Dataset random_dataset(std::size_t m, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 50.0);
    std::vector<double> values(m * n);
    for (auto& v : values) v = dist(rng);
    return Dataset(std::move(values), m, n);
}

BigMeansConfig base_config(std::size_t k, std::size_t s, std::uint64_t chunks) {
    BigMeansConfig cfg;
    cfg.k = k;
    cfg.chunk_size = s;
    cfg.max_chunks = chunks;
    return cfg;
}

}  // namespace

TEST_CASE("sample_chunk draws sorted distinct indices") {
    Dataset d = random_dataset(100, 2, 1);
    Rng rng(7);
    std::vector<std::size_t> idx = sample_chunk(d, 30, rng);
    CHECK(idx.size() == 30);
    CHECK(std::is_sorted(idx.begin(), idx.end()));
    std::set<std::size_t> uniq(idx.begin(), idx.end());
    CHECK(uniq.size() == 30);
    CHECK(*uniq.rbegin() < 100);
}

TEST_CASE("sample_chunk covers the full range without touching the stream") {
    Dataset d = random_dataset(64, 2, 2);
    Rng rng(9);
    Rng untouched(9);
    std::vector<std::size_t> idx = sample_chunk(d, 64, rng);
    CHECK(idx.size() == 64);
    for (std::size_t i = 0; i < 64; ++i) CHECK(idx[i] == i);
    CHECK(rng() == untouched());  // the full-range draw consumed nothing
}

TEST_CASE("big_means validates its configuration") {
    Dataset d = random_dataset(50, 2, 3);

    BigMeansConfig no_budget;
    no_budget.k = 3;
    no_budget.chunk_size = 10;
    CHECK_THROWS_AS(big_means(d, no_budget), ConfigError);

    CHECK_THROWS_AS(big_means(d, base_config(0, 10, 1)), ConfigError);
    CHECK_THROWS_AS(big_means(d, base_config(5, 4, 1)), ConfigError);   // s < k
    CHECK_THROWS_AS(big_means(d, base_config(5, 51, 1)), ConfigError);  // s > m
    CHECK_THROWS_AS(big_means(d, base_config(5, 10, 0)), ConfigError);

    BigMeansConfig bad_time = base_config(5, 10, 1);
    bad_time.max_chunks.reset();
    bad_time.max_cpu_seconds = -1.0;
    CHECK_THROWS_AS(big_means(d, bad_time), ConfigError);
}

TEST_CASE("incumbent objective trace never increases") {
    Dataset d = random_dataset(600, 2, 4);
    BigMeansConfig cfg = base_config(5, 100, 40);
    auto [out, trace] = big_means(d, cfg);

    REQUIRE(trace.chunks() == 40);
    double prev = trace.records.front().incumbent_objective;
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
        const ChunkRecord& r = trace.records[i];
        CHECK(r.chunk_index == i);
        CHECK(r.incumbent_objective <= prev);  // exactly, no slack
        prev = r.incumbent_objective;
        if (r.accepted) CHECK(r.incumbent_objective == r.candidate_objective);
        else CHECK(r.candidate_objective >= r.incumbent_objective);
    }
    CHECK(trace.records.front().accepted);  // first chunk always beats +inf
    CHECK(trace.records.front().degenerate_repaired == 5);
}

TEST_CASE("later chunks repair only emptied rows") {
    Dataset d = random_dataset(600, 3, 5);
    BigMeansConfig cfg = base_config(4, 150, 25);
    auto [out, trace] = big_means(d, cfg);
    for (std::size_t i = 1; i < trace.records.size(); ++i)
        CHECK(trace.records[i].degenerate_repaired <= 4);
    CHECK(out.centroids.degenerate_count() == 0);
}

TEST_CASE("final pass reports the full-data objective and assignment") {
    Dataset d = random_dataset(500, 2, 6);
    BigMeansConfig cfg = base_config(4, 80, 15);
    auto [out, trace] = big_means(d, cfg);

    CHECK(out.assignment.size() == 500);
    CHECK(objective(d, out.centroids) == out.objective);
    auto [asg, dists] = assign_nearest(d, out.centroids);
    CHECK(asg == out.assignment);
    CHECK(out.counter.cpu_full > 0.0);
}

TEST_CASE("skipping the final pass reports the incumbent chunk objective") {
    Dataset d = random_dataset(500, 2, 6);
    BigMeansConfig with = base_config(4, 80, 15);
    BigMeansConfig without = with;
    without.final_assignment = false;

    auto [out_with, trace_with] = big_means(d, with);
    auto [out_without, trace_without] = big_means(d, without);

    CHECK(out_without.assignment.size() == 0);
    CHECK(out_without.objective == trace_without.records.back().incumbent_objective);
    // The final pass costs exactly one sweep: m points against k active rows.
    CHECK(out_with.counter.distance_evals - out_without.counter.distance_evals == 500 * 4);
}

TEST_CASE("chunk budget and time budget both stop the loop") {
    Dataset d = random_dataset(400, 2, 7);
    auto [out_chunks, trace_chunks] = big_means(d, base_config(3, 50, 6));
    CHECK(trace_chunks.chunks() == 6);

    BigMeansConfig timed;
    timed.k = 3;
    timed.chunk_size = 50;
    timed.max_cpu_seconds = 0.05;
    auto [out_timed, trace_timed] = big_means(d, timed);
    CHECK(trace_timed.chunks() >= 1);  // at least one chunk under any budget
    CHECK(out_timed.counter.cpu_init >= 0.0);
}

TEST_CASE("big_means is deterministic per seed") {
    Dataset d = random_dataset(800, 2, 8);
    BigMeansConfig cfg = base_config(5, 120, 30);
    cfg.seed = 31337;

    auto [a, ta] = big_means(d, cfg);
    auto [b, tb] = big_means(d, cfg);
    CHECK(a.centroids == b.centroids);
    CHECK(a.assignment == b.assignment);
    CHECK(std::memcmp(&a.objective, &b.objective, sizeof(double)) == 0);
    CHECK(a.counter.distance_evals == b.counter.distance_evals);
    REQUIRE(ta.chunks() == tb.chunks());
    for (std::size_t i = 0; i < ta.records.size(); ++i)
        CHECK(ta.records[i].candidate_objective == tb.records[i].candidate_objective);
}

TEST_CASE("big_means is bitwise stable across worker counts") {
    Dataset d = random_dataset(3000, 2, 9);
    BigMeansConfig cfg = base_config(6, 500, 20);
    cfg.seed = 404;

    unsigned saved = worker_count();
    set_worker_count(1);
    auto [a, ta] = big_means(d, cfg);
    set_worker_count(4);
    auto [b, tb] = big_means(d, cfg);
    set_worker_count(saved);

    CHECK(a.centroids == b.centroids);
    CHECK(a.assignment == b.assignment);
    CHECK(std::memcmp(&a.objective, &b.objective, sizeof(double)) == 0);
}

TEST_CASE("whole-dataset single chunk equals plain kmeans bit for bit") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Dataset d = random_dataset(200 + 30 * seed, 2, 40 + seed);
        BigMeansConfig cfg;
        cfg.k = 4;
        cfg.chunk_size = d.m();
        cfg.max_chunks = 1;
        cfg.seed = 900 + seed;
        auto [bm, trace] = big_means(d, cfg);

        InitConfig init;
        init.seed = 900 + seed;
        ClusteringOutcome km = kmeans(d, 4, init, cfg.search);

        CHECK(bm.centroids == km.centroids);
        CHECK(bm.assignment == km.assignment);
        CHECK(std::memcmp(&bm.objective, &km.objective, sizeof(double)) == 0);
    }
}

TEST_CASE("chunk size hint stays within the valid range") {
    Dataset d = random_dataset(512, 2, 10);
    ChunkHintConfig cfg;
    cfg.seed = 5;
    std::size_t hint = choose_chunk_size_hint(d, 4, cfg);
    CHECK(hint >= 4);
    CHECK(hint <= 512);

    std::size_t again = choose_chunk_size_hint(d, 4, cfg);
    CHECK(hint == again);  // deterministic
}

TEST_CASE("chunk size hint respects a custom ladder") {
    Dataset d = random_dataset(256, 2, 11);
    ChunkHintConfig cfg;
    cfg.ladder = {32, 64, 128};
    cfg.seed = 21;
    std::size_t hint = choose_chunk_size_hint(d, 3, cfg);
    CHECK((hint == 32 || hint == 64 || hint == 128));
}
