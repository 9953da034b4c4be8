#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "bigmeans/metrics.hpp"

using namespace bigmeans;
using metrics::ScoreEntry;
using metrics::ScoreTable;

TEST_CASE("relative error is the signed percent gap") {
    CHECK(metrics::relative_error(110.0, 100.0) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(metrics::relative_error(95.0, 100.0) == doctest::Approx(-5.0).epsilon(1e-12));
    CHECK(metrics::relative_error(100.0, 100.0) == 0.0);
    CHECK_THROWS_AS(metrics::relative_error(1.0, 0.0), ConfigError);
    CHECK_THROWS_AS(metrics::relative_error(1.0, -2.0), ConfigError);
}

TEST_CASE("score ranks linearly between the extremes") {
    std::vector<double> all{2.0, 4.0, 8.0};
    CHECK(metrics::score(2.0, all) == 1.0);
    CHECK(metrics::score(8.0, all) == 0.0);
    CHECK(metrics::score(4.0, all) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("score handles ties and rejects foreign values") {
    std::vector<double> tied{3.0, 3.0, 3.0};
    CHECK(metrics::score(3.0, tied) == 1.0);  // everyone is best
    CHECK_THROWS_AS(metrics::score(5.0, tied), ConfigError);
    CHECK_THROWS_AS(metrics::score(1.0, {}), ConfigError);
}

TEST_CASE("aggregate_scores sums per algorithm and scales to percentages") {
    std::vector<ScoreEntry> entries{
        {"alpha", "d1", 1.0, 0.5},
        {"alpha", "d2", 0.8, 1.0},
        {"beta", "d1", 0.0, 1.0},
        {"beta", "d2", 0.2, 0.0},
    };
    ScoreTable t = metrics::aggregate_scores(entries);

    CHECK(t.max_possible == 2);
    CHECK(t.sum_accuracy.at("alpha") == doctest::Approx(1.8).epsilon(1e-12));
    CHECK(t.sum_cpu.at("alpha") == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(t.sum_mean.at("alpha") == doctest::Approx((1.5 + 1.8) / 2.0).epsilon(1e-12));
    CHECK(t.sum_accuracy.at("beta") == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(t.efficiency_accuracy_pct.at("alpha") == doctest::Approx(90.0).epsilon(1e-12));
    CHECK(t.efficiency_cpu_pct.at("alpha") == doctest::Approx(75.0).epsilon(1e-12));
    CHECK(t.algorithms == std::vector<std::string>{"alpha", "beta"});
    CHECK(t.datasets == std::vector<std::string>{"d1", "d2"});
}

TEST_CASE("aggregate_scores rejects malformed tables") {
    CHECK_THROWS_AS(metrics::aggregate_scores({}), ConfigError);

    std::vector<ScoreEntry> dup{
        {"a", "d1", 1.0, 1.0},
        {"a", "d1", 0.5, 0.5},
    };
    CHECK_THROWS_AS(metrics::aggregate_scores(dup), ConfigError);

    std::vector<ScoreEntry> missing{
        {"a", "d1", 1.0, 1.0},
        {"a", "d2", 1.0, 1.0},
        {"b", "d1", 0.0, 0.0},
    };
    CHECK_THROWS_AS(metrics::aggregate_scores(missing), ConfigError);

    std::vector<ScoreEntry> out_of_range{{"a", "d1", 1.5, 0.0}};
    CHECK_THROWS_AS(metrics::aggregate_scores(out_of_range), ConfigError);
}

TEST_CASE("summary csv keeps the stable column order") {
    metrics::RunSummary s;
    s.algorithm = "alpha";
    s.dataset = "d1";
    s.k = 3;
    s.n_exec = 2;
    s.e_min = 0.5;
    s.e_mean = 1.0;
    s.e_max = 1.5;
    s.cpu_min = 0.1;
    s.cpu_mean = 0.2;
    s.cpu_max = 0.3;
    s.nd_mean = 1000.0;
    s.f_best_used = 42.0;

    ScoreTable t = metrics::aggregate_scores({{"alpha", "d1", 1.0, 1.0}});
    std::string csv = metrics::summaries_to_csv({s}, t);
    CHECK(csv.rfind("algorithm,dataset,k,e_min,e_mean,e_max,cpu_min,cpu_mean,cpu_max,n_d,"
                    "score_accuracy,score_cpu\n",
                    0) == 0);
    CHECK(csv.find("alpha,d1,3,0.5,1,1.5,") != std::string::npos);

    std::string score_csv = metrics::score_table_to_csv(t);
    CHECK(score_csv.rfind("algorithm,sum_score_accuracy,sum_score_cpu,sum_mean_score,"
                          "efficiency_accuracy_pct,efficiency_cpu_pct\n",
                          0) == 0);
}

TEST_CASE("csv values survive a 17 digit round trip") {
    metrics::RunSummary s;
    s.algorithm = "a";
    s.dataset = "d";
    s.k = 1;
    s.n_exec = 1;
    s.e_mean = 0.1 + 0.2;  // not representable exactly; must round-trip bitwise
    ScoreTable t = metrics::aggregate_scores({{"a", "d", 1.0, 1.0}});
    std::string csv = metrics::summaries_to_csv({s}, t);
    std::size_t pos = csv.find("0.30000000000000004");
    CHECK(pos != std::string::npos);
}
