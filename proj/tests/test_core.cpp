#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oracles.hpp"
#include "purifier/error.hpp"
#include "purifier/partition.hpp"
#include "purifier/selection.hpp"

using namespace purifier;

namespace {

Dataset dataset_of_size(std::size_t n) {
    std::vector<std::vector<double>> features(n, std::vector<double>{0.0});
    for (std::size_t i = 0; i < n; ++i) features[i][0] = static_cast<double>(i);
    return oracles::make_dataset(features);
}

}  // namespace

TEST_CASE("partition: k=1 puts everything in subset 0") {
    const Dataset data = dataset_of_size(10);
    for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 99999ULL}) {
        const PartitionPlan plan = partition_dataset(data, 1, seed);
        for (auto a : plan.assignment) CHECK(a == 0);
    }
}

TEST_CASE("partition: N=10 k=3 balances to {4,3,3}") {
    const Dataset data = dataset_of_size(10);
    const PartitionPlan plan = partition_dataset(data, 3, 42);
    auto groups = subset_indices(plan, 10);
    std::multiset<std::size_t> sizes;
    for (const auto& g : groups) sizes.insert(g.size());
    CHECK(sizes == std::multiset<std::size_t>{3, 3, 4});
}

TEST_CASE("partition: deterministic per seed, varies across seeds") {
    const Dataset data = dataset_of_size(6);
    const PartitionPlan base = partition_dataset(data, 3, 7);
    CHECK(partition_dataset(data, 3, 7).assignment == base.assignment);
    CHECK(partition_dataset(data, 3, 8).assignment != base.assignment);

    std::size_t differing = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        if (partition_dataset(data, 3, seed).assignment != base.assignment) {
            ++differing;
        }
    }
    // P(collision with a fixed balanced assignment) = 1/90 per seed.
    CHECK(differing >= 90);
}

TEST_CASE("partition: rejects k=0 and k>N") {
    const Dataset data = dataset_of_size(10);
    CHECK_THROWS_AS(partition_dataset(data, 0, 1), InvalidPartition);
    CHECK_THROWS_AS(partition_dataset(data, 11, 1), InvalidPartition);
}

TEST_CASE("partition property: exact cover with balanced sizes") {
    std::mt19937_64 eng(1234);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + eng() % 300;
        const std::size_t k = 1 + eng() % n;
        const PartitionPlan plan = partition_dataset(dataset_of_size(n), k, eng());
        REQUIRE(plan.assignment.size() == n);
        std::vector<std::size_t> counts(k, 0);
        for (auto a : plan.assignment) {
            REQUIRE(a < k);
            ++counts[a];
        }
        const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
        CHECK(*lo >= 1);
        CHECK(*hi - *lo <= 1);
    }
}

TEST_CASE("compute_threshold: spec examples") {
    std::vector<double> ladder;
    for (int i = 1; i <= 10; ++i) ladder.push_back(i / 10.0);
    // Oracle: m = floor(0.4 * 10) = 4, fourth smallest.
    CHECK(oracles::sort_quantile(ladder, 0.40) == 0.4);
    CHECK(compute_threshold(ConsensusScores(ladder), 0.40) == 0.4);

    const ConsensusScores constant(std::vector<double>(7, 3.25));
    for (double t : {0.01, 0.4, 0.99, 1.0}) {
        CHECK(compute_threshold(constant, t) == 3.25);
    }

    CHECK(compute_threshold(ConsensusScores({5.5}), 1.0) == 5.5);
}

TEST_CASE("compute_threshold: domain errors") {
    const ConsensusScores scores({1.0, 2.0});
    CHECK_THROWS_AS(compute_threshold(scores, 0.0), InvalidQuantile);
    CHECK_THROWS_AS(compute_threshold(scores, -0.2), InvalidQuantile);
    CHECK_THROWS_AS(compute_threshold(scores, 1.0001), InvalidQuantile);
    CHECK_THROWS_AS(ConsensusScores(std::vector<double>{}), EmptyInput);
}

TEST_CASE("compute_threshold matches the sort oracle on 1000 instances") {
    std::mt19937_64 eng(20240601);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + eng() % 200;
        std::vector<double> scores(n);
        const bool heavy_ties = trial % 2 == 0;
        for (double& s : scores) {
            s = heavy_ties ? static_cast<double>(eng() % 5) : unit(eng);
        }
        const double t = std::clamp(unit(eng), 1e-9, 1.0);
        CHECK(compute_threshold(ConsensusScores(scores), t) ==
              oracles::sort_quantile(scores, t));
    }
}

TEST_CASE("select_pure: lowest scores win, ids ascending") {
    std::mt19937_64 eng(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> scores(10);
    for (double& s : scores) s = unit(eng);
    const Dataset data = dataset_of_size(10);
    const PurifiedSet pure = select_pure(data, ConsensusScores(scores), 0.4);

    std::vector<std::int64_t> ids;
    for (const auto& s : data.samples()) ids.push_back(s.id);
    CHECK(pure.retained_ids == oracles::sort_select(scores, ids, 0.4));
    CHECK(pure.retained_ids.size() == 4);
    CHECK(std::is_sorted(pure.retained_ids.begin(), pure.retained_ids.end()));
}

TEST_CASE("select_pure: t=1 retains everything, tau is the max") {
    const Dataset data = dataset_of_size(5);
    const ConsensusScores scores({0.5, 0.1, 0.9, 0.3, 0.7});
    const PurifiedSet pure = select_pure(data, scores, 1.0);
    CHECK(pure.retained_ids == std::vector<std::int64_t>{0, 1, 2, 3, 4});
    CHECK(pure.tau == 0.9);
}

TEST_CASE("select_pure: ties break toward low ids") {
    const Dataset data = dataset_of_size(5);
    const ConsensusScores scores(std::vector<double>(5, 2.0));
    const PurifiedSet pure = select_pure(data, scores, 0.4);
    CHECK(pure.retained_ids == std::vector<std::int64_t>{0, 1});
    CHECK(pure.tau == 2.0);
}

TEST_CASE("select_pure: alignment error on length mismatch") {
    const Dataset data = dataset_of_size(4);
    CHECK_THROWS_AS(select_pure(data, ConsensusScores({1.0, 2.0}), 0.5),
                    AlignmentError);
}

TEST_CASE("select_pure property: exact count, threshold split, monotone in t") {
    std::mt19937_64 eng(777);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + eng() % 120;
        std::vector<double> scores(n);
        for (double& s : scores) {
            s = trial % 3 == 0 ? static_cast<double>(eng() % 3) : unit(eng);
        }
        const Dataset data = dataset_of_size(n);
        const double t1 = std::clamp(unit(eng), 1e-9, 1.0);
        const double t2 = std::clamp(t1 + unit(eng) * (1.0 - t1), t1, 1.0);

        const PurifiedSet p1 = select_pure(data, ConsensusScores(scores), t1);
        const PurifiedSet p2 = select_pure(data, ConsensusScores(scores), t2);

        const auto expected = static_cast<std::size_t>(std::max(
            1.0, std::floor(t1 * static_cast<double>(n))));
        CHECK(p1.retained_ids.size() == expected);
        CHECK(std::includes(p2.retained_ids.begin(), p2.retained_ids.end(),
                            p1.retained_ids.begin(), p1.retained_ids.end()));

        std::set<std::int64_t> retained(p1.retained_ids.begin(),
                                        p1.retained_ids.end());
        for (std::size_t i = 0; i < n; ++i) {
            if (retained.contains(static_cast<std::int64_t>(i))) {
                CHECK(scores[i] <= p1.tau);
            } else {
                CHECK(scores[i] >= p1.tau);
            }
        }
    }
}

TEST_CASE("partition and selection are bit-reproducible") {
    const Dataset data = dataset_of_size(64);
    const PartitionPlan a = partition_dataset(data, 5, 31337);
    const PartitionPlan b = partition_dataset(data, 5, 31337);
    CHECK(a.assignment == b.assignment);

    std::mt19937_64 eng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> scores(64);
    for (double& s : scores) s = unit(eng);
    const PurifiedSet p1 = select_pure(data, ConsensusScores(scores), 0.4);
    const PurifiedSet p2 = select_pure(data, ConsensusScores(scores), 0.4);
    CHECK(p1.retained_ids == p2.retained_ids);
    CHECK(p1.tau == p2.tau);
}
