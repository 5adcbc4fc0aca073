#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "purifier/datagen.hpp"
#include "purifier/detect.hpp"
#include "purifier/error.hpp"
#include "purifier/metrics.hpp"
#include "purifier/screening.hpp"

using namespace purifier;

namespace {

ScorerConfig knn_config(int neighbors = 3) {
    ScorerConfig c;
    c.kind = ScorerKind::Knn;
    c.knn_neighbors = neighbors;
    return c;
}

PurifiedSet full_retention(const Dataset& train) {
    PurifiedSet pure;
    pure.t = 1.0;
    for (const Sample& s : train.samples()) pure.retained_ids.push_back(s.id);
    return pure;
}

}  // namespace

TEST_CASE("stage 2 on the full training set equals the raw baseline") {
    std::mt19937_64 eng(71);
    const Dataset train =
        oracles::make_dataset(oracles::random_features(eng, 50, 3));
    const Dataset test = oracles::make_dataset(
        oracles::random_features(eng, 20, 3, 2.0), DatasetRole::Test);

    const DetectionResult via_pure =
        run_stage2(train, full_retention(train), test, knn_config(2), 9);

    std::vector<std::size_t> all(train.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    ScorerConfig config = knn_config(2);
    config.seed = 9;
    const FittedScorer raw = fit_scorer(config, train, all);
    CHECK(via_pure.test_scores == raw.score_batch(test));
    CHECK(via_pure.final_model.train_size == 50);
}

TEST_CASE("stage 2: retained test twin scores zero under knn-1") {
    const Dataset train =
        oracles::make_dataset({{0.0, 0.0}, {1.0, 1.0}, {5.0, 5.0}});
    PurifiedSet pure;
    pure.t = 0.5;
    pure.retained_ids = {0, 1};
    const Dataset test =
        oracles::make_dataset({{1.0, 1.0}}, DatasetRole::Test);
    const DetectionResult result =
        run_stage2(train, pure, test, knn_config(1), 0);
    CHECK(result.test_scores == std::vector<double>{0.0});
    CHECK(result.trainset_id_list == std::vector<std::int64_t>{0, 1});
}

TEST_CASE("stage 2 error paths") {
    const Dataset train = oracles::make_dataset({{0.0, 0.0}, {1.0, 1.0}});
    const Dataset test = oracles::make_dataset({{0.5, 0.5}}, DatasetRole::Test);

    CHECK_THROWS_AS(run_stage2(train, PurifiedSet{}, test, knn_config(1), 0),
                    FitError);

    PurifiedSet foreign;
    foreign.retained_ids = {0, 7};
    CHECK_THROWS_AS(run_stage2(train, foreign, test, knn_config(1), 0),
                    AlignmentError);

    const Dataset bad_test = oracles::make_dataset({{1.0}}, DatasetRole::Test);
    CHECK_THROWS_AS(
        run_stage2(train, full_retention(train), bad_test, knn_config(1), 0),
        DimensionError);
}

TEST_CASE("clean data with t=1 makes stage 2 identical to a plain detector") {
    SyntheticConfig syn;
    syn.alpha = 0.0;
    syn.n_train = 120;
    syn.n_test_normal = 60;
    syn.n_test_anomalous = 60;
    syn.seed = 404;
    const GeneratedData data = generate(syn);

    Stage1Options options;
    options.k = 5;
    options.t = 1.0;
    options.scorer = knn_config();
    options.master_seed = 404;
    const Stage1Result stage1 = run_stage1(data.train, options);
    const DetectionResult purified =
        run_stage2(data.train, stage1.pure, data.test, knn_config(), 404);

    std::vector<std::size_t> all(data.train.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    ScorerConfig config = knn_config();
    config.seed = 404;
    const FittedScorer plain = fit_scorer(config, data.train, all);
    CHECK(purified.test_scores == plain.score_batch(data.test));
}

TEST_CASE("purified training beats raw training on contaminated data (smoke)") {
    double delta_sum = 0.0;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        SyntheticConfig syn;
        syn.alpha = 0.2;
        syn.seed = seed;
        const GeneratedData data = generate(syn);

        Stage1Options options;
        options.scorer = knn_config();
        options.master_seed = seed;
        const Stage1Result stage1 = run_stage1(data.train, options);

        std::vector<Label> labels;
        for (const Sample& s : data.test.samples()) labels.push_back(s.label);

        const DetectionResult purified =
            run_stage2(data.train, stage1.pure, data.test, knn_config(), seed);
        const DetectionResult raw = run_stage2(
            data.train, full_retention(data.train), data.test, knn_config(), seed);
        delta_sum += auroc(labels, purified.test_scores) -
                     auroc(labels, raw.test_scores);
    }
    CHECK(delta_sum / 3.0 >= 0.0);
}
