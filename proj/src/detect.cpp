#include "purifier/detect.hpp"

#include <string>

#include "purifier/error.hpp"

namespace purifier {

DetectionResult run_stage2(const Dataset& train, const PurifiedSet& pure,
                           const Dataset& test, const ScorerConfig& config,
                           std::uint64_t seed, std::size_t threads) {
    if (pure.retained_ids.empty()) {
        throw FitError("purified set is empty; nothing to fit the detector on");
    }
    if (test.dim() != train.dim()) {
        throw DimensionError("test dimension " + std::to_string(test.dim()) +
                             " does not match train dimension " +
                             std::to_string(train.dim()));
    }

    std::vector<std::size_t> indices;
    indices.reserve(pure.retained_ids.size());
    for (std::int64_t id : pure.retained_ids) {
        indices.push_back(train.index_of(id));  // AlignmentError if missing
    }

    ScorerConfig final_config = config;
    final_config.seed = seed;
    FittedScorer final_model =
        fit_scorer(final_config, train, indices, std::nullopt);

    DetectionResult result;
    result.test_scores = final_model.score_batch(test, threads);
    result.final_model.kind = final_config.kind;
    result.final_model.train_size = indices.size();
    result.trainset_id_list = pure.retained_ids;
    return result;
}

}  // namespace purifier
