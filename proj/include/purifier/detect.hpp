#pragma once

#include <cstdint>
#include <vector>

#include "purifier/scorer.hpp"
#include "purifier/selection.hpp"
#include "purifier/types.hpp"

namespace purifier {

struct DetectionResult {
    std::vector<double> test_scores;  // aligned with the test dataset
    struct FinalModelSummary {
        ScorerKind kind = ScorerKind::Knn;
        std::size_t train_size = 0;
    } final_model;
    std::vector<std::int64_t> trainset_id_list;  // ids used for final fitting
};

// Stage 2: fit the final detector only on the retained samples and score the
// held-out test set. Passing the full training set as `pure` reproduces the
// no-purification baseline exactly.
DetectionResult run_stage2(const Dataset& train, const PurifiedSet& pure,
                           const Dataset& test, const ScorerConfig& config,
                           std::uint64_t seed, std::size_t threads = 1);

}  // namespace purifier
