#pragma once

#include <cstdint>
#include <vector>

#include "purifier/partition.hpp"
#include "purifier/scorer.hpp"
#include "purifier/selection.hpp"
#include "purifier/types.hpp"

namespace purifier {

// N x k matrix of per-sub-model anomaly scores: rows follow training-set
// order, column j holds the scores of the sub-model fitted on subset j.
class ScoreMatrix {
public:
    ScoreMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    double at(std::size_t i, std::size_t j) const {
        return values_[i * cols_ + j];
    }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::vector<double> column(std::size_t j) const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> values_;  // row-major
};

struct Stage1Options {
    std::size_t k = 5;
    double t = 0.40;
    ScorerConfig scorer{};
    std::uint64_t master_seed = 0;

    // Experimental consensus variants, both off by default: the aggregation
    // is a plain mean over all k sub-models, own subset included.
    bool leave_own_subset_out = false;
    bool zscore_columns = false;

    std::size_t threads = 1;
};

struct Stage1Result {
    PartitionPlan plan;
    ScoreMatrix matrix;
    ConsensusScores consensus;
    PurifiedSet pure;
    // Purification driven by a single column each, same t; supports the
    // consensus-vs-sub-model retained-count comparison.
    std::vector<PurifiedSet> per_model_pure;
};

// Fits one scorer per subset, each only on its own samples, with derived
// seed mix(plan.seed, j). Result order follows subset index. Sub-models may
// fit concurrently; results are identical to serial execution.
std::vector<FittedScorer> train_submodels(const Dataset& dataset,
                                          const PartitionPlan& plan,
                                          const ScorerConfig& config,
                                          std::size_t threads = 1);

// values[i][j] = submodels[j].score(dataset[i]). Native-subset scores are
// included; nothing is masked.
ScoreMatrix build_score_matrix(const std::vector<FittedScorer>& submodels,
                               const Dataset& dataset,
                               std::size_t threads = 1);

// Arithmetic mean of each row, summed in fixed column order.
ConsensusScores consensus(const ScoreMatrix& matrix);

// Variant with the experimental flags. leave_own_subset_out requires a plan
// consistent with the matrix and k >= 2; zscore_columns standardises each
// column (population moments; constant columns map to zero) before the mean.
ConsensusScores consensus(const ScoreMatrix& matrix, const PartitionPlan& plan,
                          bool leave_own_subset_out, bool zscore_columns);

// Mean Euclidean distance between the sample's representation under its
// native sub-model and under every other sub-model. Diagnostic only: never
// an input to purification.
double cross_model_divergence(const std::vector<FittedScorer>& submodels,
                              const PartitionPlan& plan, const Dataset& dataset,
                              std::size_t sample_index);

// Stage 1 end to end: partition -> train sub-models -> score matrix ->
// consensus -> quantile purification, plus per-column purifications.
// Fully deterministic given options.master_seed, regardless of threads.
Stage1Result run_stage1(const Dataset& dataset, const Stage1Options& options);

}  // namespace purifier
