#include "purifier/screening.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "purifier/error.hpp"
#include "purifier/parallel.hpp"
#include "purifier/rng.hpp"

namespace purifier {

ScoreMatrix::ScoreMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (rows_ == 0 || cols_ == 0 || values_.size() != rows_ * cols_) {
        throw InvalidDataset("score matrix shape does not match its storage");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw InvalidDataset("score matrix contains a non-finite value");
        }
    }
}

std::vector<double> ScoreMatrix::column(std::size_t j) const {
    std::vector<double> col(rows_);
    for (std::size_t i = 0; i < rows_; ++i) col[i] = at(i, j);
    return col;
}

std::vector<FittedScorer> train_submodels(const Dataset& dataset,
                                          const PartitionPlan& plan,
                                          const ScorerConfig& config,
                                          std::size_t threads) {
    const auto groups = subset_indices(plan, dataset.size());
    const std::size_t k = plan.k;

    // Surface undersized subsets before spawning workers so the error names
    // the subset deterministically.
    for (std::size_t j = 0; j < k; ++j) {
        std::size_t min_size = 1;
        if (config.kind == ScorerKind::Knn) {
            min_size = static_cast<std::size_t>(config.knn_neighbors);
        } else {
            min_size = 2;
        }
        if (groups[j].size() < min_size) {
            throw FitError("subset " + std::to_string(j) + " has " +
                           std::to_string(groups[j].size()) +
                           " samples, fewer than the scorer minimum of " +
                           std::to_string(min_size));
        }
    }

    std::vector<std::optional<FittedScorer>> fitted(k);
    parallel_for(k, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
            ScorerConfig derived = config;
            derived.seed = rng::mix(plan.seed, j);
            fitted[j] = fit_scorer(derived, dataset, groups[j], j);
        }
    });
    std::vector<FittedScorer> submodels;
    submodels.reserve(k);
    for (auto& f : fitted) submodels.push_back(std::move(*f));
    return submodels;
}

ScoreMatrix build_score_matrix(const std::vector<FittedScorer>& submodels,
                               const Dataset& dataset, std::size_t threads) {
    if (submodels.empty()) {
        throw EmptyInput("score matrix needs at least one sub-model");
    }
    const std::size_t n = dataset.size();
    const std::size_t k = submodels.size();
    for (const auto& sub : submodels) {
        if (sub.dim() != dataset.dim()) {
            throw DimensionError("sub-model dimension " +
                                 std::to_string(sub.dim()) +
                                 " does not match dataset dimension " +
                                 std::to_string(dataset.dim()));
        }
    }

    std::vector<double> values(n * k);
    parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                values[i * k + j] = submodels[j].score(dataset[i]);
            }
        }
    });
    return ScoreMatrix(n, k, std::move(values));
}

ConsensusScores consensus(const ScoreMatrix& matrix) {
    const std::size_t n = matrix.rows();
    const std::size_t k = matrix.cols();
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j) sum += matrix.at(i, j);
        scores[i] = sum / static_cast<double>(k);
    }
    return ConsensusScores(std::move(scores));
}

ConsensusScores consensus(const ScoreMatrix& matrix, const PartitionPlan& plan,
                          bool leave_own_subset_out, bool zscore_columns) {
    if (!leave_own_subset_out && !zscore_columns) return consensus(matrix);

    const std::size_t n = matrix.rows();
    const std::size_t k = matrix.cols();
    if (plan.k != k || plan.assignment.size() != n) {
        throw AlignmentError("partition plan does not match the score matrix");
    }
    if (leave_own_subset_out && k < 2) {
        throw ConfigError("leave_own_subset_out requires k >= 2");
    }

    // Column-wise population z-scores; constant columns map to zero.
    std::vector<double> mean(k, 0.0), stddev(k, 0.0);
    if (zscore_columns) {
        for (std::size_t j = 0; j < k; ++j) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) sum += matrix.at(i, j);
            mean[j] = sum / static_cast<double>(n);
            double ss = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = matrix.at(i, j) - mean[j];
                ss += d * d;
            }
            stddev[j] = std::sqrt(ss / static_cast<double>(n));
        }
    }
    auto cell = [&](std::size_t i, std::size_t j) {
        if (!zscore_columns) return matrix.at(i, j);
        if (stddev[j] == 0.0) return 0.0;
        return (matrix.at(i, j) - mean[j]) / stddev[j];
    };

    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t j = 0; j < k; ++j) {
            if (leave_own_subset_out && plan.assignment[i] == j) continue;
            sum += cell(i, j);
            ++count;
        }
        scores[i] = sum / static_cast<double>(count);
    }
    return ConsensusScores(std::move(scores));
}

double cross_model_divergence(const std::vector<FittedScorer>& submodels,
                              const PartitionPlan& plan, const Dataset& dataset,
                              std::size_t sample_index) {
    const std::size_t k = submodels.size();
    if (k < 2) {
        throw DivergenceUndefined(
            "cross-model divergence requires at least two sub-models");
    }
    if (plan.k != k || plan.assignment.size() != dataset.size()) {
        throw AlignmentError("partition plan does not match the sub-models");
    }
    if (sample_index >= dataset.size()) {
        throw AlignmentError("sample index " + std::to_string(sample_index) +
                             " out of range");
    }

    const Sample& x = dataset[sample_index];
    const std::size_t native = plan.assignment[sample_index];
    const std::vector<double> native_repr =
        submodels[native].representation(x);

    double sum = 0.0;
    for (std::size_t l = 0; l < k; ++l) {
        if (l == native) continue;
        const std::vector<double> other = submodels[l].representation(x);
        double d2 = 0.0;
        for (std::size_t c = 0; c < native_repr.size(); ++c) {
            const double diff = native_repr[c] - other[c];
            d2 += diff * diff;
        }
        sum += std::sqrt(d2);
    }
    return sum / static_cast<double>(k - 1);
}

Stage1Result run_stage1(const Dataset& dataset, const Stage1Options& options) {
    PartitionPlan plan =
        partition_dataset(dataset, options.k, options.master_seed);
    std::vector<FittedScorer> submodels =
        train_submodels(dataset, plan, options.scorer, options.threads);
    ScoreMatrix matrix =
        build_score_matrix(submodels, dataset, options.threads);
    ConsensusScores scores =
        consensus(matrix, plan, options.leave_own_subset_out,
                  options.zscore_columns);
    PurifiedSet pure = select_pure(dataset, scores, options.t);

    std::vector<PurifiedSet> per_model;
    per_model.reserve(options.k);
    for (std::size_t j = 0; j < options.k; ++j) {
        per_model.push_back(select_pure(
            dataset, ConsensusScores(matrix.column(j)), options.t));
    }

    return Stage1Result{std::move(plan), std::move(matrix), std::move(scores),
                        std::move(pure), std::move(per_model)};
}

}  // namespace purifier
