#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "purifier/types.hpp"

namespace purifier {

enum class ScorerKind { Knn, Pca, Mahalanobis };

std::string to_string(ScorerKind kind);
ScorerKind scorer_kind_from_string(const std::string& name);

struct ScorerConfig {
    ScorerKind kind = ScorerKind::Knn;

    // Knn: neighbours averaged into the score. Must not exceed the fitted
    // set size.
    int knn_neighbors = 3;

    // Pca: fixed component count when > 0, otherwise the smallest rank
    // whose eigenvalues cover pca_variance of the total.
    int pca_components = 0;
    double pca_variance = 0.90;

    // Mahalanobis: ridge added to the covariance diagonal before inversion.
    double mahalanobis_ridge = 1e-6;

    std::uint64_t seed = 0;

    void validate() const;  // throws ConfigError
};

// Row-major matrix of feature vectors. Thin storage shared by the fitted
// states below; kept STL-only so the public surface does not leak the
// linear-algebra backend.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    double at(std::size_t r, std::size_t c) const {
        return values[r * cols + c];
    }
    std::span<const double> row(std::size_t r) const {
        return {values.data() + r * cols, cols};
    }
};

// An immutable trained sub-model: anomaly score g(x) plus a feature
// representation f(x) for the cross-model divergence diagnostic.
//
//   Knn          memorises the fitted vectors; score is the mean Euclidean
//                distance to the knn_neighbors nearest; representation is
//                the nearest memory vector.
//   Pca          mean + orthonormal basis of the dominant eigenvectors;
//                score is the residual norm after projection;
//                representation is the reconstruction.
//   Mahalanobis  mean + symmetric positive-definite whitener W = Sigma^-1/2;
//                score is ||W (x - mean)||; representation is the whitened
//                vector.
class FittedScorer {
public:
    struct KnnState {
        FeatureMatrix bank;
    };
    struct PcaState {
        std::vector<double> mean;
        FeatureMatrix basis;  // rank x dim, orthonormal rows
    };
    struct MahalanobisState {
        std::vector<double> mean;
        FeatureMatrix whitener;    // dim x dim, symmetric PD
        FeatureMatrix covariance;  // ridged covariance actually inverted
    };

    double score(std::span<const double> features) const;
    double score(const Sample& sample) const { return score(span_of(sample)); }

    // Elementwise equal to score(); order matches input order. Parallel
    // evaluation is bit-identical to serial (per-query independence, no
    // cross-query reductions).
    std::vector<double> score_batch(const Dataset& dataset,
                                    std::size_t threads = 1) const;
    std::vector<double> score_batch(std::span<const Sample> samples,
                                    std::size_t threads = 1) const;

    std::vector<double> representation(std::span<const double> features) const;
    std::vector<double> representation(const Sample& sample) const {
        return representation(span_of(sample));
    }

    const ScorerConfig& config() const noexcept { return config_; }
    ScorerKind kind() const noexcept { return config_.kind; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t fitted_size() const noexcept { return fitted_size_; }
    std::optional<std::size_t> train_subset_index() const noexcept {
        return train_subset_index_;
    }

    const KnnState& knn_state() const;
    const PcaState& pca_state() const;
    const MahalanobisState& mahalanobis_state() const;

private:
    // Only fit_scorer produces instances; an unfitted scorer is not a thing.
    FittedScorer() = default;
    friend FittedScorer fit_scorer(const ScorerConfig&, const FeatureMatrix&,
                                   std::optional<std::size_t>);

    static std::span<const double> span_of(const Sample& sample) {
        return {sample.features.data(), sample.features.size()};
    }

    ScorerConfig config_;
    std::size_t dim_ = 0;
    std::size_t fitted_size_ = 0;
    std::optional<std::size_t> train_subset_index_;
    std::variant<KnnState, PcaState, MahalanobisState> state_;
};

// Fits a scorer on the given samples. Labels are never read. Deterministic
// for a fixed config (including config.seed, reserved for stochastic kinds).
FittedScorer fit_scorer(const ScorerConfig& config,
                        std::span<const Sample> samples,
                        std::optional<std::size_t> subset_index = {});

// Fit on dataset rows selected by index, avoiding sample copies.
FittedScorer fit_scorer(const ScorerConfig& config, const Dataset& dataset,
                        std::span<const std::size_t> indices,
                        std::optional<std::size_t> subset_index = {});

// Core fitting path on a raw feature matrix.
FittedScorer fit_scorer(const ScorerConfig& config, const FeatureMatrix& x,
                        std::optional<std::size_t> subset_index = {});

}  // namespace purifier
