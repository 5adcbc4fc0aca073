#include "purifier/scorer.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "purifier/error.hpp"
#include "purifier/parallel.hpp"

namespace purifier {

std::string to_string(ScorerKind kind) {
    switch (kind) {
        case ScorerKind::Knn: return "knn";
        case ScorerKind::Pca: return "pca";
        case ScorerKind::Mahalanobis: return "mahalanobis";
    }
    return "unknown";
}

ScorerKind scorer_kind_from_string(const std::string& name) {
    if (name == "knn") return ScorerKind::Knn;
    if (name == "pca") return ScorerKind::Pca;
    if (name == "mahalanobis") return ScorerKind::Mahalanobis;
    throw ConfigError("unknown scorer kind '" + name +
                      "' (expected knn, pca or mahalanobis)");
}

void ScorerConfig::validate() const {
    if (knn_neighbors < 1) {
        throw ConfigError("knn_neighbors must be >= 1, got " +
                          std::to_string(knn_neighbors));
    }
    if (pca_components < 0) {
        throw ConfigError("pca_components must be >= 0 (0 = variance rule)");
    }
    if (!(pca_variance > 0.0 && pca_variance <= 1.0)) {
        throw ConfigError("pca_variance must lie in (0, 1], got " +
                          std::to_string(pca_variance));
    }
    if (mahalanobis_ridge < 0.0) {
        throw ConfigError("mahalanobis_ridge must be non-negative");
    }
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd to_eigen(const FeatureMatrix& x) {
    MatrixXd m(x.rows, x.cols);
    for (std::size_t r = 0; r < x.rows; ++r)
        for (std::size_t c = 0; c < x.cols; ++c) m(r, c) = x.at(r, c);
    return m;
}

FeatureMatrix from_eigen(const MatrixXd& m) {
    FeatureMatrix x;
    x.rows = static_cast<std::size_t>(m.rows());
    x.cols = static_cast<std::size_t>(m.cols());
    x.values.resize(x.rows * x.cols);
    for (std::size_t r = 0; r < x.rows; ++r)
        for (std::size_t c = 0; c < x.cols; ++c)
            x.values[r * x.cols + c] = m(static_cast<Eigen::Index>(r),
                                         static_cast<Eigen::Index>(c));
    return x;
}

// Largest-magnitude entry of each row made positive (lowest index wins
// ties); removes the eigenvector sign ambiguity.
void apply_sign_convention(MatrixXd& basis) {
    for (Eigen::Index r = 0; r < basis.rows(); ++r) {
        Eigen::Index best = 0;
        double best_abs = -1.0;
        for (Eigen::Index c = 0; c < basis.cols(); ++c) {
            const double a = std::abs(basis(r, c));
            if (a > best_abs) {
                best_abs = a;
                best = c;
            }
        }
        if (basis(r, best) < 0.0) basis.row(r) = -basis.row(r);
    }
}

FittedScorer::KnnState fit_knn(const ScorerConfig& config,
                               const FeatureMatrix& x) {
    if (x.rows < static_cast<std::size_t>(config.knn_neighbors)) {
        throw FitError("knn requires at least knn_neighbors=" +
                       std::to_string(config.knn_neighbors) +
                       " samples, got " + std::to_string(x.rows));
    }
    return FittedScorer::KnnState{x};
}

FittedScorer::PcaState fit_pca(const ScorerConfig& config,
                               const FeatureMatrix& x) {
    if (x.rows < 2) {
        throw FitError("pca requires at least 2 samples, got " +
                       std::to_string(x.rows));
    }
    const auto d = static_cast<Eigen::Index>(x.cols);
    if (config.pca_components > 0 &&
        config.pca_components > static_cast<int>(x.cols)) {
        throw FitError("pca_components=" + std::to_string(config.pca_components) +
                       " exceeds feature dimension " + std::to_string(x.cols));
    }

    MatrixXd data = to_eigen(x);
    VectorXd mean = data.colwise().mean();
    MatrixXd centered = data.rowwise() - mean.transpose();
    MatrixXd cov = centered.transpose() * centered /
                   static_cast<double>(x.rows - 1);

    Eigen::SelfAdjointEigenSolver<MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) {
        throw FitError("pca eigendecomposition failed to converge");
    }
    VectorXd eigenvalues = solver.eigenvalues().cwiseMax(0.0);  // ascending

    Eigen::Index rank;
    if (config.pca_components > 0) {
        rank = config.pca_components;
    } else {
        const double total = eigenvalues.sum();
        rank = 1;
        if (total > 0.0) {
            double covered = 0.0;
            for (Eigen::Index r = 0; r < d; ++r) {
                covered += eigenvalues(d - 1 - r);
                rank = r + 1;
                if (covered >= config.pca_variance * total) break;
            }
        }
    }

    MatrixXd basis(rank, d);
    for (Eigen::Index r = 0; r < rank; ++r) {
        basis.row(r) = solver.eigenvectors().col(d - 1 - r).transpose();
    }
    apply_sign_convention(basis);

    FittedScorer::PcaState state;
    state.mean.assign(mean.data(), mean.data() + d);
    state.basis = from_eigen(basis);
    return state;
}

FittedScorer::MahalanobisState fit_mahalanobis(const ScorerConfig& config,
                                               const FeatureMatrix& x) {
    if (x.rows < 2) {
        throw FitError("mahalanobis requires at least 2 samples, got " +
                       std::to_string(x.rows));
    }
    const auto d = static_cast<Eigen::Index>(x.cols);

    MatrixXd data = to_eigen(x);
    VectorXd mean = data.colwise().mean();
    MatrixXd centered = data.rowwise() - mean.transpose();
    // Gaussian maximum-likelihood covariance (1/n), then ridge.
    MatrixXd cov = centered.transpose() * centered /
                   static_cast<double>(x.rows);
    cov.diagonal().array() += config.mahalanobis_ridge;

    Eigen::SelfAdjointEigenSolver<MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) {
        throw FitError("mahalanobis eigendecomposition failed to converge");
    }
    const VectorXd& eigenvalues = solver.eigenvalues();
    const double pd_floor = eigenvalues.maxCoeff() * 1e-14;
    if (eigenvalues.minCoeff() <= pd_floor) {
        throw FitError(
            "covariance is rank-deficient; increase mahalanobis_ridge");
    }

    MatrixXd whitener = solver.eigenvectors() *
                        eigenvalues.cwiseSqrt().cwiseInverse().asDiagonal() *
                        solver.eigenvectors().transpose();
    whitener = ((whitener + whitener.transpose()) * 0.5).eval();

    FittedScorer::MahalanobisState state;
    state.mean.assign(mean.data(), mean.data() + d);
    state.whitener = from_eigen(whitener);
    state.covariance = from_eigen(cov);
    return state;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        const double diff = a[c] - b[c];
        s += diff * diff;
    }
    return s;
}

}  // namespace

FittedScorer fit_scorer(const ScorerConfig& config, const FeatureMatrix& x,
                        std::optional<std::size_t> subset_index) {
    config.validate();
    if (x.rows == 0 || x.cols == 0) {
        throw FitError("fit requires a non-empty sample set");
    }
    FittedScorer fitted;
    fitted.config_ = config;
    fitted.dim_ = x.cols;
    fitted.fitted_size_ = x.rows;
    fitted.train_subset_index_ = subset_index;
    switch (config.kind) {
        case ScorerKind::Knn:
            fitted.state_ = fit_knn(config, x);
            break;
        case ScorerKind::Pca:
            fitted.state_ = fit_pca(config, x);
            break;
        case ScorerKind::Mahalanobis:
            fitted.state_ = fit_mahalanobis(config, x);
            break;
    }
    return fitted;
}

FittedScorer fit_scorer(const ScorerConfig& config,
                        std::span<const Sample> samples,
                        std::optional<std::size_t> subset_index) {
    if (samples.empty()) {
        throw FitError("fit requires a non-empty sample set");
    }
    FeatureMatrix x;
    x.rows = samples.size();
    x.cols = samples[0].features.size();
    x.values.reserve(x.rows * x.cols);
    for (const Sample& s : samples) {
        if (s.features.size() != x.cols) {
            throw DimensionError("samples disagree on feature dimension");
        }
        x.values.insert(x.values.end(), s.features.begin(), s.features.end());
    }
    return fit_scorer(config, x, subset_index);
}

FittedScorer fit_scorer(const ScorerConfig& config, const Dataset& dataset,
                        std::span<const std::size_t> indices,
                        std::optional<std::size_t> subset_index) {
    if (indices.empty()) {
        throw FitError("fit requires a non-empty sample set");
    }
    FeatureMatrix x;
    x.rows = indices.size();
    x.cols = dataset.dim();
    x.values.reserve(x.rows * x.cols);
    for (std::size_t i : indices) {
        const auto& f = dataset[i].features;
        x.values.insert(x.values.end(), f.begin(), f.end());
    }
    return fit_scorer(config, x, subset_index);
}

double FittedScorer::score(std::span<const double> features) const {
    if (features.size() != dim_) {
        throw DimensionError("query has dimension " +
                             std::to_string(features.size()) + ", expected " +
                             std::to_string(dim_));
    }
    if (const auto* knn = std::get_if<KnnState>(&state_)) {
        const std::size_t n = knn->bank.rows;
        const auto kn = static_cast<std::size_t>(config_.knn_neighbors);
        std::vector<double> d2(n);
        for (std::size_t r = 0; r < n; ++r) {
            d2[r] = squared_distance(features, knn->bank.row(r));
        }
        std::nth_element(d2.begin(), d2.begin() + (kn - 1), d2.end());
        std::sort(d2.begin(), d2.begin() + kn);
        double sum = 0.0;
        for (std::size_t r = 0; r < kn; ++r) sum += std::sqrt(d2[r]);
        return sum / static_cast<double>(kn);
    }
    if (const auto* pca = std::get_if<PcaState>(&state_)) {
        const std::size_t rank = pca->basis.rows;
        std::vector<double> centered(dim_);
        for (std::size_t c = 0; c < dim_; ++c)
            centered[c] = features[c] - pca->mean[c];
        std::vector<double> recon(dim_, 0.0);
        for (std::size_t r = 0; r < rank; ++r) {
            const auto row = pca->basis.row(r);
            double coeff = 0.0;
            for (std::size_t c = 0; c < dim_; ++c) coeff += row[c] * centered[c];
            for (std::size_t c = 0; c < dim_; ++c) recon[c] += coeff * row[c];
        }
        double s = 0.0;
        for (std::size_t c = 0; c < dim_; ++c) {
            const double resid = centered[c] - recon[c];
            s += resid * resid;
        }
        return std::sqrt(s);
    }
    const auto& mahal = std::get<MahalanobisState>(state_);
    double s = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
        const auto row = mahal.whitener.row(r);
        double w = 0.0;
        for (std::size_t c = 0; c < dim_; ++c)
            w += row[c] * (features[c] - mahal.mean[c]);
        s += w * w;
    }
    return std::sqrt(s);
}

std::vector<double> FittedScorer::representation(
    std::span<const double> features) const {
    if (features.size() != dim_) {
        throw DimensionError("query has dimension " +
                             std::to_string(features.size()) + ", expected " +
                             std::to_string(dim_));
    }
    if (const auto* knn = std::get_if<KnnState>(&state_)) {
        std::size_t best = 0;
        double best_d2 = squared_distance(features, knn->bank.row(0));
        for (std::size_t r = 1; r < knn->bank.rows; ++r) {
            const double d2 = squared_distance(features, knn->bank.row(r));
            if (d2 < best_d2) {
                best_d2 = d2;
                best = r;
            }
        }
        const auto row = knn->bank.row(best);
        return {row.begin(), row.end()};
    }
    if (const auto* pca = std::get_if<PcaState>(&state_)) {
        const std::size_t rank = pca->basis.rows;
        std::vector<double> centered(dim_);
        for (std::size_t c = 0; c < dim_; ++c)
            centered[c] = features[c] - pca->mean[c];
        std::vector<double> out = pca->mean;
        for (std::size_t r = 0; r < rank; ++r) {
            const auto row = pca->basis.row(r);
            double coeff = 0.0;
            for (std::size_t c = 0; c < dim_; ++c) coeff += row[c] * centered[c];
            for (std::size_t c = 0; c < dim_; ++c) out[c] += coeff * row[c];
        }
        return out;
    }
    const auto& mahal = std::get<MahalanobisState>(state_);
    std::vector<double> out(dim_);
    for (std::size_t r = 0; r < dim_; ++r) {
        const auto row = mahal.whitener.row(r);
        double w = 0.0;
        for (std::size_t c = 0; c < dim_; ++c)
            w += row[c] * (features[c] - mahal.mean[c]);
        out[r] = w;
    }
    return out;
}

std::vector<double> FittedScorer::score_batch(std::span<const Sample> samples,
                                              std::size_t threads) const {
    std::vector<double> out(samples.size());
    parallel_for(samples.size(), threads,
                 [&](std::size_t begin, std::size_t end) {
                     for (std::size_t i = begin; i < end; ++i) {
                         out[i] = score(samples[i]);
                     }
                 });
    return out;
}

std::vector<double> FittedScorer::score_batch(const Dataset& dataset,
                                              std::size_t threads) const {
    if (dataset.dim() != dim_) {
        throw DimensionError("dataset dimension " +
                             std::to_string(dataset.dim()) +
                             " does not match scorer dimension " +
                             std::to_string(dim_));
    }
    return score_batch(std::span<const Sample>(dataset.samples()), threads);
}

const FittedScorer::KnnState& FittedScorer::knn_state() const {
    return std::get<KnnState>(state_);
}
const FittedScorer::PcaState& FittedScorer::pca_state() const {
    return std::get<PcaState>(state_);
}
const FittedScorer::MahalanobisState& FittedScorer::mahalanobis_state() const {
    return std::get<MahalanobisState>(state_);
}

}  // namespace purifier
