#pragma once

// Test-only reference implementations, kept independent of the library code
// paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "purifier/types.hpp"

namespace oracles {

// Nearest-rank quantile by full sort.
inline double sort_quantile(std::vector<double> scores, double t) {
    std::sort(scores.begin(), scores.end());
    const auto n = static_cast<double>(scores.size());
    auto m = static_cast<std::size_t>(std::floor(t * n));
    m = std::max<std::size_t>(1, std::min(m, scores.size()));
    return scores[m - 1];
}

// Lowest-t-fraction selection by full sort over (score, id) pairs.
inline std::vector<std::int64_t> sort_select(
    const std::vector<double>& scores, const std::vector<std::int64_t>& ids,
    double t) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                         if (scores[a] != scores[b])
                             return scores[a] < scores[b];
                         return ids[a] < ids[b];
                     });
    auto m = static_cast<std::size_t>(
        std::floor(t * static_cast<double>(scores.size())));
    m = std::max<std::size_t>(1, std::min(m, scores.size()));
    std::vector<std::int64_t> retained;
    for (std::size_t r = 0; r < m; ++r) retained.push_back(ids[order[r]]);
    std::sort(retained.begin(), retained.end());
    return retained;
}

// O(N^2) pairwise AUROC with half credit for ties.
inline double pairwise_auroc(const std::vector<purifier::Label>& labels,
                             const std::vector<double>& scores) {
    double credit = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < labels.size(); ++a) {
        if (labels[a] != purifier::Label::Anomalous) continue;
        for (std::size_t n = 0; n < labels.size(); ++n) {
            if (labels[n] != purifier::Label::Normal) continue;
            ++pairs;
            if (scores[a] > scores[n]) credit += 1.0;
            else if (scores[a] == scores[n]) credit += 0.5;
        }
    }
    return credit / static_cast<double>(pairs);
}

// Plain helpers for building fixtures.

inline purifier::Dataset make_dataset(
    const std::vector<std::vector<double>>& features,
    const std::vector<purifier::Label>& labels,
    purifier::DatasetRole role = purifier::DatasetRole::Train) {
    std::vector<purifier::Sample> samples;
    for (std::size_t i = 0; i < features.size(); ++i) {
        samples.push_back(purifier::Sample{
            static_cast<std::int64_t>(i), features[i],
            labels.empty() ? purifier::Label::Unknown : labels[i]});
    }
    return purifier::Dataset(std::move(samples), role);
}

inline purifier::Dataset make_dataset(
    const std::vector<std::vector<double>>& features,
    purifier::DatasetRole role = purifier::DatasetRole::Train) {
    return make_dataset(features, {}, role);
}

inline std::vector<std::vector<double>> random_features(std::mt19937_64& eng,
                                                        std::size_t n,
                                                        std::size_t dim,
                                                        double spread = 1.0) {
    std::normal_distribution<double> gauss(0.0, spread);
    std::vector<std::vector<double>> rows(n, std::vector<double>(dim));
    for (auto& row : rows)
        for (double& v : row) v = gauss(eng);
    return rows;
}

}  // namespace oracles
