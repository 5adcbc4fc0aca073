#include "purifier/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "purifier/error.hpp"

namespace purifier {

namespace {

std::size_t retained_count(double t, std::size_t n) {
    if (!(t > 0.0 && t <= 1.0)) {
        throw InvalidQuantile("t must lie in (0, 1], got " + std::to_string(t));
    }
    auto m = static_cast<std::size_t>(
        std::floor(t * static_cast<double>(n)));
    return std::max<std::size_t>(1, std::min(m, n));
}

}  // namespace

double compute_threshold(const ConsensusScores& scores, double t) {
    const std::size_t n = scores.size();
    const std::size_t m = retained_count(t, n);
    std::vector<double> sorted = scores.values();
    std::nth_element(sorted.begin(), sorted.begin() + (m - 1), sorted.end());
    return sorted[m - 1];
}

PurifiedSet select_pure(const Dataset& dataset, const ConsensusScores& scores,
                        double t) {
    const std::size_t n = dataset.size();
    if (scores.size() != n) {
        throw AlignmentError("scores length " + std::to_string(scores.size()) +
                             " does not match dataset size " +
                             std::to_string(n));
    }
    const std::size_t m = retained_count(t, n);

    // Dataset ids are ascending, so index order is id order and sorting by
    // (score, index) realises the ascending-id tie break.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] < scores[b];
        return a < b;
    });

    PurifiedSet pure;
    pure.t = t;
    pure.tau = scores[order[m - 1]];
    pure.retained_ids.reserve(m);
    for (std::size_t r = 0; r < m; ++r) {
        pure.retained_ids.push_back(dataset[order[r]].id);
    }
    std::sort(pure.retained_ids.begin(), pure.retained_ids.end());
    return pure;
}

}  // namespace purifier
