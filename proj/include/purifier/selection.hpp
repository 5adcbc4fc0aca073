#pragma once

#include <cstdint>
#include <vector>

#include "purifier/types.hpp"

namespace purifier {

// The retained low-score fraction of a training set together with the
// threshold that produced it. |retained_ids| == max(1, floor(t*N)); every
// retained sample scores <= tau and every discarded one scores >= tau.
struct PurifiedSet {
    std::vector<std::int64_t> retained_ids;  // ascending
    double tau = 0.0;
    double t = 1.0;
};

// Nearest-rank quantile: the m-th smallest score with m = max(1, floor(t*N)).
// No interpolation, so the threshold is always an observed score.
double compute_threshold(const ConsensusScores& scores, double t);

// Retains exactly max(1, floor(t*N)) samples with the smallest consensus
// scores. Ties at the threshold break by ascending sample id so the count is
// exact and deterministic.
PurifiedSet select_pure(const Dataset& dataset, const ConsensusScores& scores,
                        double t);

}  // namespace purifier
