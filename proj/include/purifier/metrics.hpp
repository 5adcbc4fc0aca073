#pragma once

#include <cstdint>
#include <span>

#include "purifier/selection.hpp"
#include "purifier/types.hpp"

namespace purifier {

// Image-level AUROC analog, computed rank-based (Mann-Whitney): the fraction
// of (anomalous, normal) pairs where the anomalous score is higher, ties
// counted 1/2. Requires both classes present.
double auroc(std::span<const Label> labels, std::span<const double> scores);

// Fraction of ground-truth anomalies inside the retained set. Evaluation
// only; requires known labels on the retained samples.
double contamination_rate(std::span<const std::int64_t> retained_ids,
                          const Dataset& train);

struct PurityBreakdown {
    std::size_t retained_normal = 0;
    std::size_t retained_anomalous = 0;
    std::size_t discarded_normal = 0;
    std::size_t discarded_anomalous = 0;
};

// Cross-tabulates retention against ground-truth labels. Counts sum to N.
PurityBreakdown purity_breakdown(const PurifiedSet& pure, const Dataset& train);

}  // namespace purifier
