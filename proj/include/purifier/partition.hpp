#pragma once

#include <cstdint>
#include <vector>

#include "purifier/types.hpp"

namespace purifier {

// Disjoint balanced cover of a training set: every sample is assigned to
// exactly one of k subsets and subset sizes differ by at most one.
struct PartitionPlan {
    std::size_t k = 1;
    std::vector<std::uint32_t> assignment;  // length N, values in [0, k)
    std::uint64_t seed = 0;
};

// Seeded Fisher-Yates shuffle of [0, N) followed by round-robin assignment.
// Deterministic for fixed (dataset order, k, seed).
PartitionPlan partition_dataset(const Dataset& dataset, std::size_t k,
                                std::uint64_t seed);

// Indices grouped by subset; each group ascending. Validates the plan
// against N (cover, balance, range) and throws InvalidPartition otherwise,
// so manually constructed plans get checked at the point of use.
std::vector<std::vector<std::size_t>> subset_indices(const PartitionPlan& plan,
                                                     std::size_t n);

}  // namespace purifier
