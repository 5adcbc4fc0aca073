#include "purifier/partition.hpp"

#include <numeric>
#include <string>

#include "purifier/error.hpp"
#include "purifier/rng.hpp"

namespace purifier {

PartitionPlan partition_dataset(const Dataset& dataset, std::size_t k,
                                std::uint64_t seed) {
    const std::size_t n = dataset.size();
    if (k == 0) {
        throw InvalidPartition("subset count k must be positive");
    }
    if (k > n) {
        throw InvalidPartition("subset count k=" + std::to_string(k) +
                               " exceeds dataset size N=" + std::to_string(n));
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto eng = rng::make_engine(seed);
    rng::shuffle(order, eng);

    PartitionPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignment.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        plan.assignment[order[i]] = static_cast<std::uint32_t>(i % k);
    }
    return plan;
}

std::vector<std::vector<std::size_t>> subset_indices(const PartitionPlan& plan,
                                                     std::size_t n) {
    if (plan.k == 0 || plan.k > n) {
        throw InvalidPartition("plan has invalid subset count k=" +
                               std::to_string(plan.k));
    }
    if (plan.assignment.size() != n) {
        throw InvalidPartition(
            "plan assignment length " + std::to_string(plan.assignment.size()) +
            " does not match dataset size " + std::to_string(n));
    }
    std::vector<std::vector<std::size_t>> groups(plan.k);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t j = plan.assignment[i];
        if (j >= plan.k) {
            throw InvalidPartition("assignment value " + std::to_string(j) +
                                   " out of range at index " +
                                   std::to_string(i));
        }
        groups[j].push_back(i);
    }
    std::size_t min_size = n, max_size = 0;
    for (const auto& g : groups) {
        min_size = std::min(min_size, g.size());
        max_size = std::max(max_size, g.size());
    }
    if (min_size == 0) {
        throw InvalidPartition("every subset must receive at least one sample");
    }
    if (max_size - min_size > 1) {
        throw InvalidPartition("subset sizes differ by more than one");
    }
    return groups;
}

}  // namespace purifier
