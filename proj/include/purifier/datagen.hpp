#pragma once

#include <cstdint>
#include <vector>

#include "purifier/types.hpp"

namespace purifier {

// Synthetic contaminated benchmark: a dominant compact normal cluster
// (isotropic Gaussian at the origin) plus sparse anomalies scattered over
// many small modes on a distant shell. Mode centers sit at radius in
// [anomaly_radius_min, anomaly_radius_max], well outside the normal cloud
// (r_min > 2 * normal_spread enforced), and the mode count keeps per-mode
// multiplicity low so anomalies landing in different subsets stay mutually
// distant.
struct SyntheticConfig {
    std::size_t n_train = 500;
    double alpha = 0.1;  // noise ratio in [0, 1)
    std::size_t n_test_normal = 500;
    std::size_t n_test_anomalous = 500;
    std::size_t dim = 8;
    double normal_spread = 0.5;
    std::size_t anomaly_modes = 32;
    double anomaly_radius_min = 3.0;
    double anomaly_radius_max = 6.0;
    double anomaly_mode_spread = 0.3;
    std::uint64_t seed = 0;

    void validate() const;  // throws ConfigError
};

struct GeneratedData {
    Dataset train;
    Dataset test;
    // Mode centers actually used; diagnostic metadata for tests and plots.
    std::vector<std::vector<double>> mode_centers;
};

// Deterministic per seed. The train set holds round(alpha * n_train)
// anomalies with ground-truth labels attached (evaluation only); the test
// set draws fresh samples from the same distributions. Train and test use
// disjoint RNG streams, so changing test counts never perturbs train draws.
GeneratedData generate(const SyntheticConfig& config);

}  // namespace purifier
