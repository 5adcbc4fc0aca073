#include "purifier/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "purifier/error.hpp"

namespace purifier {

Dataset::Dataset(std::vector<Sample> samples, DatasetRole role)
    : samples_(std::move(samples)), role_(role) {
    if (samples_.empty()) {
        throw InvalidDataset("dataset must contain at least one sample");
    }
    dim_ = samples_[0].features.size();
    if (dim_ == 0) {
        throw InvalidDataset("feature dimension must be >= 1");
    }
    std::int64_t prev_id = -1;
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const Sample& s = samples_[i];
        if (s.id < 0) {
            throw InvalidDataset("sample id must be non-negative, got " +
                                 std::to_string(s.id));
        }
        if (s.id <= prev_id) {
            throw InvalidDataset(
                "sample ids must be unique and ascending; offending id " +
                std::to_string(s.id) + " at position " + std::to_string(i));
        }
        prev_id = s.id;
        if (s.features.size() != dim_) {
            throw InvalidDataset(
                "sample " + std::to_string(s.id) + " has dimension " +
                std::to_string(s.features.size()) + ", expected " +
                std::to_string(dim_));
        }
        for (double v : s.features) {
            if (!std::isfinite(v)) {
                throw InvalidDataset("sample " + std::to_string(s.id) +
                                     " contains a non-finite feature");
            }
        }
    }
}

std::size_t Dataset::index_of(std::int64_t id) const {
    auto it = std::lower_bound(
        samples_.begin(), samples_.end(), id,
        [](const Sample& s, std::int64_t v) { return s.id < v; });
    if (it == samples_.end() || it->id != id) {
        throw AlignmentError("sample id " + std::to_string(id) +
                             " not present in dataset");
    }
    return static_cast<std::size_t>(it - samples_.begin());
}

NoiseRatio::NoiseRatio(double alpha) : alpha_(alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw ConfigError("noise ratio must lie in [0, 1), got " +
                          std::to_string(alpha));
    }
}

ConsensusScores::ConsensusScores(std::vector<double> values)
    : values_(std::move(values)) {
    if (values_.empty()) {
        throw EmptyInput("consensus scores must be non-empty");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw InvalidDataset("consensus scores must be finite");
        }
    }
}

}  // namespace purifier
