#pragma once

#include <cstdint>
#include <vector>

namespace purifier {

enum class Label : int { Normal = 0, Anomalous = 1, Unknown = -1 };

enum class DatasetRole { Train, Test };

struct Sample {
    std::int64_t id = 0;
    std::vector<double> features;
    Label label = Label::Unknown;
};

// Ordered collection of samples sharing one feature dimension. Ids are
// unique, non-negative and ascending; features are finite. Labels ride along
// as ground truth for evaluation only -- fitting and screening never read
// them.
class Dataset {
public:
    Dataset(std::vector<Sample> samples, DatasetRole role);

    const std::vector<Sample>& samples() const noexcept { return samples_; }
    const Sample& operator[](std::size_t i) const { return samples_[i]; }
    std::size_t size() const noexcept { return samples_.size(); }
    std::size_t dim() const noexcept { return dim_; }
    DatasetRole role() const noexcept { return role_; }

    // Index of the sample with the given id, or throws AlignmentError.
    std::size_t index_of(std::int64_t id) const;

private:
    std::vector<Sample> samples_;
    std::size_t dim_ = 0;
    DatasetRole role_ = DatasetRole::Train;
};

// Noise ratio alpha in [0, 1): the fraction of anomalous samples
// contaminating a training set.
class NoiseRatio {
public:
    explicit NoiseRatio(double alpha);
    double value() const noexcept { return alpha_; }

private:
    double alpha_;
};

// Per-sample aggregated anomaly scores, index-aligned with a training
// dataset. All values finite.
class ConsensusScores {
public:
    explicit ConsensusScores(std::vector<double> values);

    const std::vector<double>& values() const noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const noexcept { return values_.size(); }

private:
    std::vector<double> values_;
};

}  // namespace purifier
