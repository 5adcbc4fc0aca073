#include "purifier/datagen.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "purifier/error.hpp"
#include "purifier/rng.hpp"

namespace purifier {

void SyntheticConfig::validate() const {
    NoiseRatio check_alpha(alpha);  // [0, 1)
    if (n_train < 1 || n_test_normal < 1 || n_test_anomalous < 1) {
        throw ConfigError("sample counts must be >= 1");
    }
    if (dim < 1) {
        throw ConfigError("dim must be >= 1");
    }
    if (normal_spread <= 0.0 || anomaly_mode_spread <= 0.0) {
        throw ConfigError("spreads must be positive");
    }
    if (anomaly_modes < 1) {
        throw ConfigError("anomaly_modes must be >= 1");
    }
    if (anomaly_radius_min <= 0.0 || anomaly_radius_max < anomaly_radius_min) {
        throw ConfigError("anomaly radius range must satisfy 0 < r_min <= r_max");
    }
    // Keeps the anomaly shell clear of the normal cluster.
    if (anomaly_radius_min <= 2.0 * normal_spread) {
        throw ConfigError("anomaly_radius_min must exceed 2 * normal_spread");
    }
}

namespace {

std::vector<double> draw_normal_point(rng::Engine& eng, std::size_t dim,
                                      double spread) {
    std::vector<double> x(dim);
    for (std::size_t c = 0; c < dim; ++c) x[c] = spread * rng::normal(eng);
    return x;
}

std::vector<double> draw_anomaly_point(
    rng::Engine& eng, const std::vector<std::vector<double>>& centers,
    double spread) {
    const std::size_t mode = rng::below(eng, centers.size());
    std::vector<double> x = centers[mode];
    for (double& v : x) v += spread * rng::normal(eng);
    return x;
}

// n_normal draws followed by n_anomalous draws, then a shuffle so labels do
// not correlate with position or id.
std::vector<Sample> draw_split(rng::Engine& eng, const SyntheticConfig& config,
                               const std::vector<std::vector<double>>& centers,
                               std::size_t n_normal, std::size_t n_anomalous) {
    std::vector<Sample> samples;
    samples.reserve(n_normal + n_anomalous);
    for (std::size_t i = 0; i < n_normal; ++i) {
        samples.push_back(Sample{
            0, draw_normal_point(eng, config.dim, config.normal_spread),
            Label::Normal});
    }
    for (std::size_t i = 0; i < n_anomalous; ++i) {
        samples.push_back(Sample{
            0, draw_anomaly_point(eng, centers, config.anomaly_mode_spread),
            Label::Anomalous});
    }
    rng::shuffle(samples, eng);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        samples[i].id = static_cast<std::int64_t>(i);
    }
    return samples;
}

}  // namespace

GeneratedData generate(const SyntheticConfig& config) {
    config.validate();

    auto centers_eng = rng::make_engine(rng::mix(config.seed, 0));
    auto train_eng = rng::make_engine(rng::mix(config.seed, 1));
    auto test_eng = rng::make_engine(rng::mix(config.seed, 2));

    // Mode centers: direction uniform on the unit sphere, radius uniform in
    // [r_min, r_max]. Shared by train and test.
    std::vector<std::vector<double>> centers;
    centers.reserve(config.anomaly_modes);
    for (std::size_t m = 0; m < config.anomaly_modes; ++m) {
        std::vector<double> dir;
        double norm = 0.0;
        do {
            dir = draw_normal_point(centers_eng, config.dim, 1.0);
            norm = 0.0;
            for (double v : dir) norm += v * v;
            norm = std::sqrt(norm);
        } while (norm < 1e-12);
        const double radius = rng::uniform(centers_eng, config.anomaly_radius_min,
                                           config.anomaly_radius_max);
        for (double& v : dir) v *= radius / norm;
        centers.push_back(std::move(dir));
    }

    const auto n_train_anomalous = static_cast<std::size_t>(
        std::llround(config.alpha * static_cast<double>(config.n_train)));
    const std::size_t n_train_normal = config.n_train - n_train_anomalous;

    Dataset train(draw_split(train_eng, config, centers, n_train_normal,
                             n_train_anomalous),
                  DatasetRole::Train);
    Dataset test(draw_split(test_eng, config, centers, config.n_test_normal,
                            config.n_test_anomalous),
                 DatasetRole::Test);

    return GeneratedData{std::move(train), std::move(test),
                         std::move(centers)};
}

}  // namespace purifier
