#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "purifier/datagen.hpp"
#include "purifier/scorer.hpp"

namespace purifier {

// Experiment configuration shared by every CLI command. Loaded from JSON;
// all defaults are materialized back into the artifacts so results never
// depend on hidden settings.
struct RunConfig {
    // Exactly one data source: a synthetic benchmark or CSV files.
    std::optional<SyntheticConfig> synthetic;
    struct FileSource {
        std::filesystem::path train;
        std::optional<std::filesystem::path> test;
    };
    std::optional<FileSource> files;

    std::size_t k = 5;
    double t = 0.40;
    ScorerConfig stage1_scorer{};
    ScorerConfig stage2_scorer{};
    std::uint64_t master_seed = 0;

    bool leave_own_subset_out = false;
    bool zscore_columns = false;

    std::vector<double> alpha_list{0.0, 0.1, 0.2, 0.4};
    std::vector<std::size_t> k_list{1, 3, 5, 7};
    std::vector<std::uint64_t> seed_list{1, 2, 3};

    std::filesystem::path output_dir = "out";

    void validate() const;  // throws ConfigError
};

RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

// Fully materialized form (every default explicit).
nlohmann::ordered_json run_config_to_json(const RunConfig& config);

nlohmann::ordered_json scorer_config_to_json(const ScorerConfig& config);
ScorerConfig parse_scorer_config(const nlohmann::json& j,
                                 const std::string& context);

}  // namespace purifier
