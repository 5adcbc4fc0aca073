#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "purifier/run_config.hpp"

namespace purifier {

// One ablation measurement: a single (alpha, k, seed) triple.
struct SweepRow {
    double alpha = 0.0;
    std::size_t k = 1;
    std::uint64_t seed = 0;
    double contamination = 0.0;
    std::size_t retained_normal = 0;
    std::size_t retained_anomalous = 0;
    std::size_t discarded_normal = 0;
    std::size_t discarded_anomalous = 0;
    // Per-sub-model breakdowns, index j; the headline comparison uses their
    // means.
    std::vector<std::array<std::size_t, 4>> submodel_breakdowns;
    double submodel_mean_retained_normal = 0.0;
    double submodel_mean_retained_anomalous = 0.0;
    double stage2_auroc = 0.0;
    double baseline_auroc = 0.0;
};

struct SweepReport {
    std::vector<SweepRow> rows;  // sorted by (alpha, k, seed)
};

// CLI command bodies. Each is a pure function of (config, out_dir, threads):
// rerunning with identical inputs rewrites byte-identical artifacts.
void cmd_generate(const RunConfig& config, const std::filesystem::path& out_dir);
void cmd_screen(const RunConfig& config, const std::filesystem::path& out_dir,
                std::size_t threads);
void cmd_detect(const RunConfig& config, const std::filesystem::path& out_dir,
                std::size_t threads);
void cmd_evaluate(const RunConfig& config,
                  const std::filesystem::path& out_dir);
SweepReport cmd_ablate(const RunConfig& config,
                       const std::filesystem::path& out_dir,
                       std::size_t threads, bool emit_svg);

// Runs the sweep without touching the filesystem.
SweepReport run_sweep(const RunConfig& config, std::size_t threads);

}  // namespace purifier
