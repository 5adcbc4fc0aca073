// Experiment CLI: two-stage training-set purification and anomaly detection.
//
//   purify generate --config cfg.json          write synthetic train/test CSVs
//   purify screen   --config cfg.json          stage 1: purify the training set
//   purify detect   --config cfg.json          stage 2: score the test set
//   purify evaluate --config cfg.json          contamination/AUROC metrics
//   purify ablate   --config cfg.json          sweep over (alpha, k, seed)
//
// Every command is deterministic: identical config and seed reproduce
// byte-identical outputs, regardless of --threads.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "purifier/error.hpp"
#include "purifier/harness.hpp"
#include "purifier/parallel.hpp"
#include "purifier/run_config.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::size_t threads = 0;  // 0 = auto
    bool emit_svg = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_svg) {
    cmd->add_option("--config", args.config_path, "Run config JSON file")
        ->required();
    cmd->add_option("--out", args.out_dir,
                    "Output directory (overrides config output_dir)");
    cmd->add_option("--seed", args.seed,
                    "Overrides master_seed and the synthetic data seed");
    cmd->add_option("--threads", args.threads, "Worker threads, 0 = auto")
        ->envname("PURIFIER_THREADS");
    if (with_svg) {
        cmd->add_flag("--emit-svg", args.emit_svg,
                      "Also write retained-count SVG line charts per alpha");
    }
}

purifier::RunConfig resolve(const CommonArgs& args) {
    purifier::RunConfig config = purifier::load_run_config(args.config_path);
    if (!args.out_dir.empty()) config.output_dir = args.out_dir;
    if (args.seed) {
        config.master_seed = *args.seed;
        if (config.synthetic) config.synthetic->seed = *args.seed;
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-stage fully-unsupervised anomaly-detection harness"};
    app.require_subcommand(1);

    CommonArgs args;
    CLI::App* cmd_generate = app.add_subcommand(
        "generate", "Generate the synthetic benchmark CSV files");
    CLI::App* cmd_screen = app.add_subcommand(
        "screen", "Stage 1: partition, score, and purify the training set");
    CLI::App* cmd_detect = app.add_subcommand(
        "detect", "Stage 2: train on the purified set and score the test set");
    CLI::App* cmd_evaluate =
        app.add_subcommand("evaluate", "Compute contamination and AUROC metrics");
    CLI::App* cmd_ablate =
        app.add_subcommand("ablate", "Run the (alpha, k, seed) sweep");
    for (CLI::App* cmd :
         {cmd_generate, cmd_screen, cmd_detect, cmd_evaluate, cmd_ablate}) {
        add_common(cmd, args, cmd == cmd_ablate);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const purifier::RunConfig config = resolve(args);
        const std::filesystem::path out = config.output_dir;
        const std::size_t threads = purifier::resolve_threads(args.threads);

        if (cmd_generate->parsed()) {
            purifier::cmd_generate(config, out);
        } else if (cmd_screen->parsed()) {
            purifier::cmd_screen(config, out, threads);
        } else if (cmd_detect->parsed()) {
            purifier::cmd_detect(config, out, threads);
        } else if (cmd_evaluate->parsed()) {
            purifier::cmd_evaluate(config, out);
        } else if (cmd_ablate->parsed()) {
            purifier::cmd_ablate(config, out, threads, args.emit_svg);
        }
        return 0;
    } catch (const purifier::Error& e) {
        nlohmann::ordered_json err;
        err["error"] = {{"category", e.category()}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return e.category() == "ConfigError" ? 2 : 1;
    } catch (const std::exception& e) {
        nlohmann::ordered_json err;
        err["error"] = {{"category", "Internal"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 70;
    }
}
