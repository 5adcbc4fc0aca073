#include "purifier/harness.hpp"

#include <charconv>
#include <fstream>
#include <string>

#include "json_file_io.hpp"
#include "purifier/dataset_io.hpp"
#include "purifier/detect.hpp"
#include "purifier/error.hpp"
#include "purifier/metrics.hpp"
#include "purifier/screening.hpp"

namespace purifier {

namespace {

using nlohmann::ordered_json;
using detail::read_json_file;
using detail::write_json_file;

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw ConfigError("cannot create output directory '" + dir.string() +
                          "': " + ec.message());
    }
}

struct LoadedData {
    Dataset train;
    std::optional<Dataset> test;
};

LoadedData load_data(const RunConfig& config) {
    if (config.synthetic) {
        GeneratedData data = generate(*config.synthetic);
        return LoadedData{std::move(data.train), std::move(data.test)};
    }
    Dataset train = read_dataset_csv(config.files->train, DatasetRole::Train);
    std::optional<Dataset> test;
    if (config.files->test) {
        test = read_dataset_csv(*config.files->test, DatasetRole::Test);
    }
    return LoadedData{std::move(train), std::move(test)};
}

std::size_t count_label(const Dataset& dataset, Label label) {
    std::size_t n = 0;
    for (const Sample& s : dataset.samples()) {
        if (s.label == label) ++n;
    }
    return n;
}

ordered_json dataset_summary(const Dataset& dataset) {
    ordered_json j;
    j["n"] = dataset.size();
    j["dim"] = dataset.dim();
    j["normal"] = count_label(dataset, Label::Normal);
    j["anomalous"] = count_label(dataset, Label::Anomalous);
    j["unknown"] = count_label(dataset, Label::Unknown);
    return j;
}

ordered_json purified_to_json(const PurifiedSet& pure) {
    ordered_json j;
    j["t"] = pure.t;
    j["tau"] = pure.tau;
    j["retained_ids"] = pure.retained_ids;
    return j;
}

PurifiedSet purified_from_json(const nlohmann::json& j) {
    PurifiedSet pure;
    pure.t = j.at("t").get<double>();
    pure.tau = j.at("tau").get<double>();
    pure.retained_ids = j.at("retained_ids").get<std::vector<std::int64_t>>();
    return pure;
}

ordered_json breakdown_to_json(const PurityBreakdown& b) {
    ordered_json j;
    j["retained_normal"] = b.retained_normal;
    j["retained_anomalous"] = b.retained_anomalous;
    j["discarded_normal"] = b.discarded_normal;
    j["discarded_anomalous"] = b.discarded_anomalous;
    return j;
}

Dataset subset_by_ids(const Dataset& dataset,
                      const std::vector<std::int64_t>& ids) {
    std::vector<Sample> samples;
    samples.reserve(ids.size());
    for (std::int64_t id : ids) {
        samples.push_back(dataset[dataset.index_of(id)]);
    }
    return Dataset(std::move(samples), dataset.role());
}

Stage1Options stage1_options(const RunConfig& config, std::size_t threads) {
    Stage1Options options;
    options.k = config.k;
    options.t = config.t;
    options.scorer = config.stage1_scorer;
    options.master_seed = config.master_seed;
    options.leave_own_subset_out = config.leave_own_subset_out;
    options.zscore_columns = config.zscore_columns;
    options.threads = threads;
    return options;
}

bool labels_known(const Dataset& dataset) {
    return count_label(dataset, Label::Unknown) == 0;
}

}  // namespace

void cmd_generate(const RunConfig& config,
                  const std::filesystem::path& out_dir) {
    if (!config.synthetic) {
        throw ConfigError("generate requires a synthetic data source");
    }
    ensure_dir(out_dir);
    GeneratedData data = generate(*config.synthetic);
    write_dataset_csv(data.train, out_dir / "train.csv");
    write_dataset_csv(data.test, out_dir / "test.csv");

    ordered_json j;
    j["schema_version"] = 1;
    j["command"] = "generate";
    j["config"] = run_config_to_json(config);
    j["train_path"] = "train.csv";
    j["test_path"] = "test.csv";
    j["train"] = dataset_summary(data.train);
    j["test"] = dataset_summary(data.test);
    write_json_file(j, out_dir / "generate.json");
}

void cmd_screen(const RunConfig& config, const std::filesystem::path& out_dir,
                std::size_t threads) {
    ensure_dir(out_dir);
    LoadedData data = load_data(config);
    Stage1Result result =
        run_stage1(data.train, stage1_options(config, threads));

    Dataset purified = subset_by_ids(data.train, result.pure.retained_ids);
    write_dataset_csv(purified, out_dir / "purified.csv");

    ordered_json j;
    j["schema_version"] = 1;
    j["command"] = "screen";
    j["config"] = run_config_to_json(config);
    j["plan"] = {{"k", result.plan.k},
                 {"seed", result.plan.seed},
                 {"assignment", result.plan.assignment}};
    j["score_matrix"] = {{"rows", result.matrix.rows()},
                         {"cols", result.matrix.cols()},
                         {"values", nullptr}};
    {
        ordered_json rows = ordered_json::array();
        for (std::size_t i = 0; i < result.matrix.rows(); ++i) {
            ordered_json row = ordered_json::array();
            for (std::size_t col = 0; col < result.matrix.cols(); ++col) {
                row.push_back(result.matrix.at(i, col));
            }
            rows.push_back(std::move(row));
        }
        j["score_matrix"]["values"] = std::move(rows);
    }
    j["consensus"] = result.consensus.values();
    j["pure"] = purified_to_json(result.pure);
    {
        ordered_json per_model = ordered_json::array();
        for (const PurifiedSet& p : result.per_model_pure) {
            per_model.push_back(purified_to_json(p));
        }
        j["per_model_pure"] = std::move(per_model);
    }
    j["purified_path"] = "purified.csv";
    write_json_file(j, out_dir / "stage1_result.json");
}

void cmd_detect(const RunConfig& config, const std::filesystem::path& out_dir,
                std::size_t threads) {
    ensure_dir(out_dir);
    LoadedData data = load_data(config);
    if (!data.test) {
        throw ConfigError("detect requires a test set (data.files.test)");
    }
    const nlohmann::json stage1 =
        read_json_file(out_dir / "stage1_result.json");
    PurifiedSet pure;
    try {
        pure = purified_from_json(stage1.at("pure"));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("stage1_result.json has unexpected shape: " +
                          std::string(e.what()));
    }

    DetectionResult result =
        run_stage2(data.train, pure, *data.test, config.stage2_scorer,
                   config.master_seed, threads);

    ordered_json j;
    j["schema_version"] = 1;
    j["command"] = "detect";
    j["config"] = run_config_to_json(config);
    j["final_model"] = {{"kind", to_string(result.final_model.kind)},
                        {"train_size", result.final_model.train_size}};
    j["trainset_ids"] = result.trainset_id_list;
    j["test_scores"] = result.test_scores;
    write_json_file(j, out_dir / "detection.json");
}

void cmd_evaluate(const RunConfig& config,
                  const std::filesystem::path& out_dir) {
    ensure_dir(out_dir);
    LoadedData data = load_data(config);
    const nlohmann::json stage1 =
        read_json_file(out_dir / "stage1_result.json");

    PurifiedSet pure;
    std::vector<PurifiedSet> per_model;
    try {
        pure = purified_from_json(stage1.at("pure"));
        for (const auto& p : stage1.at("per_model_pure")) {
            per_model.push_back(purified_from_json(p));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("stage1_result.json has unexpected shape: " +
                          std::string(e.what()));
    }

    ordered_json j;
    j["schema_version"] = 1;
    j["command"] = "evaluate";
    j["config"] = run_config_to_json(config);

    ordered_json screening;
    screening["contamination_rate"] =
        contamination_rate(pure.retained_ids, data.train);
    screening["breakdown"] =
        breakdown_to_json(purity_breakdown(pure, data.train));
    {
        ordered_json models = ordered_json::array();
        for (const PurifiedSet& p : per_model) {
            ordered_json entry;
            entry["contamination_rate"] =
                contamination_rate(p.retained_ids, data.train);
            entry["breakdown"] = breakdown_to_json(purity_breakdown(p, data.train));
            models.push_back(std::move(entry));
        }
        screening["per_model"] = std::move(models);
    }
    j["screening"] = std::move(screening);

    // Detection metrics only when a scored test set with ground truth exists.
    const std::filesystem::path detection_path = out_dir / "detection.json";
    if (std::filesystem::exists(detection_path) && data.test &&
        labels_known(*data.test)) {
        const nlohmann::json detection = read_json_file(detection_path);
        std::vector<double> scores;
        try {
            scores = detection.at("test_scores").get<std::vector<double>>();
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("detection.json has unexpected shape: " +
                              std::string(e.what()));
        }
        if (scores.size() != data.test->size()) {
            throw AlignmentError(
                "detection.json test_scores do not match the test set size");
        }
        std::vector<Label> labels;
        labels.reserve(data.test->size());
        for (const Sample& s : data.test->samples()) labels.push_back(s.label);
        ordered_json det;
        det["auroc"] = auroc(labels, scores);
        det["n_test"] = data.test->size();
        j["detection"] = std::move(det);
    }

    write_json_file(j, out_dir / "metrics.json");
}

}  // namespace purifier
