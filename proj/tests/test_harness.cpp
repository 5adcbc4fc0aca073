#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "purifier/dataset_io.hpp"
#include "purifier/error.hpp"
#include "purifier/harness.hpp"
#include "purifier/run_config.hpp"

using namespace purifier;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "purifier_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig tiny_config() {
    nlohmann::json j = {
        {"data",
         {{"synthetic",
           {{"n_train", 120},
            {"alpha", 0.2},
            {"n_test_normal", 60},
            {"n_test_anomalous", 60},
            {"seed", 5}}}}},
        {"k", 3},
        {"master_seed", 5},
        {"sweep",
         {{"alpha_list", {0.1, 0.2}},
          {"k_list", {1, 3}},
          {"seed_list", {1, 2}}}}};
    return parse_run_config(j);
}

}  // namespace

TEST_CASE("dataset csv round-trips value-identically") {
    std::mt19937_64 eng(404);
    std::vector<std::vector<double>> rows =
        oracles::random_features(eng, 25, 3);
    rows[0] = {1e-300, -2.5e222, 0.1};
    rows[1] = {-0.0, 3.141592653589793, 1.0 / 3.0};
    std::vector<Label> labels(25, Label::Normal);
    labels[3] = Label::Anomalous;
    labels[4] = Label::Unknown;
    const Dataset original = oracles::make_dataset(rows, labels);

    std::stringstream buffer;
    write_dataset_csv(original, buffer);
    const Dataset copy = read_dataset_csv(buffer, DatasetRole::Train, "buf");

    REQUIRE(copy.size() == original.size());
    for (std::size_t i = 0; i < copy.size(); ++i) {
        CHECK(copy[i].id == original[i].id);
        CHECK(copy[i].label == original[i].label);
        CHECK(copy[i].features == original[i].features);  // bitwise
    }
}

TEST_CASE("dataset csv format: header, labels, LF endings") {
    const Dataset data =
        oracles::make_dataset({{1.5, -2.0}, {0.25, 8.0}},
                              {Label::Anomalous, Label::Unknown});
    std::stringstream buffer;
    write_dataset_csv(data, buffer);
    const std::string text = buffer.str();
    CHECK(text.starts_with("id,label,f0,f1\n"));
    CHECK(text.find("0,1,1.5,-2\n") != std::string::npos);
    CHECK(text.find("1,-1,0.25,8\n") != std::string::npos);
    CHECK(text.find('\r') == std::string::npos);
}

TEST_CASE("dataset csv reader reports line and field diagnostics") {
    auto parse = [](const std::string& text) {
        std::stringstream ss(text);
        return read_dataset_csv(ss, DatasetRole::Train, "test.csv");
    };
    CHECK_THROWS_AS(parse(""), ConfigError);
    CHECK_THROWS_AS(parse("id,wrong,f0\n0,0,1.0\n"), ConfigError);

    try {
        parse("id,label,f0\n0,0,1.0\n1,0,not_a_number\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string message = e.what();
        CHECK(message.find("line 3") != std::string::npos);
        CHECK(message.find("not_a_number") != std::string::npos);
    }

    try {
        parse("id,label,f0\n0,7,1.0\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("label") != std::string::npos);
    }

    CHECK_THROWS_AS(parse("id,label,f0\n0,0,1.0,9.0\n"), ConfigError);
    CHECK_THROWS_AS(read_dataset_csv(fs::path("/nonexistent/x.csv"),
                                     DatasetRole::Train),
                    ConfigError);
}

TEST_CASE("run config: defaults materialize, typos fail") {
    const RunConfig config = tiny_config();
    CHECK(config.t == 0.40);
    CHECK(config.stage1_scorer.kind == ScorerKind::Knn);
    CHECK(config.stage2_scorer.kind == ScorerKind::Knn);

    const nlohmann::ordered_json j = run_config_to_json(config);
    CHECK(j.at("schema_version") == 1);
    CHECK(j.at("t") == 0.40);
    CHECK(j.at("k") == 3);
    CHECK(j.at("stage2_scorer").at("knn_neighbors") == 3);
    CHECK(j.at("sweep").at("alpha_list").size() == 2);

    nlohmann::json bad = {{"data", {{"synthetic", {{"n_train", 10}}}}},
                          {"kk", 3}};
    CHECK_THROWS_AS(parse_run_config(bad), ConfigError);
    bad = {{"data", nlohmann::json::object()}};
    CHECK_THROWS_AS(parse_run_config(bad), ConfigError);
    bad = {{"data", {{"synthetic", {{"alpha", 2.0}}}}}};
    CHECK_THROWS_AS(parse_run_config(bad), ConfigError);
    bad = {{"data", {{"synthetic", nlohmann::json::object()}}},
           {"stage1_scorer", {{"kind", "transformer"}}}};
    CHECK_THROWS_AS(parse_run_config(bad), ConfigError);
}

TEST_CASE("scorer config accepts counts or fractions for pca_components") {
    nlohmann::json j = {{"kind", "pca"}, {"pca_components", 3}};
    ScorerConfig c = parse_scorer_config(j, "test");
    CHECK(c.pca_components == 3);

    j["pca_components"] = 0.75;
    c = parse_scorer_config(j, "test");
    CHECK(c.pca_components == 0);
    CHECK(c.pca_variance == 0.75);

    j["pca_components"] = 2.5;
    CHECK_THROWS_AS(parse_scorer_config(j, "test"), ConfigError);
}

TEST_CASE("commands write byte-identical artifacts on re-run") {
    const fs::path dir = fresh_dir("rerun");
    const RunConfig config = tiny_config();

    cmd_generate(config, dir);
    cmd_screen(config, dir, 3);
    cmd_detect(config, dir, 3);
    cmd_evaluate(config, dir);

    const std::vector<std::string> artifacts{"train.csv",      "test.csv",
                                             "generate.json",  "purified.csv",
                                             "stage1_result.json",
                                             "detection.json", "metrics.json"};
    std::vector<std::string> first;
    for (const auto& name : artifacts) first.push_back(slurp(dir / name));

    cmd_generate(config, dir);
    cmd_screen(config, dir, 1);
    cmd_detect(config, dir, 1);
    cmd_evaluate(config, dir);
    for (std::size_t i = 0; i < artifacts.size(); ++i) {
        CHECK(slurp(dir / artifacts[i]) == first[i]);
    }

    // Purified CSV is a valid dataset subset of train.csv.
    const Dataset purified =
        read_dataset_csv(dir / "purified.csv", DatasetRole::Train);
    CHECK(purified.size() == 48);  // floor(0.4 * 120)

    const auto metrics = nlohmann::json::parse(slurp(dir / "metrics.json"));
    CHECK(metrics.at("schema_version") == 1);
    CHECK(metrics.at("screening").at("per_model").size() == 3);
    CHECK(metrics.at("detection").contains("auroc"));
}

TEST_CASE("screen consumes file-based datasets") {
    const fs::path dir = fresh_dir("files");
    const RunConfig synthetic = tiny_config();
    cmd_generate(synthetic, dir);

    nlohmann::json j = {
        {"data",
         {{"files",
           {{"train", (dir / "train.csv").string()},
            {"test", (dir / "test.csv").string()}}}}},
        {"k", 3},
        {"master_seed", 5}};
    const RunConfig file_config = parse_run_config(j);
    const fs::path out = fresh_dir("files_out");
    cmd_screen(file_config, out, 2);
    cmd_detect(file_config, out, 2);
    cmd_evaluate(file_config, out);

    // Identical data and seeds: stage-1 retained ids agree across sources.
    cmd_screen(synthetic, dir, 2);
    const auto a = nlohmann::json::parse(slurp(out / "stage1_result.json"));
    const auto b = nlohmann::json::parse(slurp(dir / "stage1_result.json"));
    CHECK(a.at("pure").at("retained_ids") == b.at("pure").at("retained_ids"));
}

TEST_CASE("detect before screen fails with a ConfigError") {
    const fs::path dir = fresh_dir("noscreen");
    CHECK_THROWS_AS(cmd_detect(tiny_config(), dir, 1), ConfigError);
}

TEST_CASE("ablate: row counts, ordering, thread-invariance, svg") {
    const fs::path dir = fresh_dir("ablate");
    RunConfig config = tiny_config();

    const SweepReport report = cmd_ablate(config, dir, 4, true);
    CHECK(report.rows.size() == 2 * 2 * 2);
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        const auto& a = report.rows[i - 1];
        const auto& b = report.rows[i];
        CHECK(std::tie(a.alpha, a.k, a.seed) < std::tie(b.alpha, b.k, b.seed));
    }

    const std::string sweep_a = slurp(dir / "sweep.csv");
    const std::string submodels_a = slurp(dir / "submodels.csv");
    const std::string summary_a = slurp(dir / "summary.json");
    cmd_ablate(config, dir, 1, true);
    CHECK(slurp(dir / "sweep.csv") == sweep_a);
    CHECK(slurp(dir / "submodels.csv") == submodels_a);
    CHECK(slurp(dir / "summary.json") == summary_a);

    CHECK(sweep_a.starts_with("alpha,k,seed,contamination_rate"));
    CHECK(fs::exists(dir / "retained_vs_k_alpha0.1.svg"));
    const std::string svg = slurp(dir / "retained_vs_k_alpha0.2.svg");
    CHECK(svg.starts_with("<svg"));
    CHECK(svg.find("polyline") != std::string::npos);

    // Single triple -> single row.
    config.alpha_list = {0.1};
    config.k_list = {5};
    config.seed_list = {9};
    const fs::path single = fresh_dir("ablate_single");
    const SweepReport one = cmd_ablate(config, single, 1, false);
    CHECK(one.rows.size() == 1);
    CHECK(one.rows[0].submodel_breakdowns.size() == 5);
    std::stringstream ss(slurp(single / "sweep.csv"));
    std::string line;
    std::size_t lines = 0;
    while (std::getline(ss, line)) ++lines;
    CHECK(lines == 2);  // header + 1 row
}

TEST_CASE("ablate default sweep covers the whole cross product") {
    nlohmann::json j = {{"data",
                         {{"synthetic",
                           {{"n_train", 100},
                            {"n_test_normal", 30},
                            {"n_test_anomalous", 30},
                            {"seed", 1}}}}}};
    const RunConfig config = parse_run_config(j);
    const SweepReport report = run_sweep(config, 4);
    CHECK(report.rows.size() == 4 * 4 * 3);

    // Duplicate sweep entries collapse; the cross product stays exact.
    RunConfig duplicated = config;
    duplicated.alpha_list = {0.1, 0.1, 0.0};
    duplicated.k_list = {5, 5};
    duplicated.seed_list = {2, 2, 2};
    CHECK(run_sweep(duplicated, 2).rows.size() == 2);
}

TEST_CASE("ablate names the failing triple") {
    RunConfig config = tiny_config();
    config.synthetic->n_train = 4;  // subsets too small for knn_neighbors=3
    config.alpha_list = {0.2};
    config.k_list = {2};
    config.seed_list = {1};
    try {
        run_sweep(config, 1);
        FAIL("expected failure");
    } catch (const Error& e) {
        const std::string message = e.what();
        CHECK(message.find("alpha=0.2") != std::string::npos);
        CHECK(message.find("k=2") != std::string::npos);
        CHECK(message.find("seed=1") != std::string::npos);
    }
}

TEST_CASE("generate requires a synthetic source; ablate too") {
    nlohmann::json j = {{"data", {{"files", {{"train", "x.csv"}}}}}};
    const RunConfig config = parse_run_config(j);
    CHECK_THROWS_AS(cmd_generate(config, fresh_dir("gen_files")), ConfigError);
    CHECK_THROWS_AS(run_sweep(config, 1), ConfigError);
}
