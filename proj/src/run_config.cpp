#include "purifier/run_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "purifier/error.hpp"

namespace purifier {

namespace {

using nlohmann::json;

// Strict key checking: a typo in a config should fail loudly, not silently
// fall back to a default.
void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& context) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.contains(it.key())) {
            throw ConfigError(context + ": unknown field '" + it.key() + "'");
        }
    }
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback,
         const std::string& context) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(context + ": field '" + key + "' has the wrong type");
    }
}

SyntheticConfig parse_synthetic(const json& j, const std::string& context) {
    check_keys(j,
               {"n_train", "alpha", "n_test_normal", "n_test_anomalous", "dim",
                "normal_spread", "anomaly_modes", "anomaly_radius_min",
                "anomaly_radius_max", "anomaly_mode_spread", "seed"},
               context);
    SyntheticConfig c;
    c.n_train = get_or<std::size_t>(j, "n_train", c.n_train, context);
    c.alpha = get_or<double>(j, "alpha", c.alpha, context);
    c.n_test_normal =
        get_or<std::size_t>(j, "n_test_normal", c.n_test_normal, context);
    c.n_test_anomalous = get_or<std::size_t>(j, "n_test_anomalous",
                                             c.n_test_anomalous, context);
    c.dim = get_or<std::size_t>(j, "dim", c.dim, context);
    c.normal_spread =
        get_or<double>(j, "normal_spread", c.normal_spread, context);
    c.anomaly_modes =
        get_or<std::size_t>(j, "anomaly_modes", c.anomaly_modes, context);
    c.anomaly_radius_min =
        get_or<double>(j, "anomaly_radius_min", c.anomaly_radius_min, context);
    c.anomaly_radius_max =
        get_or<double>(j, "anomaly_radius_max", c.anomaly_radius_max, context);
    c.anomaly_mode_spread = get_or<double>(j, "anomaly_mode_spread",
                                           c.anomaly_mode_spread, context);
    c.seed = get_or<std::uint64_t>(j, "seed", c.seed, context);
    return c;
}

nlohmann::ordered_json synthetic_to_json(const SyntheticConfig& c) {
    nlohmann::ordered_json j;
    j["n_train"] = c.n_train;
    j["alpha"] = c.alpha;
    j["n_test_normal"] = c.n_test_normal;
    j["n_test_anomalous"] = c.n_test_anomalous;
    j["dim"] = c.dim;
    j["normal_spread"] = c.normal_spread;
    j["anomaly_modes"] = c.anomaly_modes;
    j["anomaly_radius_min"] = c.anomaly_radius_min;
    j["anomaly_radius_max"] = c.anomaly_radius_max;
    j["anomaly_mode_spread"] = c.anomaly_mode_spread;
    j["seed"] = c.seed;
    return j;
}

}  // namespace

ScorerConfig parse_scorer_config(const json& j, const std::string& context) {
    check_keys(j,
               {"kind", "knn_neighbors", "pca_components", "pca_variance",
                "mahalanobis_ridge", "seed"},
               context);
    ScorerConfig c;
    if (j.contains("kind")) {
        c.kind = scorer_kind_from_string(
            get_or<std::string>(j, "kind", "knn", context));
    }
    c.knn_neighbors = get_or<int>(j, "knn_neighbors", c.knn_neighbors, context);
    if (j.contains("pca_components")) {
        // Accepts either a component count (integer >= 1), a variance
        // fraction in (0, 1), or 0 for the default variance rule.
        const double raw = get_or<double>(j, "pca_components", 0.0, context);
        if (raw == 0.0) {
            c.pca_components = 0;
        } else if (raw > 0.0 && raw < 1.0) {
            c.pca_components = 0;
            c.pca_variance = raw;
        } else if (raw >= 1.0 && raw == std::floor(raw)) {
            c.pca_components = static_cast<int>(raw);
        } else {
            throw ConfigError(context +
                              ": pca_components must be a positive integer or "
                              "a fraction in (0, 1)");
        }
    }
    c.pca_variance = get_or<double>(j, "pca_variance", c.pca_variance, context);
    c.mahalanobis_ridge =
        get_or<double>(j, "mahalanobis_ridge", c.mahalanobis_ridge, context);
    c.seed = get_or<std::uint64_t>(j, "seed", c.seed, context);
    c.validate();
    return c;
}

nlohmann::ordered_json scorer_config_to_json(const ScorerConfig& c) {
    nlohmann::ordered_json j;
    j["kind"] = to_string(c.kind);
    j["knn_neighbors"] = c.knn_neighbors;
    j["pca_components"] = c.pca_components;
    j["pca_variance"] = c.pca_variance;
    j["mahalanobis_ridge"] = c.mahalanobis_ridge;
    j["seed"] = c.seed;
    return j;
}

void RunConfig::validate() const {
    if (synthetic.has_value() == files.has_value()) {
        throw ConfigError(
            "config must name exactly one data source: data.synthetic or "
            "data.files");
    }
    if (synthetic) synthetic->validate();
    if (files && files->train.empty()) {
        throw ConfigError("data.files.train must not be empty");
    }
    if (k < 1) throw ConfigError("k must be >= 1");
    if (!(t > 0.0 && t <= 1.0)) throw ConfigError("t must lie in (0, 1]");
    stage1_scorer.validate();
    stage2_scorer.validate();
    if (alpha_list.empty() || k_list.empty() || seed_list.empty()) {
        throw ConfigError("sweep lists must be non-empty");
    }
    for (double a : alpha_list) {
        if (!(a >= 0.0 && a < 1.0)) {
            throw ConfigError("sweep alpha values must lie in [0, 1)");
        }
    }
    for (std::size_t kk : k_list) {
        if (kk < 1) throw ConfigError("sweep k values must be >= 1");
    }
}

RunConfig parse_run_config(const json& j) {
    check_keys(j,
               {"schema_version", "data", "k", "t", "stage1_scorer",
                "stage2_scorer", "master_seed", "consensus", "sweep",
                "output_dir"},
               "config");
    RunConfig c;

    if (!j.contains("data")) {
        throw ConfigError("config: missing required 'data' section");
    }
    const json& data = j.at("data");
    check_keys(data, {"synthetic", "files"}, "config.data");
    if (data.contains("synthetic")) {
        c.synthetic = parse_synthetic(data.at("synthetic"),
                                      "config.data.synthetic");
    }
    if (data.contains("files")) {
        const json& files = data.at("files");
        check_keys(files, {"train", "test"}, "config.data.files");
        RunConfig::FileSource fs;
        fs.train = get_or<std::string>(files, "train", "", "config.data.files");
        if (files.contains("test")) {
            fs.test = std::filesystem::path(
                get_or<std::string>(files, "test", "", "config.data.files"));
        }
        c.files = std::move(fs);
    }

    c.k = get_or<std::size_t>(j, "k", c.k, "config");
    c.t = get_or<double>(j, "t", c.t, "config");
    if (j.contains("stage1_scorer")) {
        c.stage1_scorer =
            parse_scorer_config(j.at("stage1_scorer"), "config.stage1_scorer");
    }
    c.stage2_scorer = j.contains("stage2_scorer")
                          ? parse_scorer_config(j.at("stage2_scorer"),
                                                "config.stage2_scorer")
                          : c.stage1_scorer;
    c.master_seed =
        get_or<std::uint64_t>(j, "master_seed", c.master_seed, "config");

    if (j.contains("consensus")) {
        const json& cons = j.at("consensus");
        check_keys(cons, {"leave_own_subset_out", "zscore_columns"},
                   "config.consensus");
        c.leave_own_subset_out = get_or<bool>(cons, "leave_own_subset_out",
                                              false, "config.consensus");
        c.zscore_columns =
            get_or<bool>(cons, "zscore_columns", false, "config.consensus");
    }

    if (j.contains("sweep")) {
        const json& sweep = j.at("sweep");
        check_keys(sweep, {"alpha_list", "k_list", "seed_list"},
                   "config.sweep");
        c.alpha_list = get_or<std::vector<double>>(sweep, "alpha_list",
                                                   c.alpha_list, "config.sweep");
        c.k_list = get_or<std::vector<std::size_t>>(sweep, "k_list", c.k_list,
                                                    "config.sweep");
        c.seed_list = get_or<std::vector<std::uint64_t>>(
            sweep, "seed_list", c.seed_list, "config.sweep");
    }

    c.output_dir = std::filesystem::path(
        get_or<std::string>(j, "output_dir", c.output_dir.string(), "config"));

    c.validate();
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path.string() + "'");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path.string() +
                          "' is not valid JSON: " + e.what());
    }
    return parse_run_config(j);
}

nlohmann::ordered_json run_config_to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    nlohmann::ordered_json data;
    if (c.synthetic) data["synthetic"] = synthetic_to_json(*c.synthetic);
    if (c.files) {
        nlohmann::ordered_json files;
        files["train"] = c.files->train.string();
        if (c.files->test) files["test"] = c.files->test->string();
        data["files"] = std::move(files);
    }
    j["data"] = std::move(data);
    j["k"] = c.k;
    j["t"] = c.t;
    j["stage1_scorer"] = scorer_config_to_json(c.stage1_scorer);
    j["stage2_scorer"] = scorer_config_to_json(c.stage2_scorer);
    j["master_seed"] = c.master_seed;
    j["consensus"] = {{"leave_own_subset_out", c.leave_own_subset_out},
                      {"zscore_columns", c.zscore_columns}};
    j["sweep"] = {{"alpha_list", c.alpha_list},
                  {"k_list", c.k_list},
                  {"seed_list", c.seed_list}};
    j["output_dir"] = c.output_dir.string();
    return j;
}

}  // namespace purifier
