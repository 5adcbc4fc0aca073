#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>

#include "purifier/datagen.hpp"
#include "purifier/dataset_io.hpp"
#include "purifier/detect.hpp"
#include "purifier/error.hpp"
#include "purifier/harness.hpp"
#include "purifier/metrics.hpp"
#include "purifier/parallel.hpp"
#include "purifier/screening.hpp"

namespace py = pybind11;
using namespace purifier;

namespace {

Dataset make_dataset(const std::vector<std::vector<double>>& features,
                     const std::optional<std::vector<int>>& labels,
                     DatasetRole role) {
    std::vector<Sample> samples;
    samples.reserve(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        Label label = Label::Unknown;
        if (labels) {
            const int value = (*labels)[i];
            if (value != 0 && value != 1 && value != -1) {
                throw ConfigError("labels must be 0, 1 or -1");
            }
            label = static_cast<Label>(value);
        }
        samples.push_back(
            Sample{static_cast<std::int64_t>(i), features[i], label});
    }
    return Dataset(std::move(samples), role);
}

}  // namespace

PYBIND11_MODULE(_purifier, m) {
    m.doc() =
        "Two-stage training-set purification for fully unsupervised anomaly "
        "detection: subset partitioning, cross-model consensus scoring, "
        "quantile thresholding, and pluggable scorers.";

    py::register_exception<Error>(m, "PurifierError");

    py::enum_<Label>(m, "Label")
        .value("Normal", Label::Normal)
        .value("Anomalous", Label::Anomalous)
        .value("Unknown", Label::Unknown);

    py::enum_<DatasetRole>(m, "DatasetRole")
        .value("Train", DatasetRole::Train)
        .value("Test", DatasetRole::Test);

    py::enum_<ScorerKind>(m, "ScorerKind")
        .value("Knn", ScorerKind::Knn)
        .value("Pca", ScorerKind::Pca)
        .value("Mahalanobis", ScorerKind::Mahalanobis);

    py::class_<Sample>(m, "Sample")
        .def(py::init([](std::int64_t id, std::vector<double> features,
                         Label label) {
                 return Sample{id, std::move(features), label};
             }),
             py::arg("id"), py::arg("features"),
             py::arg("label") = Label::Unknown)
        .def_readwrite("id", &Sample::id)
        .def_readwrite("features", &Sample::features)
        .def_readwrite("label", &Sample::label);

    py::class_<Dataset>(m, "Dataset")
        .def(py::init<std::vector<Sample>, DatasetRole>(), py::arg("samples"),
             py::arg("role") = DatasetRole::Train)
        .def_static("from_features", &make_dataset, py::arg("features"),
                    py::arg("labels") = std::nullopt,
                    py::arg("role") = DatasetRole::Train,
                    "Build a dataset with ids 0..n-1 from raw feature rows.")
        .def_property_readonly("dim", &Dataset::dim)
        .def_property_readonly("role", &Dataset::role)
        .def("__len__", &Dataset::size)
        .def("__getitem__",
             [](const Dataset& d, std::size_t i) {
                 if (i >= d.size()) throw py::index_error();
                 return d[i];
             })
        .def_property_readonly("samples", &Dataset::samples)
        .def("labels", [](const Dataset& d) {
            std::vector<int> out;
            out.reserve(d.size());
            for (const Sample& s : d.samples())
                out.push_back(static_cast<int>(s.label));
            return out;
        });

    py::class_<PartitionPlan>(m, "PartitionPlan")
        .def_readonly("k", &PartitionPlan::k)
        .def_readonly("assignment", &PartitionPlan::assignment)
        .def_readonly("seed", &PartitionPlan::seed);

    m.def("partition_dataset", &partition_dataset, py::arg("dataset"),
          py::arg("k"), py::arg("seed"));

    m.def(
        "compute_threshold",
        [](const std::vector<double>& scores, double t) {
            return compute_threshold(ConsensusScores(scores), t);
        },
        py::arg("scores"), py::arg("t"),
        "Nearest-rank quantile: the max(1, floor(t*N))-th smallest score.");

    py::class_<PurifiedSet>(m, "PurifiedSet")
        .def(py::init([](std::vector<std::int64_t> ids, double tau, double t) {
                 return PurifiedSet{std::move(ids), tau, t};
             }),
             py::arg("retained_ids"), py::arg("tau") = 0.0, py::arg("t") = 1.0)
        .def_readonly("retained_ids", &PurifiedSet::retained_ids)
        .def_readonly("tau", &PurifiedSet::tau)
        .def_readonly("t", &PurifiedSet::t);

    m.def(
        "select_pure",
        [](const Dataset& dataset, const std::vector<double>& scores, double t) {
            return select_pure(dataset, ConsensusScores(scores), t);
        },
        py::arg("dataset"), py::arg("scores"), py::arg("t"));

    py::class_<ScorerConfig>(m, "ScorerConfig")
        .def(py::init([](ScorerKind kind, int knn_neighbors, int pca_components,
                         double pca_variance, double mahalanobis_ridge,
                         std::uint64_t seed) {
                 ScorerConfig c{kind, knn_neighbors, pca_components,
                                pca_variance, mahalanobis_ridge, seed};
                 c.validate();
                 return c;
             }),
             py::arg("kind") = ScorerKind::Knn, py::arg("knn_neighbors") = 3,
             py::arg("pca_components") = 0, py::arg("pca_variance") = 0.90,
             py::arg("mahalanobis_ridge") = 1e-6, py::arg("seed") = 0)
        .def_readwrite("kind", &ScorerConfig::kind)
        .def_readwrite("knn_neighbors", &ScorerConfig::knn_neighbors)
        .def_readwrite("pca_components", &ScorerConfig::pca_components)
        .def_readwrite("pca_variance", &ScorerConfig::pca_variance)
        .def_readwrite("mahalanobis_ridge", &ScorerConfig::mahalanobis_ridge)
        .def_readwrite("seed", &ScorerConfig::seed);

    py::class_<FittedScorer>(m, "FittedScorer")
        .def_property_readonly("kind", &FittedScorer::kind)
        .def_property_readonly("dim", &FittedScorer::dim)
        .def_property_readonly("fitted_size", &FittedScorer::fitted_size)
        .def_property_readonly("train_subset_index",
                               &FittedScorer::train_subset_index)
        .def("score",
             [](const FittedScorer& f, const std::vector<double>& features) {
                 return f.score(std::span<const double>(features));
             },
             py::arg("features"))
        .def("score_batch",
             [](const FittedScorer& f, const Dataset& dataset,
                std::size_t threads) { return f.score_batch(dataset, threads); },
             py::arg("dataset"), py::arg("threads") = 1)
        .def("representation",
             [](const FittedScorer& f, const std::vector<double>& features) {
                 return f.representation(std::span<const double>(features));
             },
             py::arg("features"));

    m.def(
        "fit_scorer",
        [](const ScorerConfig& config, const Dataset& dataset) {
            return fit_scorer(config, dataset.samples());
        },
        py::arg("config"), py::arg("dataset"),
        "Fit a scorer on every sample of the dataset; labels are ignored.");

    py::class_<ScoreMatrix>(m, "ScoreMatrix")
        .def_property_readonly("rows", &ScoreMatrix::rows)
        .def_property_readonly("cols", &ScoreMatrix::cols)
        .def_property_readonly("values", &ScoreMatrix::values)
        .def("at", &ScoreMatrix::at, py::arg("i"), py::arg("j"))
        .def("column", &ScoreMatrix::column, py::arg("j"));

    m.def("train_submodels", &train_submodels, py::arg("dataset"),
          py::arg("plan"), py::arg("config"), py::arg("threads") = 1);
    m.def("build_score_matrix", &build_score_matrix, py::arg("submodels"),
          py::arg("dataset"), py::arg("threads") = 1);
    m.def(
        "consensus",
        [](const ScoreMatrix& matrix) { return consensus(matrix).values(); },
        py::arg("matrix"));
    m.def("cross_model_divergence", &cross_model_divergence,
          py::arg("submodels"), py::arg("plan"), py::arg("dataset"),
          py::arg("sample_index"));

    py::class_<Stage1Options>(m, "Stage1Options")
        .def(py::init([](std::size_t k, double t, ScorerConfig scorer,
                         std::uint64_t master_seed, bool leave_own_subset_out,
                         bool zscore_columns, std::size_t threads) {
                 return Stage1Options{k, t, scorer, master_seed,
                                      leave_own_subset_out, zscore_columns,
                                      threads};
             }),
             py::arg("k") = 5, py::arg("t") = 0.40,
             py::arg("scorer") = ScorerConfig{},
             py::arg("master_seed") = 0,
             py::arg("leave_own_subset_out") = false,
             py::arg("zscore_columns") = false, py::arg("threads") = 1)
        .def_readwrite("k", &Stage1Options::k)
        .def_readwrite("t", &Stage1Options::t)
        .def_readwrite("scorer", &Stage1Options::scorer)
        .def_readwrite("master_seed", &Stage1Options::master_seed)
        .def_readwrite("leave_own_subset_out",
                       &Stage1Options::leave_own_subset_out)
        .def_readwrite("zscore_columns", &Stage1Options::zscore_columns)
        .def_readwrite("threads", &Stage1Options::threads);

    py::class_<Stage1Result>(m, "Stage1Result")
        .def_readonly("plan", &Stage1Result::plan)
        .def_readonly("matrix", &Stage1Result::matrix)
        .def_property_readonly(
            "consensus",
            [](const Stage1Result& r) { return r.consensus.values(); })
        .def_readonly("pure", &Stage1Result::pure)
        .def_readonly("per_model_pure", &Stage1Result::per_model_pure);

    m.def("run_stage1", &run_stage1, py::arg("dataset"), py::arg("options"));

    py::class_<DetectionResult::FinalModelSummary>(m, "FinalModelSummary")
        .def_readonly("kind", &DetectionResult::FinalModelSummary::kind)
        .def_readonly("train_size",
                      &DetectionResult::FinalModelSummary::train_size);

    py::class_<DetectionResult>(m, "DetectionResult")
        .def_readonly("test_scores", &DetectionResult::test_scores)
        .def_readonly("final_model", &DetectionResult::final_model)
        .def_readonly("trainset_id_list", &DetectionResult::trainset_id_list);

    m.def("run_stage2", &run_stage2, py::arg("train"), py::arg("pure"),
          py::arg("test"), py::arg("config"), py::arg("seed") = 0,
          py::arg("threads") = 1);

    m.def(
        "auroc",
        [](const std::vector<int>& labels, const std::vector<double>& scores) {
            std::vector<Label> typed;
            typed.reserve(labels.size());
            for (int v : labels) {
                if (v != 0 && v != 1 && v != -1) {
                    throw UndefinedMetric("labels must be 0, 1 or -1");
                }
                typed.push_back(static_cast<Label>(v));
            }
            return auroc(typed, scores);
        },
        py::arg("labels"), py::arg("scores"),
        "Rank-based AUROC (ties get half credit); labels 0=normal, "
        "1=anomalous.");

    m.def(
        "contamination_rate",
        [](const std::vector<std::int64_t>& ids, const Dataset& train) {
            return contamination_rate(ids, train);
        },
        py::arg("retained_ids"), py::arg("train"));

    py::class_<PurityBreakdown>(m, "PurityBreakdown")
        .def_readonly("retained_normal", &PurityBreakdown::retained_normal)
        .def_readonly("retained_anomalous",
                      &PurityBreakdown::retained_anomalous)
        .def_readonly("discarded_normal", &PurityBreakdown::discarded_normal)
        .def_readonly("discarded_anomalous",
                      &PurityBreakdown::discarded_anomalous);

    m.def("purity_breakdown", &purity_breakdown, py::arg("pure"),
          py::arg("train"));

    py::class_<SyntheticConfig>(m, "SyntheticConfig")
        .def(py::init([](std::size_t n_train, double alpha,
                         std::size_t n_test_normal, std::size_t n_test_anomalous,
                         std::size_t dim, double normal_spread,
                         std::size_t anomaly_modes, double anomaly_radius_min,
                         double anomaly_radius_max, double anomaly_mode_spread,
                         std::uint64_t seed) {
                 SyntheticConfig c{n_train,
                                   alpha,
                                   n_test_normal,
                                   n_test_anomalous,
                                   dim,
                                   normal_spread,
                                   anomaly_modes,
                                   anomaly_radius_min,
                                   anomaly_radius_max,
                                   anomaly_mode_spread,
                                   seed};
                 c.validate();
                 return c;
             }),
             py::arg("n_train") = 500, py::arg("alpha") = 0.1,
             py::arg("n_test_normal") = 500, py::arg("n_test_anomalous") = 500,
             py::arg("dim") = 8, py::arg("normal_spread") = 0.5,
             py::arg("anomaly_modes") = 32, py::arg("anomaly_radius_min") = 3.0,
             py::arg("anomaly_radius_max") = 6.0,
             py::arg("anomaly_mode_spread") = 0.3, py::arg("seed") = 0)
        .def_readwrite("n_train", &SyntheticConfig::n_train)
        .def_readwrite("alpha", &SyntheticConfig::alpha)
        .def_readwrite("n_test_normal", &SyntheticConfig::n_test_normal)
        .def_readwrite("n_test_anomalous", &SyntheticConfig::n_test_anomalous)
        .def_readwrite("dim", &SyntheticConfig::dim)
        .def_readwrite("normal_spread", &SyntheticConfig::normal_spread)
        .def_readwrite("anomaly_modes", &SyntheticConfig::anomaly_modes)
        .def_readwrite("anomaly_radius_min",
                       &SyntheticConfig::anomaly_radius_min)
        .def_readwrite("anomaly_radius_max",
                       &SyntheticConfig::anomaly_radius_max)
        .def_readwrite("anomaly_mode_spread",
                       &SyntheticConfig::anomaly_mode_spread)
        .def_readwrite("seed", &SyntheticConfig::seed);

    py::class_<GeneratedData>(m, "GeneratedData")
        .def_readonly("train", &GeneratedData::train)
        .def_readonly("test", &GeneratedData::test)
        .def_readonly("mode_centers", &GeneratedData::mode_centers);

    m.def("generate", &generate, py::arg("config"));

    m.def(
        "write_dataset_csv",
        [](const Dataset& dataset, const std::filesystem::path& path) {
            write_dataset_csv(dataset, path);
        },
        py::arg("dataset"), py::arg("path"));
    m.def(
        "read_dataset_csv",
        [](const std::filesystem::path& path, DatasetRole role) {
            return read_dataset_csv(path, role);
        },
        py::arg("path"), py::arg("role") = DatasetRole::Train);

    m.attr("__version__") = "0.1.0";
}
