#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "json_file_io.hpp"
#include "purifier/dataset_io.hpp"
#include "purifier/detect.hpp"
#include "purifier/error.hpp"
#include "purifier/harness.hpp"
#include "purifier/metrics.hpp"
#include "purifier/parallel.hpp"
#include "purifier/screening.hpp"

namespace purifier {

namespace {

using nlohmann::ordered_json;

// Shortest round-trip form; keeps sweep keys like 0.1 readable.
std::string format_short(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

std::string format_mean(double value) {
    return format_double(value);
}

SweepRow run_triple(const RunConfig& config, double alpha, std::size_t k,
                    std::uint64_t seed) {
    SyntheticConfig syn = *config.synthetic;
    syn.alpha = alpha;
    syn.seed = seed;
    GeneratedData data = generate(syn);

    Stage1Options options;
    options.k = k;
    options.t = config.t;
    options.scorer = config.stage1_scorer;
    options.master_seed = seed;
    options.leave_own_subset_out = config.leave_own_subset_out;
    options.zscore_columns = config.zscore_columns;
    options.threads = 1;  // parallelism lives at the triple level
    Stage1Result stage1 = run_stage1(data.train, options);

    SweepRow row;
    row.alpha = alpha;
    row.k = k;
    row.seed = seed;
    row.contamination =
        contamination_rate(stage1.pure.retained_ids, data.train);
    const PurityBreakdown consensus_breakdown =
        purity_breakdown(stage1.pure, data.train);
    row.retained_normal = consensus_breakdown.retained_normal;
    row.retained_anomalous = consensus_breakdown.retained_anomalous;
    row.discarded_normal = consensus_breakdown.discarded_normal;
    row.discarded_anomalous = consensus_breakdown.discarded_anomalous;

    double sum_normal = 0.0, sum_anomalous = 0.0;
    for (const PurifiedSet& p : stage1.per_model_pure) {
        const PurityBreakdown b = purity_breakdown(p, data.train);
        row.submodel_breakdowns.push_back(
            {b.retained_normal, b.retained_anomalous, b.discarded_normal,
             b.discarded_anomalous});
        sum_normal += static_cast<double>(b.retained_normal);
        sum_anomalous += static_cast<double>(b.retained_anomalous);
    }
    row.submodel_mean_retained_normal =
        sum_normal / static_cast<double>(stage1.per_model_pure.size());
    row.submodel_mean_retained_anomalous =
        sum_anomalous / static_cast<double>(stage1.per_model_pure.size());

    std::vector<Label> test_labels;
    test_labels.reserve(data.test.size());
    for (const Sample& s : data.test.samples()) test_labels.push_back(s.label);

    DetectionResult purified_run = run_stage2(
        data.train, stage1.pure, data.test, config.stage2_scorer, seed, 1);
    row.stage2_auroc = auroc(test_labels, purified_run.test_scores);

    PurifiedSet full;
    full.t = 1.0;
    full.tau = 0.0;
    for (const Sample& s : data.train.samples()) {
        full.retained_ids.push_back(s.id);
    }
    DetectionResult baseline_run = run_stage2(
        data.train, full, data.test, config.stage2_scorer, seed, 1);
    row.baseline_auroc = auroc(test_labels, baseline_run.test_scores);

    return row;
}

void write_sweep_csv(const SweepReport& report,
                     const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot open '" + path.string() + "' for writing");
    }
    out << "alpha,k,seed,contamination_rate,retained_normal,"
           "retained_anomalous,discarded_normal,discarded_anomalous,"
           "submodel_mean_retained_normal,submodel_mean_retained_anomalous,"
           "stage2_auroc,baseline_auroc\n";
    for (const SweepRow& row : report.rows) {
        out << format_short(row.alpha) << ',' << row.k << ',' << row.seed << ','
            << format_mean(row.contamination) << ',' << row.retained_normal
            << ',' << row.retained_anomalous << ',' << row.discarded_normal
            << ',' << row.discarded_anomalous << ','
            << format_mean(row.submodel_mean_retained_normal) << ','
            << format_mean(row.submodel_mean_retained_anomalous) << ','
            << format_mean(row.stage2_auroc) << ','
            << format_mean(row.baseline_auroc) << "\n";
    }
}

void write_submodels_csv(const SweepReport& report,
                         const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot open '" + path.string() + "' for writing");
    }
    out << "alpha,k,seed,submodel,retained_normal,retained_anomalous,"
           "discarded_normal,discarded_anomalous\n";
    for (const SweepRow& row : report.rows) {
        for (std::size_t j = 0; j < row.submodel_breakdowns.size(); ++j) {
            const auto& b = row.submodel_breakdowns[j];
            out << format_short(row.alpha) << ',' << row.k << ',' << row.seed
                << ',' << j << ',' << b[0] << ',' << b[1] << ',' << b[2] << ','
                << b[3] << "\n";
        }
    }
}

struct CellAggregate {
    std::size_t seeds = 0;
    double contamination = 0.0;
    double consensus_retained_normal = 0.0;
    double consensus_retained_anomalous = 0.0;
    double submodel_retained_normal = 0.0;
    double submodel_retained_anomalous = 0.0;
    double stage2_auroc = 0.0;
    double baseline_auroc = 0.0;
};

std::map<std::pair<double, std::size_t>, CellAggregate> aggregate_cells(
    const SweepReport& report) {
    std::map<std::pair<double, std::size_t>, CellAggregate> cells;
    for (const SweepRow& row : report.rows) {
        CellAggregate& cell = cells[{row.alpha, row.k}];
        ++cell.seeds;
        cell.contamination += row.contamination;
        cell.consensus_retained_normal +=
            static_cast<double>(row.retained_normal);
        cell.consensus_retained_anomalous +=
            static_cast<double>(row.retained_anomalous);
        cell.submodel_retained_normal += row.submodel_mean_retained_normal;
        cell.submodel_retained_anomalous +=
            row.submodel_mean_retained_anomalous;
        cell.stage2_auroc += row.stage2_auroc;
        cell.baseline_auroc += row.baseline_auroc;
    }
    for (auto& [key, cell] : cells) {
        const auto n = static_cast<double>(cell.seeds);
        cell.contamination /= n;
        cell.consensus_retained_normal /= n;
        cell.consensus_retained_anomalous /= n;
        cell.submodel_retained_normal /= n;
        cell.submodel_retained_anomalous /= n;
        cell.stage2_auroc /= n;
        cell.baseline_auroc /= n;
    }
    return cells;
}

void write_summary_json(const RunConfig& config, const SweepReport& report,
                        const std::filesystem::path& path) {
    const auto cells = aggregate_cells(report);
    ordered_json j;
    j["schema_version"] = 1;
    j["command"] = "ablate";
    j["config"] = run_config_to_json(config);
    j["rows"] = report.rows.size();
    ordered_json out_cells = ordered_json::array();
    for (const auto& [key, cell] : cells) {
        ordered_json c;
        c["alpha"] = key.first;
        c["k"] = key.second;
        c["seeds"] = cell.seeds;
        c["mean_contamination"] = cell.contamination;
        c["mean_retained_normal_consensus"] = cell.consensus_retained_normal;
        c["mean_retained_anomalous_consensus"] =
            cell.consensus_retained_anomalous;
        c["mean_retained_normal_submodel"] = cell.submodel_retained_normal;
        c["mean_retained_anomalous_submodel"] =
            cell.submodel_retained_anomalous;
        c["mean_stage2_auroc"] = cell.stage2_auroc;
        c["mean_baseline_auroc"] = cell.baseline_auroc;
        out_cells.push_back(std::move(c));
    }
    j["cells"] = std::move(out_cells);
    detail::write_json_file(j, path);
}

// Minimal line chart; one file per alpha, counts vs. k, consensus dashed
// against sub-model mean solid.
void write_chart_svg(const RunConfig& config, const SweepReport& report,
                     double alpha, const std::filesystem::path& path) {
    std::vector<std::size_t> ks = config.k_list;
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

    const auto cells = aggregate_cells(report);
    struct SeriesPoint {
        double consensus_anomalous, submodel_anomalous;
        double consensus_normal, submodel_normal;
    };
    std::vector<SeriesPoint> points;
    double max_count = 1.0;
    for (std::size_t kk : ks) {
        const auto it = cells.find({alpha, kk});
        if (it == cells.end()) continue;
        const CellAggregate& cell = it->second;
        points.push_back({cell.consensus_retained_anomalous,
                          cell.submodel_retained_anomalous,
                          cell.consensus_retained_normal,
                          cell.submodel_retained_normal});
        max_count = std::max(
            {max_count, cell.consensus_retained_anomalous,
             cell.submodel_retained_anomalous, cell.consensus_retained_normal,
             cell.submodel_retained_normal});
    }
    if (points.empty()) return;

    const double width = 560, height = 360;
    const double left = 60, right = 20, top = 36, bottom = 48;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    auto x_at = [&](std::size_t i) {
        if (points.size() == 1) return left + plot_w / 2;
        return left + plot_w * static_cast<double>(i) /
                          static_cast<double>(points.size() - 1);
    };
    auto y_at = [&](double count) {
        return top + plot_h * (1.0 - count / max_count);
    };

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot open '" + path.string() + "' for writing");
    }
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
        << height << "\">\n";
    out << "  <text x=\"" << left << "\" y=\"20\" font-family=\"sans-serif\" "
        << "font-size=\"14\">retained counts vs k (alpha="
        << format_short(alpha) << ", mean over " << config.seed_list.size()
        << " seeds)</text>\n";
    out << "  <line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\""
        << left + plot_w << "\" y2=\"" << top + plot_h
        << "\" stroke=\"black\"/>\n";
    out << "  <line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
        << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        out << "  <text x=\"" << x_at(i) << "\" y=\"" << top + plot_h + 18
            << "\" font-family=\"sans-serif\" font-size=\"11\" "
            << "text-anchor=\"middle\">k=" << ks[i] << "</text>\n";
    }
    out << "  <text x=\"" << left - 8 << "\" y=\"" << y_at(max_count) + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\" "
        << "text-anchor=\"end\">" << format_short(max_count) << "</text>\n";
    out << "  <text x=\"" << left - 8 << "\" y=\"" << y_at(0.0) + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\" "
        << "text-anchor=\"end\">0</text>\n";

    struct SeriesSpec {
        const char* name;
        const char* color;
        bool dashed;
        double SeriesPoint::* member;
    };
    const SeriesSpec series[] = {
        {"anomalous (consensus)", "#c0392b", true,
         &SeriesPoint::consensus_anomalous},
        {"anomalous (sub-model mean)", "#c0392b", false,
         &SeriesPoint::submodel_anomalous},
        {"normal (consensus)", "#1e8449", true,
         &SeriesPoint::consensus_normal},
        {"normal (sub-model mean)", "#1e8449", false,
         &SeriesPoint::submodel_normal},
    };
    for (std::size_t s = 0; s < 4; ++s) {
        out << "  <polyline fill=\"none\" stroke=\"" << series[s].color
            << "\" stroke-width=\"2\"";
        if (series[s].dashed) out << " stroke-dasharray=\"6 4\"";
        out << " points=\"";
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (i) out << ' ';
            out << format_short(x_at(i)) << ','
                << format_short(y_at(points[i].*(series[s].member)));
        }
        out << "\"/>\n";
        const double ly = top + 14 * static_cast<double>(s);
        out << "  <line x1=\"" << left + plot_w - 170 << "\" y1=\"" << ly
            << "\" x2=\"" << left + plot_w - 150 << "\" y2=\"" << ly
            << "\" stroke=\"" << series[s].color << "\" stroke-width=\"2\"";
        if (series[s].dashed) out << " stroke-dasharray=\"6 4\"";
        out << "/>\n";
        out << "  <text x=\"" << left + plot_w - 144 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"10\">"
            << series[s].name << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace

SweepReport run_sweep(const RunConfig& config, std::size_t threads) {
    if (!config.synthetic) {
        throw ConfigError("ablate requires a synthetic data source");
    }

    struct Triple {
        double alpha;
        std::size_t k;
        std::uint64_t seed;
    };
    std::vector<Triple> triples;
    std::vector<double> alphas = config.alpha_list;
    std::vector<std::size_t> ks = config.k_list;
    std::vector<std::uint64_t> seeds = config.seed_list;
    std::sort(alphas.begin(), alphas.end());
    std::sort(ks.begin(), ks.end());
    std::sort(seeds.begin(), seeds.end());
    alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    for (double alpha : alphas)
        for (std::size_t kk : ks)
            for (std::uint64_t seed : seeds) triples.push_back({alpha, kk, seed});

    SweepReport report;
    report.rows.resize(triples.size());
    // Collected per index so the reported failure is the first triple in
    // report order, independent of scheduling.
    std::vector<std::pair<std::string, std::string>> failures(triples.size());
    parallel_for(triples.size(), threads,
                 [&](std::size_t begin, std::size_t end) {
                     for (std::size_t i = begin; i < end; ++i) {
                         try {
                             report.rows[i] =
                                 run_triple(config, triples[i].alpha,
                                            triples[i].k, triples[i].seed);
                         } catch (const Error& e) {
                             failures[i] = {e.category(), e.what()};
                         }
                     }
                 });
    for (std::size_t i = 0; i < triples.size(); ++i) {
        if (!failures[i].first.empty()) {
            throw Error(failures[i].first,
                        "sweep triple (alpha=" + format_short(triples[i].alpha) +
                            ", k=" + std::to_string(triples[i].k) + ", seed=" +
                            std::to_string(triples[i].seed) +
                            ") failed: " + failures[i].second);
        }
    }
    return report;
}

SweepReport cmd_ablate(const RunConfig& config,
                       const std::filesystem::path& out_dir,
                       std::size_t threads, bool emit_svg) {
    SweepReport report = run_sweep(config, threads);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw ConfigError("cannot create output directory '" +
                          out_dir.string() + "': " + ec.message());
    }
    write_sweep_csv(report, out_dir / "sweep.csv");
    write_submodels_csv(report, out_dir / "submodels.csv");
    write_summary_json(config, report, out_dir / "summary.json");
    if (emit_svg) {
        std::vector<double> alphas = config.alpha_list;
        std::sort(alphas.begin(), alphas.end());
        alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
        for (double alpha : alphas) {
            write_chart_svg(config, report, alpha,
                            out_dir / ("retained_vs_k_alpha" +
                                       format_short(alpha) + ".svg"));
        }
    }
    return report;
}

}  // namespace purifier
