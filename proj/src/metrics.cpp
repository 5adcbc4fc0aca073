#include "purifier/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "purifier/error.hpp"

namespace purifier {

double auroc(std::span<const Label> labels, std::span<const double> scores) {
    const std::size_t n = labels.size();
    if (scores.size() != n) {
        throw AlignmentError("labels and scores lengths differ");
    }
    std::size_t n_anom = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] == Label::Unknown) {
            throw UndefinedMetric("auroc requires known labels");
        }
        if (!std::isfinite(scores[i])) {
            throw UndefinedMetric("auroc requires finite scores");
        }
        if (labels[i] == Label::Anomalous) ++n_anom;
    }
    const std::size_t n_norm = n - n_anom;
    if (n_anom == 0 || n_norm == 0) {
        throw UndefinedMetric(
            "auroc needs at least one normal and one anomalous label");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] < scores[b];
    });

    // Average ranks over tie groups; rank sums stay exactly representable
    // (half-integers), so this matches the pairwise half-credit count
    // digit for digit.
    double anomalous_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double avg_rank =
            (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t r = i; r < j; ++r) {
            if (labels[order[r]] == Label::Anomalous) {
                anomalous_rank_sum += avg_rank;
            }
        }
        i = j;
    }

    const double na = static_cast<double>(n_anom);
    const double u = anomalous_rank_sum - na * (na + 1.0) / 2.0;
    return u / (na * static_cast<double>(n_norm));
}

double contamination_rate(std::span<const std::int64_t> retained_ids,
                          const Dataset& train) {
    if (retained_ids.empty()) {
        throw UndefinedMetric("contamination rate of an empty set is undefined");
    }
    std::size_t anomalous = 0;
    for (std::int64_t id : retained_ids) {
        const Sample& s = train[train.index_of(id)];
        if (s.label == Label::Unknown) {
            throw UndefinedMetric("sample " + std::to_string(id) +
                                  " has unknown ground truth");
        }
        if (s.label == Label::Anomalous) ++anomalous;
    }
    return static_cast<double>(anomalous) /
           static_cast<double>(retained_ids.size());
}

PurityBreakdown purity_breakdown(const PurifiedSet& pure,
                                 const Dataset& train) {
    PurityBreakdown breakdown;
    std::size_t cursor = 0;  // retained_ids and dataset ids are both ascending
    for (const Sample& s : train.samples()) {
        if (s.label == Label::Unknown) {
            throw UndefinedMetric("sample " + std::to_string(s.id) +
                                  " has unknown ground truth");
        }
        while (cursor < pure.retained_ids.size() &&
               pure.retained_ids[cursor] < s.id) {
            ++cursor;
        }
        const bool retained = cursor < pure.retained_ids.size() &&
                              pure.retained_ids[cursor] == s.id;
        if (retained) {
            if (s.label == Label::Anomalous) ++breakdown.retained_anomalous;
            else ++breakdown.retained_normal;
        } else {
            if (s.label == Label::Anomalous) ++breakdown.discarded_anomalous;
            else ++breakdown.discarded_normal;
        }
    }
    return breakdown;
}

}  // namespace purifier
