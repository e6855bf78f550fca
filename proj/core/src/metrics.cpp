#include "patchscout/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "patchscout/errors.hpp"

namespace patchscout {

double auc(const std::vector<ScoredLabel>& scored) {
    size_t positives = 0;
    for (const ScoredLabel& s : scored) positives += s.label == 1;
    size_t negatives = scored.size() - positives;
    if (positives == 0 || negatives == 0) {
        throw UndefinedMetricError(
            "AUC needs both classes; got " + std::to_string(positives) +
            " positives and " + std::to_string(negatives) + " negatives");
    }

    std::vector<size_t> order(scored.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return scored[a].score < scored[b].score;
    });

    // Average ranks across tie groups, then the Mann-Whitney U statistic.
    double positive_rank_sum = 0.0;
    size_t at = 0;
    while (at < order.size()) {
        size_t end = at;
        while (end < order.size() &&
               scored[order[end]].score == scored[order[at]].score) {
            ++end;
        }
        double mean_rank = (static_cast<double>(at + 1) + static_cast<double>(end)) / 2.0;
        for (size_t k = at; k < end; ++k) {
            if (scored[order[k]].label == 1) positive_rank_sum += mean_rank;
        }
        at = end;
    }
    double u = positive_rank_sum -
               static_cast<double>(positives) * (static_cast<double>(positives) + 1.0) / 2.0;
    return u / (static_cast<double>(positives) * static_cast<double>(negatives));
}

MetricsReport metrics_from_counts(long tp, long fp, long fn, long tn) {
    MetricsReport r;
    r.tp = tp;
    r.fp = fp;
    r.fn = fn;
    r.tn = tn;

    if (tp + fp > 0) {
        r.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    } else {
        r.precision_defined = false;
    }
    if (tp + fn > 0) {
        r.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    } else {
        r.recall_defined = false;
    }
    if (r.precision_defined && r.recall_defined && r.precision + r.recall > 0.0) {
        r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
    } else {
        r.f1_defined = false;
    }
    double denom = static_cast<double>(tp + fp) * static_cast<double>(tp + fn) *
                   static_cast<double>(tn + fp) * static_cast<double>(tn + fn);
    if (denom > 0.0) {
        r.mcc = (static_cast<double>(tp) * static_cast<double>(tn) -
                 static_cast<double>(fp) * static_cast<double>(fn)) /
                std::sqrt(denom);
    } else {
        r.mcc_defined = false;
    }
    return r;
}

MetricsReport confusion_metrics(const std::vector<ScoredLabel>& scored,
                                double threshold) {
    long tp = 0, fp = 0, tn = 0, fn = 0;
    for (const ScoredLabel& s : scored) {
        bool predicted = s.score >= threshold;
        if (s.label == 1) {
            predicted ? ++tp : ++fn;
        } else {
            predicted ? ++fp : ++tn;
        }
    }
    MetricsReport r = metrics_from_counts(tp, fp, fn, tn);
    r.threshold = threshold;
    return r;
}

EvaluationSummary evaluate_scores(const std::vector<ScoredLabel>& scored,
                                  double default_threshold) {
    EvaluationSummary summary;
    summary.auc = auc(scored);
    summary.at_default = confusion_metrics(scored, default_threshold);

    std::set<double> candidates{default_threshold};
    for (const ScoredLabel& s : scored) candidates.insert(s.score);
    double best_value = -2.0;
    for (double t : candidates) {
        MetricsReport r = confusion_metrics(scored, t);
        double here = r.f1_defined ? r.f1 : -1.0;
        if (here > best_value) {
            summary.at_best_f1 = r;
            best_value = here;
        }
    }
    return summary;
}

std::string format_report(const MetricsReport& r) {
    std::ostringstream out;
    out.precision(4);
    out << std::fixed;
    out << "threshold=" << r.threshold << " tp=" << r.tp << " fp=" << r.fp
        << " fn=" << r.fn << " tn=" << r.tn;
    auto field = [&out](const char* name, double value, bool defined) {
        out << ' ' << name << '=';
        if (defined) {
            out << value;
        } else {
            out << "0.0000(undefined)";
        }
    };
    field("precision", r.precision, r.precision_defined);
    field("recall", r.recall, r.recall_defined);
    field("f1", r.f1, r.f1_defined);
    field("mcc", r.mcc, r.mcc_defined);
    return out.str();
}

} // namespace patchscout
