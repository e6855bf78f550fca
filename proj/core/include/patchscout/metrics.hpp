#pragma once

#include <string>
#include <vector>

namespace patchscout {

struct ScoredLabel {
    double score = 0.0;
    int label = 0; // 1 positive, 0 negative
};

// Rank-based (Mann-Whitney) AUC. Tied positive/negative scores count half a
// win. Throws UndefinedMetricError unless both classes are present.
double auc(const std::vector<ScoredLabel>& scored);

// Threshold metrics. Prediction is positive iff score >= threshold. A
// metric with a zero denominator reports 0 and clears its `defined` flag
// instead of propagating a NaN.
struct MetricsReport {
    double threshold = 0.5;
    long tp = 0;
    long fp = 0;
    long tn = 0;
    long fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double mcc = 0.0;
    bool precision_defined = true;
    bool recall_defined = true;
    bool f1_defined = true;
    bool mcc_defined = true;
};

MetricsReport metrics_from_counts(long tp, long fp, long fn, long tn);

MetricsReport confusion_metrics(const std::vector<ScoredLabel>& scored,
                                double threshold);

// Both reports the eval command prints: the fixed default threshold and the
// best-F1 threshold found by sweeping the observed scores (0.5 is always a
// candidate, so best.f1 >= at_default.f1). Ties go to the lowest threshold.
struct EvaluationSummary {
    double auc = 0.0;
    MetricsReport at_default;
    MetricsReport at_best_f1;
};

EvaluationSummary evaluate_scores(const std::vector<ScoredLabel>& scored,
                                  double default_threshold = 0.5);

std::string format_report(const MetricsReport& report);

} // namespace patchscout
