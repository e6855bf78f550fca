#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "patchscout/errors.hpp"
#include "patchscout/metrics.hpp"

using namespace patchscout;

namespace {

// Quadratic-time AUC straight from the definition: fraction of
// positive/negative pairs ranked correctly, ties worth half.
double pairwise_auc(const std::vector<ScoredLabel>& scored) {
    double wins = 0.0;
    long pairs = 0;
    for (const auto& p : scored) {
        if (p.label != 1) continue;
        for (const auto& n : scored) {
            if (n.label != 0) continue;
            ++pairs;
            if (p.score > n.score) wins += 1.0;
            else if (p.score == n.score) wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

std::vector<ScoredLabel> random_scored(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> score_dist(0.0, 1.0);
    std::uniform_int_distribution<int> label_dist(0, 1);
    std::uniform_int_distribution<int> coarse(0, 4);
    std::vector<ScoredLabel> scored;
    for (int i = 0; i < n; ++i) {
        // Half the time quantize scores so ties actually occur.
        double s = i % 2 ? score_dist(rng) : coarse(rng) / 4.0;
        scored.push_back({s, label_dist(rng)});
    }
    return scored;
}

bool both_classes(const std::vector<ScoredLabel>& scored) {
    bool pos = false, neg = false;
    for (const auto& s : scored) (s.label == 1 ? pos : neg) = true;
    return pos && neg;
}

} // namespace

TEST_CASE("AUC on the pinned examples") {
    CHECK(auc({{0.9, 1}, {0.8, 1}, {0.4, 0}, {0.3, 0}}) == 1.0);
    CHECK(auc({{0.5, 1}, {0.5, 0}}) == 0.5);
    CHECK(auc({{0.9, 1}, {0.4, 1}, {0.8, 0}, {0.3, 0}}) == 0.75);
    CHECK(auc({{0.7, 1}, {0.5, 1}, {0.5, 0}, {0.2, 0}}) == 0.875);
    CHECK(auc({{0.1, 1}, {0.9, 0}}) == 0.0);
}

TEST_CASE("single-class AUC is undefined") {
    CHECK_THROWS_AS(auc({{0.9, 1}, {0.8, 1}}), UndefinedMetricError);
    CHECK_THROWS_AS(auc({{0.9, 0}}), UndefinedMetricError);
    CHECK_THROWS_AS(auc({}), UndefinedMetricError);
}

TEST_CASE("rank AUC agrees with the pairwise definition") {
    std::mt19937_64 rng(31337);
    for (int round = 0; round < 200; ++round) {
        auto scored = random_scored(rng, 2 + round % 40);
        if (!both_classes(scored)) continue;
        CHECK(auc(scored) == doctest::Approx(pairwise_auc(scored)).epsilon(1e-12));
    }
}

TEST_CASE("AUC ignores strictly monotone rescaling") {
    std::mt19937_64 rng(555);
    for (int round = 0; round < 50; ++round) {
        auto scored = random_scored(rng, 3 + round % 30);
        if (!both_classes(scored)) continue;
        double reference = auc(scored);
        auto mapped = scored;
        for (auto& s : mapped) s.score = s.score * s.score * s.score + 2.0 * s.score;
        CHECK(auc(mapped) == doctest::Approx(reference).epsilon(1e-12));
    }
}

TEST_CASE("confusion counts on the pinned example") {
    MetricsReport r = metrics_from_counts(2, 1, 3, 4);
    CHECK(r.precision == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(r.recall == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(r.f1 == 0.5);
    CHECK(r.mcc == doctest::Approx(5.0 / std::sqrt(525.0)).epsilon(1e-12));
    CHECK(r.mcc == doctest::Approx(0.21821789023599236).epsilon(1e-12));
    CHECK(r.precision_defined);
    CHECK(r.mcc_defined);
}

TEST_CASE("perfect predictions max out") {
    MetricsReport r = metrics_from_counts(5, 0, 0, 7);
    CHECK(r.precision == 1.0);
    CHECK(r.recall == 1.0);
    CHECK(r.f1 == 1.0);
    CHECK(r.mcc == 1.0);
}

TEST_CASE("degenerate denominators flag instead of NaN") {
    SUBCASE("no predicted positives") {
        MetricsReport r = metrics_from_counts(0, 0, 3, 4);
        CHECK_FALSE(r.precision_defined);
        CHECK(r.precision == 0.0);
        CHECK_FALSE(r.f1_defined);
        CHECK_FALSE(r.mcc_defined);
        CHECK(r.recall_defined);
        CHECK(r.recall == 0.0);
    }
    SUBCASE("no actual positives") {
        MetricsReport r = metrics_from_counts(0, 2, 0, 4);
        CHECK_FALSE(r.recall_defined);
        CHECK(r.mcc == 0.0);
    }
    SUBCASE("everything zero") {
        MetricsReport r = metrics_from_counts(0, 0, 0, 0);
        CHECK_FALSE(r.precision_defined);
        CHECK_FALSE(r.recall_defined);
        CHECK_FALSE(r.f1_defined);
        CHECK_FALSE(r.mcc_defined);
    }
}

TEST_CASE("threshold splits scores with >= semantics") {
    std::vector<ScoredLabel> scored{{0.5, 1}, {0.49, 1}, {0.5, 0}, {0.2, 0}};
    MetricsReport r = confusion_metrics(scored, 0.5);
    CHECK(r.tp == 1);
    CHECK(r.fn == 1);
    CHECK(r.fp == 1);
    CHECK(r.tn == 1);
    CHECK(r.tp + r.fp + r.tn + r.fn == 4);
}

TEST_CASE("MCC is symmetric under swapping labels with predictions") {
    std::mt19937_64 rng(808);
    std::uniform_int_distribution<long> count(0, 20);
    for (int round = 0; round < 100; ++round) {
        long tp = count(rng), fp = count(rng), fn = count(rng), tn = count(rng);
        MetricsReport a = metrics_from_counts(tp, fp, fn, tn);
        // Swapping y and y-hat together maps TP<->TP, TN<->TN, FP<->FN.
        MetricsReport b = metrics_from_counts(tp, fn, fp, tn);
        if (a.mcc_defined && b.mcc_defined) {
            CHECK(a.mcc == doctest::Approx(b.mcc).epsilon(1e-12));
        }
    }
}

TEST_CASE("true negatives do not move F1") {
    MetricsReport a = metrics_from_counts(3, 2, 4, 1);
    MetricsReport b = metrics_from_counts(3, 2, 4, 100);
    CHECK(a.f1 == doctest::Approx(b.f1).epsilon(1e-12));
}

TEST_CASE("evaluation reports default and best-F1 thresholds") {
    std::vector<ScoredLabel> scored{
        {0.45, 1}, {0.40, 1}, {0.30, 0}, {0.20, 0}, {0.10, 0}};
    EvaluationSummary s = evaluate_scores(scored);
    CHECK(s.auc == 1.0);
    CHECK(s.at_default.threshold == 0.5);
    CHECK(s.at_default.tp == 0);
    CHECK_FALSE(s.at_default.f1_defined);
    CHECK(s.at_best_f1.threshold == doctest::Approx(0.40).epsilon(1e-12));
    CHECK(s.at_best_f1.f1 == 1.0);
}

TEST_CASE("best-F1 threshold never loses to the default") {
    std::mt19937_64 rng(4242);
    for (int round = 0; round < 100; ++round) {
        auto scored = random_scored(rng, 2 + round % 25);
        if (!both_classes(scored)) continue;
        EvaluationSummary s = evaluate_scores(scored);
        double def = s.at_default.f1_defined ? s.at_default.f1 : 0.0;
        double best = s.at_best_f1.f1_defined ? s.at_best_f1.f1 : 0.0;
        CHECK(best >= def);
        CHECK(s.at_best_f1.tp + s.at_best_f1.fp + s.at_best_f1.tn +
                  s.at_best_f1.fn ==
              static_cast<long>(scored.size()));
    }
}

TEST_CASE("reports format with stable field order") {
    MetricsReport r = metrics_from_counts(2, 1, 3, 4);
    r.threshold = 0.5;
    CHECK(format_report(r) ==
          "threshold=0.5000 tp=2 fp=1 fn=3 tn=4 precision=0.6667 recall=0.4000 "
          "f1=0.5000 mcc=0.2182");
    MetricsReport d = metrics_from_counts(0, 0, 3, 4);
    CHECK(format_report(d) ==
          "threshold=0.5000 tp=0 fp=0 fn=3 tn=4 precision=0.0000(undefined) "
          "recall=0.0000 f1=0.0000(undefined) mcc=0.0000(undefined)");
}
