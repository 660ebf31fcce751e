#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <doctest.h>

#include "nids/errors.hpp"
#include "nids/metrics.hpp"
#include "nids/rng.hpp"
#include "oracles.hpp"

using namespace nids;

namespace {

bool opt_close(const std::optional<double>& a, const std::optional<double>& b, double tol) {
    if (a.has_value() != b.has_value()) return false;
    if (!a) return true;
    return std::fabs(*a - *b) <= tol;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("confusion: counts, totals, and input validation") {
    const std::vector<int> y_true = {0, 0, 1, 2, 2, 2};
    const std::vector<int> y_pred = {0, 1, 1, 2, 0, 2};
    const ConfusionMatrix cm = confusion(y_true, y_pred, 3, 2);
    CHECK(cm.at(0, 0) == 1);
    CHECK(cm.at(0, 1) == 1);
    CHECK(cm.at(2, 2) == 2);
    CHECK(cm.at(2, 0) == 1);
    CHECK(cm.total() == 6);
    CHECK(cm.row_total(2) == 3);
    CHECK(cm.col_total(0) == 2);

    const std::vector<int> short_pred = {0};
    CHECK_THROWS_AS(confusion(y_true, short_pred, 3, 2), LengthMismatchError);
    const std::vector<int> bad = {0, 0, 1, 2, 2, 3};
    CHECK_THROWS_AS(confusion(bad, y_pred, 3, 2), OutOfRangeClassError);
    CHECK_THROWS_AS(confusion(y_true, y_pred, 3, 5), OutOfRangeClassError);
}

TEST_CASE("overall metrics match the brute-force recount on random data") {
    Rng rng(404);
    for (int trial = 0; trial < 30; ++trial) {
        const int k = 2 + static_cast<int>(rng.next_below(6));
        const int n = 5 + static_cast<int>(rng.next_below(100));
        const int normal = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k)));
        std::vector<int> y_true, y_pred;
        for (int i = 0; i < n; ++i) {
            y_true.push_back(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k))));
            y_pred.push_back(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k))));
        }
        const OverallMetrics got = overall_metrics(confusion(y_true, y_pred, k, normal));
        const oracle::BruteOverall want = oracle::brute_overall(y_true, y_pred, normal);
        CHECK(std::fabs(got.accuracy - want.accuracy) <= 1e-12);
        CHECK(opt_close(got.detection_rate, want.detection_rate, 1e-12));
        CHECK(opt_close(got.precision, want.precision, 1e-12));
        CHECK(opt_close(got.recall, want.recall, 1e-12));
        CHECK(opt_close(got.f1, want.f1, 1e-12));
        CHECK(opt_close(got.far, want.far, 1e-12));
    }
}

TEST_CASE("zero denominators yield absent metrics, not zeros") {
    // All records normal: no true attacks, nothing predicted as attack.
    const std::vector<int> all_normal = {1, 1, 1};
    const OverallMetrics m = overall_metrics(confusion(all_normal, all_normal, 2, 1));
    CHECK(m.accuracy == 1.0);
    CHECK_FALSE(m.detection_rate.has_value());
    CHECK_FALSE(m.precision.has_value());
    CHECK_FALSE(m.f1.has_value());
    REQUIRE(m.far.has_value());
    CHECK(*m.far == 0.0);

    // All records attacks: FAR has no denominator.
    const std::vector<int> all_attack = {0, 0};
    const OverallMetrics a = overall_metrics(confusion(all_attack, all_attack, 2, 1));
    CHECK_FALSE(a.far.has_value());
    REQUIRE(a.detection_rate.has_value());
    CHECK(*a.detection_rate == 1.0);

    const ConfusionMatrix empty = confusion(std::vector<int>{}, std::vector<int>{}, 2, 1);
    CHECK_THROWS_AS(overall_metrics(empty), EmptyMatrixError);
}

TEST_CASE("per-class metrics match the brute-force recount") {
    Rng rng(405);
    const int k = 4, n = 60;
    std::vector<int> y_true, y_pred;
    for (int i = 0; i < n; ++i) {
        y_true.push_back(static_cast<int>(rng.next_below(k)));
        y_pred.push_back(static_cast<int>(rng.next_below(k)));
    }
    const std::vector<PerClassMetrics> got = per_class_metrics(confusion(y_true, y_pred, k, 3));
    REQUIRE(got.size() == 4);
    for (int c = 0; c < k; ++c) {
        const oracle::BrutePerClass want = oracle::brute_per_class(y_true, y_pred, c);
        CHECK(got[static_cast<std::size_t>(c)].cls == c);
        CHECK(std::fabs(got[static_cast<std::size_t>(c)].accuracy - want.accuracy) <= 1e-12);
        CHECK(opt_close(got[static_cast<std::size_t>(c)].detection_rate, want.detection_rate,
                        1e-12));
    }
}

TEST_CASE("argmax_rows: first maximum wins ties") {
    const Tensor2 scores(3, 3, {0.2, 0.5, 0.3,
                                0.4, 0.4, 0.2,
                                0.1, 0.2, 0.7});
    CHECK(argmax_rows(scores) == std::vector<int>{1, 0, 2});
}

TEST_CASE("roc: known tiny curve and endpoints") {
    // Scores for class 1; positives at rows 0,1, negatives at rows 2,3.
    const Tensor2 scores(4, 2, {0.1, 0.9,
                                0.4, 0.6,
                                0.3, 0.7,
                                0.8, 0.2});
    const std::vector<int> y = {1, 1, 0, 0};
    const RocCurve curve = roc_ovr(scores, y, 1);
    CHECK(curve.points.front() == std::pair<double, double>{0.0, 0.0});
    CHECK(curve.points.back() == std::pair<double, double>{1.0, 1.0});
    // Thresholds descend 0.9, 0.7, 0.6, 0.2: TPR/FPR path (0,.5)(.5,.5)(.5,1)(1,1).
    REQUIRE(curve.points.size() == 5);
    CHECK(curve.points[1] == std::pair<double, double>{0.0, 0.5});
    CHECK(curve.points[2] == std::pair<double, double>{0.5, 0.5});
    CHECK(curve.points[3] == std::pair<double, double>{0.5, 1.0});
    CHECK(curve.auc == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(curve.auc ==
          doctest::Approx(oracle::mann_whitney_auc(scores, y, 1)).epsilon(1e-12));
}

TEST_CASE("roc: tied scores collapse into one threshold group") {
    const Tensor2 scores(6, 2, {0, 0.9, 0, 0.5, 0, 0.5, 0, 0.5, 0, 0.5, 0, 0.1});
    const std::vector<int> y = {1, 1, 0, 1, 0, 0};
    const RocCurve curve = roc_ovr(scores, y, 1);
    // Distinct thresholds: 0.9, 0.5, 0.1 -> exactly 4 points including (0,0).
    CHECK(curve.points.size() == 4);
    CHECK(curve.auc ==
          doctest::Approx(oracle::mann_whitney_auc(scores, y, 1)).epsilon(1e-12));
}

TEST_CASE("roc matches Mann-Whitney on random scores with forced ties") {
    Rng rng(406);
    for (int trial = 0; trial < 20; ++trial) {
        const int k = 2 + static_cast<int>(rng.next_below(4));
        const int n = 10 + static_cast<int>(rng.next_below(80));
        Tensor2 scores(n, k);
        // Quantized scores create many exact ties.
        for (double& v : scores.data) v = static_cast<double>(rng.next_below(8)) / 8.0;
        std::vector<int> y;
        for (int i = 0; i < n; ++i) {
            y.push_back(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k))));
        }
        for (int cls = 0; cls < k; ++cls) {
            long pos = 0;
            for (int t : y) pos += (t == cls) ? 1 : 0;
            if (pos == 0 || pos == n) continue;
            const RocCurve curve = roc_ovr(scores, y, cls);
            CHECK(std::fabs(curve.auc - oracle::mann_whitney_auc(scores, y, cls)) <= 1e-10);
        }
    }
}

TEST_CASE("roc: degenerate class throws, full_report flags it instead") {
    const Tensor2 scores(3, 2, {0.6, 0.4, 0.7, 0.3, 0.2, 0.8});
    const std::vector<int> y = {0, 0, 0};
    CHECK_THROWS_AS(roc_ovr(scores, y, 1), DegenerateClassError);

    const MetricsReport report = full_report(scores, y, 2, 1);
    CHECK(report.degenerate_classes == std::vector<int>{0, 1});
    CHECK(report.roc.empty());
    CHECK(report.overall.accuracy == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("report serializers carry every field") {
    const Tensor2 scores(4, 2, {0.9, 0.1, 0.4, 0.6, 0.8, 0.2, 0.3, 0.7});
    const std::vector<int> y = {0, 1, 0, 1};
    const MetricsReport report = full_report(scores, y, 2, 1);
    const std::vector<std::string> names = {"attack", "normal"};

    const std::string json_text = metrics_to_json(report, names);
    for (const char* key : {"accuracy", "detection_rate", "precision", "recall", "f1", "far",
                            "confusion", "per_class", "auc", "definitions"}) {
        INFO("missing key: ", key);
        CHECK(json_text.find(key) != std::string::npos);
    }

    const std::string csv_text = metrics_to_csv(report, names);
    CHECK(csv_text.find("accuracy_pct") != std::string::npos);
    CHECK(csv_text.find("attack") != std::string::npos);

    const std::string roc_text = roc_to_csv(report.roc.front());
    CHECK(roc_text.rfind("fpr,tpr\n", 0) == 0);
    CHECK(roc_text.find("1.000000,1.000000") != std::string::npos);
}

}  // TEST_SUITE
