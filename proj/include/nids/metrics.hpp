#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nids/tensor.hpp"

namespace nids {

struct ConfusionMatrix {
    int k = 0;
    int normal_class = 0;
    std::vector<std::int64_t> counts;  // k*k, counts[true*k + pred]

    std::int64_t at(int t, int p) const { return counts[static_cast<std::size_t>(t * k + p)]; }
    std::int64_t& at(int t, int p) { return counts[static_cast<std::size_t>(t * k + p)]; }
    std::int64_t total() const;
    std::int64_t row_total(int c) const;
    std::int64_t col_total(int c) const;
};

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred, int k,
                          int normal_class);

// Overall figures in [0,1]. Accuracy is plain multi-class accuracy; the rest
// binarize attack-vs-normal: an attack record counts as detected when it is
// predicted as *any* attack class. Zero-denominator metrics are absent rather
// than silently zero.
struct OverallMetrics {
    double accuracy = 0.0;
    std::optional<double> detection_rate;  // = recall of the pooled attack class
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    std::optional<double> far;  // normal records flagged as attack / all normal
};

OverallMetrics overall_metrics(const ConfusionMatrix& cm);

struct PerClassMetrics {
    int cls = 0;
    double accuracy = 0.0;                  // one-vs-rest accuracy
    std::optional<double> detection_rate;   // class recall; absent if no true rows
};

std::vector<PerClassMetrics> per_class_metrics(const ConfusionMatrix& cm);

struct RocCurve {
    int cls = 0;
    std::vector<std::pair<double, double>> points;  // (fpr, tpr), starts (0,0), ends (1,1)
    double auc = 0.0;
};

// One-vs-rest ROC for class `cls`, sweeping thresholds over scores[:,cls]
// descending with tied scores grouped; AUC by the trapezoidal rule.
// Throws DegenerateClassError when the class has no positives or no negatives.
RocCurve roc_ovr(const Tensor2& scores, std::span<const int> y_true, int cls);

std::vector<int> argmax_rows(const Tensor2& scores);

struct MetricsReport {
    ConfusionMatrix cm;
    OverallMetrics overall;
    std::vector<PerClassMetrics> per_class;
    std::vector<RocCurve> roc;              // one per non-degenerate class
    std::vector<int> degenerate_classes;    // classes whose ROC is undefined
};

MetricsReport full_report(const Tensor2& scores, std::span<const int> y_true, int k,
                          int normal_class);

std::string metrics_to_json(const MetricsReport& report,
                            const std::vector<std::string>& class_names);
std::string metrics_to_csv(const MetricsReport& report,
                           const std::vector<std::string>& class_names);
std::string roc_to_csv(const RocCurve& curve);

}  // namespace nids
