#include "nids/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "nids/errors.hpp"

namespace nids {

std::int64_t ConfusionMatrix::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

std::int64_t ConfusionMatrix::row_total(int c) const {
    std::int64_t sum = 0;
    for (int p = 0; p < k; ++p) sum += at(c, p);
    return sum;
}

std::int64_t ConfusionMatrix::col_total(int c) const {
    std::int64_t sum = 0;
    for (int t = 0; t < k; ++t) sum += at(t, c);
    return sum;
}

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred, int k,
                          int normal_class) {
    if (y_true.size() != y_pred.size()) {
        throw LengthMismatchError("confusion: y_true has " + std::to_string(y_true.size()) +
                                  " entries, y_pred has " + std::to_string(y_pred.size()));
    }
    if (normal_class < 0 || normal_class >= k) {
        throw OutOfRangeClassError("confusion: normal_class " + std::to_string(normal_class) +
                                   " outside [0," + std::to_string(k) + ")");
    }
    ConfusionMatrix cm;
    cm.k = k;
    cm.normal_class = normal_class;
    cm.counts.assign(static_cast<std::size_t>(k) * static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const int t = y_true[i];
        const int p = y_pred[i];
        if (t < 0 || t >= k || p < 0 || p >= k) {
            throw OutOfRangeClassError("confusion: class index out of range at record " +
                                       std::to_string(i));
        }
        ++cm.at(t, p);
    }
    return cm;
}

namespace {

std::optional<double> ratio(std::int64_t num, std::int64_t den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

OverallMetrics overall_metrics(const ConfusionMatrix& cm) {
    const std::int64_t total = cm.total();
    if (total == 0) throw EmptyMatrixError("overall_metrics: confusion matrix is empty");

    std::int64_t trace = 0;
    for (int c = 0; c < cm.k; ++c) trace += cm.at(c, c);

    // Attack-vs-normal binarization.
    std::int64_t tp = 0, fn = 0, fp = 0, tn = 0;
    for (int t = 0; t < cm.k; ++t) {
        for (int p = 0; p < cm.k; ++p) {
            const bool true_attack = t != cm.normal_class;
            const bool pred_attack = p != cm.normal_class;
            const std::int64_t n = cm.at(t, p);
            if (true_attack && pred_attack) tp += n;
            else if (true_attack && !pred_attack) fn += n;
            else if (!true_attack && pred_attack) fp += n;
            else tn += n;
        }
    }

    OverallMetrics m;
    m.accuracy = static_cast<double>(trace) / static_cast<double>(total);
    m.recall = ratio(tp, tp + fn);
    m.detection_rate = m.recall;
    m.precision = ratio(tp, tp + fp);
    if (m.precision && m.recall && (*m.precision + *m.recall) > 0.0) {
        m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
    }
    m.far = ratio(fp, fp + tn);
    return m;
}

std::vector<PerClassMetrics> per_class_metrics(const ConfusionMatrix& cm) {
    const std::int64_t total = cm.total();
    if (total == 0) throw EmptyMatrixError("per_class_metrics: confusion matrix is empty");

    std::vector<PerClassMetrics> out;
    out.reserve(static_cast<std::size_t>(cm.k));
    for (int c = 0; c < cm.k; ++c) {
        PerClassMetrics pm;
        pm.cls = c;
        const std::int64_t tp = cm.at(c, c);
        const std::int64_t row = cm.row_total(c);
        const std::int64_t col = cm.col_total(c);
        const std::int64_t tn = total - row - col + tp;
        pm.accuracy = static_cast<double>(tp + tn) / static_cast<double>(total);
        pm.detection_rate = ratio(tp, row);
        out.push_back(pm);
    }
    return out;
}

RocCurve roc_ovr(const Tensor2& scores, std::span<const int> y_true, int cls) {
    if (static_cast<std::size_t>(scores.rows) != y_true.size()) {
        throw LengthMismatchError("roc_ovr: scores rows != labels length");
    }
    if (cls < 0 || cls >= scores.cols) {
        throw OutOfRangeClassError("roc_ovr: class " + std::to_string(cls) + " outside [0," +
                                   std::to_string(scores.cols) + ")");
    }

    std::int64_t positives = 0;
    for (int t : y_true) positives += (t == cls) ? 1 : 0;
    const std::int64_t negatives = static_cast<std::int64_t>(y_true.size()) - positives;
    if (positives == 0 || negatives == 0) {
        throw DegenerateClassError(cls, "roc_ovr: class " + std::to_string(cls) +
                                            " has no " +
                                            (positives == 0 ? "positives" : "negatives"));
    }

    std::vector<int> order(y_true.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return scores.at(a, cls) > scores.at(b, cls);
    });

    RocCurve curve;
    curve.cls = cls;
    curve.points.emplace_back(0.0, 0.0);
    std::int64_t tp = 0, fp = 0;
    double auc = 0.0;
    double prev_fpr = 0.0, prev_tpr = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        // Records tied on the score share one threshold.
        const double score = scores.at(order[i], cls);
        std::size_t j = i;
        while (j < order.size() && scores.at(order[j], cls) == score) {
            if (y_true[static_cast<std::size_t>(order[j])] == cls) ++tp;
            else ++fp;
            ++j;
        }
        const double fpr = static_cast<double>(fp) / static_cast<double>(negatives);
        const double tpr = static_cast<double>(tp) / static_cast<double>(positives);
        auc += (fpr - prev_fpr) * (tpr + prev_tpr) * 0.5;
        curve.points.emplace_back(fpr, tpr);
        prev_fpr = fpr;
        prev_tpr = tpr;
        i = j;
    }
    curve.auc = auc;
    return curve;
}

std::vector<int> argmax_rows(const Tensor2& scores) {
    std::vector<int> out(static_cast<std::size_t>(scores.rows));
    for (int r = 0; r < scores.rows; ++r) {
        int best = 0;
        for (int c = 1; c < scores.cols; ++c) {
            if (scores.at(r, c) > scores.at(r, best)) best = c;
        }
        out[static_cast<std::size_t>(r)] = best;
    }
    return out;
}

MetricsReport full_report(const Tensor2& scores, std::span<const int> y_true, int k,
                          int normal_class) {
    MetricsReport report;
    const std::vector<int> y_pred = argmax_rows(scores);
    report.cm = confusion(y_true, y_pred, k, normal_class);
    report.overall = overall_metrics(report.cm);
    report.per_class = per_class_metrics(report.cm);
    for (int c = 0; c < k; ++c) {
        try {
            report.roc.push_back(roc_ovr(scores, y_true, c));
        } catch (const DegenerateClassError&) {
            report.degenerate_classes.push_back(c);
        }
    }
    return report;
}

namespace {

nlohmann::json opt_json(const std::optional<double>& v) {
    if (!v) return nullptr;
    return *v;
}

std::string pct(const std::optional<double>& v) {
    if (!v) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", *v * 100.0);
    return buf;
}

std::string fixed6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

std::string metrics_to_json(const MetricsReport& report,
                            const std::vector<std::string>& class_names) {
    nlohmann::json doc;
    doc["definitions"] = {
        {"accuracy", "multi-class correct predictions / total records"},
        {"detection_rate", "attack records predicted as any attack class / all attack records"},
        {"far", "normal records predicted as any attack class / all normal records"},
        {"per_class_accuracy", "one-vs-rest accuracy for the class"},
        {"per_class_detection_rate", "class recall"},
    };
    doc["classes"] = class_names;
    doc["normal_class"] = report.cm.normal_class;

    nlohmann::json cm = nlohmann::json::array();
    for (int t = 0; t < report.cm.k; ++t) {
        nlohmann::json row = nlohmann::json::array();
        for (int p = 0; p < report.cm.k; ++p) row.push_back(report.cm.at(t, p));
        cm.push_back(row);
    }
    doc["confusion"] = cm;

    doc["overall"] = {
        {"accuracy", report.overall.accuracy},
        {"detection_rate", opt_json(report.overall.detection_rate)},
        {"precision", opt_json(report.overall.precision)},
        {"recall", opt_json(report.overall.recall)},
        {"f1", opt_json(report.overall.f1)},
        {"far", opt_json(report.overall.far)},
    };

    nlohmann::json per_class = nlohmann::json::array();
    for (const PerClassMetrics& pm : report.per_class) {
        nlohmann::json entry = {
            {"class", pm.cls},
            {"name", class_names[static_cast<std::size_t>(pm.cls)]},
            {"accuracy", pm.accuracy},
            {"detection_rate", opt_json(pm.detection_rate)},
        };
        per_class.push_back(entry);
    }
    doc["per_class"] = per_class;

    nlohmann::json auc = nlohmann::json::object();
    for (const RocCurve& curve : report.roc) {
        auc[class_names[static_cast<std::size_t>(curve.cls)]] = curve.auc;
    }
    doc["auc"] = auc;
    doc["degenerate_roc_classes"] = report.degenerate_classes;
    return doc.dump(2) + "\n";
}

std::string metrics_to_csv(const MetricsReport& report,
                           const std::vector<std::string>& class_names) {
    std::string out = "metric,value_pct\n";
    out += "accuracy," + pct(report.overall.accuracy) + "\n";
    out += "detection_rate," + pct(report.overall.detection_rate) + "\n";
    out += "precision," + pct(report.overall.precision) + "\n";
    out += "recall," + pct(report.overall.recall) + "\n";
    out += "f1," + pct(report.overall.f1) + "\n";
    out += "far," + pct(report.overall.far) + "\n";
    out += "\nclass_index,class_name,accuracy_pct,detection_rate_pct,auc\n";
    for (const PerClassMetrics& pm : report.per_class) {
        std::string auc;
        for (const RocCurve& curve : report.roc) {
            if (curve.cls == pm.cls) auc = fixed6(curve.auc);
        }
        out += std::to_string(pm.cls) + "," + class_names[static_cast<std::size_t>(pm.cls)] +
               "," + pct(pm.accuracy) + "," + pct(pm.detection_rate) + "," + auc + "\n";
    }
    return out;
}

std::string roc_to_csv(const RocCurve& curve) {
    std::string out = "fpr,tpr\n";
    for (const auto& [fpr, tpr] : curve.points) {
        out += fixed6(fpr) + "," + fixed6(tpr) + "\n";
    }
    return out;
}

}  // namespace nids
