#include "nids/baselines.hpp"

namespace nids {

const BaselineTable& published_baselines() {
    static const BaselineTable table = {{
        // KDDCup99 comparison rows.
        {"LSTM-RNN", "kddcup99", "96.93", "98.88", "NA", "10.04"},
        {"RBM-DBN", "kddcup99", "97.16", "NA", "NA", "0.48"},
        {"CNN-GRU", "kddcup99", "98.1", "97.6", "98.8", "NA"},
        {"Multi-scale CNN", "kddcup99", "94.11", "93.21", "NA", "2.18"},
        {"SAE", "kddcup99", "94.71", "NA", "NA", "0.42"},
        {"DBN", "kddcup99", "93.49", "NA", "NA", "0.76"},
        {"DNN", "kddcup99", "93.00", "NA", "NA", "0.95"},
        {"SAE (stacked)", "kddcup99", "97.85", "NA", "NA", "2.15"},
        {"RNN (reference)", "kddcup99", "98.73", "99.57", "98.87", "2.33"},
        {"DNN (reference)", "kddcup99", "98.20", "99.28", "98.39", "3.15"},
        // NSL-KDD comparison rows.
        {"SAE-SVM", "nslkdd", "80.48", "NA", "NA", "NA"},
        {"S-NDAE", "nslkdd", "85.42", "85.42", "87.37", "14.58"},
        {"ID-CVAE", "nslkdd", "80.10", "80.10", "79.08", "8.18"},
        {"SAVAER-DNN", "nslkdd", "89.36", "95.98", "90.08", "4.70"},
        {"AE", "nslkdd", "89.92", "NA", "NA", "10.78"},
        {"Ensemble", "nslkdd", "92.90", "NA", "NA", "0.92"},
        {"RNN (reference)", "nslkdd", "98.68", "99.60", "98.83", "2.47"},
        {"DNN (reference)", "nslkdd", "98.95", "99.87", "99.07", "3.49"},
    }};
    return table;
}

}  // namespace nids
