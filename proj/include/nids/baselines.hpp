#pragma once

#include <string>
#include <vector>

namespace nids {

// One published result row. Values are kept as the exact strings printed in
// the source comparison tables ("98.1", "93.00", "NA") so reports reproduce
// them verbatim; these are reference values, not numbers this code computes.
struct BaselineRecord {
    std::string method;
    std::string dataset;    // "kddcup99" or "nslkdd"
    std::string accuracy;   // percent, or "NA"
    std::string dr;
    std::string f1;
    std::string fpr;
};

struct BaselineTable {
    std::vector<BaselineRecord> records;
};

// Published multi-attack IDS results used for side-by-side comparison.
const BaselineTable& published_baselines();

}  // namespace nids
