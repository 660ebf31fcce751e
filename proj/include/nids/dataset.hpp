#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace nids {

enum class SchemaName { Kdd99, NslKdd, UnswNb15 };

std::string to_string(SchemaName name);
SchemaName schema_from_string(const std::string& name);

// Describes one CSV layout: which raw columns are dropped, which one holds
// the label, and which *feature* columns (indices after dropping) are
// categorical.
struct DatasetSchema {
    SchemaName name;
    int feature_count;                      // 41 for KDD99/NSL-KDD, 43 for UNSW-NB15
    std::vector<int> categorical_indices;   // indices into the cleaned feature vector
    int label_index;                        // raw column index
    std::vector<int> extra_columns;         // raw column indices to drop
    bool strip_label_period;                // KDD99 labels end in "."

    int raw_column_count() const {
        return feature_count + 1 + static_cast<int>(extra_columns.size());
    }
};

DatasetSchema builtin_schema(SchemaName name);

// Ordered class names fixed per dataset family:
//   KDD99/NSL-KDD: DoS=0, Probe=1, R2L=2, U2R=3, normal=4
//   UNSW-NB15: Exploits=0 ... Generic=8, normal=9
const std::vector<std::string>& builtin_class_names(SchemaName name);

struct AttackTaxonomy {
    std::vector<std::string> class_names;
    std::map<std::string, int> raw_to_class;

    int num_classes() const { return static_cast<int>(class_names.size()); }
};

// Parses `raw_label<TAB>category_name` lines ('#' starts a comment). Every
// category must be one of `class_names`.
AttackTaxonomy load_taxonomy(const std::filesystem::path& path,
                             const std::vector<std::string>& class_names);

using RawRecord = std::vector<std::string>;

struct LabeledDataset {
    DatasetSchema schema;
    std::vector<RawRecord> records;     // feature fields only, extras stripped
    std::vector<int> class_indices;

    std::size_t size() const { return records.size(); }
};

LabeledDataset load_csv(const std::filesystem::path& path, const DatasetSchema& schema,
                        const AttackTaxonomy& taxonomy, bool has_header);

// Splits one raw CSV line on commas (these datasets carry no quoted fields).
std::vector<std::string> split_csv_line(const std::string& line);
std::string join_csv_fields(const RawRecord& fields);

std::map<int, std::size_t> class_distribution(const LabeledDataset& ds);

// Deterministic disjoint partition; test gets round(size * test_fraction) rows.
std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& ds, double test_fraction,
                                                std::uint64_t seed);

// Deterministic subsample of `n` records keeping per-class proportions
// (largest-remainder allocation). n must not exceed the dataset size.
LabeledDataset stratified_sample(const LabeledDataset& ds, std::size_t n, std::uint64_t seed);

}  // namespace nids
