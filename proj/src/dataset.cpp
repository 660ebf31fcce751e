#include "nids/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "nids/errors.hpp"
#include "nids/rng.hpp"

namespace nids {

std::string to_string(SchemaName name) {
    switch (name) {
        case SchemaName::Kdd99: return "kdd99";
        case SchemaName::NslKdd: return "nslkdd";
        case SchemaName::UnswNb15: return "unswnb15";
    }
    return "?";
}

SchemaName schema_from_string(const std::string& name) {
    if (name == "kdd99") return SchemaName::Kdd99;
    if (name == "nslkdd") return SchemaName::NslKdd;
    if (name == "unswnb15") return SchemaName::UnswNb15;
    throw ConfigError("unknown dataset schema: " + name);
}

DatasetSchema builtin_schema(SchemaName name) {
    DatasetSchema s;
    s.name = name;
    switch (name) {
        case SchemaName::Kdd99:
            // 41 features, label last; labels carry a trailing period.
            s.feature_count = 41;
            s.categorical_indices = {1, 2, 3};  // protocol_type, service, flag
            s.label_index = 41;
            s.extra_columns = {};
            s.strip_label_period = true;
            break;
        case SchemaName::NslKdd:
            // Same 41 features plus a trailing difficulty column.
            s.feature_count = 41;
            s.categorical_indices = {1, 2, 3};
            s.label_index = 41;
            s.extra_columns = {42};
            s.strip_label_period = false;
            break;
        case SchemaName::UnswNb15:
            // Full-partition layout (49 columns). The four flow identifiers and
            // the binary label are dropped, attack_cat is the label: 43 features.
            s.feature_count = 43;
            s.categorical_indices = {0, 1, 9};  // proto, state, service after stripping
            s.label_index = 47;
            s.extra_columns = {0, 1, 2, 3, 48};
            s.strip_label_period = false;
            break;
    }
    return s;
}

const std::vector<std::string>& builtin_class_names(SchemaName name) {
    static const std::vector<std::string> kdd = {"DoS", "Probe", "R2L", "U2R", "normal"};
    static const std::vector<std::string> unsw = {"Exploits", "Reconnaissance", "Backdoor",
                                                  "DoS",      "Analysis",       "Fuzzers",
                                                  "Worms",    "Shellcode",      "Generic",
                                                  "normal"};
    return name == SchemaName::UnswNb15 ? unsw : kdd;
}

namespace {

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace

AttackTaxonomy load_taxonomy(const std::filesystem::path& path,
                             const std::vector<std::string>& class_names) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open taxonomy file: " + path.string());

    AttackTaxonomy tax;
    tax.class_names = class_names;
    std::map<std::string, int> name_to_index;
    for (std::size_t i = 0; i < class_names.size(); ++i) {
        name_to_index[class_names[i]] = static_cast<int>(i);
    }

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (trim(line).empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw MalformedRowError(line_no, "taxonomy line " + std::to_string(line_no) +
                                                 ": expected raw_label<TAB>category");
        }
        const std::string raw = trim(line.substr(0, tab));
        const std::string category = trim(line.substr(tab + 1));
        const auto it = name_to_index.find(category);
        if (it == name_to_index.end()) {
            throw MalformedRowError(line_no, "taxonomy line " + std::to_string(line_no) +
                                                 ": unknown category '" + category + "'");
        }
        if (tax.raw_to_class.count(raw)) {
            throw MalformedRowError(line_no, "taxonomy line " + std::to_string(line_no) +
                                                 ": duplicate raw label '" + raw + "'");
        }
        tax.raw_to_class[raw] = it->second;
    }
    return tax;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

std::string join_csv_fields(const RawRecord& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += fields[i];
    }
    return out;
}

LabeledDataset load_csv(const std::filesystem::path& path, const DatasetSchema& schema,
                        const AttackTaxonomy& taxonomy, bool has_header) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset file: " + path.string());

    std::vector<bool> drop(static_cast<std::size_t>(schema.raw_column_count()), false);
    for (int c : schema.extra_columns) drop[static_cast<std::size_t>(c)] = true;

    LabeledDataset ds;
    ds.schema = schema;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line_no == 1 && has_header) continue;
        if (line.empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != schema.raw_column_count()) {
            throw MalformedRowError(line_no, path.filename().string() + ":" +
                                                 std::to_string(line_no) + ": expected " +
                                                 std::to_string(schema.raw_column_count()) +
                                                 " fields, got " + std::to_string(fields.size()));
        }
        std::string label = fields[static_cast<std::size_t>(schema.label_index)];
        if (schema.strip_label_period && !label.empty() && label.back() == '.') label.pop_back();
        const auto it = taxonomy.raw_to_class.find(label);
        if (it == taxonomy.raw_to_class.end()) {
            throw UnknownLabelError(line_no, label,
                                    path.filename().string() + ":" + std::to_string(line_no) +
                                        ": unknown label '" + label + "'");
        }

        RawRecord record;
        record.reserve(static_cast<std::size_t>(schema.feature_count));
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (static_cast<int>(i) == schema.label_index || drop[i]) continue;
            record.push_back(std::move(fields[i]));
        }
        ds.records.push_back(std::move(record));
        ds.class_indices.push_back(it->second);
    }
    return ds;
}

std::map<int, std::size_t> class_distribution(const LabeledDataset& ds) {
    std::map<int, std::size_t> counts;
    for (int c : ds.class_indices) ++counts[c];
    return counts;
}

namespace {

LabeledDataset take_rows(const LabeledDataset& ds, const std::vector<std::size_t>& indices) {
    LabeledDataset out;
    out.schema = ds.schema;
    out.records.reserve(indices.size());
    out.class_indices.reserve(indices.size());
    for (std::size_t i : indices) {
        out.records.push_back(ds.records[i]);
        out.class_indices.push_back(ds.class_indices[i]);
    }
    return out;
}

}  // namespace

std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& ds, double test_fraction,
                                                std::uint64_t seed) {
    if (ds.size() == 0) throw EmptyDatasetError("split: dataset is empty");
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw InvalidFractionError("split: test_fraction must lie in (0,1)");
    }
    std::vector<std::size_t> order(ds.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_stream(seed, 0x5917));
    shuffle_indices(order, rng);

    const auto test_count = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(ds.size())));
    std::vector<std::size_t> test_idx(order.begin(), order.begin() + test_count);
    std::vector<std::size_t> train_idx(order.begin() + test_count, order.end());
    // Keep file order inside each part.
    std::sort(test_idx.begin(), test_idx.end());
    std::sort(train_idx.begin(), train_idx.end());
    return {take_rows(ds, train_idx), take_rows(ds, test_idx)};
}

LabeledDataset stratified_sample(const LabeledDataset& ds, std::size_t n, std::uint64_t seed) {
    if (ds.size() == 0) throw EmptyDatasetError("stratified_sample: dataset is empty");
    if (n > ds.size()) throw InvalidFractionError("stratified_sample: n exceeds dataset size");

    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < ds.size(); ++i) by_class[ds.class_indices[i]].push_back(i);

    // Largest-remainder quotas that sum to n exactly.
    struct Quota {
        int cls;
        std::size_t count;
        double remainder;
    };
    std::vector<Quota> quotas;
    std::size_t assigned = 0;
    for (const auto& [cls, rows] : by_class) {
        const double exact = static_cast<double>(n) * static_cast<double>(rows.size()) /
                             static_cast<double>(ds.size());
        const auto base = static_cast<std::size_t>(exact);
        quotas.push_back({cls, base, exact - static_cast<double>(base)});
        assigned += base;
    }
    std::stable_sort(quotas.begin(), quotas.end(),
                     [](const Quota& a, const Quota& b) { return a.remainder > b.remainder; });
    for (std::size_t i = 0; assigned < n; ++i, ++assigned) quotas[i % quotas.size()].count += 1;

    std::vector<std::size_t> chosen;
    for (const Quota& q : quotas) {
        std::vector<std::size_t>& rows = by_class[q.cls];
        Rng rng(derive_stream(seed, static_cast<std::uint64_t>(q.cls) + 1));
        shuffle_indices(rows, rng);
        chosen.insert(chosen.end(), rows.begin(), rows.begin() + q.count);
    }
    std::sort(chosen.begin(), chosen.end());
    return take_rows(ds, chosen);
}

}  // namespace nids
