#include "nids/preprocess.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <span>

#include <json.hpp>

#include "nids/errors.hpp"
#include "nids/io_util.hpp"

namespace nids {

int EncoderSpec::total_encoded_width() const {
    int width = feature_count - static_cast<int>(categorical_indices.size());
    for (const auto& vocab : vocabularies) width += static_cast<int>(vocab.size());
    return width;
}

EncoderSpec fit_encoder(const LabeledDataset& train) {
    if (train.size() == 0) throw EmptyDatasetError("fit_encoder: training set is empty");

    EncoderSpec spec;
    spec.feature_count = train.schema.feature_count;
    spec.categorical_indices = train.schema.categorical_indices;
    std::sort(spec.categorical_indices.begin(), spec.categorical_indices.end());

    for (int col : spec.categorical_indices) {
        std::set<std::string> values;
        for (const RawRecord& rec : train.records) {
            values.insert(rec[static_cast<std::size_t>(col)]);
        }
        spec.vocabularies.emplace_back(values.begin(), values.end());
    }
    return spec;
}

namespace {

double parse_numeric(const std::string& field, std::size_t row, int col) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = first + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
        throw NonNumericValueError(row, col, "row " + std::to_string(row) + ", column " +
                                                 std::to_string(col) + ": cannot parse '" +
                                                 field + "' as a number");
    }
    return value;
}

}  // namespace

FeatureMatrix encode(const LabeledDataset& ds, const EncoderSpec& spec) {
    if (ds.schema.feature_count != spec.feature_count) {
        throw SchemaMismatchError("encode: dataset has " +
                                  std::to_string(ds.schema.feature_count) +
                                  " features, encoder was fitted on " +
                                  std::to_string(spec.feature_count));
    }

    // Per-column lookup tables and the encoded offset of every feature column.
    std::vector<const std::map<std::string, int>*> lookup(
        static_cast<std::size_t>(spec.feature_count), nullptr);
    std::vector<std::map<std::string, int>> tables(spec.vocabularies.size());
    std::vector<int> offset(static_cast<std::size_t>(spec.feature_count), 0);
    {
        std::size_t cat = 0;
        int out = 0;
        for (int col = 0; col < spec.feature_count; ++col) {
            offset[static_cast<std::size_t>(col)] = out;
            if (cat < spec.categorical_indices.size() && spec.categorical_indices[cat] == col) {
                const auto& vocab = spec.vocabularies[cat];
                for (std::size_t v = 0; v < vocab.size(); ++v) {
                    tables[cat][vocab[v]] = static_cast<int>(v);
                }
                lookup[static_cast<std::size_t>(col)] = &tables[cat];
                out += static_cast<int>(vocab.size());
                ++cat;
            } else {
                out += 1;
            }
        }
    }

    FeatureMatrix m;
    m.values = Tensor2(static_cast<int>(ds.size()), spec.total_encoded_width());
    m.class_indices = ds.class_indices;
    for (std::size_t r = 0; r < ds.size(); ++r) {
        const RawRecord& rec = ds.records[r];
        const std::span<double> out_row = m.values.row(static_cast<int>(r));
        for (int col = 0; col < spec.feature_count; ++col) {
            const std::string& field = rec[static_cast<std::size_t>(col)];
            if (const auto* table = lookup[static_cast<std::size_t>(col)]) {
                const auto it = table->find(field);
                // Unseen categories leave the whole block at zero.
                if (it != table->end()) {
                    out_row[offset[static_cast<std::size_t>(col)] + it->second] = 1.0;
                }
            } else {
                out_row[offset[static_cast<std::size_t>(col)]] = parse_numeric(field, r, col);
            }
        }
    }
    return m;
}

NormalizerSpec fit_normalizer(const FeatureMatrix& m) {
    if (m.rows() == 0) throw EmptyMatrixError("fit_normalizer: matrix has no rows");

    NormalizerSpec spec;
    const auto cols = static_cast<std::size_t>(m.cols());
    spec.min.assign(cols, std::numeric_limits<double>::infinity());
    spec.max.assign(cols, -std::numeric_limits<double>::infinity());
    for (int r = 0; r < m.rows(); ++r) {
        const std::span<const double> row = m.values.row(r);
        for (std::size_t c = 0; c < cols; ++c) {
            spec.min[c] = std::min(spec.min[c], row[c]);
            spec.max[c] = std::max(spec.max[c], row[c]);
        }
    }
    return spec;
}

FeatureMatrix normalize(const FeatureMatrix& m, const NormalizerSpec& spec) {
    if (m.cols() != spec.cols()) {
        throw DimensionMismatchError("normalize: matrix has " + std::to_string(m.cols()) +
                                     " columns, normalizer has " + std::to_string(spec.cols()));
    }

    FeatureMatrix out;
    out.values = Tensor2(m.rows(), m.cols());
    out.class_indices = m.class_indices;
    for (int r = 0; r < m.rows(); ++r) {
        const std::span<const double> src = m.values.row(r);
        const std::span<double> dst = out.values.row(r);
        for (int c = 0; c < m.cols(); ++c) {
            const auto ci = static_cast<std::size_t>(c);
            if (spec.min[ci] == spec.max[ci]) {
                dst[c] = 0.0;
                continue;
            }
            const double x = (src[c] - spec.min[ci]) / (spec.max[ci] - spec.min[ci]);
            dst[c] = std::clamp(x, 0.0, 1.0);
        }
    }
    return out;
}

PipelineState fit_pipeline(const LabeledDataset& train) {
    PipelineState state;
    state.schema_name = to_string(train.schema.name);
    state.encoder = fit_encoder(train);
    state.normalizer = fit_normalizer(encode(train, state.encoder));
    return state;
}

FeatureMatrix apply_pipeline(const LabeledDataset& ds, const PipelineState& state) {
    return normalize(encode(ds, state.encoder), state.normalizer);
}

std::string pipeline_to_json(const PipelineState& state) {
    nlohmann::json doc;
    doc["schema"] = state.schema_name;
    doc["encoder"] = {
        {"feature_count", state.encoder.feature_count},
        {"categorical_indices", state.encoder.categorical_indices},
        {"vocabularies", state.encoder.vocabularies},
    };
    doc["normalizer"] = {
        {"min", state.normalizer.min},
        {"max", state.normalizer.max},
    };
    return doc.dump(2) + "\n";
}

PipelineState pipeline_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
        PipelineState state;
        state.schema_name = doc.at("schema").get<std::string>();
        const auto& enc = doc.at("encoder");
        state.encoder.feature_count = enc.at("feature_count").get<int>();
        state.encoder.categorical_indices = enc.at("categorical_indices").get<std::vector<int>>();
        state.encoder.vocabularies =
            enc.at("vocabularies").get<std::vector<std::vector<std::string>>>();
        const auto& norm = doc.at("normalizer");
        state.normalizer.min = norm.at("min").get<std::vector<double>>();
        state.normalizer.max = norm.at("max").get<std::vector<double>>();
        if (state.normalizer.min.size() != state.normalizer.max.size() ||
            state.normalizer.cols() != state.encoder.total_encoded_width() ||
            state.encoder.categorical_indices.size() != state.encoder.vocabularies.size()) {
            throw ConfigError("pipeline state is internally inconsistent");
        }
        return state;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed pipeline JSON: ") + e.what());
    }
}

void save_pipeline(const std::filesystem::path& path, const PipelineState& state) {
    write_text_file_atomic(path, pipeline_to_json(state));
}

PipelineState load_pipeline(const std::filesystem::path& path) {
    return pipeline_from_json(read_text_file(path));
}

namespace {

std::string matrix_checksum(const std::string& values_b64, const std::vector<int>& labels) {
    std::string blob = values_b64;
    blob += '|';
    for (int c : labels) {
        blob += std::to_string(c);
        blob += ',';
    }
    return to_hex(fnv1a64(blob));
}

}  // namespace

std::string matrix_to_json(const FeatureMatrix& m) {
    nlohmann::json doc;
    doc["format"] = "nids-matrix";
    doc["version"] = 1;
    doc["rows"] = m.rows();
    doc["cols"] = m.cols();
    doc["class_indices"] = m.class_indices;
    std::string b64 = base64_encode(doubles_to_le_bytes(m.values.data));
    doc["checksum"] = matrix_checksum(b64, m.class_indices);
    doc["values_b64"] = std::move(b64);
    return doc.dump(2) + "\n";
}

FeatureMatrix matrix_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw CorruptArtifactError(std::string("malformed matrix JSON: ") + e.what());
    }
    try {
        if (doc.at("format").get<std::string>() != "nids-matrix") {
            throw CorruptArtifactError("not a nids-matrix file");
        }
        const int version = doc.at("version").get<int>();
        if (version != 1) {
            throw VersionMismatchError("matrix file version " + std::to_string(version) +
                                       " is not supported (expected 1)");
        }
        FeatureMatrix m;
        const int rows = doc.at("rows").get<int>();
        const int cols = doc.at("cols").get<int>();
        m.class_indices = doc.at("class_indices").get<std::vector<int>>();
        const std::string b64 = doc.at("values_b64").get<std::string>();
        if (doc.at("checksum").get<std::string>() != matrix_checksum(b64, m.class_indices)) {
            throw CorruptArtifactError("matrix checksum mismatch");
        }
        std::vector<double> values = le_bytes_to_doubles(base64_decode(b64));
        if (rows < 0 || cols < 0 ||
            values.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) ||
            m.class_indices.size() != static_cast<std::size_t>(rows)) {
            throw CorruptArtifactError("matrix payload does not match the declared shape");
        }
        m.values = Tensor2(rows, cols, std::move(values));
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw CorruptArtifactError(std::string("malformed matrix JSON: ") + e.what());
    }
}

void save_matrix(const std::filesystem::path& path, const FeatureMatrix& m) {
    write_text_file_atomic(path, matrix_to_json(m));
}

FeatureMatrix load_matrix(const std::filesystem::path& path) {
    return matrix_from_json(read_text_file(path));
}

}  // namespace nids
