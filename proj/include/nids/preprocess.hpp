#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nids/dataset.hpp"
#include "nids/tensor.hpp"

namespace nids {

// One-hot vocabularies fitted on training data. Encoding walks the feature
// columns in order: numeric columns contribute one encoded column each,
// categorical columns contribute one column per vocabulary entry.
struct EncoderSpec {
    int feature_count = 0;
    std::vector<int> categorical_indices;              // ascending feature indices
    std::vector<std::vector<std::string>> vocabularies;  // parallel, lexicographic

    int total_encoded_width() const;
};

// Per encoded column extrema from training data; constant columns (min == max)
// normalize to 0.
struct NormalizerSpec {
    std::vector<double> min;
    std::vector<double> max;

    int cols() const { return static_cast<int>(min.size()); }
    bool is_constant(int c) const { return min[static_cast<std::size_t>(c)] == max[static_cast<std::size_t>(c)]; }
};

struct FeatureMatrix {
    Tensor2 values;
    std::vector<int> class_indices;

    int rows() const { return values.rows; }
    int cols() const { return values.cols; }
};

struct PipelineState {
    std::string schema_name;
    EncoderSpec encoder;
    NormalizerSpec normalizer;
};

EncoderSpec fit_encoder(const LabeledDataset& train);
FeatureMatrix encode(const LabeledDataset& ds, const EncoderSpec& spec);

NormalizerSpec fit_normalizer(const FeatureMatrix& m);
// x' = (x - min)/(max - min), clipped into [0,1]; constant columns -> 0.
FeatureMatrix normalize(const FeatureMatrix& m, const NormalizerSpec& spec);

// fit_encoder + encode + fit_normalizer on the training set.
PipelineState fit_pipeline(const LabeledDataset& train);
// encode + normalize under an already fitted state (never refits).
FeatureMatrix apply_pipeline(const LabeledDataset& ds, const PipelineState& state);

std::string pipeline_to_json(const PipelineState& state);
PipelineState pipeline_from_json(const std::string& text);
void save_pipeline(const std::filesystem::path& path, const PipelineState& state);
PipelineState load_pipeline(const std::filesystem::path& path);

// Encoded-matrix file: versioned JSON envelope with a base64 little-endian
// float64 payload and a checksum, mirroring the model artifact format. This
// is what `preprocess` hands to `train`.
std::string matrix_to_json(const FeatureMatrix& m);
FeatureMatrix matrix_from_json(const std::string& text);
void save_matrix(const std::filesystem::path& path, const FeatureMatrix& m);
FeatureMatrix load_matrix(const std::filesystem::path& path);

}  // namespace nids
