#pragma once

#include <filesystem>
#include <string>

#include "nids/config.hpp"
#include "nids/model.hpp"
#include "nids/preprocess.hpp"

namespace nids {

inline constexpr int kArtifactVersion = 1;

// A trained model plus everything needed to reuse it: the fitted preprocessing
// pipeline and the configuration snapshot it was trained under.
struct ModelArtifact {
    int version = kArtifactVersion;
    ExperimentConfig config;
    PipelineState pipeline;
    AnyModel model;
};

// Versioned JSON envelope; tensors are base64-encoded little-endian float64
// payloads, guarded by an FNV-1a checksum. Serialization is canonical, so
// save -> load -> save is byte-identical.
std::string artifact_to_json(const ModelArtifact& artifact);
ModelArtifact artifact_from_json(const std::string& text);

void save_model(const ModelArtifact& artifact, const std::filesystem::path& path);
ModelArtifact load_model(const std::filesystem::path& path);

}  // namespace nids
