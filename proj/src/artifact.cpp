#include "nids/artifact.hpp"

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "nids/errors.hpp"
#include "nids/io_util.hpp"

namespace nids {

namespace {

struct TensorEntry {
    std::string name;
    int rows = 0;
    int cols = 0;
    std::string b64;
};

TensorEntry entry_of(const std::string& name, const Tensor2& t) {
    return {name, t.rows, t.cols, base64_encode(doubles_to_le_bytes(t.data))};
}

TensorEntry entry_of(const std::string& name, const std::vector<double>& v) {
    return {name, 1, static_cast<int>(v.size()), base64_encode(doubles_to_le_bytes(v))};
}

std::vector<TensorEntry> model_tensors(const AnyModel& model) {
    std::vector<TensorEntry> entries;
    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, DnnModel>) {
                for (std::size_t l = 0; l < m.layers.size(); ++l) {
                    const std::string prefix = "layer" + std::to_string(l);
                    entries.push_back(entry_of(prefix + ".weights", m.layers[l].weights));
                    entries.push_back(entry_of(prefix + ".bias", m.layers[l].bias));
                }
            } else if constexpr (std::is_same_v<M, RnnClassifier>) {
                entries.push_back(entry_of("w_xh", m.cell.w_xh));
                entries.push_back(entry_of("w_hh", m.cell.w_hh));
                entries.push_back(entry_of("b_h", m.cell.b_h));
                entries.push_back(entry_of("head.weights", m.head.weights));
                entries.push_back(entry_of("head.bias", m.head.bias));
            } else {
                for (int g = 0; g < 4; ++g) {
                    entries.push_back(entry_of("w_x." + std::to_string(g), m.cell.w_x[g]));
                }
                for (int g = 0; g < 4; ++g) {
                    entries.push_back(entry_of("w_h." + std::to_string(g), m.cell.w_h[g]));
                }
                for (int g = 0; g < 4; ++g) {
                    entries.push_back(entry_of("b." + std::to_string(g), m.cell.b[g]));
                }
                entries.push_back(entry_of("head.weights", m.head.weights));
                entries.push_back(entry_of("head.bias", m.head.bias));
            }
        },
        model.impl);
    return entries;
}

std::uint64_t entries_checksum(const std::vector<TensorEntry>& entries) {
    std::string blob;
    for (const TensorEntry& e : entries) {
        blob += e.name;
        blob += ':';
        blob += std::to_string(e.rows) + "x" + std::to_string(e.cols);
        blob += ':';
        blob += e.b64;
        blob += ';';
    }
    return fnv1a64(blob);
}

Tensor2 tensor_from_entry(const TensorEntry& e) {
    std::vector<double> values = le_bytes_to_doubles(base64_decode(e.b64));
    if (e.rows < 0 || e.cols < 0 ||
        values.size() != static_cast<std::size_t>(e.rows) * static_cast<std::size_t>(e.cols)) {
        throw CorruptArtifactError("tensor '" + e.name + "' payload does not match its shape");
    }
    return Tensor2(e.rows, e.cols, std::move(values));
}

std::vector<double> vector_from_entry(const TensorEntry& e) {
    Tensor2 t = tensor_from_entry(e);
    if (t.rows != 1) throw CorruptArtifactError("tensor '" + e.name + "' expected a single row");
    return std::move(t.data);
}

const TensorEntry& expect_entry(const std::vector<TensorEntry>& entries, std::size_t index,
                                const std::string& name) {
    if (index >= entries.size()) {
        throw CorruptArtifactError("artifact is missing tensor '" + name + "'");
    }
    if (entries[index].name != name) {
        throw CorruptArtifactError("artifact tensor " + std::to_string(index) + " is '" +
                                   entries[index].name + "', expected '" + name + "'");
    }
    return entries[index];
}

AnyModel rebuild_model(ModelKind kind, const nlohmann::json& model_doc,
                       const std::vector<TensorEntry>& entries) {
    AnyModel model;
    if (kind == ModelKind::Dnn) {
        const auto activations = model_doc.at("activations").get<std::vector<std::string>>();
        if (entries.size() != activations.size() * 2) {
            throw CorruptArtifactError("dnn artifact tensor count does not match its layer count");
        }
        DnnModel dnn;
        for (std::size_t l = 0; l < activations.size(); ++l) {
            const std::string prefix = "layer" + std::to_string(l);
            DenseLayer layer;
            layer.weights = tensor_from_entry(expect_entry(entries, 2 * l, prefix + ".weights"));
            layer.bias = vector_from_entry(expect_entry(entries, 2 * l + 1, prefix + ".bias"));
            layer.activation = activation_from_string(activations[l]);
            if (static_cast<int>(layer.bias.size()) != layer.weights.cols) {
                throw CorruptArtifactError(prefix + ": bias length does not match weights");
            }
            if (!dnn.layers.empty() && dnn.layers.back().out_dim() != layer.in_dim()) {
                throw CorruptArtifactError(prefix + ": layer dimensions do not chain");
            }
            dnn.layers.push_back(std::move(layer));
        }
        if (dnn.layers.empty()) throw CorruptArtifactError("dnn artifact has no layers");
        model.impl = std::move(dnn);
        return model;
    }

    const int time_steps = model_doc.at("time_steps").get<int>();
    if (time_steps < 1) throw CorruptArtifactError("artifact time_steps must be >= 1");

    auto read_head = [&](std::size_t base, DenseLayer& head, int hidden) {
        head.weights = tensor_from_entry(expect_entry(entries, base, "head.weights"));
        head.bias = vector_from_entry(expect_entry(entries, base + 1, "head.bias"));
        head.activation = ActivationKind::Identity;
        if (head.weights.rows != hidden ||
            static_cast<int>(head.bias.size()) != head.weights.cols) {
            throw CorruptArtifactError("head tensor shapes are inconsistent");
        }
    };

    if (kind == ModelKind::Rnn) {
        if (entries.size() != 5) throw CorruptArtifactError("rnn artifact must hold 5 tensors");
        RnnClassifier rnn;
        rnn.cell.w_xh = tensor_from_entry(expect_entry(entries, 0, "w_xh"));
        rnn.cell.w_hh = tensor_from_entry(expect_entry(entries, 1, "w_hh"));
        rnn.cell.b_h = vector_from_entry(expect_entry(entries, 2, "b_h"));
        const int hidden = rnn.cell.w_xh.cols;
        if (rnn.cell.w_hh.rows != hidden || rnn.cell.w_hh.cols != hidden ||
            static_cast<int>(rnn.cell.b_h.size()) != hidden) {
            throw CorruptArtifactError("rnn cell tensor shapes are inconsistent");
        }
        read_head(3, rnn.head, hidden);
        rnn.time_steps = time_steps;
        model.impl = std::move(rnn);
        return model;
    }

    if (entries.size() != 14) throw CorruptArtifactError("lstm artifact must hold 14 tensors");
    LstmClassifier lstm;
    for (int g = 0; g < 4; ++g) {
        lstm.cell.w_x[g] =
            tensor_from_entry(expect_entry(entries, static_cast<std::size_t>(g),
                                           "w_x." + std::to_string(g)));
        lstm.cell.w_h[g] =
            tensor_from_entry(expect_entry(entries, static_cast<std::size_t>(4 + g),
                                           "w_h." + std::to_string(g)));
        lstm.cell.b[g] = vector_from_entry(expect_entry(entries, static_cast<std::size_t>(8 + g),
                                                        "b." + std::to_string(g)));
    }
    const int hidden = lstm.cell.w_x[0].cols;
    const int input = lstm.cell.w_x[0].rows;
    for (int g = 0; g < 4; ++g) {
        if (lstm.cell.w_x[g].rows != input || lstm.cell.w_x[g].cols != hidden ||
            lstm.cell.w_h[g].rows != hidden || lstm.cell.w_h[g].cols != hidden ||
            static_cast<int>(lstm.cell.b[g].size()) != hidden) {
            throw CorruptArtifactError("lstm cell tensor shapes are inconsistent");
        }
    }
    read_head(12, lstm.head, hidden);
    lstm.time_steps = time_steps;
    model.impl = std::move(lstm);
    return model;
}

}  // namespace

std::string artifact_to_json(const ModelArtifact& artifact) {
    const std::vector<TensorEntry> entries = model_tensors(artifact.model);

    nlohmann::json doc;
    doc["format"] = "nids-model";
    doc["version"] = artifact.version;
    doc["config"] = nlohmann::json::parse(config_to_json(artifact.config));
    doc["pipeline"] = nlohmann::json::parse(pipeline_to_json(artifact.pipeline));

    nlohmann::json model_doc;
    model_doc["kind"] = to_string(artifact.model.kind());
    if (artifact.model.kind() == ModelKind::Dnn) {
        std::vector<std::string> activations;
        for (const DenseLayer& layer : std::get<DnnModel>(artifact.model.impl).layers) {
            activations.push_back(to_string(layer.activation));
        }
        model_doc["activations"] = activations;
    } else {
        model_doc["time_steps"] = std::visit(
            [](const auto& m) -> int {
                if constexpr (std::is_same_v<std::decay_t<decltype(m)>, DnnModel>) return 1;
                else return m.time_steps;
            },
            artifact.model.impl);
    }
    nlohmann::json tensors = nlohmann::json::array();
    for (const TensorEntry& e : entries) {
        tensors.push_back({{"name", e.name}, {"rows", e.rows}, {"cols", e.cols}, {"data", e.b64}});
    }
    model_doc["tensors"] = tensors;
    doc["model"] = model_doc;
    doc["checksum"] = to_hex(entries_checksum(entries));
    return doc.dump(2) + "\n";
}

ModelArtifact artifact_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw CorruptArtifactError(std::string("artifact is not valid JSON: ") + e.what());
    }

    try {
        if (!doc.contains("format") || doc.at("format") != "nids-model") {
            throw CorruptArtifactError("not a model artifact (missing format marker)");
        }
        const int version = doc.at("version").get<int>();
        if (version != kArtifactVersion) {
            throw VersionMismatchError("artifact version " + std::to_string(version) +
                                       " is not supported (expected " +
                                       std::to_string(kArtifactVersion) + ")");
        }

        std::vector<TensorEntry> entries;
        for (const auto& t : doc.at("model").at("tensors")) {
            entries.push_back({t.at("name").get<std::string>(), t.at("rows").get<int>(),
                               t.at("cols").get<int>(), t.at("data").get<std::string>()});
        }
        const std::string stored = doc.at("checksum").get<std::string>();
        if (stored != to_hex(entries_checksum(entries))) {
            throw CorruptArtifactError("artifact checksum mismatch");
        }

        ModelArtifact artifact;
        artifact.version = version;
        artifact.config = config_from_json(doc.at("config").dump());
        artifact.pipeline = pipeline_from_json(doc.at("pipeline").dump());
        const ModelKind kind = model_from_string(doc.at("model").at("kind").get<std::string>());
        artifact.model = rebuild_model(kind, doc.at("model"), entries);
        if (artifact.model.input_dim() != artifact.pipeline.encoder.total_encoded_width()) {
            throw CorruptArtifactError("model input width does not match the stored pipeline");
        }
        return artifact;
    } catch (const nlohmann::json::exception& e) {
        throw CorruptArtifactError(std::string("artifact structure is incomplete: ") + e.what());
    }
}

void save_model(const ModelArtifact& artifact, const std::filesystem::path& path) {
    write_text_file_atomic(path, artifact_to_json(artifact));
}

ModelArtifact load_model(const std::filesystem::path& path) {
    return artifact_from_json(read_text_file(path));
}

}  // namespace nids
