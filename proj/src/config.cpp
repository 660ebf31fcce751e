#include "nids/config.hpp"

#include <json.hpp>

#include "nids/errors.hpp"
#include "nids/io_util.hpp"

namespace nids {

HyperParams ExperimentConfig::resolved_hyper() const {
    HyperParams hp;
    if (learning_rate) {
        hp.learning_rate = *learning_rate;
    } else {
        hp.learning_rate = optimizer == OptimizerKind::Adadelta ? 1.0 : 0.002;
    }
    hp.beta1 = beta1;
    hp.beta2 = beta2;
    hp.rho = rho;
    hp.epsilon = epsilon;
    return hp;
}

int ExperimentConfig::num_classes() const {
    return static_cast<int>(builtin_class_names(dataset).size());
}

void ExperimentConfig::validate() const {
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (hidden_dim < 1) throw ConfigError("hidden_dim must be >= 1");
    if (time_steps < 1) throw ConfigError("time_steps must be >= 1");
    if (!seed) throw ConfigError("seed is required (pass --seed or set \"seed\" in the config)");
    if (clip_norm && !(*clip_norm > 0.0)) throw ConfigError("clip_norm must be > 0");
    if (eval_split && !(*eval_split > 0.0 && *eval_split < 1.0)) {
        throw ConfigError("eval_split must lie in (0,1)");
    }
    resolved_hyper().validate();
}

std::string config_to_json(const ExperimentConfig& config) {
    nlohmann::json doc;
    doc["dataset"] = to_string(config.dataset);
    doc["model"] = to_string(config.model_kind);
    doc["hidden_dim"] = config.hidden_dim;
    doc["activation"] = to_string(config.activation);
    doc["optimizer"] = to_string(config.optimizer);
    if (config.learning_rate) doc["learning_rate"] = *config.learning_rate;
    doc["beta1"] = config.beta1;
    doc["beta2"] = config.beta2;
    doc["rho"] = config.rho;
    doc["epsilon"] = config.epsilon;
    doc["epochs"] = config.epochs;
    doc["batch_size"] = config.batch_size;
    if (config.seed) doc["seed"] = *config.seed;
    doc["time_steps"] = config.time_steps;
    if (config.clip_norm) doc["clip_norm"] = *config.clip_norm;
    if (config.eval_split) doc["eval_split"] = *config.eval_split;
    return doc.dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
    try {
        const nlohmann::json doc = nlohmann::json::parse(text);
        ExperimentConfig config;
        if (doc.contains("dataset")) config.dataset = schema_from_string(doc.at("dataset"));
        if (doc.contains("model")) config.model_kind = model_from_string(doc.at("model"));
        if (doc.contains("hidden_dim")) config.hidden_dim = doc.at("hidden_dim").get<int>();
        if (doc.contains("activation")) {
            config.activation = activation_from_string(doc.at("activation"));
        }
        if (doc.contains("optimizer")) {
            config.optimizer = optimizer_from_string(doc.at("optimizer"));
        }
        if (doc.contains("learning_rate")) {
            config.learning_rate = doc.at("learning_rate").get<double>();
        }
        if (doc.contains("beta1")) config.beta1 = doc.at("beta1").get<double>();
        if (doc.contains("beta2")) config.beta2 = doc.at("beta2").get<double>();
        if (doc.contains("rho")) config.rho = doc.at("rho").get<double>();
        if (doc.contains("epsilon")) config.epsilon = doc.at("epsilon").get<double>();
        if (doc.contains("epochs")) config.epochs = doc.at("epochs").get<int>();
        if (doc.contains("batch_size")) config.batch_size = doc.at("batch_size").get<int>();
        if (doc.contains("seed")) config.seed = doc.at("seed").get<std::uint64_t>();
        if (doc.contains("time_steps")) config.time_steps = doc.at("time_steps").get<int>();
        if (doc.contains("clip_norm")) config.clip_norm = doc.at("clip_norm").get<double>();
        if (doc.contains("eval_split")) config.eval_split = doc.at("eval_split").get<double>();
        return config;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed config JSON: ") + e.what());
    }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    return config_from_json(read_text_file(path));
}

}  // namespace nids
