#include "cryptoforecast/config.hpp"

#include <filesystem>
#include <fstream>

#include "cryptoforecast/error.hpp"

namespace cryptoforecast::config {

namespace {

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(std::string("config field '") + key + "' has the wrong type");
    }
}

}  // namespace

RunConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    RunConfig c;

    if (j.contains("data")) {
        const auto& d = j.at("data");
        read_field(d, "daily_csv", c.daily_csv);
        read_field(d, "minute_csv", c.minute_csv);
        read_field(d, "resample", c.resample);
        std::vector<std::string> exclude;
        read_field(d, "exclude", exclude);
        c.exclude.insert(exclude.begin(), exclude.end());
    }
    read_field(j, "target", c.target);
    read_field(j, "targets", c.targets);
    read_field(j, "predictors", c.predictors);
    read_field(j, "correlation_threshold", c.correlation_threshold);
    read_field(j, "correlation_mode", c.correlation_mode);
    read_field(j, "lag", c.lag);
    read_field(j, "seed", c.seed);
    read_field(j, "jobs", c.jobs);
    read_field(j, "out_dir", c.out_dir);
    read_field(j, "model_dir", c.model_dir);

    if (j.contains("windows")) {
        const auto& w = j.at("windows");
        read_field(w, "sliding", c.sliding_widths);
        read_field(w, "tumbling", c.tumbling_widths);
    }
    if (j.contains("split")) {
        const auto& s = j.at("split");
        read_field(s, "train", c.split.train_fraction);
        read_field(s, "validation", c.split.validation_fraction);
        read_field(s, "test", c.split.test_fraction);
    }
    if (j.contains("gbt")) {
        const auto& g = j.at("gbt");
        read_field(g, "enabled", c.gbt.enabled);
        read_field(g, "learning_rate", c.gbt.learning_rate);
        read_field(g, "grid_search", c.gbt.grid_search);
        read_field(g, "folds", c.gbt.folds);
        read_field(g, "max_iterations", c.gbt.max_iterations);
        read_field(g, "patience", c.gbt.patience);
        read_field(g, "max_depth", c.gbt.max_depth);
        read_field(g, "min_node_size", c.gbt.min_node_size);
    }
    if (j.contains("rnn")) {
        const auto& r = j.at("rnn");
        read_field(r, "lstm", c.rnn.train_lstm);
        read_field(r, "gru", c.rnn.train_gru);
        read_field(r, "depth", c.rnn.depth);
        read_field(r, "width", c.rnn.width);
        read_field(r, "bptt_window", c.rnn.bptt_window);
        read_field(r, "batch_size", c.rnn.batch_size);
        read_field(r, "learning_rate", c.rnn.learning_rate);
        read_field(r, "lr_range_test", c.rnn.lr_range_test);
        read_field(r, "max_epochs", c.rnn.max_epochs);
        read_field(r, "patience", c.rnn.patience);
        read_field(r, "clip_norm", c.rnn.clip_norm);
    }
    if (j.contains("granger")) {
        const auto& g = j.at("granger");
        read_field(g, "p_max", c.granger.p_max);
        read_field(g, "d_max", c.granger.d_max);
        read_field(g, "reverse", c.granger.reverse);
    }

    if (c.correlation_threshold < 0 || c.correlation_threshold > 1)
        throw ConfigError("correlation_threshold must lie in [0, 1]");
    if (c.correlation_mode != "composite" && c.correlation_mode != "per-variable")
        throw ConfigError("correlation_mode must be 'composite' or 'per-variable'");
    if (c.jobs < 1) throw ConfigError("jobs must be >= 1");
    if (c.lag < 0) throw ConfigError("lag must be >= 0");
    if (c.target.empty()) throw ConfigError("target coin must not be empty");
    if (c.model_dir.empty()) c.model_dir = c.out_dir + "/models";
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    return config_from_json(j);
}

void require_dataset(const RunConfig& config, bool minute_needed) {
    const std::string& path = minute_needed ? config.minute_csv : config.daily_csv;
    const char* field = minute_needed ? "data.minute_csv" : "data.daily_csv";
    if (path.empty()) throw ConfigError(std::string("config field ") + field + " is required");
    if (!std::filesystem::exists(path))
        throw ConfigError(std::string(field) + " does not exist: " + path);
}

experiment::ExperimentSettings RunConfig::experiment_settings() const {
    experiment::ExperimentSettings s;
    s.target = target;
    s.predictors = predictors;
    s.lag = lag;
    s.split = split;
    s.gbt = gbt;
    s.rnn = rnn;
    s.seed = seed;
    return s;
}

std::vector<std::string> RunConfig::main_coins() const {
    return targets.empty() ? std::vector<std::string>{target} : targets;
}

}  // namespace cryptoforecast::config
