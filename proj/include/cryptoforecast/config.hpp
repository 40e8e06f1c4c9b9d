#pragma once

#include <set>
#include <string>
#include <vector>

#include "cryptoforecast/experiment.hpp"

namespace cryptoforecast::config {

struct GrangerSettings {
    int p_max = 10;
    int d_max = 2;
    bool reverse = false;  // test maincoin -> altcoin instead
};

// Everything a CLI run needs, merged from the JSON config file and flag
// overrides. The schema is documented in the README.
struct RunConfig {
    std::string daily_csv;
    std::string minute_csv;
    std::set<std::string> exclude;  // coins dropped at load time (stablecoins)
    bool resample = true;           // average minute data into daily bins

    std::string target = "BTC";
    std::vector<std::string> targets;        // correlate/causality main coins
    std::vector<std::string> predictors;     // empty -> auto-select
    double correlation_threshold = 0.6;
    std::string correlation_mode = "composite";  // or "per-variable"
    std::vector<int> sliding_widths = {7, 30};
    std::vector<int> tumbling_widths = {7, 30};

    int lag = 0;
    forecast::SplitSpec split;
    experiment::GbtSettings gbt;
    experiment::RnnSettings rnn;
    GrangerSettings granger;

    std::uint64_t seed = 42;
    int jobs = 1;
    std::string out_dir = "out";
    std::string model_dir;  // defaults to <out_dir>/models

    experiment::ExperimentSettings experiment_settings() const;
    std::vector<std::string> main_coins() const;  // targets if set, else {target}
};

RunConfig load_config(const std::string& path);
RunConfig config_from_json(const nlohmann::json& j);

// Checks that the fields a command relies on are usable; throws ConfigError.
void require_dataset(const RunConfig& config, bool minute_needed);

}  // namespace cryptoforecast::config
